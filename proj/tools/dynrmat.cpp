// dynrmat.cpp
// Entry point for the dynrmat command-line tool.

#include <iostream>
#include <string>
#include <vector>

#include "dynrmat/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return dynrmat::cli::run_cli(args, std::cout, std::cerr);
}
