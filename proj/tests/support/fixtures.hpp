// fixtures.hpp
// Hand-written data shared by the tests.

#pragma once

#include "dynrmat/builder.hpp"
#include "dynrmat/params.hpp"

namespace dynrmat::testing {

inline IndexPartition example4_partition() { return {4, {{{{1, 2}, {{3, 4}}}}}}; }

/// Free {1,2}, D-class {3,4}, S = 0, Sigma = 1, signs (+1,+1,-1), f = 0, g = 1.
inline ClassificationParams example4_params() {
    ClassificationParams c;
    c.partition = example4_partition();
    c.per_block = {{0.0, 1.0}};
    c.signs = {{"3,4", -1}};
    return c;
}

/// n free indices in one Delta-class of one trigonometric block.
inline ClassificationParams trig_free(int n, cplx S, cplx Sigma, std::vector<int> signs = {}) {
    ClassificationParams c;
    DeltaClass dc;
    for (int i = 1; i <= n; ++i) dc.free.push_back(i);
    c.partition = {n, {{dc}}};
    c.per_block = {{S, Sigma}};
    for (size_t k = 0; k < signs.size(); ++k) c.signs[std::to_string(k + 1)] = signs[k];
    return c;
}

/// Whole index set as one D-class with Delta_I = c (rational, Sigma = c^2).
inline ClassificationParams single_dclass(int n, cplx c) {
    ClassificationParams p;
    std::vector<int> cls;
    for (int i = 1; i <= n; ++i) cls.push_back(i);
    if (n == 1)
        p.partition = {1, {{{{1}, {}}}}};
    else
        p.partition = {n, {{{{}, {cls}}}}};
    p.per_block = {{0.0, c * c}};
    if (principal_sqrt(c * c) != c) p.signs[class_key(cls)] = -1;
    return p;
}

/// Basic trigonometric Hecke datum: all free, S = k - 1, Sigma = k, signs -1, g = -1.
inline ClassificationParams basic_trig(int n, cplx k) {
    ClassificationParams c = trig_free(n, k - 1.0, k, std::vector<int>(static_cast<size_t>(n), -1));
    c.two_form = TwoFormSpec::table_of([](int, int, const CVec&) { return cplx(-1.0); });
    return c;
}

}  // namespace dynrmat::testing
