// cli.cpp

#include "dynrmat/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dynrmat/builder.hpp"
#include "dynrmat/io.hpp"

namespace dynrmat::cli {

namespace {

using io::json;

struct Common {
    std::string input;
    int samples = -1;
    double tol = -1.0;
    std::string seed;
    std::string lambda;
    std::string out;
};

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("input", c.input, "datum or sampled-matrix JSON")->required();
    cmd->add_option("--samples", c.samples, "number of lambda samples");
    cmd->add_option("--tol", c.tol, "residual tolerance");
    cmd->add_option("--seed", c.seed, "sampling seed (falls back to DYNRMAT_SEED, then 1)");
    cmd->add_option("--lambda", c.lambda, "evaluation point \"a+bi,...\"");
    cmd->add_option("--out", c.out, "report path");
}

std::uint64_t seed_of(const Common& c) {
    std::string s = c.seed;
    if (s.empty())
        if (const char* env = std::getenv("DYNRMAT_SEED")) s = env;
    if (s.empty()) return 1;
    try {
        size_t used = 0;
        const unsigned long long v = std::stoull(s, &used);
        if (used != s.size()) throw Usage("seed must be a non-negative integer");
        return v;
    } catch (const std::logic_error&) {
        throw Usage("seed must be a non-negative integer");
    }
}

int sample_count(const Common& c, int fallback) {
    if (c.samples == -1) return fallback;
    if (c.samples <= 0) throw Usage("--samples must be positive");
    return c.samples;
}

double tol_of(const Common& c, double fallback) {
    if (c.tol == -1.0) return fallback;
    if (!(c.tol > 0.0)) throw Usage("--tol must be positive");
    return c.tol;
}

CVec lambda_of(const Common& c, int n) {
    const CVec l = io::parse_lambda(c.lambda);
    if (static_cast<int>(l.size()) != n)
        throw Error(ErrorKind::InvalidInput, "--lambda has " + std::to_string(l.size()) + " components, expected " +
                                                 std::to_string(n));
    return l;
}

bool has_shifts(const io::Input& in, const CVec& l) {
    try {
        for (int k = 1; k <= in.matrix.n(); ++k) (void)in.matrix.coefficients(shifted(l, k));
        return true;
    } catch (const Error&) {
        return false;
    }
}

/// Datum inputs draw seeded samples; sampled inputs use their own points.
std::vector<CVec> samples_for(const io::Input& in, const Common& c, int fallback, bool need_shifts) {
    if (!c.lambda.empty()) return {lambda_of(c, in.matrix.n())};
    if (in.is_datum) return draw_samples(in.matrix, sample_count(c, fallback), seed_of(c));
    std::vector<CVec> pts;
    for (const CVec& l : in.points)
        if (!need_shifts || has_shifts(in, l)) pts.push_back(l);
    if (pts.empty())
        throw Error(ErrorKind::InvalidInput, "sampled input has no point whose unit shifts are also sampled");
    if (c.samples > 0 && static_cast<int>(pts.size()) > c.samples) pts.resize(static_cast<size_t>(c.samples));
    return pts;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
    f << text;
}

std::string csv_path(const std::string& path) {
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ".csv";
    return path.substr(0, dot) + ".csv";
}

std::string braces(const std::vector<std::vector<int>>& classes) {
    std::string s;
    for (size_t k = 0; k < classes.size(); ++k) s += (k ? "," : "") + std::string("{") + class_key(classes[k]) + "}";
    return s;
}

std::string matrix_text(const IntMatrix& M) {
    std::string s = "[";
    for (size_t r = 0; r < M.size(); ++r) {
        if (r) s += "; ";
        for (size_t c = 0; c < M[r].size(); ++c) s += (c ? " " : "") + std::to_string(M[r][c]);
    }
    return s + "]";
}

std::vector<int> int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            out.push_back(std::stoi(part));
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::InvalidInput, "malformed index list \"" + text + "\"");
        }
    }
    return out;
}

json json_arg(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\n");
    if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
        try {
            return json::parse(text);
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::InvalidInput, std::string("malformed JSON argument: ") + e.what());
        }
    }
    return io::read_json_file(text);
}

/// Sampled-matrix document with every point and its unit shifts.
json sampled_doc(const DynamicalRMatrix& R, const std::vector<CVec>& pts, const std::string& what) {
    json points = json::array();
    std::vector<CVec> seen;
    auto add = [&](const CVec& l) {
        for (const CVec& s : seen)
            if (s == l) return;
        seen.push_back(l);
        points.push_back(io::to_json(evaluate(R, l)));
    };
    for (const CVec& l : pts) {
        add(l);
        for (int k = 1; k <= R.n(); ++k) add(shifted(l, k));
    }
    return {{"kind", "sampled"}, {"n", R.n()}, {"transform", what}, {"points", points}};
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
    if (c.out.empty())
        out << text;
    else
        write_file(c.out, text);
}

int cmd_build(const Common& c, std::ostream& out) {
    const io::Input in = io::input_from(io::read_json_file(c.input));
    if (!in.is_datum) throw Error(ErrorKind::InvalidInput, "build needs a classification datum");
    const ClassificationParams& p = *in.params;
    json pairs = json::array();
    for (int i = 1; i <= p.partition.n; ++i)
        for (int j = 1; j <= p.partition.n; ++j) pairs.push_back({{"i", i}, {"j", j}, {"form", pair_descriptor(p, i, j)}});
    json doc{{"partition", io::to_json(p.partition)}, {"params", io::to_json(p)}, {"pairs", pairs}};
    if (!c.lambda.empty()) doc["matrix"] = io::to_json(evaluate(in.matrix, lambda_of(c, p.partition.n)));
    emit(c, dump(doc), out);
    if (!c.out.empty()) out << "wrote " << c.out << "\n";
    return kExitOk;
}

int cmd_verify(const Common& c, std::ostream& out) {
    const io::Input in = io::input_from(io::read_json_file(c.input));
    const double tol = tol_of(c, kDefaultTol);
    const std::vector<CVec> samples = samples_for(in, c, kDefaultSamples, true);
    VerifyReport rep = verify(in.matrix, samples, tol);
    rep.system.seed = in.is_datum && c.lambda.empty() ? seed_of(c) : 0;
    double worst_sys = 0.0, worst_dq = 0.0;
    for (const auto& [k, v] : rep.system.per_equation) worst_sys = std::max(worst_sys, v);
    for (const DqybeDefect& d : rep.dqybe) worst_dq = std::max(worst_dq, d.relative());
    if (!c.out.empty()) {
        const std::string j = dump(io::to_json(rep)), csv = io::residual_csv(rep.system);
        write_file(c.out, j);
        write_file(csv_path(c.out), csv);
    }
    std::ostringstream os;
    os.precision(3);
    os << (rep.pass ? "PASS" : "FAIL") << ": " << rep.summary << " (max system residual " << worst_sys
       << ", max DQYBE defect " << worst_dq << ", " << samples.size() << " samples)\n";
    out << os.str();
    return rep.pass ? kExitOk : kExitResidual;
}

int cmd_classify(const Common& c, std::ostream& out) {
    const io::Input in = io::input_from(io::read_json_file(c.input));
    const std::vector<CVec> samples = samples_for(in, c, kDefaultClassifySamples, false);
    const double tol = tol_of(c, kZeroTol);
    const IncidenceReport rep = classify(in.matrix, samples, tol);
    const RecoveredParams rec = recover_params(in.matrix, rep, samples, in.is_datum ? std::vector<CVec>{} : in.points);
    json doc = io::to_json(rep);
    doc["params"] = io::to_json(rec);
    std::ostringstream os;
    os << "D-classes: " << braces(rep.d_classes) << "\n";
    os << "Delta-classes: " << braces(rep.delta_classes) << " (" << rep.delta_classes.size() << ")\n";
    os << "M_R: " << matrix_text(rep.MR) << "\n";
    os << "K-blocks: " << rep.recovered_partition.blocks.size() << "\n";
    std::string perm;
    for (size_t k = 0; k < rep.index_permutation.size(); ++k) perm += (k ? "," : "") + std::to_string(rep.index_permutation[k]);
    os << "canonical order: " << perm << "\n";
    if (c.out.empty()) {
        out << os.str() << dump(doc);
    } else {
        write_file(c.out, dump(doc));
        out << os.str();
    }
    return kExitOk;
}

int cmd_hecke(const Common& c, std::ostream& out) {
    const io::Input in = io::input_from(io::read_json_file(c.input));
    const std::vector<CVec> samples = samples_for(in, c, kDefaultClassifySamples, false);
    const HeckeReport rep = hecke_classify(in.matrix, samples, tol_of(c, kEigenTol));
    json doc = io::to_json(rep);
    if (in.is_datum && rep.weak) {
        const HeckeRecipe r = basic_form_distance(in.matrix, rep, samples);
        doc["basic_form"] = {{"scale", io::to_json(r.scale)}, {"rho", io::to_json(r.rho)}, {"identity", r.identity}};
    }
    if (!c.out.empty()) write_file(c.out, dump(doc));
    out << rep.summary << "\n";
    return kExitOk;
}

struct TransformOpts {
    std::string twist, two_form, contract, compose, scale, limit;
    std::string g_ab = "1", g_ba = "1";
};

int cmd_transform(const Common& c, const TransformOpts& t, std::ostream& out) {
    const int chosen = !t.twist.empty() + !t.two_form.empty() + !t.contract.empty() + !t.compose.empty() +
                       !t.scale.empty() + !t.limit.empty();
    if (chosen != 1) throw Usage("transform needs exactly one of --twist, --two-form, --contract, --compose, --scale, --limit");
    const io::Input in = io::input_from(io::read_json_file(c.input));
    const int n = in.matrix.n();
    const int count = sample_count(c, 3);
    const std::uint64_t seed = seed_of(c);

    if (!t.limit.empty()) {
        if (!in.is_datum) throw Error(ErrorKind::InvalidInput, "--limit needs a rational classification datum");
        std::vector<double> xi;
        std::stringstream ss(t.limit);
        std::string part;
        while (std::getline(ss, part, ',')) xi.push_back(std::stod(part));
        const std::vector<CVec> pts = c.lambda.empty() ? draw_samples(in.matrix, count, seed)
                                                       : std::vector<CVec>{lambda_of(c, n)};
        const LimitReport rep = trig_to_rational_limit(*in.params, xi, pts);
        emit(c, dump(io::to_json(rep)), out);
        if (!c.out.empty()) out << "order " << rep.order << "\n";
        return kExitOk;
    }

    std::string what;
    auto result = std::make_shared<DynamicalRMatrix>(in.matrix);
    if (!t.twist.empty()) {
        const json arr = json_arg(t.twist);
        if (!arr.is_array() || static_cast<int>(arr.size()) != n)
            throw Error(ErrorKind::InvalidInput, "--twist needs one factor per index");
        std::vector<LambdaFn> beta;
        for (const json& e : arr) beta.emplace_back(io::exp_poly_from(e));
        *result = apply_twist(in.matrix, beta);
        what = "twist";
    } else if (!t.two_form.empty()) {
        const TwoFormSpec g = io::two_form_from(json_arg(t.two_form), n);
        if (!in.is_datum) throw Error(ErrorKind::InvalidInput, "--two-form needs a classification datum");
        *result = apply_2form(in.matrix, g, in.params->partition, draw_samples(in.matrix, std::max(count, 4), seed));
        what = "two-form";
    } else if (!t.contract.empty()) {
        *result = contract(in.matrix, int_list(t.contract));
        what = "contract " + t.contract;
    } else if (!t.compose.empty()) {
        const io::Input other = io::input_from(io::read_json_file(t.compose));
        *result = decouple_compose(in.matrix, other.matrix, io::parse_complex(t.g_ab), io::parse_complex(t.g_ba));
        what = "compose";
    } else {
        *result = scale_matrix(in.matrix, io::parse_complex(t.scale));
        what = "scale " + t.scale;
    }
    const std::vector<CVec> pts = c.lambda.empty() ? draw_samples(*result, count, seed)
                                                   : std::vector<CVec>{lambda_of(c, result->n())};
    json doc = sampled_doc(*result, pts, what);
    double worst = 0.0;
    for (const CVec& l : pts) worst = std::max(worst, dqybe_defect(*result, l).relative());
    doc["dqybe_relative_max"] = worst;
    emit(c, dump(doc), out);
    if (!c.out.empty()) out << what << ": n=" << result->n() << ", DQYBE relative defect " << worst << "\n";
    return kExitOk;
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidInput: return kExitInvalid;
        case ErrorKind::Pole: return kExitPole;
        case ErrorKind::NotInFamily:
        case ErrorKind::NotASolution:
        case ErrorKind::Ambiguous: return kExitNotInFamily;
    }
    return kExitInvalid;
}

const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidInput: return "invalid input";
        case ErrorKind::Pole: return "pole";
        case ErrorKind::NotInFamily: return "not in family";
        case ErrorKind::NotASolution: return "not a solution";
        case ErrorKind::Ambiguous: return "ambiguous";
    }
    return "error";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dynamical quantum R-matrices: build, verify, classify, hecke, transform", "dynrmat"};
    app.require_subcommand(1);
    Common common;
    TransformOpts topts;
    auto* b = app.add_subcommand("build", "closed-form summary and optional dense matrix at --lambda");
    auto* v = app.add_subcommand("verify", "component equations, DQYBE and determinant checks");
    auto* c = app.add_subcommand("classify", "classes, incidence matrices and recovered parameters");
    auto* h = app.add_subcommand("hecke", "Hecke / weak Hecke detection");
    auto* t = app.add_subcommand("transform", "apply one covariance or structural transform");
    for (auto* cmd : {b, v, c, h, t}) add_common(cmd, common);
    t->add_option("--twist", topts.twist, "JSON array of factors {c, lin, quad} or a file");
    t->add_option("--two-form", topts.two_form, "JSON 2-form or a file");
    t->add_option("--contract", topts.contract, "index subset, e.g. 1,2");
    t->add_option("--compose", topts.compose, "second input decoupled after the first");
    t->add_option("--g-ab", topts.g_ab, "coupling d_ij for i in the first block");
    t->add_option("--g-ba", topts.g_ba, "coupling d_ji for i in the first block");
    t->add_option("--scale", topts.scale, "scalar factor");
    t->add_option("--limit", topts.limit, "xi values for the trigonometric to rational limit");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }
    try {
        if (*b) return cmd_build(common, out);
        if (*v) return cmd_verify(common, out);
        if (*c) return cmd_classify(common, out);
        if (*h) return cmd_hecke(common, out);
        return cmd_transform(common, topts, out);
    } catch (const Usage& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << kind_name(e.kind()) << ": " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    }
}

}  // namespace dynrmat::cli
