// io.cpp

#include "dynrmat/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "dynrmat/builder.hpp"

namespace dynrmat::io {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::InvalidInput, msg); }

const json& require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::vector<int> int_list(const json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be an array of indices");
    std::vector<int> out;
    for (const json& v : j) {
        if (!v.is_number_integer()) bad(std::string(what) + " must contain integers");
        out.push_back(v.get<int>());
    }
    return out;
}

std::vector<int> parse_key(const std::string& key) {
    std::vector<int> out;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stoi(part, &used));
            if (used != part.size()) bad("bad class key \"" + key + "\"");
        } catch (const std::logic_error&) {
            bad("bad class key \"" + key + "\"");
        }
    }
    return out;
}

bool same_point(const CVec& a, const CVec& b) {
    if (a.size() != b.size()) return false;
    for (size_t k = 0; k < a.size(); ++k)
        if (std::abs(a[k] - b[k]) > 1e-12 * std::max(1.0, std::abs(b[k]))) return false;
    return true;
}

DynamicalRMatrix perturbed(const DynamicalRMatrix& R, const std::vector<Perturbation>& ps) {
    auto base = std::make_shared<DynamicalRMatrix>(R);
    return DynamicalRMatrix(
        R.n(),
        [base, ps](const CVec& l) {
            Coefficients c = base->coefficients(l);
            for (const Perturbation& p : ps) (p.on_delta ? c.delta : c.d)(p.i - 1, p.j - 1) += p.amount;
            return c;
        },
        nullptr);
}

}  // namespace

json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

cplx complex_from(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_object() || !j.contains("re")) bad("complex numbers are written {\"re\":..,\"im\":..}");
    const double re = j.at("re").get<double>();
    const double im = j.contains("im") ? j.at("im").get<double>() : 0.0;
    return {re, im};
}

json to_json(const CVec& v) {
    json a = json::array();
    for (cplx z : v) a.push_back(to_json(z));
    return a;
}

CVec cvec_from(const json& j) {
    if (!j.is_array()) bad("expected an array of complex numbers");
    CVec out;
    for (const json& v : j) out.push_back(complex_from(v));
    return out;
}

cplx parse_complex(const std::string& raw) {
    std::string s;
    for (char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) bad("empty complex number");
    // Split at the last sign that is not an exponent sign or the leading sign.
    size_t split = std::string::npos;
    for (size_t k = s.size(); k-- > 1;)
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    auto real_part = [&](const std::string& t) -> double {
        size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &used);
        } catch (const std::logic_error&) {
            bad("malformed complex number \"" + raw + "\"");
        }
        if (used != t.size()) bad("malformed complex number \"" + raw + "\"");
        return v;
    };
    auto imag_part = [&](std::string t) -> double {
        t.pop_back();
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return real_part(t);
    };
    if (s.back() != 'i') return {real_part(s), 0.0};
    if (split == std::string::npos) return {0.0, imag_part(s)};
    return {real_part(s.substr(0, split)), imag_part(s.substr(split))};
}

CVec parse_lambda(const std::string& text) {
    CVec out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(parse_complex(part));
    if (out.empty()) bad("empty lambda");
    return out;
}

json to_json(const IndexPartition& p) {
    json blocks = json::array();
    for (const KBlock& kb : p.blocks) {
        json b = json::array();
        for (const DeltaClass& dc : kb) b.push_back({{"free", dc.free}, {"d_classes", dc.d_classes}});
        blocks.push_back(b);
    }
    return {{"n", p.n}, {"blocks", blocks}};
}

IndexPartition partition_from(const json& j) {
    IndexPartition p;
    const json& n = require(j, "n");
    if (!n.is_number_integer()) bad("n must be an integer");
    p.n = n.get<int>();
    const json& blocks = require(j, "blocks");
    if (!blocks.is_array()) bad("blocks must be an array");
    for (const json& b : blocks) {
        if (!b.is_array()) bad("each K-block must be an array of Delta-classes");
        KBlock kb;
        for (const json& dc : b) {
            DeltaClass d;
            if (dc.contains("free")) d.free = int_list(dc.at("free"), "free");
            if (dc.contains("d_classes"))
                for (const json& cls : dc.at("d_classes")) d.d_classes.push_back(int_list(cls, "d_classes"));
            kb.push_back(d);
        }
        p.blocks.push_back(kb);
    }
    return p;
}

json to_json(const ExpPoly& e) {
    json out{{"c", to_json(e.c)}};
    if (!e.lin.empty()) out["lin"] = to_json(e.lin);
    if (!e.quad.empty()) out["quad"] = to_json(e.quad);
    return out;
}

ExpPoly exp_poly_from(const json& j) {
    ExpPoly e;
    if (j.contains("c")) e.c = complex_from(j.at("c"));
    if (e.c == cplx(0.0)) bad("2-form factor must not vanish");
    if (j.contains("lin")) e.lin = cvec_from(j.at("lin"));
    if (j.contains("quad")) e.quad = cvec_from(j.at("quad"));
    return e;
}

json to_json(const TwoFormSpec& g) {
    switch (g.kind) {
        case TwoFormSpec::Kind::Trivial: return {{"type", "trivial"}};
        case TwoFormSpec::Kind::Exact: {
            json beta = json::array();
            for (size_t k = 0; k < g.beta_params.size(); ++k) {
                json e = to_json(g.beta_params[k]);
                e["index"] = static_cast<int>(k) + 1;
                beta.push_back(e);
            }
            return {{"type", "exact"}, {"beta", beta}};
        }
        case TwoFormSpec::Kind::Table: {
            json entries = json::array();
            for (const auto& [pair, e] : g.table_params) {
                json x = to_json(e);
                x["pair"] = {pair.first, pair.second};
                entries.push_back(x);
            }
            return {{"type", "table"}, {"entries", entries}};
        }
    }
    return {{"type", "trivial"}};
}

TwoFormSpec two_form_from(const json& j, int n) {
    const std::string type = j.value("type", "trivial");
    if (type == "trivial") return TwoFormSpec::trivial();
    if (type == "exact") {
        std::vector<ExpPoly> beta(static_cast<size_t>(n));
        if (j.contains("beta"))
            for (const json& e : j.at("beta")) {
                const int idx = require(e, "index").get<int>();
                if (idx < 1 || idx > n) bad("2-form beta index " + std::to_string(idx) + " out of range");
                beta[static_cast<size_t>(idx - 1)] = exp_poly_from(e);
            }
        return TwoFormSpec::exact(beta);
    }
    if (type == "table") {
        std::map<std::pair<int, int>, ExpPoly> entries;
        if (j.contains("entries"))
            for (const json& e : j.at("entries")) {
                const std::vector<int> pr = int_list(require(e, "pair"), "pair");
                if (pr.size() != 2 || pr[0] < 1 || pr[1] > n || pr[0] >= pr[1])
                    bad("2-form table pairs must be [i,j] with 1 <= i < j <= n");
                entries[{pr[0], pr[1]}] = exp_poly_from(e);
            }
        return TwoFormSpec::table_of(entries);
    }
    bad("unknown 2-form type \"" + type + "\"");
}

json to_json(const ClassificationParams& c) {
    json per = json::array();
    for (const BlockConstants& b : c.per_block) per.push_back({{"S", to_json(b.S)}, {"Sigma", to_json(b.Sigma)}});
    json cross = json::array();
    for (const auto& [key, v] : c.cross_sigma) cross.push_back({key.first, key.second, to_json(v)});
    json signs = json::object(), f = json::object();
    for (const auto& [k, v] : c.signs) signs[k] = v;
    for (const auto& [k, v] : c.f) f[k] = to_json(v);
    return {{"per_block", per}, {"cross_sigma", cross}, {"signs", signs}, {"f", f}, {"two_form", to_json(c.two_form)}};
}

ClassificationParams params_from(const json& j, const IndexPartition& p) {
    ClassificationParams c;
    c.partition = p;
    for (const json& b : require(j, "per_block"))
        c.per_block.push_back({complex_from(require(b, "S")), complex_from(require(b, "Sigma"))});
    if (j.contains("cross_sigma"))
        for (const json& e : j.at("cross_sigma")) {
            if (!e.is_array() || e.size() != 3) bad("cross_sigma entries are [q, q', {re, im}]");
            c.cross_sigma[{e[0].get<int>(), e[1].get<int>()}] = complex_from(e[2]);
        }
    if (j.contains("signs"))
        for (const auto& [k, v] : j.at("signs").items()) {
            parse_key(k);
            c.signs[k] = v.get<int>();
        }
    if (j.contains("f"))
        for (const auto& [k, v] : j.at("f").items()) {
            parse_key(k);
            c.f[k] = complex_from(v);
        }
    if (j.contains("two_form")) c.two_form = two_form_from(j.at("two_form"), p.n);
    if (auto v = validate_params(c); !v) bad("invalid parameters: " + v.message);
    return c;
}

json to_json(const DensePoint& P, double zero) {
    json entries = json::array();
    const int n = P.n;
    for (int r = 0; r < n * n; ++r)
        for (int col = 0; col < n * n; ++col) {
            const cplx v = P.matrix(r, col);
            if (std::abs(v) <= zero) continue;
            entries.push_back({{"row", {r / n + 1, r % n + 1}},
                               {"col", {col / n + 1, col % n + 1}},
                               {"re", v.real()},
                               {"im", v.imag()}});
        }
    return {{"n", n}, {"lambda", to_json(P.lambda)}, {"entries", entries}};
}

std::pair<CVec, Coefficients> point_from(const json& j) {
    const int n = require(j, "n").get<int>();
    if (n < 1) bad("n must be positive");
    const CVec lambda = cvec_from(require(j, "lambda"));
    if (static_cast<int>(lambda.size()) != n) bad("lambda length differs from n");
    Coefficients c{CMatrix::Zero(n, n), CMatrix::Zero(n, n)};
    for (const json& e : require(j, "entries")) {
        const std::vector<int> row = int_list(require(e, "row"), "row"), col = int_list(require(e, "col"), "col");
        if (row.size() != 2 || col.size() != 2) bad("row and col are index pairs");
        for (int v : {row[0], row[1], col[0], col[1]})
            if (v < 1 || v > n) bad("entry index out of range");
        const cplx v{e.value("re", 0.0), e.value("im", 0.0)};
        const int i = row[0], jj = row[1];
        if (col[0] == jj && col[1] == i)
            c.delta(i - 1, jj - 1) = v;
        else if (col[0] == i && col[1] == jj)
            c.d(i - 1, jj - 1) = v;
        else
            bad("entry at row (" + std::to_string(i) + "," + std::to_string(jj) +
                ") lies outside the zero-weight pattern");
    }
    return {lambda, c};
}

Input input_from(const json& j) {
    const std::string kind = j.value("kind", "datum");
    if (kind == "datum") {
        const IndexPartition p = partition_from(require(j, "partition"));
        if (auto v = validate(p); !v) bad("invalid partition: " + v.message);
        ClassificationParams c = params_from(require(j, "params"), p);
        std::vector<Perturbation> ps;
        if (j.contains("perturb"))
            for (const json& e : j.at("perturb")) {
                const std::string field = require(e, "field").get<std::string>();
                if (field != "delta" && field != "d") bad("perturb field must be \"delta\" or \"d\"");
                Perturbation pt{field == "delta", require(e, "i").get<int>(), require(e, "j").get<int>(),
                                complex_from(require(e, "add"))};
                if (pt.i < 1 || pt.j < 1 || pt.i > p.n || pt.j > p.n) bad("perturb index out of range");
                if (!pt.on_delta && pt.i == pt.j) bad("d_ii is not a coefficient; perturb delta instead");
                ps.push_back(pt);
            }
        DynamicalRMatrix R = build(c);
        if (!ps.empty()) R = perturbed(R, ps);
        return Input{true, c, ps, {}, R};
    }
    if (kind == "sampled") {
        const int n = require(j, "n").get<int>();
        auto table = std::make_shared<std::vector<std::pair<CVec, Coefficients>>>();
        for (const json& pt : require(j, "points")) {
            auto parsed = point_from(pt);
            if (parsed.second.delta.rows() != n) bad("sampled point size differs from n");
            table->push_back(std::move(parsed));
        }
        if (table->empty()) bad("sampled input has no points");
        std::vector<CVec> pts;
        for (const auto& e : *table) pts.push_back(e.first);
        DynamicalRMatrix R(n, [table](const CVec& l) -> Coefficients {
            for (const auto& e : *table)
                if (same_point(l, e.first)) return e.second;
            throw Error(ErrorKind::InvalidInput, "lambda is not among the sampled points");
        });
        return Input{false, std::nullopt, {}, pts, R};
    }
    bad("unknown input kind \"" + kind + "\"");
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        bad(path + ": " + e.what());
    }
}

json to_json(const ResidualReport& r) {
    json per = json::object();
    for (const auto& [k, v] : r.per_equation) per[k] = v;
    json samples = json::array();
    for (const CVec& s : r.samples) samples.push_back(to_json(s));
    return {{"per_equation", per},
            {"dqybe_relative", r.global},
            {"samples", samples},
            {"seed", r.seed},
            {"tol", r.tol},
            {"pass", r.pass},
            {"worst",
             {{"equation", r.worst.equation},
              {"indices", r.worst.indices},
              {"sample", r.worst.sample},
              {"value", r.worst.value}}}};
}

json to_json(const VerifyReport& r) {
    json dq = json::array(), inv = json::array();
    for (const DqybeDefect& d : r.dqybe) dq.push_back({{"defect", d.defect}, {"scale", d.scale}, {"relative", d.relative()}});
    for (const InvertibilityCheck& c : r.invertibility)
        inv.push_back({{"det_factorized", to_json(c.det_factorized)},
                       {"det_dense", to_json(c.det_dense)},
                       {"rel_diff", c.rel_diff},
                       {"agree", c.agree},
                       {"invertible", c.invertible}});
    return {{"system", to_json(r.system)}, {"dqybe", dq}, {"invertibility", inv}, {"pass", r.pass}, {"summary", r.summary}};
}

std::string residual_csv(const ResidualReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "equation,i,j,k,lambda_index,residual\n";
    for (const ResidualRow& row : r.rows)
        os << row.equation << ',' << row.i << ',' << row.j << ',' << row.k << ',' << row.sample << ',' << row.residual
           << '\n';
    return os.str();
}

json to_json(const IncidenceReport& r) {
    json blocks = json::array();
    for (const auto& b : r.blocks.blocks) blocks.push_back(b);
    return {{"n", r.n},
            {"M", r.M},
            {"d_classes", r.d_classes},
            {"delta_classes", r.delta_classes},
            {"M_R", r.MR},
            {"sigma", r.tri.sigma},
            {"levels", r.tri.levels},
            {"pi", r.blocks.pi},
            {"blocks", blocks},
            {"class_order", r.class_order},
            {"partition", to_json(r.recovered_partition)},
            {"index_permutation", r.index_permutation}};
}

json to_json(const RecoveredParams& r) {
    json out = to_json(r.params);
    out["block_identifiable"] = r.block_identifiable;
    json cd = json::array();
    for (cplx z : r.block_class_delta) cd.push_back(to_json(z));
    out["block_class_delta"] = cd;
    out["lambda_ref"] = to_json(r.lambda_ref);
    if (r.params.two_form.kind == TwoFormSpec::Kind::Table && r.params.two_form.table_params.empty())
        out["two_form"] = {{"type", "table"}, {"note", "sampled ratio d_ij / d0_ij, not serializable"}};
    return out;
}

json to_json(const HeckeReport& r) {
    json ev = json::array(), alts = json::array(), samples = json::array();
    for (const EigenEntry& e : r.evidence)
        ev.push_back({{"pair", {e.i, e.j}}, {"values", to_json(e.values)}, {"diagonalizable", e.diagonalizable}});
    for (const auto& [rho, kappa] : r.alternatives) alts.push_back({{"rho", to_json(rho)}, {"kappa", to_json(kappa)}});
    for (const CVec& s : r.samples) samples.push_back(to_json(s));
    json out{{"kind", to_string(r.kind)}, {"weak", r.weak}, {"evidence", ev}, {"alternatives", alts},
             {"samples", samples}, {"summary", r.summary}};
    if (r.kind != HeckeKind::None) {
        out["rho"] = to_json(r.rho);
        out["kappa"] = to_json(r.kappa);
    }
    return out;
}

json to_json(const LimitReport& r) {
    return {{"xi", r.xi}, {"distance", r.distance}, {"dqybe", r.dqybe}, {"order", r.order}};
}

}  // namespace dynrmat::io
