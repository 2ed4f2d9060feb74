// params.cpp

#include "dynrmat/params.hpp"

#include <cmath>
#include <numbers>

namespace dynrmat {

cplx ExpPoly::operator()(const CVec& lambda) const {
    cplx e{0.0, 0.0};
    for (size_t k = 0; k < lin.size() && k < lambda.size(); ++k) e += lin[k] * lambda[k];
    for (size_t k = 0; k < quad.size() && k < lambda.size(); ++k) e += quad[k] * lambda[k] * lambda[k];
    return c * std::exp(e);
}

cplx TwoFormSpec::g(int i, int j, const CVec& lambda) const {
    switch (kind) {
        case Kind::Trivial:
            return 1.0;
        case Kind::Exact: {
            const LambdaFn& bi = beta.at(static_cast<size_t>(i - 1));
            const LambdaFn& bj = beta.at(static_cast<size_t>(j - 1));
            const cplx num = bi(shifted(lambda, j)) * bj(lambda);
            const cplx den = bi(lambda) * bj(shifted(lambda, i));
            return guarded_div(num, den, "exact 2-form");
        }
        case Kind::Table:
            if (i < j) return table(i, j, lambda);
            return guarded_div(1.0, table(j, i, lambda), "2-form table");
    }
    return 1.0;
}

TwoFormSpec TwoFormSpec::exact(std::vector<ExpPoly> b) {
    TwoFormSpec s;
    s.kind = Kind::Exact;
    for (const ExpPoly& e : b) s.beta.emplace_back(e);
    s.beta_params = std::move(b);
    return s;
}

TwoFormSpec TwoFormSpec::exact(std::vector<LambdaFn> b) {
    TwoFormSpec s;
    s.kind = Kind::Exact;
    s.beta = std::move(b);
    return s;
}

TwoFormSpec TwoFormSpec::table_of(std::map<std::pair<int, int>, ExpPoly> entries) {
    TwoFormSpec s;
    s.kind = Kind::Table;
    s.table_params = entries;
    s.table = [entries = std::move(entries)](int i, int j, const CVec& l) -> cplx {
        auto it = entries.find({i, j});
        return it == entries.end() ? cplx(1.0) : it->second(l);
    };
    return s;
}

TwoFormSpec TwoFormSpec::table_of(std::function<cplx(int, int, const CVec&)> fn) {
    TwoFormSpec s;
    s.kind = Kind::Table;
    s.table = std::move(fn);
    return s;
}

bool is_negative_real(cplx T) {
    return std::abs(T.imag()) <= 1e-12 * std::abs(T) && T.real() < 0.0;
}

DerivedBlockConstants derive(cplx S, cplx Sigma) {
    if (Sigma == cplx(0.0))
        throw Error(ErrorKind::InvalidInput,
                    "Sigma = 0 makes the R-matrix singular: det R = prod Delta_ii * prod (d_ij d_ji - "
                    "Delta_ij Delta_ji) vanishes");
    DerivedBlockConstants out;
    out.D = principal_sqrt(S * S + 4.0 * Sigma);
    out.T = (out.D - S) / (out.D + S);
    out.B = (S + out.D) / 2.0;
    if (S != cplx(0.0)) {
        out.has_A = true;
        if (is_negative_real(out.T))
            out.A = std::log(-out.T) - cplx(0.0, std::numbers::pi);
        else
            out.A = std::log(out.T);
    } else {
        out.B = principal_sqrt(Sigma);
    }
    return out;
}

int ClassificationParams::sign_of(const std::vector<int>& d_class) const {
    auto it = signs.find(class_key(d_class));
    return it == signs.end() ? 1 : it->second;
}

cplx ClassificationParams::f_of(const std::vector<int>& d_class, int q) const {
    auto it = f.find(class_key(d_class));
    if (it != f.end()) return it->second;
    return is_trig(q) ? cplx(1.0) : cplx(0.0);
}

cplx ClassificationParams::cross(int q, int qp) const {
    const std::pair<int, int> key{std::min(q, qp) + 1, std::max(q, qp) + 1};
    auto it = cross_sigma.find(key);
    return it == cross_sigma.end() ? cplx(1.0) : it->second;
}

ValidationResult validate_params(const ClassificationParams& c) {
    if (auto v = validate(c.partition); !v) return v;
    const PartitionLayout L = layout(c.partition);
    if (c.per_block.size() != c.partition.blocks.size())
        return ValidationResult::failure("per_block has " + std::to_string(c.per_block.size()) +
                                         " entries but the partition has " +
                                         std::to_string(c.partition.blocks.size()) + " K-blocks");
    for (size_t q = 0; q < c.per_block.size(); ++q) {
        if (c.per_block[q].Sigma == cplx(0.0))
            return ValidationResult::failure("Sigma of K-block " + std::to_string(q + 1) +
                                             " is zero; det R = prod Delta_ii * prod (d_ij d_ji - Delta_ij "
                                             "Delta_ji) would vanish");
        if (c.partition.blocks[q].size() >= 2 && c.per_block[q].S == cplx(0.0))
            return ValidationResult::failure("K-block " + std::to_string(q + 1) +
                                             " has several Delta-classes and therefore needs S != 0");
    }
    for (const auto& [key, val] : c.cross_sigma) {
        const int nb = static_cast<int>(c.partition.blocks.size());
        if (key.first < 1 || key.second > nb || key.first >= key.second)
            return ValidationResult::failure("cross_sigma key (" + std::to_string(key.first) + "," +
                                             std::to_string(key.second) + ") is not a block pair q<q'");
        if (val == cplx(0.0))
            return ValidationResult::failure("cross_sigma (" + std::to_string(key.first) + "," +
                                             std::to_string(key.second) +
                                             ") is zero; det R = prod Delta_ii * prod (d_ij d_ji - "
                                             "Delta_ij Delta_ji) would vanish");
    }
    std::map<std::string, int> known;
    for (size_t cid = 0; cid < L.d_classes.size(); ++cid) known[class_key(L.d_classes[cid])] = static_cast<int>(cid);
    for (const auto& [key, s] : c.signs) {
        if (!known.count(key)) return ValidationResult::failure("signs refer to unknown D-class {" + key + "}");
        if (s != 1 && s != -1) return ValidationResult::failure("sign of D-class {" + key + "} must be +1 or -1");
    }
    for (const auto& [key, v] : c.f) {
        (void)v;
        if (!known.count(key)) return ValidationResult::failure("f refers to unknown D-class {" + key + "}");
    }
    for (size_t cid = 0; cid < L.d_classes.size(); ++cid) {
        const int q = L.delta_block[L.d_class_delta[cid]];
        const cplx fv = c.f_of(L.d_classes[cid], q);
        if (c.is_trig(q) && fv == cplx(0.0))
            return ValidationResult::failure("f of D-class {" + class_key(L.d_classes[cid]) +
                                                 "} is zero in a trigonometric block",
                                             L.d_classes[cid]);
        if (L.first_in_delta(static_cast<int>(cid))) {
            const cplx want = c.is_trig(q) ? cplx(1.0) : cplx(0.0);
            if (std::abs(fv - want) > 1e-14)
                return ValidationResult::failure("f of D-class {" + class_key(L.d_classes[cid]) +
                                                     "} must equal the convention value of the first class of "
                                                     "its Delta-class; run normalize_f",
                                                 L.d_classes[cid]);
        }
    }
    return ValidationResult::success();
}

std::pair<ClassificationParams, NormalizeReport> normalize_f(const ClassificationParams& c) {
    const PartitionLayout L = layout(c.partition);
    if (c.per_block.size() != c.partition.blocks.size())
        throw Error(ErrorKind::InvalidInput, "per_block size does not match the number of K-blocks");
    ClassificationParams out = c;
    NormalizeReport rep;
    for (size_t p = 0; p < L.delta_dclasses.size(); ++p) {
        const int q = L.delta_block[p];
        const auto& ids = L.delta_dclasses[p];
        const cplx f0 = c.f_of(L.d_classes[ids.front()], q);
        const bool trig = c.is_trig(q);
        if (trig) {
            for (int cid : ids)
                if (c.f_of(L.d_classes[cid], q) == cplx(0.0))
                    throw Error(ErrorKind::InvalidInput, "f of D-class {" + class_key(L.d_classes[cid]) +
                                                             "} is zero in a trigonometric block");
        }
        const bool needed = trig ? f0 != cplx(1.0) : f0 != cplx(0.0);
        if (!needed) continue;
        rep.changed = true;
        rep.notes.push_back(std::string(trig ? "divided" : "shifted") + " f of Delta-class starting at {" +
                            class_key(L.d_classes[ids.front()]) + "}");
        for (int cid : ids) {
            const cplx fv = c.f_of(L.d_classes[cid], q);
            out.f[class_key(L.d_classes[cid])] = trig ? fv / f0 : fv - f0;
        }
    }
    return {out, rep};
}

}  // namespace dynrmat
