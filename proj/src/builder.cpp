// builder.cpp

#include "dynrmat/builder.hpp"

#include <memory>

namespace dynrmat {

namespace {

struct BlockData {
    bool trig;
    cplx S, Sigma, sqrtSigma;
    DerivedBlockConstants derived;
};

void require_valid(const ClassificationParams& c) {
    if (auto v = validate_params(c); !v) throw Error(ErrorKind::InvalidInput, "invalid parameters: " + v.message);
}

}  // namespace

cplx class_delta(const ClassificationParams& c, int q, int sign) {
    const BlockConstants& bc = c.per_block.at(static_cast<size_t>(q));
    const DerivedBlockConstants dv = derive(bc.S, bc.Sigma);
    if (!c.is_trig(q)) return static_cast<double>(sign) * principal_sqrt(bc.Sigma);
    return guarded_div(bc.S, 1.0 - std::exp(dv.A * static_cast<double>(sign)), "class constant");
}

DynamicalRMatrix build(const IndexPartition& p, const ClassificationParams& c) {
    if (auto v = validate(p); !v) throw Error(ErrorKind::InvalidInput, "invalid partition: " + v.message);
    if (!(p == c.partition)) throw Error(ErrorKind::InvalidInput, "partition does not match the parameters");
    return build(c);
}

DynamicalRMatrix build(const ClassificationParams& c) {
    require_valid(c);
    auto params = std::make_shared<const ClassificationParams>(c);
    auto L = std::make_shared<const PartitionLayout>(layout(c.partition));
    const int n = c.partition.n;

    std::vector<BlockData> blocks;
    for (size_t q = 0; q < c.per_block.size(); ++q) {
        const BlockConstants& bc = c.per_block[q];
        blocks.push_back({c.is_trig(static_cast<int>(q)), bc.S, bc.Sigma, principal_sqrt(bc.Sigma),
                          derive(bc.S, bc.Sigma)});
    }
    const size_t ncls = L->d_classes.size();
    std::vector<int> eps(ncls);
    std::vector<cplx> fval(ncls), cdelta(ncls);
    for (size_t k = 0; k < ncls; ++k) {
        const int q = L->delta_block[L->d_class_delta[k]];
        eps[k] = c.sign_of(L->d_classes[k]);
        fval[k] = c.f_of(L->d_classes[k], q);
        cdelta[k] = class_delta(c, q, eps[k]);
    }
    std::vector<std::vector<cplx>> cross(blocks.size(), std::vector<cplx>(blocks.size()));
    for (size_t q = 0; q < blocks.size(); ++q)
        for (size_t qp = 0; qp < blocks.size(); ++qp)
            if (q != qp) cross[q][qp] = principal_sqrt(c.cross(static_cast<int>(q), static_cast<int>(qp)));

    auto field = [=](const CVec& lambda) -> Coefficients {
        Coefficients out{CMatrix::Zero(n, n), CMatrix::Zero(n, n)};
        std::vector<cplx> h(ncls);  // eps_I * Lambda_I
        for (size_t k = 0; k < ncls; ++k) {
            cplx s{0.0, 0.0};
            for (int m : L->d_classes[k]) s += lambda[static_cast<size_t>(m - 1)];
            h[k] = static_cast<double>(eps[k]) * s;
        }
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) {
                const int ci = L->dclass_of[i - 1], cj = L->dclass_of[j - 1];
                const int pi = L->delta_of[i - 1], pj = L->delta_of[j - 1];
                const int qi = L->block_of[i - 1], qj = L->block_of[j - 1];
                cplx& D = out.delta(i - 1, j - 1);
                cplx& d = out.d(i - 1, j - 1);
                if (ci == cj) {
                    D = cdelta[ci];
                    continue;
                }
                if (qi != qj) {
                    d = cross[qi][qj] * params->two_form.g(i, j, lambda);
                    continue;
                }
                const BlockData& b = blocks[qi];
                if (pi != pj) {
                    const bool upper = L->delta_position[pi] < L->delta_position[pj];
                    D = upper ? b.S : cplx(0.0);
                    d = b.sqrtSigma * params->two_form.g(i, j, lambda);
                    continue;
                }
                const cplx x = h[ci] - h[cj];
                if (b.trig) {
                    const cplx den = 1.0 - std::exp(b.derived.A * x) * fval[ci] / fval[cj];
                    D = guarded_div(b.S, den, "trigonometric Delta_ij");
                } else {
                    D = guarded_div(b.sqrtSigma, x + fval[ci] - fval[cj], "rational Delta_ij");
                }
                d = params->two_form.g(i, j, lambda) * (b.derived.B - D);
            }
        return out;
    };
    return DynamicalRMatrix(n, field, params);
}

CommutingOps build_commuting_ops(const IndexPartition& p, const ClassificationParams& c) {
    require_valid(c);
    const PartitionLayout L = layout(p);
    const int n = p.n;
    CommutingOps ops{CMatrix::Zero(n * n, n * n), {}};
    for (size_t k = 0; k < L.d_classes.size(); ++k) {
        const auto& members = L.d_classes[k];
        const int q = L.delta_block[L.d_class_delta[k]];
        const cplx dl = class_delta(c, q, c.sign_of(members));
        if (members.size() == 1) {
            const int i = members.front();
            ops.R0(composite(n, i, i), composite(n, i, i)) = dl;
            continue;
        }
        CMatrix M = CMatrix::Zero(n * n, n * n);
        const cplx coef = dl / static_cast<double>(members.size());
        for (int j : members)
            for (int jp : members) M(composite(n, j, jp), composite(n, jp, j)) = coef;
        ops.family[class_key(members)] = M;
    }
    return ops;
}

std::string pair_descriptor(const ClassificationParams& c, int i, int j) {
    const PartitionLayout L = layout(c.partition);
    const int ci = L.dclass_of[i - 1], cj = L.dclass_of[j - 1];
    const int qi = L.block_of[i - 1], qj = L.block_of[j - 1];
    if (i == j || ci == cj) return "Delta = Delta_I (constant), d = 0";
    if (qi != qj) return "Delta = 0, d = sqrt(Sigma_qq') g_ij";
    if (L.delta_of[i - 1] != L.delta_of[j - 1]) {
        const bool upper = L.delta_position[L.delta_of[i - 1]] < L.delta_position[L.delta_of[j - 1]];
        return upper ? "Delta = S_q, d = sqrt(Sigma_q) g_ij" : "Delta = 0, d = sqrt(Sigma_q) g_ij";
    }
    if (c.is_trig(qi))
        return "Delta = S_q / (1 - exp(A_q (e_I L_I - e_J L_J)) f_I / f_J), d = g_ij (B_q - Delta)";
    return "Delta = sqrt(Sigma_q) / (e_I L_I - e_J L_J + f_I - f_J), d = g_ij (B_q - Delta)";
}

}  // namespace dynrmat
