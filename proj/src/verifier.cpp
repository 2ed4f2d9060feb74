// verifier.cpp

#include "dynrmat/verifier.hpp"

#include <cmath>
#include <initializer_list>
#include <random>
#include <sstream>

#include "dynrmat/builder.hpp"

namespace dynrmat {

namespace {

using Sparse3 = std::map<int, cplx>;  // key: ((a-1)n + (b-1))n + (c-1)

struct PointCoeffs {
    Coefficients at;                  // at lambda
    std::vector<Coefficients> shift;  // shift[k-1] at lambda + e_k
};

PointCoeffs point_coeffs(const DynamicalRMatrix& R, const CVec& lambda) {
    PointCoeffs pc{R.coefficients(lambda), {}};
    for (int k = 1; k <= R.n(); ++k) pc.shift.push_back(R.coefficients(shifted(lambda, k)));
    return pc;
}

// Applies R on slots (s,t) with an optional spectator shift slot, to a sparse vector.
Sparse3 apply(const PointCoeffs& pc, int n, int s, int t, int shift_slot, const Sparse3& in) {
    Sparse3 out;
    for (const auto& [key, val] : in) {
        std::array<int, 3> v{key / (n * n) + 1, (key / n) % n + 1, key % n + 1};
        const Coefficients& c = shift_slot >= 0 ? pc.shift[v[shift_slot] - 1] : pc.at;
        const int a = v[s], b = v[t];
        auto emit = [&](int x, int y, cplx coef) {
            if (coef == cplx(0.0)) return;
            std::array<int, 3> w = v;
            w[s] = x;
            w[t] = y;
            out[((w[0] - 1) * n + (w[1] - 1)) * n + (w[2] - 1)] += coef * val;
        };
        // R (e_a (x) e_b) = Delta_ba e_b (x) e_a + d_ab e_a (x) e_b
        emit(b, a, c.delta(b - 1, a - 1));
        if (a != b) emit(a, b, c.d(a - 1, b - 1));
    }
    return out;
}

}  // namespace

DqybeDefect dqybe_defect(const DynamicalRMatrix& R, const CVec& lambda) {
    const int n = R.n();
    const PointCoeffs pc = point_coeffs(R, lambda);
    DqybeDefect out;
    for (int col = 0; col < n * n * n; ++col) {
        const Sparse3 e{{col, cplx(1.0)}};
        // Left: R12(l+h3) R13(l) R23(l+h1), rightmost factor applied first.
        const Sparse3 L = apply(pc, n, 0, 1, 2, apply(pc, n, 0, 2, -1, apply(pc, n, 1, 2, 0, e)));
        // Right: R23(l) R13(l+h2) R12(l).
        const Sparse3 Rt = apply(pc, n, 1, 2, -1, apply(pc, n, 0, 2, 1, apply(pc, n, 0, 1, -1, e)));
        Sparse3 diff = L;
        for (const auto& [k, v] : Rt) diff[k] -= v;
        for (const auto& [k, v] : L) out.scale = std::max(out.scale, std::abs(v));
        for (const auto& [k, v] : Rt) out.scale = std::max(out.scale, std::abs(v));
        for (const auto& [k, v] : diff) out.defect = std::max(out.defect, std::abs(v));
    }
    return out;
}

double dqybe_residual(const DynamicalRMatrix& R, const CVec& lambda) { return dqybe_defect(R, lambda).defect; }

ResidualReport check_system(const DynamicalRMatrix& R, const std::vector<CVec>& samples, double tol) {
    if (samples.empty()) throw Error(ErrorKind::InvalidInput, "check_system needs at least one sample");
    const int n = R.n();
    ResidualReport rep;
    rep.samples = samples;
    rep.tol = tol;
    for (const std::string& tag : kEquationTags) rep.per_equation[tag] = 0.0;

    for (size_t s = 0; s < samples.size(); ++s) {
        const PointCoeffs pc = point_coeffs(R, samples[s]);
        // Coefficient accessors; sh = 0 means unshifted, otherwise the shifted index.
        auto D = [&](int i, int j, int sh = 0) {
            return (sh ? pc.shift[sh - 1] : pc.at).delta(i - 1, j - 1);
        };
        auto d = [&](int i, int j, int sh = 0) { return (sh ? pc.shift[sh - 1] : pc.at).d(i - 1, j - 1); };
        auto record = [&](const std::string& tag, int i, int j, int k, cplx value,
                          std::initializer_list<cplx> terms) {
            double scale = 1.0;
            for (cplx t : terms) scale = std::max(scale, std::abs(t));
            const double r = std::abs(value) / scale;
            rep.rows.push_back({tag, i, j, k, static_cast<int>(s), r});
            double& slot = rep.per_equation[tag];
            slot = std::max(slot, r);
            if (rep.worst.sample < 0 || r > rep.worst.value)
                rep.worst = {tag, {i, j, k}, static_cast<int>(s), samples[s], r};
        };

        for (int i = 1; i <= n; ++i) {
            const cplx a = D(i, i), ai = D(i, i, i);
            record("G0", i, 0, 0, a * ai * (ai - a), {a * ai * ai, a * ai * a});
        }
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) {
                if (i == j) continue;
                const cplx Dii = D(i, i), Diij = D(i, i, j), Dij = D(i, j), Diji = D(i, j, i);
                const cplx Dji = D(j, i), Djii = D(j, i, i);
                const cplx dij = d(i, j), dji = d(j, i), diji = d(i, j, i), djii = d(j, i, i);

                record("F1", i, j, 0, dij * diji * (Diij - Dii), {dij * diji * Diij, dij * diji * Dii});
                record("F2", i, j, 0, dji * djii * (Diij - Dii), {dji * djii * Diij, dji * djii * Dii});
                const cplx b34 = Diij * Diji - Diij * Dij - Dji * Diji;
                record("F3", i, j, 0, dij * b34, {dij * Diij * Diji, dij * Diij * Dij, dij * Dji * Diji});
                record("F4", i, j, 0, dji * b34, {dji * Diij * Diji, dji * Diij * Dij, dji * Dji * Diji});
                const cplx b56 = Dii * Djii - Dii * Dji + Dji * Diji;
                record("F5", i, j, 0, diji * b56, {diji * Dii * Djii, diji * Dii * Dji, diji * Dji * Diji});
                record("F6", i, j, 0, djii * b56, {djii * Dii * Djii, djii * Dii * Dji, djii * Dji * Diji});
                record("F7", i, j, 0, Diij * Diij * Dij - (dij * dji) * Diji - Diij * Dij * Dij,
                       {Diij * Diij * Dij, dij * dji * Diji, Diij * Dij * Dij});
                // Middle factor is Delta_ji: the mirror of F7 and the exact triple-space component.
                record("F8", i, j, 0, Dii * Dii * Djii - (diji * djii) * Dji - Dii * Djii * Djii,
                       {Dii * Dii * Djii, diji * djii * Dji, Dii * Djii * Djii});
                record("F9", i, j, 0, Dii * diji * djii - Diij * dij * dji + Diji * Dji * (Diji - Dji),
                       {Dii * diji * djii, Diij * dij * dji, Diji * Dji * Diji, Diji * Dji * Dji});
            }
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                for (int k = 1; k <= n; ++k) {
                    if (i == j || j == k || i == k) continue;
                    const cplx dijk = d(i, j, k), djki = d(j, k, i), dik = d(i, k), dij = d(i, j), djk = d(j, k);
                    const cplx dikj = d(i, k, j), djik = d(j, i, k), dkj = d(k, j);
                    const cplx Dijk = D(i, j, k), Dij = D(i, j), Djki = D(j, k, i), Djk = D(j, k);
                    const cplx Djik = D(j, i, k), Dik = D(i, k), Dikj = D(i, k, j), Dkj = D(k, j);

                    record("E1", i, j, k, dijk * djki * dik - dij * djk * dikj,
                           {dijk * djki * dik, dij * djk * dikj});
                    record("E2", i, j, k, djk * dikj * (Dijk - Dij), {djk * dikj * Dijk, djk * dikj * Dij});
                    record("E3", i, j, k, dijk * dik * (Djki - Djk), {dijk * dik * Djki, dijk * dik * Djk});
                    record("E4", i, j, k, dijk * (Dijk * Djk + Djik * Dik - Dik * Djk),
                           {dijk * Dijk * Djk, dijk * Djik * Dik, dijk * Dik * Djk});
                    record("E5", i, j, k, djk * (Dijk * Djk + Dikj * Dkj - Dijk * Dikj),
                           {djk * Dijk * Djk, djk * Dikj * Dkj, djk * Dijk * Dikj});
                    record("E6", i, j, k, dijk * djik * Dik - djk * dkj * Dikj + Dijk * Djk * (Dijk - Djk),
                           {dijk * djik * Dik, djk * dkj * Dikj, Dijk * Djk * Dijk, Dijk * Djk * Djk});
                }
    }
    for (const auto& [tag, v] : rep.per_equation)
        if (v > tol) rep.pass = false;
    return rep;
}

bool check_zero_weight(const DensePoint& M, double tol) {
    const int n = M.n;
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b)
            for (int c = 1; c <= n; ++c)
                for (int e = 1; e <= n; ++e) {
                    const bool allowed = (c == b && e == a) || (c == a && e == b);
                    if (!allowed && std::abs(M.matrix(composite(n, a, b), composite(n, c, e))) >= tol) return false;
                }
    return true;
}

InvertibilityCheck check_invertibility(const DynamicalRMatrix& R, const CVec& lambda) {
    const Coefficients c = R.coefficients(lambda);
    const int n = R.n();
    InvertibilityCheck out;
    out.det_factorized = 1.0;
    for (int i = 0; i < n; ++i) out.det_factorized *= c.delta(i, i);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            out.det_factorized *= c.d(i, j) * c.d(j, i) - c.delta(i, j) * c.delta(j, i);

    const CMatrix M = dense_from(c);
    out.det_dense = M.partialPivLu().determinant();
    // Hadamard bound: a determinant far below it is numerically zero.
    double hadamard = 1.0;
    for (int r = 0; r < M.rows(); ++r) hadamard *= std::max(M.row(r).norm(), 1e-300);
    const double zero_level = 1e-12 * hadamard;
    const bool fz = std::abs(out.det_factorized) <= zero_level;
    const bool dz = std::abs(out.det_dense) <= zero_level;
    const double mag = std::max(std::abs(out.det_factorized), std::abs(out.det_dense));
    out.rel_diff = mag > 0.0 ? std::abs(out.det_factorized - out.det_dense) / mag : 0.0;
    out.invertible = !fz && !dz;
    out.agree = (fz && dz) || (out.invertible && out.rel_diff < 1e-8);
    return out;
}

ShiftIdentityReport shift_identities(const DynamicalRMatrix& R, const CVec& lambda) {
    const ClassificationParams* c = R.provenance();
    if (!c) throw Error(ErrorKind::InvalidInput, "shift identities need a builder-produced matrix");
    const PartitionLayout L = layout(c->partition);
    const int n = R.n();
    ShiftIdentityReport rep;
    const Coefficients at = R.coefficients(lambda);
    std::vector<Coefficients> sh;
    for (int k = 1; k <= n; ++k) sh.push_back(R.coefficients(shifted(lambda, k)));

    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            if (i == j || L.same_dclass(i, j) || L.delta_of[i - 1] != L.delta_of[j - 1]) continue;
            const int q = L.block_of[i - 1];
            const bool trig = c->is_trig(q);
            const BlockConstants& bc = c->per_block[q];
            const DerivedBlockConstants dv = derive(bc.S, bc.Sigma);
            const cplx rs = principal_sqrt(bc.Sigma);
            auto beta = [&](const Coefficients& cf) {
                return trig ? cf.delta(j - 1, i - 1) / cf.delta(i - 1, j - 1) : rs / cf.delta(i - 1, j - 1);
            };
            const cplx b0 = beta(at);
            for (int k = 1; k <= n; ++k) {
                int e = 0;
                if (L.dclass_of[k - 1] == L.dclass_of[i - 1]) e = c->sign_of(L.d_classes[L.dclass_of[i - 1]]);
                if (L.dclass_of[k - 1] == L.dclass_of[j - 1]) e = -c->sign_of(L.d_classes[L.dclass_of[j - 1]]);
                const cplx b1 = beta(sh[k - 1]);
                cplx expect;
                if (trig)
                    expect = std::exp(dv.A * static_cast<double>(e)) * b0;
                else
                    expect = b0 + static_cast<double>(e);
                const double r = std::abs(b1 - expect) / std::max({1.0, std::abs(b1), std::abs(expect)});
                rep.rows.push_back({i, j, k, r});
                rep.max_residual = std::max(rep.max_residual, r);
            }
        }
    return rep;
}

std::vector<CVec> draw_samples(const DynamicalRMatrix& R, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    std::vector<CVec> out;
    const int max_attempts = 200 * std::max(count, 1);
    for (int attempt = 0; attempt < max_attempts && static_cast<int>(out.size()) < count; ++attempt) {
        CVec l(static_cast<size_t>(R.n()));
        for (cplx& x : l) {
            const double re = U(rng);
            x = cplx(re, U(rng));
        }
        try {
            (void)R.coefficients(l);
            for (int k = 1; k <= R.n(); ++k) (void)R.coefficients(shifted(l, k));
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Pole) continue;
            throw;
        }
        out.push_back(std::move(l));
    }
    if (static_cast<int>(out.size()) < count)
        throw Error(ErrorKind::Pole, "could not draw enough non-singular sample points");
    return out;
}

VerifyReport verify(const DynamicalRMatrix& R, const std::vector<CVec>& samples, double tol) {
    VerifyReport rep;
    rep.system = check_system(R, samples, tol);
    double worst_dqybe = 0.0;
    int worst_inv = -1;
    for (size_t s = 0; s < samples.size(); ++s) {
        const DqybeDefect dd = dqybe_defect(R, samples[s]);
        rep.dqybe.push_back(dd);
        rep.system.global.push_back(dd.relative());
        worst_dqybe = std::max(worst_dqybe, dd.relative());
        rep.invertibility.push_back(check_invertibility(R, samples[s]));
        if (!(rep.invertibility.back().agree && rep.invertibility.back().invertible) && worst_inv < 0)
            worst_inv = static_cast<int>(s);
    }
    rep.pass = rep.system.pass && worst_dqybe <= tol && worst_inv < 0;
    std::ostringstream os;
    os.precision(3);
    if (!rep.system.pass) {
        const WorstCase& w = rep.system.worst;
        os << "violated equation " << w.equation << " at indices (" << w.indices[0];
        if (w.indices[1]) os << "," << w.indices[1];
        if (w.indices[2]) os << "," << w.indices[2];
        os << ") sample " << w.sample << ": residual " << w.value;
    } else if (worst_dqybe > tol) {
        os << "DQYBE defect " << worst_dqybe << " exceeds tolerance";
    } else if (worst_inv >= 0) {
        os << "determinant check failed at sample " << worst_inv;
    } else {
        os << "all checks passed";
    }
    rep.summary = os.str();
    return rep;
}

}  // namespace dynrmat
