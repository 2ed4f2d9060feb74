// hecke.cpp

#include "dynrmat/hecke.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "dynrmat/classifier.hpp"
#include "dynrmat/transforms.hpp"

namespace dynrmat {

namespace {

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b))); }

std::string fmt(cplx z) {
    std::ostringstream os;
    os.precision(12);
    if (std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z.real())))
        os << z.real();
    else
        os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

}  // namespace

std::string to_string(HeckeKind k) {
    switch (k) {
        case HeckeKind::Hecke: return "Hecke";
        case HeckeKind::WeakHecke: return "WeakHecke";
        case HeckeKind::DegenerateSingleDClass: return "DegenerateSingleDClass";
        case HeckeKind::None: return "None";
    }
    return "None";
}

HeckeReport hecke_classify(const DynamicalRMatrix& R, const std::vector<CVec>& samples, double tol) {
    if (samples.empty()) throw Error(ErrorKind::InvalidInput, "Hecke detection needs samples");
    const int n = R.n();
    HeckeReport rep;
    rep.samples = samples;
    std::vector<Coefficients> coef;
    for (const CVec& l : samples) coef.push_back(R.coefficients(l));

    const Equivalences eq = build_equivalences(detect_relations(R, samples));
    if (eq.d_classes.size() == 1) {
        rep.kind = HeckeKind::DegenerateSingleDClass;
        rep.rho = coef[0].delta(0, 0);
        rep.kappa = -rep.rho;
        rep.evidence.push_back({1, 1, {rep.rho}, true});
        rep.summary = "DegenerateSingleDClass rho=" + fmt(rep.rho) + " kappa=" + fmt(rep.kappa);
        return rep;
    }

    for (int i = 1; i <= n; ++i) {
        const cplx v = coef[0].delta(i - 1, i - 1);
        for (const Coefficients& c : coef)
            if (!close(c.delta(i - 1, i - 1), v, tol))
                throw Error(ErrorKind::NotInFamily, "eigenvalue on V_" + std::to_string(i) + std::to_string(i) +
                                                        " depends on lambda");
        rep.evidence.push_back({i, i, {v}, true});
    }
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            const auto sd = [&](const Coefficients& c) {
                const cplx a = c.delta(i - 1, j - 1), b = c.delta(j - 1, i - 1);
                const cplx p = c.d(i - 1, j - 1), q = c.d(j - 1, i - 1);
                return std::array<cplx, 4>{a + b, p * q - a * b, std::abs(a) + std::abs(b),
                                           std::abs(p * q) + std::abs(a * b)};
            };
            const auto ref = sd(coef[0]);
            EigenEntry e{i, j, {}, true};
            for (const Coefficients& c : coef) {
                const auto cur = sd(c);
                if (std::abs(cur[0] - ref[0]) > tol * std::max(1.0, cur[2].real()) ||
                    std::abs(cur[1] - ref[1]) > tol * std::max(1.0, cur[3].real()))
                    throw Error(ErrorKind::NotInFamily, "eigenvalues on V_" + std::to_string(i) + std::to_string(j) +
                                                            " depend on lambda");
            }
            const cplx D = principal_sqrt(ref[0] * ref[0] + 4.0 * ref[1]);
            e.values = {(ref[0] + D) / 2.0, (ref[0] - D) / 2.0};
            if (close(e.values[0], e.values[1], tol)) {
                for (const Coefficients& c : coef) {
                    const double sc = std::max(1.0, std::abs(c.delta(i - 1, j - 1)));
                    if (std::abs(c.d(i - 1, j - 1)) > tol * sc || std::abs(c.d(j - 1, i - 1)) > tol * sc ||
                        std::abs(c.delta(i - 1, j - 1) - c.delta(j - 1, i - 1)) > tol * sc)
                        e.diagonalizable = false;
                }
            }
            rep.evidence.push_back(e);
        }

    std::vector<cplx> distinct;
    bool diagonalizable = true;
    for (const EigenEntry& e : rep.evidence) {
        diagonalizable = diagonalizable && e.diagonalizable;
        for (cplx v : e.values)
            if (std::none_of(distinct.begin(), distinct.end(), [&](cplx u) { return close(u, v, tol); }))
                distinct.push_back(v);
    }
    if (distinct.size() != 2 || !diagonalizable) {
        rep.kind = HeckeKind::None;
        std::ostringstream os;
        os << "None: " << distinct.size() << " distinct eigenvalues" << (diagonalizable ? "" : ", non-scalar repeated block");
        rep.summary = os.str();
        return rep;
    }
    rep.weak = true;
    const cplx first = rep.evidence.front().values.front();
    const cplx other = close(distinct[0], first, tol) ? distinct[1] : distinct[0];
    rep.rho = first;
    rep.kappa = -other;
    rep.alternatives.push_back({rep.rho, rep.kappa});
    bool other_on_diag = false, all_diag_rho = true;
    for (int i = 0; i < n; ++i) {
        const bool is_rho = close(rep.evidence[i].values[0], first, tol);
        all_diag_rho = all_diag_rho && is_rho;
        other_on_diag = other_on_diag || !is_rho;
    }
    if (other_on_diag) rep.alternatives.push_back({other, -first});
    bool hecke = all_diag_rho;
    for (size_t k = n; k < rep.evidence.size() && hecke; ++k) {
        const auto& v = rep.evidence[k].values;
        hecke = !close(v[0], v[1], tol);
    }
    rep.kind = hecke ? HeckeKind::Hecke : HeckeKind::WeakHecke;
    rep.summary = std::string(hecke ? "Hecke" : "WeakHecke") + " rho=" + fmt(rep.rho) + " kappa=" + fmt(rep.kappa) +
                  (hecke ? "" : "; not Hecke");
    return rep;
}

HeckeRecipe basic_form_distance(const DynamicalRMatrix& R, const HeckeReport& report,
                                const std::vector<CVec>& samples) {
    if (report.kind != HeckeKind::Hecke && report.kind != HeckeKind::WeakHecke)
        throw Error(ErrorKind::InvalidInput, "basic form needs a Hecke or weak Hecke matrix, got " + to_string(report.kind));
    // Prefer the labelling with rho closest to -1, so a matrix already in basic form maps to itself.
    HeckeRecipe out;
    out.rho = report.alternatives.front().first;
    for (const auto& alt : report.alternatives)
        if (std::abs(alt.first + 1.0) < std::abs(out.rho + 1.0)) out.rho = alt.first;
    out.scale = -1.0 / out.rho;

    const DynamicalRMatrix Rs = scale_matrix(R, out.scale);
    const IncidenceReport inc = classify(Rs, samples);
    const RecoveredParams rec = recover_params(Rs, inc, samples);
    const std::vector<int> perm = inc.index_permutation;
    std::vector<int> to_new(perm.size() + 1);
    for (size_t a = 0; a < perm.size(); ++a) to_new[perm[a]] = static_cast<int>(a) + 1;
    const TwoFormSpec gs = rec.params.two_form;
    out.two_form = TwoFormSpec::table_of([gs, perm, to_new](int i, int j, const CVec& l) -> cplx {
        return -1.0 / gs.g(to_new[i], to_new[j], permute_lambda(l, perm));
    });
    out.identity = close(out.scale, 1.0, 1e-12);
    const int n = R.n();
    for (const CVec& l : samples)
        for (int i = 1; i <= n && out.identity; ++i)
            for (int j = i + 1; j <= n && out.identity; ++j)
                if (inc.d_classes.size() > 1 && Rs.d(i, j, l) != cplx(0.0))
                    out.identity = close(out.two_form.g(i, j, l), 1.0, 1e-10);
    return out;
}

}  // namespace dynrmat
