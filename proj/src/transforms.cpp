// transforms.cpp

#include "dynrmat/transforms.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "dynrmat/builder.hpp"
#include "dynrmat/verifier.hpp"

namespace dynrmat {

DynamicalRMatrix apply_twist(const DynamicalRMatrix& R, std::vector<LambdaFn> beta) {
    const int n = R.n();
    if (static_cast<int>(beta.size()) != n)
        throw Error(ErrorKind::InvalidInput, "twist needs one beta function per index");
    auto b = std::make_shared<const std::vector<LambdaFn>>(std::move(beta));
    auto field = [R, b, n](const CVec& lambda) {
        Coefficients c = R.coefficients(lambda);
        std::vector<cplx> at(n);
        std::vector<std::vector<cplx>> sh(n, std::vector<cplx>(n));  // sh[i][k] = beta_i(l + e_k)
        for (int i = 0; i < n; ++i) {
            at[i] = (*b)[i](lambda);
            if (std::abs(at[i]) < kPoleGuard) throw Error(ErrorKind::Pole, "twist function vanishes");
            for (int k = 0; k < n; ++k) sh[i][k] = (*b)[i](shifted(lambda, k + 1));
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                c.d(i, j) *= (sh[i][j] / at[i]) * guarded_div(at[j], sh[j][i], "twist");
            }
        return c;
    };
    return DynamicalRMatrix(n, field);
}

ValidationResult check_closed(const TwoFormSpec& g, const IndexPartition& p, const std::vector<CVec>& samples,
                              double tol) {
    if (g.kind != TwoFormSpec::Kind::Table) return ValidationResult::success();
    const PartitionLayout L = layout(p);
    double worst = -1.0;
    std::vector<int> worst_triplet;
    for (const CVec& l : samples)
        for (int i = 1; i <= p.n; ++i)
            for (int j = i + 1; j <= p.n; ++j)
                for (int k = j + 1; k <= p.n; ++k) {
                    if (L.same_dclass(i, j) || L.same_dclass(j, k) || L.same_dclass(i, k)) continue;
                    const cplx prod = g.g(i, j, shifted(l, k)) / g.g(i, j, l) * g.g(j, k, shifted(l, i)) /
                                      g.g(j, k, l) * g.g(k, i, shifted(l, j)) / g.g(k, i, l);
                    const double r = std::abs(prod - 1.0);
                    if (r > worst) {
                        worst = r;
                        worst_triplet = {i, j, k};
                    }
                }
    if (worst > tol) {
        std::ostringstream os;
        os << "2-form is not closed: cyclic product deviates from 1 by " << worst << " on triplet ("
           << worst_triplet[0] << "," << worst_triplet[1] << "," << worst_triplet[2] << ")";
        return ValidationResult::failure(os.str(), worst_triplet);
    }
    return ValidationResult::success();
}

DynamicalRMatrix apply_2form_unchecked(const DynamicalRMatrix& R, const TwoFormSpec& g) {
    const int n = R.n();
    auto form = std::make_shared<const TwoFormSpec>(g);
    auto field = [R, form, n](const CVec& lambda) {
        Coefficients c = R.coefficients(lambda);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && c.d(i, j) != cplx(0.0)) c.d(i, j) *= form->g(i + 1, j + 1, lambda);
        return c;
    };
    return DynamicalRMatrix(n, field);
}

DynamicalRMatrix apply_2form(const DynamicalRMatrix& R, const TwoFormSpec& g, const IndexPartition& p,
                             const std::vector<CVec>& samples, double tol) {
    if (auto v = check_closed(g, p, samples, tol); !v) throw Error(ErrorKind::InvalidInput, v.message);
    return apply_2form_unchecked(R, g);
}

DynamicalRMatrix contract(const DynamicalRMatrix& R, const std::vector<int>& subset) {
    if (subset.empty()) throw Error(ErrorKind::InvalidInput, "contraction subset is empty");
    for (size_t a = 0; a < subset.size(); ++a) {
        if (subset[a] < 1 || subset[a] > R.n())
            throw Error(ErrorKind::InvalidInput, "contraction index " + std::to_string(subset[a]) + " out of range");
        if (a && subset[a] <= subset[a - 1])
            throw Error(ErrorKind::InvalidInput, "contraction subset must be strictly increasing");
    }
    const int m = static_cast<int>(subset.size());
    const int n = R.n();
    auto field = [R, subset, m, n](const CVec& mu) {
        CVec lambda(static_cast<size_t>(n), cplx(0.0));
        for (int a = 0; a < m; ++a) lambda[static_cast<size_t>(subset[a] - 1)] = mu[a];
        const Coefficients c = R.partial_coefficients(lambda);
        Coefficients out{CMatrix(m, m), CMatrix(m, m)};
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                out.delta(a, b) = c.delta(subset[a] - 1, subset[b] - 1);
                out.d(a, b) = c.d(subset[a] - 1, subset[b] - 1);
            }
        return out;
    };
    return DynamicalRMatrix(m, field);
}

DynamicalRMatrix decouple_compose(const DynamicalRMatrix& Ra, const DynamicalRMatrix& Rb, cplx g_ab, cplx g_ba) {
    if (g_ab == cplx(0.0) || g_ba == cplx(0.0))
        throw Error(ErrorKind::InvalidInput, "decoupled composition needs nonzero couplings");
    const int na = Ra.n(), nb = Rb.n(), n = na + nb;
    auto field = [Ra, Rb, g_ab, g_ba, na, nb, n](const CVec& lambda) {
        const CVec la(lambda.begin(), lambda.begin() + na), lb(lambda.begin() + na, lambda.end());
        const Coefficients ca = Ra.coefficients(la), cb = Rb.coefficients(lb);
        Coefficients out{CMatrix::Zero(n, n), CMatrix::Zero(n, n)};
        out.delta.topLeftCorner(na, na) = ca.delta;
        out.delta.bottomRightCorner(nb, nb) = cb.delta;
        out.d.topLeftCorner(na, na) = ca.d;
        out.d.bottomRightCorner(nb, nb) = cb.d;
        out.d.topRightCorner(na, nb).setConstant(g_ab);
        out.d.bottomLeftCorner(nb, na).setConstant(g_ba);
        return out;
    };
    return DynamicalRMatrix(n, field);
}

DynamicalRMatrix scale_matrix(const DynamicalRMatrix& R, cplx c) {
    auto field = [R, c](const CVec& lambda) {
        Coefficients out = R.coefficients(lambda);
        out.delta *= c;
        out.d *= c;
        return out;
    };
    return DynamicalRMatrix(R.n(), field);
}

CVec permute_lambda(const CVec& lambda, const std::vector<int>& perm) {
    CVec mu(perm.size());
    for (size_t a = 0; a < perm.size(); ++a) mu[a] = lambda[static_cast<size_t>(perm[a] - 1)];
    return mu;
}

DynamicalRMatrix permute_indices(const DynamicalRMatrix& R, const std::vector<int>& perm) {
    const int n = R.n();
    if (static_cast<int>(perm.size()) != n) throw Error(ErrorKind::InvalidInput, "permutation has wrong length");
    std::vector<bool> seen(n, false);
    for (int v : perm) {
        if (v < 1 || v > n || seen[v - 1]) throw Error(ErrorKind::InvalidInput, "not a permutation of 1..n");
        seen[v - 1] = true;
    }
    auto field = [R, perm, n](const CVec& mu) {
        CVec lambda(static_cast<size_t>(n));
        for (int a = 0; a < n; ++a) lambda[static_cast<size_t>(perm[a] - 1)] = mu[a];
        const Coefficients c = R.coefficients(lambda);
        Coefficients out{CMatrix(n, n), CMatrix(n, n)};
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                out.delta(a, b) = c.delta(perm[a] - 1, perm[b] - 1);
                out.d(a, b) = c.d(perm[a] - 1, perm[b] - 1);
            }
        return out;
    };
    return DynamicalRMatrix(n, field);
}

ScaledDatum scale_f(const ClassificationParams& params, double eta) {
    if (!(eta > 0.0)) throw Error(ErrorKind::InvalidInput, "scaling parameter eta must be positive");
    if (auto v = validate_params(params); !v) throw Error(ErrorKind::InvalidInput, "invalid parameters: " + v.message);
    const PartitionLayout L = layout(params.partition);

    std::vector<bool> scaled(params.partition.blocks.size(), false);
    bool any = false;
    for (size_t q = 0; q < params.partition.blocks.size(); ++q)
        if (params.partition.blocks[q].size() >= 2) {
            if (!params.is_trig(static_cast<int>(q)))
                throw Error(ErrorKind::InvalidInput, "f-scaling applies to trigonometric blocks only");
            scaled[q] = any = true;
        }
    if (!any) throw Error(ErrorKind::InvalidInput, "f-scaling needs a block with at least two Delta-classes");

    // New order of old indices, and the old D-classes in new layout order.
    std::vector<int> perm;
    std::vector<std::vector<DeltaClass>> old_shape;
    for (size_t q = 0; q < params.partition.blocks.size(); ++q) {
        const KBlock& blk = params.partition.blocks[q];
        if (!scaled[q]) {
            old_shape.push_back(blk);
            continue;
        }
        DeltaClass merged;
        for (const DeltaClass& dc : blk) merged.free.insert(merged.free.end(), dc.free.begin(), dc.free.end());
        for (const DeltaClass& dc : blk)
            merged.d_classes.insert(merged.d_classes.end(), dc.d_classes.begin(), dc.d_classes.end());
        old_shape.push_back({merged});
    }
    for (const auto& blk : old_shape)
        for (const DeltaClass& dc : blk) {
            perm.insert(perm.end(), dc.free.begin(), dc.free.end());
            for (const auto& cls : dc.d_classes) perm.insert(perm.end(), cls.begin(), cls.end());
        }
    std::vector<int> to_new(params.partition.n + 1);
    for (size_t a = 0; a < perm.size(); ++a) to_new[perm[a]] = static_cast<int>(a) + 1;
    auto relabel = [&](const std::vector<int>& v) {
        std::vector<int> out;
        for (int i : v) out.push_back(to_new[i]);
        return out;
    };

    ScaledDatum out;
    ClassificationParams& np = out.params;
    np.partition.n = params.partition.n;
    for (const auto& blk : old_shape) {
        KBlock nb;
        for (const DeltaClass& dc : blk) {
            DeltaClass ndc;
            ndc.free = relabel(dc.free);
            for (const auto& cls : dc.d_classes) ndc.d_classes.push_back(relabel(cls));
            nb.push_back(ndc);
        }
        np.partition.blocks.push_back(nb);
    }
    np.per_block = params.per_block;
    np.cross_sigma = params.cross_sigma;
    for (size_t cid = 0; cid < L.d_classes.size(); ++cid) {
        const auto& members = L.d_classes[cid];
        const int p = L.d_class_delta[cid];
        const int q = L.delta_block[p];
        const std::string key = class_key(relabel(members));
        np.signs[key] = params.sign_of(members);
        cplx fv = params.f_of(members, q);
        if (scaled[q]) fv *= std::pow(eta, -static_cast<double>(L.delta_position[p]));
        np.f[key] = fv;
    }

    // Compensating constants across merged classes, composed with the relabelled original form.
    const int n = params.partition.n;
    std::vector<std::vector<cplx>> comp(n + 1, std::vector<cplx>(n + 1, cplx(1.0)));
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
            const int i = perm[a - 1], j = perm[b - 1];
            const int q = L.block_of[i - 1];
            if (a == b || q != L.block_of[j - 1] || !scaled[q]) continue;
            const int pi = L.delta_of[i - 1], pj = L.delta_of[j - 1];
            if (pi == pj) continue;
            const BlockConstants& bc = params.per_block[q];
            const DerivedBlockConstants dv = derive(bc.S, bc.Sigma);
            const cplx rs = principal_sqrt(bc.Sigma);
            comp[a][b] = L.delta_position[pi] < L.delta_position[pj] ? rs / (dv.B - bc.S) : rs / dv.B;
        }
    auto orig = std::make_shared<const TwoFormSpec>(params.two_form);
    const bool trivial = params.two_form.kind == TwoFormSpec::Kind::Trivial;
    np.two_form = TwoFormSpec::table_of([comp, orig, perm, trivial, n](int a, int b, const CVec& mu) -> cplx {
        if (trivial) return comp[a][b];
        CVec lambda(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) lambda[static_cast<size_t>(perm[k] - 1)] = mu[k];
        return comp[a][b] * orig->g(perm[a - 1], perm[b - 1], lambda);
    });
    out.params = normalize_f(np).first;
    out.perm = perm;
    return out;
}

ClassificationParams neutral_f(const ClassificationParams& params) {
    ClassificationParams out = params;
    out.f.clear();
    return out;
}

CVec reparametrize(const ClassificationParams& params) {
    if (auto v = validate_params(params); !v) throw Error(ErrorKind::InvalidInput, "invalid parameters: " + v.message);
    const PartitionLayout L = layout(params.partition);
    CVec off(static_cast<size_t>(params.partition.n), cplx(0.0));
    for (size_t cid = 0; cid < L.d_classes.size(); ++cid) {
        const auto& members = L.d_classes[cid];
        const int q = L.delta_block[L.d_class_delta[cid]];
        const double w = static_cast<double>(params.sign_of(members)) / static_cast<double>(members.size());
        const cplx fv = params.f_of(members, q);
        cplx shift;
        if (params.is_trig(q)) {
            const BlockConstants& bc = params.per_block[q];
            shift = w * std::log(fv) / derive(bc.S, bc.Sigma).A;
        } else {
            shift = w * fv;
        }
        for (int i : members) off[static_cast<size_t>(i - 1)] = shift;
    }
    return off;
}

ClassificationParams trig_member(const ClassificationParams& rational, double xi, double slope) {
    if (auto v = validate_params(rational); !v)
        throw Error(ErrorKind::InvalidInput, "invalid parameters: " + v.message);
    const PartitionLayout L = layout(rational.partition);
    ClassificationParams out = rational;
    bool any = false;
    for (size_t q = 0; q < rational.per_block.size(); ++q)
        if (!rational.is_trig(static_cast<int>(q))) {
            out.per_block[q].S = slope * xi;
            any = true;
        }
    if (!any) throw Error(ErrorKind::InvalidInput, "limit harness needs a rational block");
    for (size_t cid = 0; cid < L.d_classes.size(); ++cid) {
        const int q = L.delta_block[L.d_class_delta[cid]];
        if (rational.is_trig(q)) continue;
        const cplx f0 = rational.f_of(L.d_classes[cid], q);
        out.f[class_key(L.d_classes[cid])] = 1.0 - f0 * (slope / principal_sqrt(rational.per_block[q].Sigma)) * xi;
    }
    return out;
}

LimitReport trig_to_rational_limit(const ClassificationParams& rational, const std::vector<double>& xi,
                                   const std::vector<CVec>& points, double slope) {
    if (points.empty()) throw Error(ErrorKind::InvalidInput, "limit harness needs test points");
    const DynamicalRMatrix R0 = build(rational);
    LimitReport rep;
    for (double x : xi) {
        const DynamicalRMatrix Rx = build(trig_member(rational, x, slope));
        double dist = 0.0, defect = 0.0;
        for (const CVec& l : points) {
            const Coefficients a = R0.coefficients(l), b = Rx.coefficients(l);
            dist = std::max({dist, (a.delta - b.delta).cwiseAbs().maxCoeff(), (a.d - b.d).cwiseAbs().maxCoeff()});
            defect = std::max(defect, dqybe_defect(Rx, l).relative());
        }
        rep.xi.push_back(x);
        rep.distance.push_back(dist);
        rep.dqybe.push_back(defect);
    }
    if (rep.xi.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(rep.xi.size());
        for (size_t k = 0; k < rep.xi.size(); ++k) {
            const double X = std::log(rep.xi[k]), Y = std::log(rep.distance[k]);
            sx += X;
            sy += Y;
            sxx += X * X;
            sxy += X * Y;
        }
        rep.order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    return rep;
}

}  // namespace dynrmat
