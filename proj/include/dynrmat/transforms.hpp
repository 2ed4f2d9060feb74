// transforms.hpp
// Covariance and structural transforms of R-matrices and their parameters.

#pragma once

#include <vector>

#include "dynrmat/params.hpp"
#include "dynrmat/rmatrix.hpp"

namespace dynrmat {

/// d'_ij = (beta_i(l+e_j)/beta_i(l)) (beta_j(l)/beta_j(l+e_i)) d_ij; Delta unchanged.
DynamicalRMatrix apply_twist(const DynamicalRMatrix& R, std::vector<LambdaFn> beta);

/// Cyclic relation on every triplet of pairwise non-equivalent indices. Exact and trivial
/// forms pass without sampling.
ValidationResult check_closed(const TwoFormSpec& g, const IndexPartition& p, const std::vector<CVec>& samples,
                              double tol = 1e-9);

/// d'_ij = g_ij d_ij. Rejects a form that fails check_closed with InvalidInput.
DynamicalRMatrix apply_2form(const DynamicalRMatrix& R, const TwoFormSpec& g, const IndexPartition& p,
                             const std::vector<CVec>& samples, double tol = 1e-9);

/// apply_2form without the closedness check, for negative tests.
DynamicalRMatrix apply_2form_unchecked(const DynamicalRMatrix& R, const TwoFormSpec& g);

/// Restriction to a strictly increasing subset, relabelled in order. Lambda components
/// outside the subset are frozen at 0.
DynamicalRMatrix contract(const DynamicalRMatrix& R, const std::vector<int>& subset);

/// Block sum on concatenated index ranges joined by d_ij = g_ab, d_ji = g_ba.
DynamicalRMatrix decouple_compose(const DynamicalRMatrix& Ra, const DynamicalRMatrix& Rb, cplx g_ab, cplx g_ba);

/// c R; still a solution since both sides are cubic in R.
DynamicalRMatrix scale_matrix(const DynamicalRMatrix& R, cplx c);

/// Relabelling: new index a carries old index perm[a-1], so Delta'_ab(mu) = Delta_{perm(a) perm(b)}(l)
/// with l_{perm(a)} = mu_a.
DynamicalRMatrix permute_indices(const DynamicalRMatrix& R, const std::vector<int>& perm);

/// mu with mu_a = lambda_{perm(a)}.
CVec permute_lambda(const CVec& lambda, const std::vector<int>& perm);

struct ScaledDatum {
    ClassificationParams params;  ///< single Delta-class per scaled block, compensating 2-form included
    std::vector<int> perm;        ///< new index a carries old index perm[a-1]
};

/// Merges the Delta-classes of every multi-class trigonometric block into one class with
/// f scaled by eta^-(position-1). Free indices of the block move to the front.
/// As eta -> 0 the build converges to the build of params, relabelled by perm.
ScaledDatum scale_f(const ClassificationParams& params, double eta);

/// Offsets that absorb f: building with every f at its neutral value (1 trig, 0 rational) and
/// evaluating at lambda + offsets reproduces the build of params at lambda. 0-based vector.
CVec reparametrize(const ClassificationParams& params);

/// params with every f set to its neutral value.
ClassificationParams neutral_f(const ClassificationParams& params);

struct LimitReport {
    std::vector<double> xi;
    std::vector<double> distance;      ///< max entrywise distance to the rational build
    std::vector<double> dqybe;         ///< worst relative DQYBE defect per trig member
    double order = 0.0;                ///< least-squares log-log slope
};

/// Trigonometric family S = slope xi, f = 1 - f0 (slope/sqrt(Sigma)) xi around every rational
/// block, compared entrywise at the given points.
LimitReport trig_to_rational_limit(const ClassificationParams& rational, const std::vector<double>& xi,
                                   const std::vector<CVec>& points, double slope = 1.0);

/// Params of the trigonometric family member at xi.
ClassificationParams trig_member(const ClassificationParams& rational, double xi, double slope = 1.0);

}  // namespace dynrmat
