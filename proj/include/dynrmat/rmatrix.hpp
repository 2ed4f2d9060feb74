// rmatrix.hpp
// Evaluable zero-weight dynamical R-matrix and its dense / triple-space forms.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "dynrmat/core.hpp"
#include "dynrmat/params.hpp"

namespace dynrmat {

using CMatrix = Eigen::MatrixXcd;

/// Delta_ij and d_ij at one dynamical point, 0-based n x n arrays. d has a zero diagonal.
struct Coefficients {
    CMatrix delta;
    CMatrix d;
};

class DynamicalRMatrix {
public:
    /// Fills all coefficients at lambda; may throw a pole error.
    using Field = std::function<Coefficients(const CVec&)>;

    DynamicalRMatrix(int n, Field field, std::shared_ptr<const ClassificationParams> provenance = nullptr)
        : n_(n), field_(std::move(field)), provenance_(std::move(provenance)) {}

    int n() const { return n_; }

    /// Coefficients at lambda. Throws Pole if any value is non-finite.
    Coefficients coefficients(const CVec& lambda) const;

    /// Coefficients at lambda with poles reported as NaN entries instead of errors.
    Coefficients partial_coefficients(const CVec& lambda) const;

    cplx delta(int i, int j, const CVec& lambda) const { return coefficients(lambda).delta(i - 1, j - 1); }
    cplx d(int i, int j, const CVec& lambda) const { return coefficients(lambda).d(i - 1, j - 1); }

    /// Builder datum that produced this matrix, if any.
    const ClassificationParams* provenance() const { return provenance_.get(); }
    std::shared_ptr<const ClassificationParams> provenance_ptr() const { return provenance_; }

private:
    int n_;
    Field field_;
    std::shared_ptr<const ClassificationParams> provenance_;
};

/// Dense n^2 x n^2 evaluation; composite index (a,b) -> (a-1)n + b, stored 0-based.
struct DensePoint {
    int n = 0;
    CVec lambda;
    CMatrix matrix;
};

/// 0-based composite index of the basis tensor e_a (x) e_b, a and b 1-based.
inline int composite(int n, int a, int b) { return (a - 1) * n + (b - 1); }

/// Dense matrix with Delta_ij at [(i,j),(j,i)] and d_ij at [(i,j),(i,j)].
CMatrix dense_from(const Coefficients& c);

DensePoint evaluate(const DynamicalRMatrix& R, const CVec& lambda);

enum class SlotPair { S12, S13, S23 };

/// Operator on V (x) V (x) V applying R on the given slots. With a shift slot s (1..3),
/// the block acting on e_c in slot s is evaluated at lambda + e_c.
CMatrix embed_with_shift(const DynamicalRMatrix& R, SlotPair slots, std::optional<int> shift_slot,
                         const CVec& lambda);

/// Check R = P R with P the flip of the two tensor factors.
CMatrix permuted(const DensePoint& P);

struct SumDet {
    cplx S;
    cplx Sigma;
};

/// S_ij = Delta_ij + Delta_ji and Sigma_ij = d_ij d_ji - Delta_ij Delta_ji, keyed by (i,j), i<j.
std::map<std::pair<int, int>, SumDet> sum_and_det_fields(const DynamicalRMatrix& R, const CVec& lambda);

}  // namespace dynrmat
