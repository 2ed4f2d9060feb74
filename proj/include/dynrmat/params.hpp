// params.hpp
// Numeric classification data: block constants, signs, f constants and 2-forms.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynrmat/core.hpp"
#include "dynrmat/partition.hpp"

namespace dynrmat {

/// c * exp(sum_k lin_k lambda_k + sum_k quad_k lambda_k^2). Never vanishes.
struct ExpPoly {
    cplx c{1.0, 0.0};
    CVec lin;   ///< empty means zero
    CVec quad;  ///< empty means zero

    cplx operator()(const CVec& lambda) const;
};

/// Multiplicative 2-form g on pairs of indices, with g_ij g_ji = 1.
struct TwoFormSpec {
    enum class Kind { Trivial, Exact, Table };

    Kind kind = Kind::Trivial;
    /// Exact: beta[i-1]; g_ij = beta_i(l+e_j)/beta_i(l) * beta_j(l)/beta_j(l+e_i).
    std::vector<LambdaFn> beta;
    /// Table: g_ij for i<j; g_ji is its reciprocal.
    std::function<cplx(int, int, const CVec&)> table;

    /// Parametric sources, kept for serialization when the form came from data.
    std::vector<ExpPoly> beta_params;
    std::map<std::pair<int, int>, ExpPoly> table_params;

    cplx g(int i, int j, const CVec& lambda) const;

    static TwoFormSpec trivial() { return {}; }
    static TwoFormSpec exact(std::vector<ExpPoly> beta);
    static TwoFormSpec exact(std::vector<LambdaFn> beta);
    /// Pairs absent from the map have g = 1.
    static TwoFormSpec table_of(std::map<std::pair<int, int>, ExpPoly> entries);
    static TwoFormSpec table_of(std::function<cplx(int, int, const CVec&)> fn);
};

struct BlockConstants {
    cplx S;
    cplx Sigma;
};

struct DerivedBlockConstants {
    cplx D;          ///< principal root of S^2 + 4 Sigma
    cplx T;          ///< (D - S)/(D + S)
    cplx A;          ///< exp(A) = T; unused when S = 0
    cplx B;          ///< (S + D)/2
    bool has_A = false;
};

/// Derived constants D, T, A, B for one block. Throws InvalidInput when Sigma = 0.
DerivedBlockConstants derive(cplx S, cplx Sigma);

/// T counts as negative real when |Im T| <= 1e-12 |T| and Re T < 0.
bool is_negative_real(cplx T);

struct ClassificationParams {
    IndexPartition partition;
    std::vector<BlockConstants> per_block;
    /// Keyed by 1-based block pair (q, q'), q < q'. Missing pairs default to 1.
    std::map<std::pair<int, int>, cplx> cross_sigma;
    /// Keyed by class_key. Missing classes default to +1.
    std::map<std::string, int> signs;
    /// Keyed by class_key. Missing classes take the convention value (1 trig, 0 rational).
    std::map<std::string, cplx> f;
    TwoFormSpec two_form;

    /// Trigonometric block: S_q != 0. q is 0-based.
    bool is_trig(int q) const { return per_block.at(static_cast<size_t>(q)).S != cplx(0.0); }
    int sign_of(const std::vector<int>& d_class) const;
    cplx f_of(const std::vector<int>& d_class, int q) const;
    /// Cross-block constant for 0-based blocks q != q'.
    cplx cross(int q, int qp) const;
};

/// Checks invertibility, multi-class trigonometric, f convention and sign constraints.
ValidationResult validate_params(const ClassificationParams& c);

struct NormalizeReport {
    bool changed = false;
    std::vector<std::string> notes;
};

/// Rescales (trig) or shifts (rational) f so that the first D-class of each Delta-class
/// takes the convention value. Entries of the built matrix are unchanged.
std::pair<ClassificationParams, NormalizeReport> normalize_f(const ClassificationParams& c);

}  // namespace dynrmat
