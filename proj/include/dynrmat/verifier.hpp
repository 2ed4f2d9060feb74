// verifier.hpp
// Numerical certification: DQYBE defect, component equations, zero weight, determinant.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dynrmat/rmatrix.hpp"

namespace dynrmat {

/// Component equation tags in printed order.
inline const std::array<std::string, 16> kEquationTags = {"G0", "F1", "F2", "F3", "F4", "F5", "F6", "F7",
                                                          "F8", "F9", "E1", "E2", "E3", "E4", "E5", "E6"};

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kAbsFallback = 1e-12;
inline constexpr int kDefaultSamples = 8;

struct DqybeDefect {
    double defect = 0.0;  ///< max-abs entry of L - R
    double scale = 0.0;   ///< max-abs entry of either triple product
    /// Defect relative to max(scale, 1).
    double relative() const { return defect / std::max(scale, 1.0); }
};

/// Max-abs entry of R12(l+h3) R13(l) R23(l+h1) - R23(l) R13(l+h2) R12(l).
double dqybe_residual(const DynamicalRMatrix& R, const CVec& lambda);
DqybeDefect dqybe_defect(const DynamicalRMatrix& R, const CVec& lambda);

struct ResidualRow {
    std::string equation;
    int i = 0, j = 0, k = 0;  ///< 0 when unused
    int sample = 0;           ///< 0-based
    double residual = 0.0;
};

struct WorstCase {
    std::string equation;
    std::array<int, 3> indices{0, 0, 0};
    int sample = -1;
    CVec lambda;
    double value = 0.0;
};

struct ResidualReport {
    std::vector<double> global;                 ///< relative DQYBE defect per sample, when computed
    std::map<std::string, double> per_equation; ///< max residual over tuples and samples
    std::vector<CVec> samples;
    WorstCase worst;
    std::vector<ResidualRow> rows;
    std::uint64_t seed = 0;
    double tol = kDefaultTol;
    bool pass = true;
};

/// Evaluates every component equation as printed, without divisions. Each residual is
/// |value| / max(1, largest expanded term).
ResidualReport check_system(const DynamicalRMatrix& R, const std::vector<CVec>& samples, double tol = kDefaultTol);

/// True iff every entry outside the Delta/d pattern is below tol in magnitude.
bool check_zero_weight(const DensePoint& M, double tol);

struct InvertibilityCheck {
    cplx det_factorized;
    cplx det_dense;
    double rel_diff = 0.0;
    bool agree = false;       ///< relative difference < 1e-8, or both numerically zero
    bool invertible = false;  ///< both determinants nonzero
};

InvertibilityCheck check_invertibility(const DynamicalRMatrix& R, const CVec& lambda);

struct ShiftRow {
    int i = 0, j = 0, k = 0;
    double residual = 0.0;
};

struct ShiftIdentityReport {
    double max_residual = 0.0;
    std::vector<ShiftRow> rows;
};

/// Multiplicative (trig) and additive (rational) shift laws of the built Delta-fields.
/// Requires provenance.
ShiftIdentityReport shift_identities(const DynamicalRMatrix& R, const CVec& lambda);

/// Draws points with Re, Im uniform in [-2,2], rejecting those where R or any unit shift
/// of it hits a pole. Throws Pole when no point is found quickly.
std::vector<CVec> draw_samples(const DynamicalRMatrix& R, int count, std::uint64_t seed);

struct VerifyReport {
    ResidualReport system;
    std::vector<DqybeDefect> dqybe;
    std::vector<InvertibilityCheck> invertibility;
    bool pass = true;
    std::string summary;  ///< names the worst failing check
};

/// System, DQYBE and determinant checks on the given samples.
VerifyReport verify(const DynamicalRMatrix& R, const std::vector<CVec>& samples, double tol = kDefaultTol);

}  // namespace dynrmat
