// hecke.hpp
// Hecke and weak Hecke detection from the spectrum of the permuted matrix PR.

#pragma once

#include <string>
#include <vector>

#include "dynrmat/params.hpp"
#include "dynrmat/rmatrix.hpp"

namespace dynrmat {

inline constexpr double kEigenTol = 1e-9;

enum class HeckeKind { Hecke, WeakHecke, DegenerateSingleDClass, None };

std::string to_string(HeckeKind k);

/// Eigenvalues of PR on V_ii (i == j, one value) or V_ij (i < j, two values).
struct EigenEntry {
    int i = 0;
    int j = 0;
    std::vector<cplx> values;
    bool diagonalizable = true;
};

struct HeckeReport {
    HeckeKind kind = HeckeKind::None;
    cplx rho{0.0, 0.0};
    cplx kappa{0.0, 0.0};
    bool weak = false;  ///< minimal polynomial (X - rho)(X + kappa); true for Hecke as well
    /// Every admissible (rho, kappa) labelling; two entries when both values sit on some V_ii.
    std::vector<std::pair<cplx, cplx>> alternatives;
    std::vector<EigenEntry> evidence;
    std::vector<CVec> samples;
    std::string summary;
};

/// Throws NotInFamily when an eigenvalue depends on lambda.
HeckeReport hecke_classify(const DynamicalRMatrix& R, const std::vector<CVec>& samples, double tol = kEigenTol);

/// Scale c and 2-form g' such that c * apply_2form(R, g') has recovered g = -1 on every
/// pair of distinct D-classes. Original labels.
struct HeckeRecipe {
    cplx scale{1.0, 0.0};
    TwoFormSpec two_form;
    cplx rho{0.0, 0.0};  ///< labelling used; c = -1/rho
    bool identity = false;
};

/// Throws InvalidInput unless the report is Hecke or WeakHecke.
HeckeRecipe basic_form_distance(const DynamicalRMatrix& R, const HeckeReport& report,
                                const std::vector<CVec>& samples);

}  // namespace dynrmat
