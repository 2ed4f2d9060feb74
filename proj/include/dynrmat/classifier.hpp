// classifier.hpp
// Recovers D-classes, Delta-classes, incidence matrices, ordering permutations and
// constants from a sampled R-matrix.

#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "dynrmat/params.hpp"
#include "dynrmat/rmatrix.hpp"

namespace dynrmat {

using IntMatrix = std::vector<std::vector<int>>;

inline constexpr double kZeroTol = 1e-8;
inline constexpr int kDefaultClassifySamples = 5;

struct Relations {
    int n = 0;
    std::set<std::pair<int, int>> d_zero;      ///< ordered (i,j), i != j, with d_ij identically 0
    std::set<std::pair<int, int>> delta_zero;  ///< ordered (i,j) with Delta_ij identically 0
};

/// Structural zeros: max over samples of |c| / (max coefficient at that sample) below tol.
/// Values in the grey zone [tol, 100 tol) raise an Ambiguous error.
Relations detect_relations(const DynamicalRMatrix& R, const std::vector<CVec>& samples, double tol = kZeroTol);

struct Equivalences {
    std::vector<std::vector<int>> d_classes;      ///< sorted by smallest member
    std::vector<std::vector<int>> delta_classes;  ///< sorted by smallest member
};

/// D-classes from d_ij = 0 and Delta-classes from Delta_ij Delta_ji != 0. Throws
/// NotASolution when symmetry or transitivity fails.
Equivalences build_equivalences(const Relations& rel);

struct Triangularization {
    std::vector<int> sigma;   ///< sigma[pos] = class label (0-based) placed at pos
    std::vector<int> levels;  ///< levels[label] = longest chain ending at the class
};

/// Orders classes by (level, label) so the permuted matrix is upper triangular.
/// Throws NotASolution on antisymmetry violations or cycles.
Triangularization triangularize(const IntMatrix& MR);

struct BlockStructure {
    std::vector<int> pi;                   ///< pi[pos] = position in the triangular order
    std::vector<std::vector<int>> blocks;  ///< triangular positions per block, ordered
};

/// Groups chains of comparable classes into blocks. Input is already upper triangular.
/// Throws NotASolution when a class is comparable to two incomparable classes.
BlockStructure block_structure(const IntMatrix& MR_triangular);

struct IncidenceReport {
    int n = 0;
    IntMatrix M;                                 ///< m_ij = 1 iff Delta_ij not identically 0
    std::vector<std::vector<int>> d_classes;     ///< original labels
    std::vector<std::vector<int>> delta_classes; ///< original labels; class label = position here
    IntMatrix MR;                                ///< reduced matrix over class labels
    Triangularization tri;
    BlockStructure blocks;
    std::vector<int> class_order;                ///< class labels in final block order
    IndexPartition recovered_partition;          ///< canonical labels
    std::vector<int> index_permutation;          ///< new index a carries original index perm[a-1]
};

/// Full structural classification.
IncidenceReport classify(const DynamicalRMatrix& R, const std::vector<CVec>& samples, double tol = kZeroTol);

struct RecoveredParams {
    ClassificationParams params;           ///< canonical labels
    std::vector<bool> block_identifiable;  ///< false when a block has no pair of distinct D-classes
    std::vector<cplx> block_class_delta;   ///< Delta_I of the first class, per block
    CVec lambda_ref;                       ///< reference point used for f, canonical labels
};

/// Reads S, Sigma, cross Sigma, signs, f and the 2-form back from a classified matrix.
/// Candidate reference points may be supplied; otherwise 0 moved along a fixed direction.
RecoveredParams recover_params(const DynamicalRMatrix& R, const IncidenceReport& report,
                               const std::vector<CVec>& samples,
                               const std::vector<CVec>& lambda_ref_candidates = {});

}  // namespace dynrmat
