// builder.hpp
// Closed-form R-matrix of the classified family from a partition and its constants.

#pragma once

#include <map>
#include <string>

#include "dynrmat/params.hpp"
#include "dynrmat/partition.hpp"
#include "dynrmat/rmatrix.hpp"

namespace dynrmat {

/// Builds the R-matrix. The params must validate; call normalize_f first if needed.
/// The partition argument must equal c.partition.
DynamicalRMatrix build(const IndexPartition& p, const ClassificationParams& c);
DynamicalRMatrix build(const ClassificationParams& c);

/// Constant value Delta_I on a D-class of block q (0-based).
cplx class_delta(const ClassificationParams& c, int q, int sign);

struct CommutingOps {
    CMatrix R0;                              ///< sum over free i of Delta_ii e_ii (x) e_ii
    std::map<std::string, CMatrix> family;   ///< per multi-element D-class, keyed by class_key
};

/// Constant operators commuting with the built R-matrix at every lambda.
CommutingOps build_commuting_ops(const IndexPartition& p, const ClassificationParams& c);

/// One-line descriptor of the closed form used for the pair (i,j).
std::string pair_descriptor(const ClassificationParams& c, int i, int j);

}  // namespace dynrmat
