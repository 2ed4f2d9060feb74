// partition.hpp
// Ordered partition of {1..n} into K-blocks, Delta-classes and D-classes.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dynrmat/core.hpp"

namespace dynrmat {

struct DeltaClass {
    std::vector<int> free;                       ///< singleton D-classes, in order
    std::vector<std::vector<int>> d_classes;     ///< D-classes with at least two members

    bool operator==(const DeltaClass&) const = default;
};

using KBlock = std::vector<DeltaClass>;

struct IndexPartition {
    int n = 0;
    std::vector<KBlock> blocks;

    bool operator==(const IndexPartition&) const = default;
};

/// Checks ordering, coverage and class-size invariants; reports the first violation.
ValidationResult validate(const IndexPartition& p);

/// The D-class containing i (a singleton for a free index).
std::vector<int> d_class_of(const IndexPartition& p, int i);

/// All pairs (i,j), i<j, whose indices lie in different D-classes.
std::vector<std::pair<int, int>> nd_pairs(const IndexPartition& p);

/// Comma-joined member list, e.g. "3,4"; used as the key for signs and f.
std::string class_key(const std::vector<int>& members);

/// Flattened lookup tables derived from a valid partition. All ids are 0-based.
struct PartitionLayout {
    int n = 0;
    std::vector<std::vector<int>> d_classes;      ///< members, Delta-class order, free first
    std::vector<int> d_class_delta;               ///< D-class id -> Delta-class id
    std::vector<std::vector<int>> delta_dclasses; ///< Delta-class id -> its D-class ids
    std::vector<int> delta_block;                 ///< Delta-class id -> K-block id
    std::vector<int> delta_position;              ///< position of the Delta-class inside its block
    std::vector<std::vector<int>> block_deltas;   ///< K-block id -> its Delta-class ids
    std::vector<int> dclass_of;                   ///< index-1 -> D-class id
    std::vector<int> delta_of;                    ///< index-1 -> Delta-class id
    std::vector<int> block_of;                    ///< index-1 -> K-block id
    std::vector<bool> is_free;                    ///< index-1 -> singleton D-class

    bool same_dclass(int i, int j) const { return dclass_of[i - 1] == dclass_of[j - 1]; }
    bool first_in_delta(int d_class) const {
        return delta_dclasses[d_class_delta[d_class]].front() == d_class;
    }
};

/// Builds the lookup tables; throws InvalidInput when validate fails.
PartitionLayout layout(const IndexPartition& p);

}  // namespace dynrmat
