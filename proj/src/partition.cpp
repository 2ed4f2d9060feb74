// partition.cpp

#include "dynrmat/partition.hpp"

#include <sstream>

namespace dynrmat {

namespace {

std::string join(const std::vector<int>& v) {
    std::ostringstream os;
    for (size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
    return os.str();
}

}  // namespace

std::string class_key(const std::vector<int>& members) { return join(members); }

ValidationResult validate(const IndexPartition& p) {
    if (p.n < 1) return ValidationResult::failure("n must be positive");
    if (p.blocks.empty()) return ValidationResult::failure("partition has no K-block");
    int expected = 1;
    auto take = [&](int i) -> bool {
        if (i != expected) return false;
        ++expected;
        return true;
    };
    for (size_t q = 0; q < p.blocks.size(); ++q) {
        if (p.blocks[q].empty())
            return ValidationResult::failure("K-block " + std::to_string(q + 1) + " is empty");
        for (const DeltaClass& dc : p.blocks[q]) {
            if (dc.free.empty() && dc.d_classes.empty())
                return ValidationResult::failure("empty Delta-class in K-block " + std::to_string(q + 1));
            for (int i : dc.free) {
                if (i < 1 || i > p.n)
                    return ValidationResult::failure("index " + std::to_string(i) + " out of range", {i});
                if (!take(i))
                    return ValidationResult::failure(
                        "indices out of canonical order: expected " + std::to_string(expected) + ", found " +
                            std::to_string(i),
                        {i});
            }
            for (const auto& cls : dc.d_classes) {
                if (cls.size() < 2)
                    return ValidationResult::failure(
                        "D-class {" + join(cls) + "} has fewer than two members; list it as free", cls);
                for (int i : cls) {
                    if (i < 1 || i > p.n)
                        return ValidationResult::failure("index " + std::to_string(i) + " out of range", {i});
                    if (!take(i))
                        return ValidationResult::failure(
                            "indices out of canonical order: expected " + std::to_string(expected) +
                                ", found " + std::to_string(i),
                            {i});
                }
            }
        }
    }
    if (expected != p.n + 1)
        return ValidationResult::failure("indices " + std::to_string(expected) + ".." + std::to_string(p.n) +
                                         " are missing from the partition");
    return ValidationResult::success();
}

PartitionLayout layout(const IndexPartition& p) {
    if (auto v = validate(p); !v) throw Error(ErrorKind::InvalidInput, "invalid partition: " + v.message);
    PartitionLayout L;
    L.n = p.n;
    L.dclass_of.assign(p.n, -1);
    L.delta_of.assign(p.n, -1);
    L.block_of.assign(p.n, -1);
    L.is_free.assign(p.n, false);
    for (size_t q = 0; q < p.blocks.size(); ++q) {
        L.block_deltas.emplace_back();
        for (size_t pos = 0; pos < p.blocks[q].size(); ++pos) {
            const DeltaClass& dc = p.blocks[q][pos];
            const int delta_id = static_cast<int>(L.delta_block.size());
            L.delta_block.push_back(static_cast<int>(q));
            L.delta_position.push_back(static_cast<int>(pos));
            L.block_deltas.back().push_back(delta_id);
            L.delta_dclasses.emplace_back();
            auto add_class = [&](const std::vector<int>& members, bool free) {
                const int cid = static_cast<int>(L.d_classes.size());
                L.d_classes.push_back(members);
                L.d_class_delta.push_back(delta_id);
                L.delta_dclasses.back().push_back(cid);
                for (int i : members) {
                    L.dclass_of[i - 1] = cid;
                    L.delta_of[i - 1] = delta_id;
                    L.block_of[i - 1] = static_cast<int>(q);
                    L.is_free[i - 1] = free;
                }
            };
            for (int i : dc.free) add_class({i}, true);
            for (const auto& cls : dc.d_classes) add_class(cls, false);
        }
    }
    return L;
}

std::vector<int> d_class_of(const IndexPartition& p, int i) {
    if (i < 1 || i > p.n) throw Error(ErrorKind::InvalidInput, "index " + std::to_string(i) + " out of range");
    for (const KBlock& block : p.blocks)
        for (const DeltaClass& dc : block) {
            for (int f : dc.free)
                if (f == i) return {i};
            for (const auto& cls : dc.d_classes)
                for (int m : cls)
                    if (m == i) return cls;
        }
    throw Error(ErrorKind::InvalidInput, "index " + std::to_string(i) + " not covered by the partition");
}

std::vector<std::pair<int, int>> nd_pairs(const IndexPartition& p) {
    const PartitionLayout L = layout(p);
    std::vector<std::pair<int, int>> out;
    for (int i = 1; i <= p.n; ++i)
        for (int j = i + 1; j <= p.n; ++j)
            if (!L.same_dclass(i, j)) out.emplace_back(i, j);
    return out;
}

}  // namespace dynrmat
