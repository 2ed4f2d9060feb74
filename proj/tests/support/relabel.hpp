// relabel.hpp
// Maps recovered parameters back to generator labels and compares them field by field.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dynrmat/builder.hpp"
#include "dynrmat/classifier.hpp"
#include "dynrmat/params.hpp"
#include "dynrmat/partition.hpp"

namespace dynrmat::testing {

struct Relabelled {
    ClassificationParams params;
    std::vector<int> old_block;  ///< new block q (0-based) came from recovered block old_block[q]
};

inline std::vector<int> map_sorted(const std::vector<int>& xs, const std::vector<int>& map) {
    std::vector<int> out;
    for (int x : xs) out.push_back(map[static_cast<size_t>(x - 1)]);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::string map_key(const std::string& key, const std::vector<int>& map) {
    std::vector<int> xs;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) xs.push_back(std::stoi(part));
    return class_key(map_sorted(xs, map));
}

/// map[a-1] is the generator label of recovered index a. Blocks are sorted by smallest label,
/// members sorted inside classes, and f renormalized to the first class of each Delta-class.
inline Relabelled to_generator_labels(const ClassificationParams& rec, const std::vector<int>& map) {
    std::vector<KBlock> blocks;
    std::vector<int> mins;
    for (const KBlock& kb : rec.partition.blocks) {
        KBlock nb;
        int lo = 1 << 30;
        for (const DeltaClass& dc : kb) {
            DeltaClass nd;
            nd.free = map_sorted(dc.free, map);
            for (const auto& cls : dc.d_classes) nd.d_classes.push_back(map_sorted(cls, map));
            std::sort(nd.d_classes.begin(), nd.d_classes.end());
            for (int x : nd.free) lo = std::min(lo, x);
            for (const auto& cls : nd.d_classes) lo = std::min(lo, cls.front());
            nb.push_back(nd);
        }
        blocks.push_back(nb);
        mins.push_back(lo);
    }
    Relabelled out;
    out.old_block.resize(blocks.size());
    std::iota(out.old_block.begin(), out.old_block.end(), 0);
    std::sort(out.old_block.begin(), out.old_block.end(), [&](int a, int b) { return mins[a] < mins[b]; });
    std::vector<int> new_of(blocks.size());
    ClassificationParams& p = out.params;
    p.partition.n = rec.partition.n;
    for (size_t q = 0; q < blocks.size(); ++q) {
        const int old = out.old_block[q];
        new_of[static_cast<size_t>(old)] = static_cast<int>(q);
        p.partition.blocks.push_back(blocks[static_cast<size_t>(old)]);
        p.per_block.push_back(rec.per_block[static_cast<size_t>(old)]);
    }
    for (const auto& [key, v] : rec.cross_sigma) {
        const int a = new_of[static_cast<size_t>(key.first - 1)] + 1, b = new_of[static_cast<size_t>(key.second - 1)] + 1;
        p.cross_sigma[{std::min(a, b), std::max(a, b)}] = v;
    }
    for (const auto& [key, s] : rec.signs) p.signs[map_key(key, map)] = s;
    for (const auto& [key, v] : rec.f) p.f[map_key(key, map)] = v;
    p.f = normalize_f(p).first.f;
    return out;
}

inline bool rel_close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

/// Empty when the recovered data agree with the truth; otherwise the first mismatch.
/// Blocks that are not identifiable are compared through their class constant instead.
inline std::string compare_recovered(const RecoveredParams& rec, const std::vector<int>& map,
                                     const ClassificationParams& truth, double tol = 1e-8) {
    const Relabelled r = to_generator_labels(rec.params, map);
    const ClassificationParams& got = r.params;
    if (!(got.partition == truth.partition)) return "partition differs";
    const ClassificationParams want = normalize_f(truth).first;
    const PartitionLayout L = layout(truth.partition);
    const int nb = static_cast<int>(truth.partition.blocks.size());
    for (int q = 0; q < nb; ++q) {
        const size_t old = static_cast<size_t>(r.old_block[static_cast<size_t>(q)]);
        if (!rec.block_identifiable[old]) {
            const KBlock& kb = truth.partition.blocks[static_cast<size_t>(q)];
            const int i = kb.front().free.empty() ? kb.front().d_classes.front().front() : kb.front().free.front();
            const cplx want_delta = build(truth).delta(i, i, CVec(static_cast<size_t>(truth.partition.n), cplx(0.0)));
            if (!rel_close(rec.block_class_delta[old], want_delta, tol))
                return "class constant of block " + std::to_string(q + 1);
            continue;
        }
        const auto& g = got.per_block[static_cast<size_t>(q)];
        const auto& t = truth.per_block[static_cast<size_t>(q)];
        if (!rel_close(g.S, t.S, tol)) return "S of block " + std::to_string(q + 1);
        if (!rel_close(g.Sigma, t.Sigma, tol)) return "Sigma of block " + std::to_string(q + 1);
    }
    for (int q = 0; q < nb; ++q)
        for (int qp = q + 1; qp < nb; ++qp)
            if (!rel_close(got.cross(q, qp), truth.cross(q, qp), tol))
                return "cross Sigma of blocks " + std::to_string(q + 1) + "," + std::to_string(qp + 1);
    for (size_t cid = 0; cid < L.d_classes.size(); ++cid) {
        const int q = L.delta_block[static_cast<size_t>(L.d_class_delta[cid])];
        const size_t old = static_cast<size_t>(r.old_block[static_cast<size_t>(q)]);
        if (!rec.block_identifiable[old]) continue;
        const auto& cls = L.d_classes[cid];
        if (got.sign_of(cls) != truth.sign_of(cls)) return "sign of {" + class_key(cls) + "}";
        if (!rel_close(got.f_of(cls, q), want.f_of(cls, q), tol)) return "f of {" + class_key(cls) + "}";
    }
    return {};
}

}  // namespace dynrmat::testing
