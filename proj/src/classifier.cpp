// classifier.cpp

#include "dynrmat/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "dynrmat/builder.hpp"
#include "dynrmat/transforms.hpp"

namespace dynrmat {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<std::vector<int>> components(UnionFind& uf, int n) {
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[uf.find(i)].push_back(i + 1);
    std::vector<std::vector<int>> out;
    for (auto& [root, members] : groups) out.push_back(members);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

[[noreturn]] void not_a_solution(const std::string& msg) { throw Error(ErrorKind::NotASolution, msg); }

std::string pair_str(int i, int j) { return std::to_string(i) + "," + std::to_string(j); }

double rel_dev(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

Relations detect_relations(const DynamicalRMatrix& R, const std::vector<CVec>& samples, double tol) {
    if (samples.empty()) throw Error(ErrorKind::InvalidInput, "relation detection needs samples");
    const int n = R.n();
    std::vector<double> dmax(n * n, 0.0), Dmax(n * n, 0.0);
    for (const CVec& l : samples) {
        const Coefficients c = R.coefficients(l);
        const double scale = std::max(c.delta.cwiseAbs().maxCoeff(), c.d.cwiseAbs().maxCoeff());
        if (scale == 0.0) not_a_solution("all coefficients vanish at a sample point");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Dmax[i * n + j] = std::max(Dmax[i * n + j], std::abs(c.delta(i, j)) / scale);
                if (i != j) dmax[i * n + j] = std::max(dmax[i * n + j], std::abs(c.d(i, j)) / scale);
            }
    }
    Relations rel;
    rel.n = n;
    auto grey = [&](double v, const char* what, int i, int j) {
        if (v >= tol && v < 100.0 * tol) {
            std::ostringstream os;
            os << what << "_" << i << j << " is neither clearly zero nor clearly nonzero (max " << v
               << " relative); add samples";
            throw Error(ErrorKind::Ambiguous, os.str());
        }
        return v < tol;
    };
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            if (grey(Dmax[(i - 1) * n + j - 1], "Delta", i, j)) rel.delta_zero.insert({i, j});
            if (i != j && grey(dmax[(i - 1) * n + j - 1], "d", i, j)) rel.d_zero.insert({i, j});
        }
    return rel;
}

Equivalences build_equivalences(const Relations& rel) {
    const int n = rel.n;
    for (const auto& [i, j] : rel.d_zero)
        if (!rel.d_zero.count({j, i}))
            not_a_solution("d_" + pair_str(i, j) + " = 0 but d_" + pair_str(j, i) +
                           " != 0: the D-relation must be symmetric");
    UnionFind ud(n), uD(n);
    for (const auto& [i, j] : rel.d_zero) ud.unite(i - 1, j - 1);
    auto related = [&](int i, int j) { return !rel.delta_zero.count({i, j}) && !rel.delta_zero.count({j, i}); };
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (related(i, j)) uD.unite(i - 1, j - 1);

    Equivalences eq;
    eq.d_classes = components(ud, n);
    eq.delta_classes = components(uD, n);
    for (const auto& cls : eq.d_classes)
        for (size_t a = 0; a < cls.size(); ++a)
            for (size_t b = a + 1; b < cls.size(); ++b)
                if (!rel.d_zero.count({cls[a], cls[b]}))
                    not_a_solution("D-relation is not transitive on {" + class_key(cls) + "}: d_" +
                                   pair_str(cls[a], cls[b]) + " != 0");
    for (const auto& cls : eq.delta_classes)
        for (size_t a = 0; a < cls.size(); ++a)
            for (size_t b = a + 1; b < cls.size(); ++b)
                if (!related(cls[a], cls[b]))
                    not_a_solution("Delta-relation is not transitive on {" + class_key(cls) + "}: Delta_" +
                                   pair_str(cls[a], cls[b]) + " Delta_" + pair_str(cls[b], cls[a]) + " = 0");
    for (const auto& cls : eq.d_classes) {
        const auto owner = std::find_if(eq.delta_classes.begin(), eq.delta_classes.end(), [&](const auto& dc) {
            return std::find(dc.begin(), dc.end(), cls.front()) != dc.end();
        });
        for (int m : cls)
            if (std::find(owner->begin(), owner->end(), m) == owner->end())
                not_a_solution("D-class {" + class_key(cls) + "} is split across Delta-classes");
    }
    return eq;
}

Triangularization triangularize(const IntMatrix& MR) {
    const int r = static_cast<int>(MR.size());
    for (int p = 0; p < r; ++p)
        for (int q = p + 1; q < r; ++q)
            if (MR[p][q] && MR[q][p])
                not_a_solution("reduced incidence matrix is not antisymmetric between classes " +
                               std::to_string(p + 1) + " and " + std::to_string(q + 1));
    std::vector<int> indeg(r, 0), level(r, 0), queue;
    for (int p = 0; p < r; ++p)
        for (int q = 0; q < r; ++q)
            if (p != q && MR[p][q]) ++indeg[q];
    for (int p = 0; p < r; ++p)
        if (!indeg[p]) queue.push_back(p);
    for (size_t head = 0; head < queue.size(); ++head) {
        const int p = queue[head];
        for (int q = 0; q < r; ++q)
            if (p != q && MR[p][q]) {
                level[q] = std::max(level[q], level[p] + 1);
                if (--indeg[q] == 0) queue.push_back(q);
            }
    }
    if (static_cast<int>(queue.size()) != r) not_a_solution("reduced incidence matrix contains a cycle");
    Triangularization t;
    t.levels = level;
    t.sigma.resize(r);
    std::iota(t.sigma.begin(), t.sigma.end(), 0);
    std::stable_sort(t.sigma.begin(), t.sigma.end(), [&](int a, int b) { return level[a] < level[b]; });
    return t;
}

BlockStructure block_structure(const IntMatrix& MRt) {
    const int r = static_cast<int>(MRt.size());
    auto comparable = [&](int a, int b) { return a == b || MRt[a][b] || MRt[b][a]; };
    std::vector<bool> used(r, false);
    BlockStructure bs;
    for (int first = 0; first < r; ++first) {
        if (used[first]) continue;
        std::vector<int> chain;
        for (int x = 0; x < r; ++x)
            if (!used[x] && comparable(first, x)) chain.push_back(x);
        for (size_t a = 0; a < chain.size(); ++a)
            for (size_t b = a + 1; b < chain.size(); ++b)
                if (!comparable(chain[a], chain[b]))
                    not_a_solution("class " + std::to_string(first + 1) + " is comparable to the incomparable classes " +
                                   std::to_string(chain[a] + 1) + " and " + std::to_string(chain[b] + 1));
        for (int c : chain) {
            for (int x = 0; x < r; ++x)
                if (!used[x] && std::find(chain.begin(), chain.end(), x) == chain.end() && comparable(c, x))
                    not_a_solution("class " + std::to_string(x + 1) + " is comparable to class " +
                                   std::to_string(c + 1) + " but not to class " + std::to_string(first + 1));
            used[c] = true;
        }
        bs.blocks.push_back(chain);
        bs.pi.insert(bs.pi.end(), chain.begin(), chain.end());
    }
    return bs;
}

IncidenceReport classify(const DynamicalRMatrix& R, const std::vector<CVec>& samples, double tol) {
    const Relations rel = detect_relations(R, samples, tol);
    const Equivalences eq = build_equivalences(rel);
    const int n = R.n();
    IncidenceReport rep;
    rep.n = n;
    rep.d_classes = eq.d_classes;
    rep.delta_classes = eq.delta_classes;
    rep.M.assign(n, std::vector<int>(n, 0));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) rep.M[i - 1][j - 1] = rel.delta_zero.count({i, j}) ? 0 : 1;
    for (int i = 0; i < n; ++i)
        if (!rep.M[i][i]) not_a_solution("Delta_" + pair_str(i + 1, i + 1) + " vanishes: the matrix is singular");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (rep.M[i][j]) continue;
            for (int k = 0; k < n; ++k)
                if (rep.M[i][k] && rep.M[k][j])
                    not_a_solution("Delta_" + pair_str(i + 1, j + 1) + " = 0 while Delta_" + pair_str(i + 1, k + 1) +
                                   " Delta_" + pair_str(k + 1, j + 1) + " != 0");
        }

    const int r = static_cast<int>(eq.delta_classes.size());
    std::vector<int> cls_of(n);
    for (int p = 0; p < r; ++p)
        for (int i : eq.delta_classes[p]) cls_of[i - 1] = p;
    rep.MR.assign(r, std::vector<int>(r, -1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int& slot = rep.MR[cls_of[i]][cls_of[j]];
            if (slot >= 0 && slot != rep.M[i][j])
                not_a_solution("incidence pattern between classes " + std::to_string(cls_of[i] + 1) + " and " +
                               std::to_string(cls_of[j] + 1) + " is not uniform");
            slot = rep.M[i][j];
        }

    rep.tri = triangularize(rep.MR);
    IntMatrix MRt(r, std::vector<int>(r));
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) MRt[a][b] = rep.MR[rep.tri.sigma[a]][rep.tri.sigma[b]];
    rep.blocks = block_structure(MRt);
    for (int pos : rep.blocks.pi) rep.class_order.push_back(rep.tri.sigma[pos]);

    // Canonical partition: blocks in order, free indices first inside each Delta-class.
    std::vector<std::vector<int>> order_blocks;
    for (const auto& blk : rep.blocks.blocks) {
        KBlock kb;
        for (int pos : blk) {
            const auto& members = eq.delta_classes[rep.tri.sigma[pos]];
            DeltaClass dc;
            for (const auto& dcl : eq.d_classes) {
                if (std::find(members.begin(), members.end(), dcl.front()) == members.end()) continue;
                if (dcl.size() == 1)
                    dc.free.push_back(dcl.front());
                else
                    dc.d_classes.push_back(dcl);
            }
            kb.push_back(dc);
        }
        rep.recovered_partition.blocks.push_back(kb);
    }
    for (const KBlock& kb : rep.recovered_partition.blocks)
        for (const DeltaClass& dc : kb) {
            rep.index_permutation.insert(rep.index_permutation.end(), dc.free.begin(), dc.free.end());
            for (const auto& c : dc.d_classes) rep.index_permutation.insert(rep.index_permutation.end(), c.begin(), c.end());
        }
    std::vector<int> to_new(n + 1);
    for (int a = 0; a < n; ++a) to_new[rep.index_permutation[a]] = a + 1;
    rep.recovered_partition.n = n;
    for (KBlock& kb : rep.recovered_partition.blocks)
        for (DeltaClass& dc : kb) {
            for (int& i : dc.free) i = to_new[i];
            for (auto& c : dc.d_classes)
                for (int& i : c) i = to_new[i];
        }
    if (auto v = validate(rep.recovered_partition); !v)
        not_a_solution("recovered partition is not canonical: " + v.message);
    return rep;
}

RecoveredParams recover_params(const DynamicalRMatrix& R, const IncidenceReport& report,
                               const std::vector<CVec>& samples, const std::vector<CVec>& lambda_ref_candidates) {
    if (samples.empty()) throw Error(ErrorKind::InvalidInput, "parameter recovery needs samples");
    const std::vector<int>& perm = report.index_permutation;
    const DynamicalRMatrix Rc = permute_indices(R, perm);
    std::vector<CVec> cs;
    std::vector<Coefficients> coef;
    for (const CVec& l : samples) {
        cs.push_back(permute_lambda(l, perm));
        coef.push_back(Rc.coefficients(cs.back()));
    }
    const IndexPartition& P = report.recovered_partition;
    const PartitionLayout L = layout(P);
    const int n = P.n;
    const int nb = static_cast<int>(P.blocks.size());
    constexpr double kConst = 1e-7;

    RecoveredParams out;
    ClassificationParams& c = out.params;
    c.partition = P;
    c.per_block.resize(nb);
    out.block_identifiable.assign(nb, false);
    out.block_class_delta.resize(nb);

    auto sum_det = [&](const Coefficients& cf, int i, int j) {
        return std::pair<cplx, cplx>{cf.delta(i, j) + cf.delta(j, i),
                                     cf.d(i, j) * cf.d(j, i) - cf.delta(i, j) * cf.delta(j, i)};
    };
    std::map<std::pair<int, int>, std::pair<bool, cplx>> cross;
    for (int q = 0; q < nb; ++q) {
        std::optional<std::pair<cplx, cplx>> ref;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (L.block_of[i] != q || L.dclass_of[i] == L.dclass_of[j]) continue;
                const bool same_block = L.block_of[j] == q;
                for (const Coefficients& cf : coef) {
                    const auto [S, Sig] = sum_det(cf, i, j);
                    if (same_block) {
                        if (!ref) ref = {S, Sig};
                        if (rel_dev(S, ref->first) > kConst || rel_dev(Sig, ref->second) > kConst)
                            throw Error(ErrorKind::NotInFamily, "sum and determinant fields are not constant on K-block " +
                                                                    std::to_string(q + 1) + " (pair " +
                                                                    pair_str(perm[i], perm[j]) + ")");
                    } else {
                        auto& slot = cross[{q, L.block_of[j]}];
                        if (!slot.first) slot = {true, Sig};
                        if (rel_dev(Sig, slot.second) > kConst || std::abs(S) > kConst * std::max(1.0, std::abs(Sig)))
                            throw Error(ErrorKind::NotInFamily, "cross-block determinant is not constant");
                    }
                }
            }
        const int first = P.blocks[q].front().free.empty() ? P.blocks[q].front().d_classes.front().front()
                                                           : P.blocks[q].front().free.front();
        out.block_class_delta[q] = coef[0].delta(first - 1, first - 1);
        if (ref) {
            out.block_identifiable[q] = true;
            cplx S = ref->first;
            if (std::abs(S) < kZeroTol * std::max(1.0, std::sqrt(std::abs(ref->second)))) S = 0.0;
            c.per_block[q] = {S, ref->second};
        } else {
            const cplx dl = out.block_class_delta[q];
            c.per_block[q] = {0.0, dl * dl};
        }
    }
    for (const auto& [key, val] : cross) c.cross_sigma[{key.first + 1, key.second + 1}] = val.second;

    for (size_t cid = 0; cid < L.d_classes.size(); ++cid) {
        const int i = L.d_classes[cid].front();
        const int q = L.delta_block[L.d_class_delta[cid]];
        const cplx dl = coef[0].delta(i - 1, i - 1);
        const BlockConstants& bc = c.per_block[q];
        int eps;
        double miss;
        if (bc.S != cplx(0.0)) {
            const cplx D = derive(bc.S, bc.Sigma).D;
            const cplx plus = (bc.S + D) / 2.0, minus = (bc.S - D) / 2.0;
            eps = std::abs(dl - plus) <= std::abs(dl - minus) ? 1 : -1;
            miss = rel_dev(dl, eps > 0 ? plus : minus);
        } else {
            const cplx rs = principal_sqrt(bc.Sigma);
            eps = (dl / rs).real() >= 0.0 ? 1 : -1;
            miss = rel_dev(dl, static_cast<double>(eps) * rs);
        }
        if (miss > kConst)
            throw Error(ErrorKind::NotInFamily, "Delta_I of D-class {" + class_key(L.d_classes[cid]) +
                                                    "} is not a root of X^2 - S X - Sigma");
        c.signs[class_key(L.d_classes[cid])] = eps;
    }

    // f from Delta_ij at a reference point, first D-class of each Delta-class against the rest.
    std::vector<CVec> cands;
    for (const CVec& l : lambda_ref_candidates) cands.push_back(permute_lambda(l, perm));
    if (cands.empty()) {
        CVec dir(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) dir[k] = cplx(0.31 + 0.17 * k, 0.05 * (k + 1));
        for (int t = 0; t < 40; ++t) {
            CVec l(static_cast<size_t>(n));
            for (int k = 0; k < n; ++k) l[k] = 0.25 * t * dir[k];
            cands.push_back(l);
        }
    }
    bool found = false;
    for (const CVec& l : cands) {
        std::map<std::string, cplx> fvals;
        bool ok = true;
        try {
            const Coefficients cf = Rc.coefficients(l);
            std::vector<cplx> h(L.d_classes.size());
            for (size_t cid = 0; cid < L.d_classes.size(); ++cid) {
                cplx s{0.0, 0.0};
                for (int m : L.d_classes[cid]) s += l[m - 1];
                h[cid] = static_cast<double>(c.sign_of(L.d_classes[cid])) * s;
            }
            for (size_t p = 0; p < L.delta_dclasses.size() && ok; ++p) {
                const auto& ids = L.delta_dclasses[p];
                const int q = L.delta_block[p];
                const BlockConstants& bc = c.per_block[q];
                const int i = L.d_classes[ids.front()].front();
                for (size_t t = 1; t < ids.size(); ++t) {
                    const int j = L.d_classes[ids[t]].front();
                    const cplx Dij = cf.delta(i - 1, j - 1);
                    const cplx x = h[ids.front()] - h[ids[t]];
                    if (std::abs(Dij) < 1e-12) { ok = false; break; }
                    if (bc.S != cplx(0.0)) {
                        const cplx den = 1.0 - bc.S / Dij;
                        if (std::abs(den) < 1e-12) { ok = false; break; }
                        fvals[class_key(L.d_classes[ids[t]])] = std::exp(derive(bc.S, bc.Sigma).A * x) / den;
                    } else {
                        fvals[class_key(L.d_classes[ids[t]])] = x - principal_sqrt(bc.Sigma) / Dij;
                    }
                }
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Pole) throw;
            ok = false;
        }
        if (ok) {
            c.f = fvals;
            out.lambda_ref = l;
            found = true;
            break;
        }
    }
    if (!found) throw Error(ErrorKind::Pole, "no non-singular reference point found for f recovery");

    // 2-form as the ratio of d to the trivial-form build.
    auto R0 = std::make_shared<DynamicalRMatrix>(build(c));
    bool trivial = true;
    for (size_t s = 0; s < cs.size(); ++s) {
        const Coefficients c0 = R0->coefficients(cs[s]);
        if ((c0.delta - coef[s].delta).cwiseAbs().maxCoeff() >
            kConst * std::max(1.0, coef[s].delta.cwiseAbs().maxCoeff()))
            throw Error(ErrorKind::NotInFamily, "Delta entries do not match the closed forms of the recovered datum");
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (L.dclass_of[i] == L.dclass_of[j]) continue;
                if (std::abs(c0.d(i, j)) < 1e-12 || std::abs(c0.d(j, i)) < 1e-12) continue;
                const cplx gij = coef[s].d(i, j) / c0.d(i, j), gji = coef[s].d(j, i) / c0.d(j, i);
                if (rel_dev(gij * gji, 1.0) > kConst)
                    throw Error(ErrorKind::NotInFamily, "d_" + pair_str(perm[i], perm[j]) + " d_" +
                                                            pair_str(perm[j], perm[i]) + " does not match Sigma");
                if (std::abs(gij - 1.0) > 1e-10) trivial = false;
            }
    }
    if (!trivial) {
        auto Rcp = std::make_shared<DynamicalRMatrix>(Rc);
        c.two_form = TwoFormSpec::table_of([Rcp, R0](int i, int j, const CVec& l) -> cplx {
            return guarded_div(Rcp->coefficients(l).d(i - 1, j - 1), R0->coefficients(l).d(i - 1, j - 1),
                               "recovered 2-form");
        });
    }
    return out;
}

}  // namespace dynrmat
