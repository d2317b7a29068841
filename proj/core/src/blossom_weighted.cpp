#include <algorithm>
#include <cassert>
#include <vector>

#include "kmatch/blossom.hpp"

namespace kmatch {

namespace {

using Dual = __int128;

// Primal-dual blossom solver run one augmentation stage at a time. Vertex and
// blossom duals start equal, stay dual-feasible, and every augmentation goes
// along a tight path, so after each completed stage the matching has maximum
// weight among matchings of its cardinality. Ids 0..n-1 are vertices,
// n..2n-1 nontrivial blossoms. Labels: 0 unreached, 1 = S (even), 2 = T
// (odd); bit 4 is the path-scan breadcrumb.
struct WeightedBlossom {
    int n;
    int m;
    std::vector<int> edge_u, edge_v;
    std::vector<Weight> edge_w;
    std::vector<int> endpoint;                // endpoint[p] = vertex at endpoint p, p = 2k or 2k+1
    std::vector<std::vector<int>> neighbend;  // remote endpoints incident to v
    std::vector<int> mate;                    // remote endpoint of matched edge or -1
    std::vector<int> label, labelend, inblossom, blossomparent, blossombase;
    std::vector<std::vector<int>> blossomchilds, blossomendps;
    std::vector<Dual> dualvar;
    std::vector<char> allowedge;
    std::vector<int> unusedblossoms;
    std::vector<int> queue;
    std::vector<int> leaves_scratch;

    explicit WeightedBlossom(const KernelGraph& kg)
        : n(static_cast<int>(kg.n)), m(static_cast<int>(kg.m())) {
        edge_u.reserve(m);
        edge_v.reserve(m);
        edge_w.reserve(m);
        for (std::size_t k = 0; k < kg.edges.size(); ++k) {
            edge_u.push_back(static_cast<int>(kg.edges[k].first));
            edge_v.push_back(static_cast<int>(kg.edges[k].second));
            edge_w.push_back(kg.weights[k]);
        }
        endpoint.resize(2 * m);
        neighbend.assign(n, {});
        for (int k = 0; k < m; ++k) {
            endpoint[2 * k] = edge_u[k];
            endpoint[2 * k + 1] = edge_v[k];
            neighbend[edge_u[k]].push_back(2 * k + 1);
            neighbend[edge_v[k]].push_back(2 * k);
        }
        Weight maxweight = 0;
        for (Weight w : edge_w) maxweight = std::max(maxweight, w);
        mate.assign(n, -1);
        label.assign(2 * n, 0);
        labelend.assign(2 * n, -1);
        inblossom.resize(n);
        for (int v = 0; v < n; ++v) inblossom[v] = v;
        blossomparent.assign(2 * n, -1);
        blossombase.assign(2 * n, -1);
        for (int v = 0; v < n; ++v) blossombase[v] = v;
        blossomchilds.assign(2 * n, {});
        blossomendps.assign(2 * n, {});
        dualvar.assign(2 * n, 0);
        for (int v = 0; v < n; ++v) dualvar[v] = maxweight;
        allowedge.assign(m, 0);
        for (int b = 2 * n - 1; b >= n; --b) unusedblossoms.push_back(b);
    }

    Dual slack(int k) const { return dualvar[edge_u[k]] + dualvar[edge_v[k]] - 2 * Dual(edge_w[k]); }

    // Collects the vertices contained in blossom b into leaves_scratch.
    void blossom_leaves(int b, std::vector<int>& out) const {
        if (b < n) {
            out.push_back(b);
            return;
        }
        for (int t : blossomchilds[b]) blossom_leaves(t, out);
    }

    // Python-style modular indexing over a blossom's child list.
    static std::size_t wrap(int j, std::size_t len) {
        int l = static_cast<int>(len);
        return static_cast<std::size_t>(((j % l) + l) % l);
    }
    int child_at(int b, int j) const { return blossomchilds[b][wrap(j, blossomchilds[b].size())]; }
    int endp_at(int b, int j) const { return blossomendps[b][wrap(j, blossomendps[b].size())]; }

    void assign_label(int w, int t, int p) {
        int b = inblossom[w];
        assert(label[w] == 0 && label[b] == 0);
        label[w] = label[b] = t;
        labelend[w] = labelend[b] = p;
        if (t == 1) {
            // S-blossom: all its vertices go on the scan queue
            leaves_scratch.clear();
            blossom_leaves(b, leaves_scratch);
            for (int leaf : leaves_scratch) queue.push_back(leaf);
        } else {
            // T-blossom: its base's mate becomes an S-vertex
            int base = blossombase[b];
            assert(mate[base] >= 0);
            assign_label(endpoint[mate[base]], 1, mate[base] ^ 1);
        }
    }

    // Trace back from v and w towards the roots. Returns the base vertex of
    // the new blossom if the paths meet, or -1 if v and w sit in different
    // trees (which means edge (v,w) closes an augmenting path).
    int scan_blossom(int v, int w) {
        std::vector<int> path;
        int base = -1;
        while (v != -1 || w != -1) {
            if (v != -1) {
                int b = inblossom[v];
                if (label[b] & 4) {
                    base = blossombase[b];
                    break;
                }
                assert(label[b] == 1);
                path.push_back(b);
                label[b] |= 4;
                assert(labelend[b] == mate[blossombase[b]]);
                if (labelend[b] == -1) {
                    v = -1;  // reached a root
                } else {
                    v = endpoint[labelend[b]];
                    b = inblossom[v];
                    assert(label[b] == 2);
                    assert(labelend[b] >= 0);
                    v = endpoint[labelend[b]];
                }
            }
            if (w != -1) std::swap(v, w);
        }
        for (int b : path) label[b] &= ~4;
        return base;
    }

    // Contracts the odd cycle formed by edge k and the tree paths from its
    // ends down to `base` into a fresh blossom.
    void add_blossom(int base, int k) {
        int v = edge_u[k], w = edge_v[k];
        int bb = inblossom[base];
        int bv = inblossom[v];
        int bw = inblossom[w];
        int b = unusedblossoms.back();
        unusedblossoms.pop_back();
        blossombase[b] = base;
        blossomparent[b] = -1;
        blossomparent[bb] = b;
        auto& childs = blossomchilds[b];
        auto& endps = blossomendps[b];
        childs.clear();
        endps.clear();
        while (bv != bb) {
            blossomparent[bv] = b;
            childs.push_back(bv);
            endps.push_back(labelend[bv]);
            assert(label[bv] == 2 || (label[bv] == 1 && labelend[bv] == mate[blossombase[bv]]));
            assert(labelend[bv] >= 0);
            v = endpoint[labelend[bv]];
            bv = inblossom[v];
        }
        childs.push_back(bb);
        std::reverse(childs.begin(), childs.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back(2 * k);
        while (bw != bb) {
            blossomparent[bw] = b;
            childs.push_back(bw);
            endps.push_back(labelend[bw] ^ 1);
            assert(label[bw] == 2 || (label[bw] == 1 && labelend[bw] == mate[blossombase[bw]]));
            assert(labelend[bw] >= 0);
            w = endpoint[labelend[bw]];
            bw = inblossom[w];
        }
        assert(label[bb] == 1);
        label[b] = 1;
        labelend[b] = labelend[bb];
        dualvar[b] = 0;
        leaves_scratch.clear();
        blossom_leaves(b, leaves_scratch);
        for (int leaf : leaves_scratch) {
            if (label[inblossom[leaf]] == 2) queue.push_back(leaf);  // T-vertices turn S
            inblossom[leaf] = b;
        }
    }

    void expand_blossom(int b, bool endstage) {
        for (int s : blossomchilds[b]) {
            blossomparent[s] = -1;
            if (s < n) {
                inblossom[s] = s;
            } else if (endstage && dualvar[s] == 0) {
                expand_blossom(s, endstage);
            } else {
                leaves_scratch.clear();
                blossom_leaves(s, leaves_scratch);
                for (int leaf : leaves_scratch) inblossom[leaf] = s;
            }
        }
        // A T-blossom expanded mid-stage must pass its label down: relabel
        // along the even-length side from the entry child to the base, and
        // re-attach any other sub-blossom that a labeled vertex points into.
        if (!endstage && label[b] == 2) {
            assert(labelend[b] >= 0);
            int entrychild = inblossom[endpoint[labelend[b] ^ 1]];
            int j = 0;
            {
                auto it = std::find(blossomchilds[b].begin(), blossomchilds[b].end(), entrychild);
                assert(it != blossomchilds[b].end());
                j = static_cast<int>(it - blossomchilds[b].begin());
            }
            int jstep, endptrick;
            if (j & 1) {
                j -= static_cast<int>(blossomchilds[b].size());
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            int p = labelend[b];
            while (j != 0) {
                // relabel the T-sub-blossom
                label[endpoint[p ^ 1]] = 0;
                label[endpoint[endp_at(b, j - endptrick) ^ endptrick ^ 1]] = 0;
                assign_label(endpoint[p ^ 1], 2, p);
                // step past the S-sub-blossom; both connecting edges are tight
                allowedge[endp_at(b, j - endptrick) / 2] = 1;
                j += jstep;
                p = endp_at(b, j - endptrick) ^ endptrick;
                allowedge[p / 2] = 1;
                j += jstep;
            }
            // relabel the base sub-blossom without stepping to its mate
            int bv = child_at(b, j);
            label[endpoint[p ^ 1]] = 2;
            label[bv] = 2;
            labelend[endpoint[p ^ 1]] = p;
            labelend[bv] = p;
            j += jstep;
            while (child_at(b, j) != entrychild) {
                bv = child_at(b, j);
                if (label[bv] == 1) {
                    j += jstep;
                    continue;
                }
                leaves_scratch.clear();
                blossom_leaves(bv, leaves_scratch);
                int labeled_v = -1;
                for (int leaf : leaves_scratch) {
                    if (label[leaf] != 0) {
                        labeled_v = leaf;
                        break;
                    }
                }
                if (labeled_v >= 0) {
                    assert(label[labeled_v] == 2);
                    assert(inblossom[labeled_v] == bv);
                    label[labeled_v] = 0;
                    label[endpoint[mate[blossombase[bv]]]] = 0;
                    assign_label(labeled_v, 2, labelend[labeled_v]);
                }
                j += jstep;
            }
        }
        label[b] = -1;
        labelend[b] = -1;
        blossomchilds[b].clear();
        blossomendps[b].clear();
        blossombase[b] = -1;
        unusedblossoms.push_back(b);
    }

    // Swap matched/unmatched edges around blossom b so that vertex v becomes
    // its base (blossoms stay full through augmentations).
    void augment_blossom(int b, int v) {
        int t = v;
        while (blossomparent[t] != b) t = blossomparent[t];
        if (t >= n) augment_blossom(t, v);
        int i;
        {
            auto it = std::find(blossomchilds[b].begin(), blossomchilds[b].end(), t);
            assert(it != blossomchilds[b].end());
            i = static_cast<int>(it - blossomchilds[b].begin());
        }
        int j = i;
        int jstep, endptrick;
        if (i & 1) {
            j -= static_cast<int>(blossomchilds[b].size());
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        while (j != 0) {
            j += jstep;
            t = child_at(b, j);
            int p = endp_at(b, j - endptrick) ^ endptrick;
            if (t >= n) augment_blossom(t, endpoint[p]);
            j += jstep;
            t = child_at(b, j);
            if (t >= n) augment_blossom(t, endpoint[p ^ 1]);
            mate[endpoint[p]] = p ^ 1;
            mate[endpoint[p ^ 1]] = p;
        }
        std::rotate(blossomchilds[b].begin(), blossomchilds[b].begin() + i, blossomchilds[b].end());
        std::rotate(blossomendps[b].begin(), blossomendps[b].begin() + i, blossomendps[b].end());
        blossombase[b] = blossombase[blossomchilds[b][0]];
        assert(blossombase[b] == v);
    }

    // Augment along the path closed by edge k, unrolling it through the
    // alternating trees on both sides.
    void augment_matching(int k) {
        const int sides[2][2] = {{edge_u[k], 2 * k + 1}, {edge_v[k], 2 * k}};
        for (auto [sv, sp] : sides) {
            int s = sv, p = sp;
            for (;;) {
                int bs = inblossom[s];
                assert(label[bs] == 1);
                assert(labelend[bs] == mate[blossombase[bs]]);
                if (bs >= n) augment_blossom(bs, s);
                mate[s] = p;
                if (labelend[bs] == -1) break;  // reached the tree root
                int t = endpoint[labelend[bs]];
                int bt = inblossom[t];
                assert(label[bt] == 2);
                assert(labelend[bt] >= 0);
                s = endpoint[labelend[bt]];
                int j = endpoint[labelend[bt] ^ 1];
                assert(blossombase[bt] == t);
                if (bt >= n) augment_blossom(bt, j);
                mate[j] = labelend[bt];
                p = labelend[bt] ^ 1;
            }
        }
    }

    // One stage: grow alternating trees from every free vertex until one
    // augmentation happens. Returns false when no augmenting path exists.
    bool run_stage() {
        std::fill(label.begin(), label.end(), 0);
        std::fill(labelend.begin(), labelend.end(), -1);
        std::fill(allowedge.begin(), allowedge.end(), 0);
        queue.clear();
        for (int v = 0; v < n; ++v) {
            if (mate[v] == -1 && label[inblossom[v]] == 0) assign_label(v, 1, -1);
        }
        bool augmented = false;
        for (;;) {
            while (!queue.empty() && !augmented) {
                int v = queue.back();
                queue.pop_back();
                assert(label[inblossom[v]] == 1);
                for (int p : neighbend[v]) {
                    int k = p / 2;
                    int w = endpoint[p];
                    if (inblossom[v] == inblossom[w]) continue;
                    if (!allowedge[k] && slack(k) <= 0) allowedge[k] = 1;
                    if (allowedge[k]) {
                        if (label[inblossom[w]] == 0) {
                            assign_label(w, 2, p ^ 1);
                        } else if (label[inblossom[w]] == 1) {
                            int base = scan_blossom(v, w);
                            if (base >= 0) {
                                add_blossom(base, k);
                            } else {
                                augment_matching(k);
                                augmented = true;
                                break;
                            }
                        } else if (label[w] == 0) {
                            assert(label[inblossom[w]] == 2);
                            label[w] = 2;
                            labelend[w] = p ^ 1;
                        }
                    }
                }
            }
            if (augmented) break;

            // No tight edge to grow along: compute the dual adjustment by a
            // full scan (delta2: S to unreached, delta3: S to S across
            // blossoms, delta4: T-blossom dual hitting zero).
            int deltatype = -1;
            Dual delta = 0;
            int deltaedge = -1, deltablossom = -1;
            for (int k = 0; k < m; ++k) {
                if (allowedge[k]) continue;
                int li = label[inblossom[edge_u[k]]];
                int lj = label[inblossom[edge_v[k]]];
                if ((li == 1 && lj == 0) || (li == 0 && lj == 1)) {
                    Dual d = slack(k);
                    if (deltatype == -1 || d < delta) {
                        deltatype = 2;
                        delta = d;
                        deltaedge = k;
                    }
                } else if (li == 1 && lj == 1 && inblossom[edge_u[k]] != inblossom[edge_v[k]]) {
                    Dual d = slack(k) / 2;
                    if (deltatype == -1 || d < delta) {
                        deltatype = 3;
                        delta = d;
                        deltaedge = k;
                    }
                }
            }
            for (int b = n; b < 2 * n; ++b) {
                if (blossombase[b] >= 0 && blossomparent[b] == -1 && label[b] == 2) {
                    if (deltatype == -1 || dualvar[b] < delta) {
                        deltatype = 4;
                        delta = dualvar[b];
                        deltablossom = b;
                    }
                }
            }
            if (deltatype == -1) break;  // no augmenting path exists at all

            for (int v = 0; v < n; ++v) {
                int l = label[inblossom[v]];
                if (l == 1)
                    dualvar[v] -= delta;
                else if (l == 2)
                    dualvar[v] += delta;
            }
            for (int b = n; b < 2 * n; ++b) {
                if (blossombase[b] >= 0 && blossomparent[b] == -1) {
                    if (label[b] == 1)
                        dualvar[b] += delta;
                    else if (label[b] == 2)
                        dualvar[b] -= delta;
                }
            }
            if (deltatype == 2) {
                allowedge[deltaedge] = 1;
                int i = edge_u[deltaedge];
                if (label[inblossom[i]] == 0) i = edge_v[deltaedge];
                assert(label[inblossom[i]] == 1);
                queue.push_back(i);
            } else if (deltatype == 3) {
                allowedge[deltaedge] = 1;
                assert(label[inblossom[edge_u[deltaedge]]] == 1);
                queue.push_back(edge_u[deltaedge]);
            } else {
                expand_blossom(deltablossom, false);
            }
        }
        if (!augmented) return false;

        // stage cleanup: S-blossoms with zero dual will never pay for
        // themselves again; expand them now
        for (int b = n; b < 2 * n; ++b) {
            if (blossomparent[b] == -1 && blossombase[b] >= 0 && label[b] == 1 && dualvar[b] == 0)
                expand_blossom(b, true);
        }
        return true;
    }

    WeightedMatching current_matching(const KernelGraph& kg) const {
        WeightedMatching wm;
        for (int v = 0; v < n; ++v) {
            if (mate[v] >= 0) {
                int w = endpoint[mate[v]];
                if (v < w) {
                    int k = mate[v] / 2;
                    wm.edges.push_back(make_edge(static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(w)));
                    wm.weights.push_back(edge_w[k]);
                    wm.total += edge_w[k];
                }
            }
        }
        (void)kg;
        return wm;
    }

    std::uint64_t workspace_words() const {
        std::uint64_t ints = static_cast<std::uint64_t>(4 * m)  // endpoints + adjacency
                             + 12ull * n;                       // per-vertex/per-blossom arrays
        return ints / 2 + 4ull * n  // duals are two words each
               + static_cast<std::uint64_t>(m + 7) / 8 + 2ull * n;
    }
};

}  // namespace

WeightedPhaseResult max_weight_k_matching_kernel(const KernelGraph& kg, std::size_t k,
                                                 ResourceMeter* meter) {
    assert(kg.weighted() || kg.m() == 0);
    WeightedPhaseResult res;
    if (k == 0) {
        res.reached_k = true;
        return res;
    }
    WeightedBlossom wb(kg);
    MeterCharge charge;
    if (meter) charge = MeterCharge(*meter, wb.workspace_words());
    for (std::size_t phase = 0; phase < k; ++phase) {
        if (!wb.run_stage()) {
            res.matching = wb.current_matching(kg);
            res.reached_k = false;
            return res;
        }
        res.matching = wb.current_matching(kg);
        res.phase_weights.push_back(res.matching.total);
    }
    res.reached_k = true;
    res.matching.normalize();
    return res;
}

std::optional<AugmentingPath> max_gain_augment(const KernelGraph& kg, const WeightedMatching& m) {
    WeightedPhaseResult next = max_weight_k_matching_kernel(kg, m.size() + 1);
    if (!next.reached_k) return std::nullopt;

    // The symmetric difference of the given maximum matching and a maximum
    // (i+1)-matching contains at least one augmenting path whose gain equals
    // the weight difference; pick the best such component.
    std::vector<std::vector<std::pair<std::uint32_t, bool>>> adj(kg.n);  // (other end, in m)
    std::vector<std::pair<Edge, bool>> diff;
    auto edge_set = [](const std::vector<Edge>& es) {
        std::vector<Edge> s = es;
        std::sort(s.begin(), s.end());
        return s;
    };
    std::vector<Edge> in_m = edge_set(m.edges);
    std::vector<Edge> in_next = edge_set(next.matching.edges);
    for (const Edge& e : in_m) {
        if (!std::binary_search(in_next.begin(), in_next.end(), e)) diff.push_back({e, true});
    }
    for (const Edge& e : in_next) {
        if (!std::binary_search(in_m.begin(), in_m.end(), e)) diff.push_back({e, false});
    }
    for (auto& [e, inm] : diff) {
        adj[e.lo].push_back({e.hi, inm});
        adj[e.hi].push_back({e.lo, inm});
    }
    auto weight_of = [&kg](VertexId a, VertexId b) {
        for (std::size_t i = 0; i < kg.edges.size(); ++i) {
            auto [u, v] = kg.edges[i];
            if ((u == a && v == b) || (u == b && v == a)) return kg.weights[i];
        }
        assert(false && "edge missing from kernel");
        return Weight{0};
    };

    std::optional<AugmentingPath> best;
    std::vector<bool> seen(kg.n, false);
    for (std::uint32_t v = 0; v < kg.n; ++v) {
        // path components start at degree-1 vertices whose single diff edge
        // is unmatched (both path ends are uncovered by m)
        if (seen[v] || adj[v].size() != 1 || adj[v][0].second) continue;
        AugmentingPath path;
        path.vertices.push_back(v);
        seen[v] = true;
        std::uint32_t cur = v;
        bool expect_matched = false;
        for (;;) {
            std::uint32_t nxt = kg.n;
            for (auto [w, inm] : adj[cur]) {
                if (!seen[w] && inm == expect_matched) {
                    nxt = w;
                    break;
                }
            }
            if (nxt == kg.n) break;
            Weight wt = weight_of(cur, nxt);
            path.weight_gain += expect_matched ? -wt : wt;
            seen[nxt] = true;
            path.vertices.push_back(nxt);
            cur = nxt;
            expect_matched = !expect_matched;
        }
        // augmenting paths have an odd number of edges
        if (path.vertices.size() % 2 == 0) {
            if (!best || path.weight_gain > best->weight_gain) best = std::move(path);
        }
    }
    assert(best && "a maximum (i+1)-matching implies an augmenting path exists");
    return best;
}

}  // namespace kmatch
