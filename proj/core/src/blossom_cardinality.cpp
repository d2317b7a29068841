#include <algorithm>
#include <cassert>
#include <queue>

#include "kmatch/blossom.hpp"

namespace kmatch {

Matching greedy_maximal_matching(const KernelGraph& kg) {
    std::vector<bool> covered(kg.n, false);
    Matching m;
    for (auto [u, v] : kg.edges) {
        if (!covered[u] && !covered[v]) {
            covered[u] = covered[v] = true;
            m.edges.push_back(make_edge(u, v));
        }
    }
    return m;
}

namespace {

// Augmenting-path search with blossom contraction, BFS from one free root.
// Contracted blossoms are tracked through base[]; p[] stores the alternating
// tree parents used to unroll the augmenting path.
struct BlossomSearch {
    std::uint32_t n;
    std::vector<std::vector<std::uint32_t>> adj;
    std::vector<int> match, parent, base;
    std::vector<char> used, in_blossom, lca_mark;

    explicit BlossomSearch(const KernelGraph& kg) : n(kg.n), adj(kg.n) {
        for (auto [u, v] : kg.edges) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        match.assign(n, -1);
        parent.assign(n, -1);
        base.resize(n);
        used.assign(n, 0);
        in_blossom.assign(n, 0);
        lca_mark.assign(n, 0);
    }

    int lca(int a, int b) {
        std::fill(lca_mark.begin(), lca_mark.end(), 0);
        int v = a;
        for (;;) {
            v = base[v];
            lca_mark[v] = 1;
            if (match[v] == -1) break;
            v = parent[match[v]];
        }
        int w = b;
        for (;;) {
            w = base[w];
            if (lca_mark[w]) return w;
            w = parent[match[w]];
        }
    }

    void mark_path(int v, int b, int child) {
        while (base[v] != b) {
            in_blossom[base[v]] = 1;
            in_blossom[base[match[v]]] = 1;
            parent[v] = child;
            child = match[v];
            v = parent[match[v]];
        }
    }

    // Returns a free vertex ending an augmenting path from root, or -1.
    int find_path(int root) {
        std::fill(used.begin(), used.end(), 0);
        std::fill(parent.begin(), parent.end(), -1);
        for (std::uint32_t i = 0; i < n; ++i) base[i] = static_cast<int>(i);
        used[root] = 1;
        std::queue<int> q;
        q.push(root);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (std::uint32_t to : adj[v]) {
                int t = static_cast<int>(to);
                if (base[v] == base[t] || match[v] == t) continue;
                if (t == root || (match[t] != -1 && parent[match[t]] != -1)) {
                    // two even vertices meet: contract the blossom
                    int cur_base = lca(v, t);
                    std::fill(in_blossom.begin(), in_blossom.end(), 0);
                    mark_path(v, cur_base, t);
                    mark_path(t, cur_base, v);
                    for (std::uint32_t i = 0; i < n; ++i) {
                        if (in_blossom[base[i]]) {
                            base[i] = cur_base;
                            if (!used[i]) {
                                used[i] = 1;
                                q.push(static_cast<int>(i));
                            }
                        }
                    }
                } else if (parent[t] == -1) {
                    parent[t] = v;
                    if (match[t] == -1) return t;
                    used[match[t]] = 1;
                    q.push(match[t]);
                }
            }
        }
        return -1;
    }

    void augment_from(int v) {
        while (v != -1) {
            int pv = parent[v];
            int next = match[pv];
            match[v] = pv;
            match[pv] = v;
            v = next;
        }
    }
};

}  // namespace

Matching max_matching_blossom(const KernelGraph& kg, const Matching* warm_start, ResourceMeter* meter) {
    BlossomSearch s(kg);
    MeterCharge charge;
    if (meter) {
        // adjacency (2m) + six per-vertex arrays, in payload words
        std::uint64_t words = (2 * static_cast<std::uint64_t>(kg.m()) + 6 * kg.n) / 2 + 1;
        charge = MeterCharge(*meter, words);
    }
    if (warm_start) {
        for (const Edge& e : warm_start->edges) {
            s.match[e.lo] = static_cast<int>(e.hi);
            s.match[e.hi] = static_cast<int>(e.lo);
        }
    }
    for (std::uint32_t v = 0; v < kg.n; ++v) {
        if (s.match[v] == -1) {
            int end = s.find_path(static_cast<int>(v));
            if (end != -1) s.augment_from(end);
        }
    }
    Matching m;
    for (std::uint32_t v = 0; v < kg.n; ++v) {
        if (s.match[v] != -1 && v < static_cast<std::uint32_t>(s.match[v]))
            m.edges.push_back(make_edge(v, static_cast<std::uint32_t>(s.match[v])));
    }
    return m;
}

std::optional<Matching> best_match(const KernelGraph& kg, std::size_t k, ResourceMeter* meter) {
    if (k == 0) return Matching{};
    Matching greedy = greedy_maximal_matching(kg);
    if (greedy.size() >= k) {
        greedy.edges.resize(k);
        return greedy;
    }
    // |maximum| <= 2 |maximal|, so the blossom search starts within k of done
    Matching maximum = max_matching_blossom(kg, &greedy, meter);
    assert(maximum.size() <= 2 * greedy.size());
    if (maximum.size() < k) return std::nullopt;
    maximum.edges.resize(k);
    return maximum;
}

}  // namespace kmatch
