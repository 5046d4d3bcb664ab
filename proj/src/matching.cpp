#include "kcover/matching.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

namespace kcover {

namespace {

// One phase of the blossom algorithm: find an augmenting path from `root`.
// Classic base/parent arrays with path marking through contracted blossoms.
class BlossomSearch {
public:
    BlossomSearch(int n, const std::vector<std::vector<int>>& adj, std::vector<int>& mate)
        : n_(n), adj_(adj), mate_(mate), parent_(size_t(n), -1), base_(size_t(n), 0),
          used_(size_t(n), 0), blossom_(size_t(n), 0) {}

    bool augment_from(int root) {
        std::fill(used_.begin(), used_.end(), 0);
        std::fill(parent_.begin(), parent_.end(), -1);
        for (int i = 0; i < n_; ++i) base_[size_t(i)] = i;
        std::queue<int> q;
        used_[size_t(root)] = 1;
        q.push(root);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int to : adj_[size_t(v)]) {
                if (base_[size_t(v)] == base_[size_t(to)] || mate_[size_t(v)] == to) continue;
                if (to == root || (mate_[size_t(to)] != -1 && parent_[size_t(mate_[size_t(to)])] != -1)) {
                    // Odd cycle: contract the blossom.
                    int cur = lca(v, to);
                    std::fill(blossom_.begin(), blossom_.end(), 0);
                    mark_path(v, cur, to);
                    mark_path(to, cur, v);
                    for (int i = 0; i < n_; ++i)
                        if (blossom_[size_t(base_[size_t(i)])]) {
                            base_[size_t(i)] = cur;
                            if (!used_[size_t(i)]) {
                                used_[size_t(i)] = 1;
                                q.push(i);
                            }
                        }
                } else if (parent_[size_t(to)] == -1) {
                    parent_[size_t(to)] = v;
                    if (mate_[size_t(to)] == -1) {
                        flip(to);
                        return true;
                    }
                    used_[size_t(mate_[size_t(to)])] = 1;
                    q.push(mate_[size_t(to)]);
                }
            }
        }
        return false;
    }

private:
    int lca(int a, int b) {
        std::vector<char> mark(size_t(n_), 0);
        for (;;) {
            a = base_[size_t(a)];
            mark[size_t(a)] = 1;
            if (mate_[size_t(a)] == -1) break;
            a = parent_[size_t(mate_[size_t(a)])];
        }
        for (;;) {
            b = base_[size_t(b)];
            if (mark[size_t(b)]) return b;
            b = parent_[size_t(mate_[size_t(b)])];
        }
    }

    void mark_path(int v, int b, int child) {
        while (base_[size_t(v)] != b) {
            blossom_[size_t(base_[size_t(v)])] = 1;
            blossom_[size_t(base_[size_t(mate_[size_t(v)])])] = 1;
            parent_[size_t(v)] = child;
            child = mate_[size_t(v)];
            v = parent_[size_t(mate_[size_t(v)])];
        }
    }

    void flip(int v) {
        while (v != -1) {
            int pv = parent_[size_t(v)];
            int ppv = mate_[size_t(pv)];
            mate_[size_t(v)] = pv;
            mate_[size_t(pv)] = v;
            v = ppv;
        }
    }

    int n_;
    const std::vector<std::vector<int>>& adj_;
    std::vector<int>& mate_;
    std::vector<int> parent_, base_;
    std::vector<char> used_, blossom_;
};

}  // namespace

int max_matching_augment(int vertex_count, const std::vector<std::vector<int>>& adj,
                         std::vector<int>& mate) {
    BlossomSearch search(vertex_count, adj, mate);
    for (int v = 0; v < vertex_count; ++v)
        if (mate[size_t(v)] == -1) search.augment_from(v);
    int matched = 0;
    for (int v = 0; v < vertex_count; ++v) matched += mate[size_t(v)] != -1;
    return matched / 2;
}

Matching max_matching(const Graph& g) {
    std::vector<std::vector<int>> adj(static_cast<size_t>(g.vertex_count));
    for (auto [a, b] : g.edges) {
        adj[size_t(a)].push_back(b);
        adj[size_t(b)].push_back(a);
    }
    std::vector<int> mate(size_t(g.vertex_count), -1);
    // Greedy seed keeps the number of BFS phases small on large sparse graphs.
    for (auto [a, b] : g.edges)
        if (mate[size_t(a)] == -1 && mate[size_t(b)] == -1) {
            mate[size_t(a)] = b;
            mate[size_t(b)] = a;
        }
    max_matching_augment(g.vertex_count, adj, mate);
    Matching m;
    for (int v = 0; v < g.vertex_count; ++v)
        if (mate[size_t(v)] > v) m.edges.emplace_back(v, mate[size_t(v)]);
    return m;
}

Matching max_matching_bruteforce(const Graph& g) {
    if (g.vertex_count > 16) throw std::runtime_error("bruteforce matching limited to 16 vertices");
    std::vector<std::vector<int>> adj(static_cast<size_t>(g.vertex_count));
    for (auto [a, b] : g.edges) {
        adj[size_t(a)].push_back(b);
        adj[size_t(b)].push_back(a);
    }
    std::vector<std::pair<int, int>> best, cur;
    // Branch on the lowest unmatched vertex: skip it or match it to a free neighbor.
    auto rec = [&](auto&& self, uint32_t used, int from) -> void {
        int v = from;
        while (v < g.vertex_count && (used >> v) & 1) ++v;
        if (v >= g.vertex_count) {
            if (cur.size() > best.size()) best = cur;
            return;
        }
        self(self, used | (1u << v), v + 1);
        for (int to : adj[size_t(v)])
            if (!((used >> to) & 1)) {
                cur.emplace_back(v, to);
                self(self, used | (1u << v) | (1u << to), v + 1);
                cur.pop_back();
            }
    };
    rec(rec, 0, 0);
    return Matching{best};
}

bool is_valid_matching(const Graph& g, const Matching& m) {
    std::set<std::pair<int, int>> edge_set;
    for (auto [a, b] : g.edges) edge_set.insert(std::minmax(a, b));
    std::vector<char> used(size_t(g.vertex_count), 0);
    for (auto [a, b] : m.edges) {
        if (!edge_set.count(std::minmax(a, b))) return false;
        if (used[size_t(a)] || used[size_t(b)]) return false;
        used[size_t(a)] = used[size_t(b)] = 1;
    }
    return true;
}

}  // namespace kcover
