#include "kcover/blocking.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace kcover {

namespace {

struct ExtCand {
    std::vector<int> elems;   // global element ids
    uint32_t mask;            // over local (uncovered) indices
    int base;
    bool cross;               // not inside one optimal set
};

struct Tuple3 {
    int n1 = 0, n2 = 0, n3 = 0;
    bool operator<(const Tuple3& o) const {
        if (n1 != o.n1) return n1 < o.n1;
        if (n2 != o.n2) return n2 < o.n2;
        return n3 < o.n3;
    }
    Tuple3 operator+(const Tuple3& o) const { return {n1 + o.n1, n2 + o.n2, n3 + o.n3}; }
};

}  // namespace

Extension lexfirst_extension(const Instance& inst, const Packing& a,
                             const std::vector<ChosenSet>& optimal, int max_uncovered) {
    Bitset covered = a.covered(inst.n);
    std::vector<int> uncovered;
    for (int e = 0; e < inst.n; ++e)
        if (!covered.test(e)) uncovered.push_back(e);
    int u = int(uncovered.size());
    if (u > max_uncovered || u > 20)
        throw DomainError("lexfirst extension budget exceeded: " + std::to_string(u) +
                          " uncovered elements");
    std::vector<int> local(size_t(inst.n), -1);
    for (int t = 0; t < u; ++t) local[size_t(uncovered[size_t(t)])] = t;

    std::vector<Bitset> opt_bits;
    for (const auto& o : optimal) opt_bits.push_back(o.bits(inst.n));

    // distinct 1/2/3-subsets of base sets inside the uncovered region
    std::vector<ExtCand> cands;
    {
        std::map<std::vector<int>, int> seen;
        for (size_t b = 0; b < inst.base_sets.size(); ++b) {
            std::vector<int> avail;
            for (int e : inst.base_sets[b])
                if (local[size_t(e)] >= 0) avail.push_back(e);
            int sz = int(avail.size());
            for (int i = 0; i < sz; ++i)
                for (int cnt = 1; cnt <= 3; ++cnt) {
                    // subsets of size cnt starting at i, lexicographic
                    std::vector<int> idx(static_cast<size_t>(cnt));
                    idx[0] = i;
                    if (cnt >= 2) idx[1] = i + 1;
                    if (cnt >= 3) idx[2] = i + 2;
                    if (i + cnt > sz) continue;
                    for (;;) {
                        std::vector<int> pick(static_cast<size_t>(cnt));
                        for (int t = 0; t < cnt; ++t) pick[size_t(t)] = avail[size_t(idx[size_t(t)])];
                        if (pick[0] == avail[size_t(i)] && seen.emplace(pick, 0).second) {
                            ExtCand c;
                            c.elems = pick;
                            c.mask = 0;
                            for (int e : pick) c.mask |= (1u << local[size_t(e)]);
                            c.base = int(b);
                            c.cross = true;
                            Bitset pb(inst.n);
                            for (int e : pick) pb.set(e);
                            for (const auto& ob : opt_bits)
                                if (pb.is_subset_of(ob)) {
                                    c.cross = false;
                                    break;
                                }
                            cands.push_back(std::move(c));
                        }
                        int t = cnt - 1;
                        while (t >= 1 && idx[size_t(t)] == sz - cnt + t) --t;
                        if (t < 1) break;
                        ++idx[size_t(t)];
                        for (int j = t + 1; j < cnt; ++j) idx[size_t(j)] = idx[size_t(j - 1)] + 1;
                    }
                }
        }
        std::sort(cands.begin(), cands.end(),
                  [](const ExtCand& a, const ExtCand& b) { return a.elems < b.elems; });
    }
    std::vector<std::vector<int>> by_lowbit(static_cast<size_t>(u));
    for (size_t c = 0; c < cands.size(); ++c)
        by_lowbit[size_t(__builtin_ctz(cands[c].mask))].push_back(int(c));

    auto cost_of = [&](const ExtCand& c) -> Tuple3 {
        int sz = int(c.elems.size());
        return {sz == 1 ? 1 : 0, (c.cross && sz >= 2) ? 1 : 0, (c.cross && sz == 3) ? 1 : 0};
    };

    uint32_t full = u == 0 ? 0 : (u == 32 ? ~0u : ((1u << u) - 1));
    std::vector<Tuple3> best(full + 1);
    std::vector<int> choice(full + 1, -2);  // -2 unseen, else candidate id
    auto solve = [&](auto&& self, uint32_t mask) -> Tuple3 {
        if (mask == 0) return {};
        if (choice[mask] != -2) return best[mask];
        int e = __builtin_ctz(mask);
        Tuple3 bt{1 << 20, 0, 0};
        int bc = -1;
        for (int ci : by_lowbit[size_t(e)]) {
            const ExtCand& c = cands[size_t(ci)];
            if ((c.mask & mask) != c.mask) continue;
            Tuple3 t = cost_of(c) + self(self, mask & ~c.mask);
            if (t < bt) {
                bt = t;
                bc = ci;
            }
        }
        best[mask] = bt;
        choice[mask] = bc;
        return bt;
    };

    Extension ext;
    Tuple3 total = solve(solve, full);
    ext.n1 = total.n1;
    ext.n2 = total.n2;
    ext.n3 = total.n3;
    for (uint32_t mask = full; mask;) {
        int ci = choice[mask];
        const ExtCand& c = cands[size_t(ci)];
        ext.sets.push_back({c.base, c.elems});
        mask &= ~c.mask;
    }
    std::sort(ext.sets.begin(), ext.sets.end(), chosen_less);
    return ext;
}

Extension make_extension(const Instance& inst, const Packing& a, std::vector<ChosenSet> sets,
                         const std::vector<ChosenSet>& optimal) {
    Bitset covered = a.covered(inst.n);
    std::vector<Bitset> opt_bits;
    for (const auto& o : optimal) opt_bits.push_back(o.bits(inst.n));
    Extension ext;
    Bitset seen(inst.n);
    for (const auto& s : sets) {
        if (s.elements.empty() || s.elements.size() > 3)
            throw DomainError("extension sets must have size 1 to 3");
        Bitset sb = s.bits(inst.n);
        if (sb.intersects(covered) || sb.intersects(seen))
            throw DomainError("extension set overlaps the packing or another set");
        const auto& base = inst.base_sets.at(size_t(s.base_index));
        for (int e : s.elements)
            if (!std::binary_search(base.begin(), base.end(), e))
                throw DomainError("extension set not a subset of its base set");
        seen |= sb;
        bool within = false;
        for (const auto& ob : opt_bits)
            if (sb.is_subset_of(ob)) within = true;
        ext.n1 += s.elements.size() == 1;
        if (!within && s.elements.size() >= 2) ++ext.n2;
        if (!within && s.elements.size() == 3) ++ext.n3;
    }
    for (int e = 0; e < inst.n; ++e)
        if (!covered.test(e) && !seen.test(e))
            throw DomainError("extension leaves element " + std::to_string(e + 1) + " uncovered");
    ext.sets = std::move(sets);
    std::sort(ext.sets.begin(), ext.sets.end(), chosen_less);
    return ext;
}

BlockingForest build_forest(const Instance& inst, const Extension& ext,
                            const std::vector<ChosenSet>& optimal, const Packing& a) {
    BlockingForest f;
    f.k = inst.k;
    f.node_count = int(optimal.size());
    std::vector<int> owner(size_t(inst.n), -1);
    for (size_t o = 0; o < optimal.size(); ++o)
        for (int e : optimal[o].elements) {
            if (owner[size_t(e)] != -1) throw DomainError("optimal sets overlap");
            owner[size_t(e)] = int(o);
        }
    for (int e = 0; e < inst.n; ++e)
        if (owner[size_t(e)] == -1)
            throw DomainError("optimal sets do not cover element " + std::to_string(e + 1));

    f.level.assign(size_t(f.node_count), 0);
    Bitset covered = a.covered(inst.n);
    covered.for_each([&](int e) { ++f.level[size_t(owner[size_t(e)])]; });

    for (const auto& s : ext.sets) {
        if (s.elements.size() == 1) {
            f.one_set_node.push_back(owner[size_t(s.elements[0])]);
        } else if (s.elements.size() == 2) {
            int x = owner[size_t(s.elements[0])], y = owner[size_t(s.elements[1])];
            if (x != y) f.edges.emplace_back(std::min(x, y), std::max(x, y));
        }
    }
    verify_structure(f);  // fills degree/component/roots and the flags
    return f;
}

StructureReport verify_structure(BlockingForest& f) {
    StructureReport rep;
    int n = f.node_count;
    int k = f.k;
    f.degree.assign(size_t(n), 0);
    f.component.assign(size_t(n), -1);
    f.roots.clear();

    std::set<std::pair<int, int>> seen_edges;
    f.simple = true;
    for (auto [x, y] : f.edges) {
        ++f.degree[size_t(x)];
        ++f.degree[size_t(y)];
        if (x == y || !seen_edges.insert({std::min(x, y), std::max(x, y)}).second) f.simple = false;
    }
    // union-find for components and cycle detection
    std::vector<int> uf(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) uf[size_t(i)] = i;
    auto find = [&](int x) {
        while (uf[size_t(x)] != x) x = uf[size_t(x)] = uf[size_t(uf[size_t(x)])];
        return x;
    };
    f.acyclic = true;
    for (auto [x, y] : f.edges) {
        int rx = find(x), ry = find(y);
        if (rx == ry) f.acyclic = false;
        else uf[size_t(rx)] = ry;
    }
    std::map<int, int> comp_id;
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        auto [it, fresh] = comp_id.emplace(r, int(comp_id.size()));
        f.component[size_t(i)] = it->second;
        (void)fresh;
    }
    int comps = int(comp_id.size());

    rep.forest = f.simple && f.acyclic;
    if (!rep.forest) rep.detail += "not a forest; ";

    rep.ones_in_top_level = true;
    for (int node : f.one_set_node)
        if (f.level[size_t(node)] != k - 1) {
            rep.ones_in_top_level = false;
            rep.detail += "1-set inside " + std::to_string(f.level[size_t(node)]) +
                          "-level node " + std::to_string(node) + "; ";
        }

    // roots per the paper's rule, then the two per-tree counting propositions
    std::vector<std::vector<int>> members(static_cast<size_t>(comps));
    for (int i = 0; i < n; ++i) members[size_t(f.component[size_t(i)])].push_back(i);
    rep.low_degree_unique = true;
    rep.degree2_root = true;
    f.roots.assign(size_t(comps), -1);
    for (int c = 0; c < comps; ++c) {
        int low_degree = 0, deg2_low_level = 0;
        int prop3_node = -1, deg2_node = -1, non_top = -1;
        for (int v : members[size_t(c)]) {
            if (f.degree[size_t(v)] < k - f.level[size_t(v)]) {
                ++low_degree;
                if (prop3_node == -1) prop3_node = v;
            }
            if (f.level[size_t(v)] <= 1 && f.degree[size_t(v)] == 2) {
                ++deg2_low_level;
                if (deg2_node == -1) deg2_node = v;
            }
            if (f.level[size_t(v)] != k - 1 && non_top == -1) non_top = v;
        }
        int root = prop3_node != -1 ? prop3_node : (non_top != -1 ? non_top : members[size_t(c)][0]);
        f.roots[size_t(c)] = root;
        if (low_degree > 1) {
            rep.low_degree_unique = false;
            rep.detail += "tree " + std::to_string(c) + " has " + std::to_string(low_degree) +
                          " low-degree nodes; ";
        }
        if (deg2_low_level > 1 || (deg2_node != -1 && deg2_node != root)) {
            rep.degree2_root = false;
            rep.detail += "tree " + std::to_string(c) + " violates the degree-2 root rule; ";
        }
    }
    return rep;
}

}  // namespace kcover
