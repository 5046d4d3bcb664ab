#include "kcover/oracle.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace kcover {

namespace {

// Pareto frontier of (size, ones) pairs, size strictly increasing and ones
// strictly decreasing.
using Frontier = std::vector<std::pair<int, int>>;

void insert_point(Frontier& f, int size, int ones) {
    for (auto [s, o] : f)
        if (s <= size && o <= ones) return;
    std::erase_if(f, [&](const auto& p) { return p.first >= size && p.second >= ones; });
    f.emplace_back(size, ones);
    std::sort(f.begin(), f.end());
}

class CoverDP {
public:
    CoverDP(const Instance& inst, int max_subset, const OracleBudget& budget)
        : inst_(inst), cap_(max_subset), budget_(budget) {
        if (inst.n > budget.max_universe)
            throw DomainError("oracle budget exceeded: universe " + std::to_string(inst.n) +
                              " > " + std::to_string(budget.max_universe));
        for (const auto& bs : inst_.base_sets) {
            uint32_t m = 0;
            for (int e : bs) m |= (1u << e);
            base_masks_.push_back(m);
        }
    }

    const Frontier& solve(uint32_t mask) {
        auto it = memo_.find(mask);
        if (it != memo_.end()) return it->second;
        if (++nodes_ > budget_.node_cap) throw DomainError("oracle node cap exceeded");
        Frontier f;
        if (mask == 0) {
            f.emplace_back(0, 0);
        } else {
            int e = __builtin_ctz(mask);
            for_each_subset(mask, e, [&](uint32_t sub, int) {
                int popc = __builtin_popcount(sub);
                const Frontier& child = solve(mask & ~sub);
                for (auto [s, o] : child) insert_point(f, s + 1, o + (popc == 1));
            });
        }
        return memo_.emplace(mask, std::move(f)).first->second;
    }

    bool achievable(uint32_t mask, int size, int ones) {
        for (auto [s, o] : solve(mask))
            if (s <= size && o <= ones) return true;
        return false;
    }

    // Reconstructs a cover of `mask` with at most (size, ones), canonical-first.
    void reconstruct(uint32_t mask, int size, int ones, Cover& out) {
        if (mask == 0) return;
        int e = __builtin_ctz(mask);
        uint32_t pick = 0;
        int pick_base = -1;
        for_each_subset(mask, e, [&](uint32_t sub, int base) {
            if (pick) return;
            int popc = __builtin_popcount(sub);
            if (achievable(mask & ~sub, size - 1, ones - (popc == 1))) {
                pick = sub;
                pick_base = base;
            }
        });
        ChosenSet cs;
        cs.base_index = pick_base;
        for (int i = 0; i < inst_.n; ++i)
            if ((pick >> i) & 1) cs.elements.push_back(i);
        out.members.push_back(cs);
        reconstruct(mask & ~pick, size - 1, ones - (int(cs.elements.size()) == 1), out);
    }

private:
    // Enumerates, for each base set containing element e, all subsets of
    // base & mask that contain e and have size <= cap_. Duplicates across
    // bases are harmless: children are memoized.
    template <typename F>
    void for_each_subset(uint32_t mask, int e, F&& f) {
        for (size_t b = 0; b < base_masks_.size(); ++b) {
            uint32_t avail = base_masks_[b] & mask;
            if (!((avail >> e) & 1)) continue;
            uint32_t rest = avail & ~(1u << e);
            // iterate subsets of rest, smallest first for canonical order
            std::vector<uint32_t> subs;
            for (uint32_t s = rest;; s = (s - 1) & rest) {
                subs.push_back(s);
                if (s == 0) break;
            }
            std::sort(subs.begin(), subs.end());
            for (uint32_t s : subs)
                if (__builtin_popcount(s) + 1 <= cap_) f(s | (1u << e), int(b));
        }
    }

    const Instance& inst_;
    int cap_;
    OracleBudget budget_;
    std::vector<uint32_t> base_masks_;
    std::unordered_map<uint32_t, Frontier> memo_;
    uint64_t nodes_ = 0;
};

}  // namespace

CoverOracleResult min_cover_exact(const Instance& inst, const OracleBudget& budget) {
    CoverOracleResult res;
    if (inst.n == 0) {
        res.simultaneous = true;
        return res;
    }
    CoverDP dp(inst, inst.k, budget);
    uint32_t full = inst.n == 32 ? ~0u : ((1u << inst.n) - 1);
    const Frontier& f = dp.solve(full);
    res.b = f.front().first;
    res.b1 = f.front().second;
    res.b1_global = f.back().second;
    res.simultaneous = dp.achievable(full, res.b, res.b1_global);
    dp.reconstruct(full, res.b, res.b1, res.witness_min);
    validate_cover(inst, res.witness_min);
    return res;
}

int min_ones_exact(const Instance& inst, const OracleBudget& budget) {
    if (inst.n == 0) return 0;
    CoverDP dp(inst, std::min(inst.k, 3), budget);
    uint32_t full = inst.n == 32 ? ~0u : ((1u << inst.n) - 1);
    return dp.solve(full).back().second;
}

PackingOracleResult max_packing_exact(const Instance& inst, int i, const OracleBudget& budget) {
    struct Cand {
        std::vector<int> elems;
        Bitset bits;
        int base;
    };
    std::vector<Cand> cands;
    std::map<std::vector<int>, int> seen;
    for (size_t b = 0; b < inst.base_sets.size(); ++b) {
        const auto& bs = inst.base_sets[b];
        if (int(bs.size()) < i) continue;
        std::vector<int> idx(static_cast<size_t>(i));
        for (int t = 0; t < i; ++t) idx[size_t(t)] = t;
        for (;;) {
            std::vector<int> pick(static_cast<size_t>(i));
            for (int t = 0; t < i; ++t) pick[size_t(t)] = bs[size_t(idx[size_t(t)])];
            if (seen.emplace(pick, 0).second) {
                Cand c{pick, Bitset(inst.n), int(b)};
                for (int e : pick) c.bits.set(e);
                cands.push_back(std::move(c));
            }
            int t = i - 1;
            while (t >= 0 && idx[size_t(t)] == int(bs.size()) - i + t) --t;
            if (t < 0) break;
            ++idx[size_t(t)];
            for (int j = t + 1; j < i; ++j) idx[size_t(j)] = idx[size_t(j - 1)] + 1;
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.elems < b.elems; });

    // Greedy lower bound, then DFS with the free-element bound.
    std::vector<int> greedy;
    {
        Bitset used(inst.n);
        for (size_t c = 0; c < cands.size(); ++c)
            if (!cands[c].bits.intersects(used)) {
                greedy.push_back(int(c));
                used |= cands[c].bits;
            }
    }
    std::vector<int> best = greedy, cur;
    uint64_t nodes = 0;
    Bitset used(inst.n);
    int free_count = inst.n;
    auto rec = [&](auto&& self, size_t from) -> void {
        if (++nodes > budget.node_cap) throw DomainError("oracle node cap exceeded");
        if (cur.size() > best.size()) best = cur;
        for (size_t c = from; c < cands.size(); ++c) {
            if (int(cur.size()) + free_count / i <= int(best.size())) return;
            if (cands[size_t(c)].bits.intersects(used)) continue;
            used |= cands[size_t(c)].bits;
            free_count -= i;
            cur.push_back(int(c));
            self(self, c + 1);
            cur.pop_back();
            free_count += i;
            used -= cands[size_t(c)].bits;
        }
    };
    rec(rec, 0);

    PackingOracleResult res;
    res.size = int(best.size());
    res.witness.size_class = i;
    for (int c : best) res.witness.members.push_back({cands[size_t(c)].base, cands[size_t(c)].elems});
    validate_packing(inst, res.witness);
    return res;
}

}  // namespace kcover
