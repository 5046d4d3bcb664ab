#include "kcover/semilocal.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace kcover {

namespace {

struct Sub3 {
    std::array<int, 3> e;
    int base_index;
};
struct Sub2 {
    std::array<int, 2> e;
    int base_index;
};

}  // namespace

struct SemiLocal::Impl {
    const Instance& inst;
    int n;
    std::vector<Sub3> subs3;  // canonical order
    std::vector<Sub2> subs2;  // canonical order
    std::vector<std::vector<int>> elem_subs3;  // element -> ids of subs3 containing it
    std::vector<std::vector<std::pair<int, int>>> pair_adj;  // element -> (partner, sub2 id)
    std::vector<int> elem_base;  // element -> first base set containing it
    std::unordered_map<Bitset, int, BitsetHash> ones_memo;

    // --- mutable solve state ---
    Bitset region{0}, covered3{0}, active{0};
    std::vector<int> mate;
    int match_size = 0;
    std::set<int> chosen3;  // subset ids, ascending
    // journal of mate assignments for candidate rollback
    std::vector<std::pair<int, int>> journal;
    bool journaling = false;

    // blossom scratch
    std::vector<int> parent, base, q;
    std::vector<char> used, blossom;

    explicit Impl(const Instance& inst_) : inst(inst_), n(inst_.n) {
        std::map<std::vector<int>, int> seen2, seen3;
        for (size_t b = 0; b < inst.base_sets.size(); ++b) {
            const auto& bs = inst.base_sets[b];
            int sz = int(bs.size());
            for (int i = 0; i < sz; ++i)
                for (int j = i + 1; j < sz; ++j) {
                    if (seen2.emplace(std::vector<int>{bs[i], bs[j]}, 0).second)
                        subs2.push_back({{bs[i], bs[j]}, int(b)});
                    for (int l = j + 1; l < sz; ++l)
                        if (seen3.emplace(std::vector<int>{bs[i], bs[j], bs[l]}, 0).second)
                            subs3.push_back({{bs[i], bs[j], bs[l]}, int(b)});
                }
        }
        auto lt3 = [](const Sub3& a, const Sub3& b) { return a.e < b.e; };
        auto lt2 = [](const Sub2& a, const Sub2& b) { return a.e < b.e; };
        std::sort(subs3.begin(), subs3.end(), lt3);
        std::sort(subs2.begin(), subs2.end(), lt2);
        elem_subs3.assign(size_t(n), {});
        pair_adj.assign(size_t(n), {});
        for (size_t i = 0; i < subs3.size(); ++i)
            for (int e : subs3[i].e) elem_subs3[size_t(e)].push_back(int(i));
        for (size_t i = 0; i < subs2.size(); ++i) {
            auto [a, b] = std::pair{subs2[i].e[0], subs2[i].e[1]};
            pair_adj[size_t(a)].push_back({b, int(i)});
            pair_adj[size_t(b)].push_back({a, int(i)});
        }
        elem_base.assign(size_t(n), -1);
        for (size_t b = 0; b < inst.base_sets.size(); ++b)
            for (int e : inst.base_sets[b])
                if (elem_base[size_t(e)] < 0) elem_base[size_t(e)] = int(b);
        parent.assign(size_t(n), -1);
        base.assign(size_t(n), 0);
        used.assign(size_t(n), 0);
        blossom.assign(size_t(n), 0);
        mate.assign(size_t(n), -1);
    }

    void set_mate(int v, int w) {
        if (journaling) journal.emplace_back(v, mate[size_t(v)]);
        mate[size_t(v)] = w;
    }

    // --- blossom search over pair_adj filtered by `active` ---
    int lca(int a, int b) {
        static thread_local std::vector<char> mark;
        mark.assign(size_t(n), 0);
        for (;;) {
            a = base[size_t(a)];
            mark[size_t(a)] = 1;
            if (mate[size_t(a)] == -1) break;
            a = parent[size_t(mate[size_t(a)])];
        }
        for (;;) {
            b = base[size_t(b)];
            if (mark[size_t(b)]) return b;
            b = parent[size_t(mate[size_t(b)])];
        }
    }
    void mark_path(int v, int b, int child) {
        while (base[size_t(v)] != b) {
            blossom[size_t(base[size_t(v)])] = 1;
            blossom[size_t(base[size_t(mate[size_t(v)])])] = 1;
            parent[size_t(v)] = child;
            child = mate[size_t(v)];
            v = parent[size_t(mate[size_t(v)])];
        }
    }
    bool augment_from(int root, const std::vector<int>& active_list) {
        for (int v : active_list) {
            used[size_t(v)] = 0;
            parent[size_t(v)] = -1;
            base[size_t(v)] = v;
        }
        q.clear();
        used[size_t(root)] = 1;
        q.push_back(root);
        for (size_t qi = 0; qi < q.size(); ++qi) {
            int v = q[qi];
            for (auto [to, pid] : pair_adj[size_t(v)]) {
                (void)pid;
                if (!active.test(to)) continue;
                if (base[size_t(v)] == base[size_t(to)] || mate[size_t(v)] == to) continue;
                if (to == root || (mate[size_t(to)] != -1 && parent[size_t(mate[size_t(to)])] != -1)) {
                    int cur = lca(v, to);
                    for (int u : active_list) blossom[size_t(u)] = 0;
                    mark_path(v, cur, to);
                    mark_path(to, cur, v);
                    for (int u : active_list)
                        if (blossom[size_t(base[size_t(u)])]) {
                            base[size_t(u)] = cur;
                            if (!used[size_t(u)]) {
                                used[size_t(u)] = 1;
                                q.push_back(u);
                            }
                        }
                } else if (parent[size_t(to)] == -1) {
                    parent[size_t(to)] = v;
                    if (mate[size_t(to)] == -1) {
                        // flip along the path
                        int x = to;
                        while (x != -1) {
                            int px = parent[size_t(x)];
                            int ppx = mate[size_t(px)];
                            set_mate(x, px);
                            set_mate(px, x);
                            x = ppx;
                        }
                        return true;
                    }
                    used[size_t(mate[size_t(to)])] = 1;
                    q.push_back(mate[size_t(to)]);
                }
            }
        }
        return false;
    }

    std::vector<int> active_list() const { return active.to_vector(); }

    // Candidate evaluation: remove subset ids `out` (0 or 1), add ids `in`.
    // Applies the change to mate/active under a journal, augments from the
    // touched free vertices, and reports the matching-size delta. Caller
    // rolls back or adopts.
    struct EvalCtx {
        std::vector<std::pair<int, int>> saved_journal;
        std::vector<int> activated, deactivated;
        int saved_size;
    };
    int eval(const std::vector<int>& out, const std::vector<int>& in, EvalCtx& ctx) {
        ctx.saved_size = match_size;
        ctx.activated.clear();
        ctx.deactivated.clear();
        journal.clear();
        journaling = true;
        std::vector<int> seeds;
        for (int id : out)
            for (int e : subs3[size_t(id)].e) {
                active.set(e);
                ctx.activated.push_back(e);
                seeds.push_back(e);
            }
        for (int id : in)
            for (int e : subs3[size_t(id)].e) {
                if (!active.test(e)) continue;
                active.reset(e);
                // activation + deactivation in one move cancels out for rollback
                bool was_activated = false;
                for (size_t i = 0; i < ctx.activated.size(); ++i)
                    if (ctx.activated[i] == e) {
                        ctx.activated[i] = ctx.activated.back();
                        ctx.activated.pop_back();
                        was_activated = true;
                        break;
                    }
                if (!was_activated) ctx.deactivated.push_back(e);
                for (size_t i = 0; i < seeds.size(); ++i)
                    if (seeds[i] == e) { seeds[i] = seeds.back(); seeds.pop_back(); break; }
                int w = mate[size_t(e)];
                if (w != -1) {
                    set_mate(e, -1);
                    set_mate(w, -1);
                    --match_size;
                    seeds.push_back(w);
                }
            }
        std::sort(seeds.begin(), seeds.end());
        auto al = active_list();
        for (int s : seeds)
            if (active.test(s) && mate[size_t(s)] == -1)
                if (augment_from(s, al)) ++match_size;
        journaling = false;
        return match_size - ctx.saved_size;
    }
    void rollback(const EvalCtx& ctx) {
        for (auto it = journal.rbegin(); it != journal.rend(); ++it)
            mate[size_t(it->first)] = it->second;
        for (int e : ctx.activated) active.reset(e);
        for (int e : ctx.deactivated) active.set(e);
        match_size = ctx.saved_size;
        journal.clear();
    }

    bool sub_in_pool(int id, const Bitset& extra) const {
        for (int e : subs3[size_t(id)].e)
            if (!active.test(e) && !extra.test(e)) return false;
        return true;
    }
    bool sub_active(int id) const {
        for (int e : subs3[size_t(id)].e)
            if (!active.test(e)) return false;
        return true;
    }

    // Acceptance: matching-size delta thresholds derived from the lexicographic
    // (total, ones) rule; see solve().
    static int threshold(int t, int s) {
        if (t == 1 && s == 2) return -1;
        if (t == 1 && s == 1) return 1;
        if (t == 1 && s == 0) return 2;
        if (t == 0 && s == 1) return -1;
        return -3;  // t == 0, s == 2
    }

    void check_state() const {
#ifndef NDEBUG
        Bitset expect_active = region;
        for (int id : chosen3)
            for (int e : subs3[size_t(id)].e) expect_active.reset(e);
        if (!(expect_active == active)) throw DomainError("semilocal: active set out of sync");
        int pairs = 0;
        active.for_each([&](int v) {
            int w = mate[size_t(v)];
            if (w == -1) return;
            if (!active.test(w) || mate[size_t(w)] != v)
                throw DomainError("semilocal: mate table inconsistent");
            if (w > v) ++pairs;
        });
        if (pairs != match_size) throw DomainError("semilocal: match size out of sync");
#endif
    }

    bool try_move(const std::vector<int>& out, const std::vector<int>& in, int& commits) {
        EvalCtx ctx;
        int dm = eval(out, in, ctx);
        if (dm >= threshold(int(out.size()), int(in.size()))) {
            for (int id : out) chosen3.erase(id);
            for (int id : in) chosen3.insert(id);
            covered3 = Bitset(n);
            for (int id : chosen3)
                for (int e : subs3[size_t(id)].e) covered3.set(e);
            ++commits;
            check_state();
            return true;
        }
        rollback(ctx);
        check_state();
        return false;
    }

    // One full improvement pass over snapshots; returns number of commits.
    int scan_once() {
        int commits = 0;
        // insertions
        {
            std::vector<int> free3;
            for (size_t i = 0; i < subs3.size(); ++i)
                if (sub_active(int(i))) free3.push_back(int(i));
            for (size_t i = 0; i < free3.size(); ++i) {
                if (!sub_active(free3[i])) continue;
                try_move({}, {free3[i]}, commits);
            }
            for (size_t i = 0; i < free3.size(); ++i) {
                if (!sub_active(free3[i])) continue;
                for (size_t j = i + 1; j < free3.size(); ++j) {
                    if (!sub_active(free3[j])) continue;
                    if (disjoint(free3[i], free3[j]) && sub_active(free3[i]))
                        try_move({}, {free3[i], free3[j]}, commits);
                    if (!sub_active(free3[i])) break;
                }
            }
        }
        // replacements: delete one chosen 3-set, insert up to two
        std::vector<int> snapshot(chosen3.begin(), chosen3.end());
        for (int t : snapshot) {
            if (!chosen3.count(t)) continue;
            if (try_move({t}, {}, commits)) continue;
            Bitset t_bits(n);
            for (int e : subs3[size_t(t)].e) t_bits.set(e);
            // candidates fully inside free-elements + the removed set
            std::vector<int> pool;
            {
                std::set<int> cand;
                for (int e : subs3[size_t(t)].e)
                    for (int id : elem_subs3[size_t(e)]) cand.insert(id);
                for (int id : cand)
                    if (id != t && region_has(id) && sub_in_pool(id, t_bits)) pool.push_back(id);
                for (size_t i = 0; i < subs3.size(); ++i)
                    if (int(i) != t && sub_active(int(i)) && !cand.count(int(i))) pool.push_back(int(i));
                std::sort(pool.begin(), pool.end());
            }
            bool done = false;
            for (size_t i = 0; i < pool.size() && !done; ++i) {
                if (!chosen3.count(t)) break;
                if (!sub_in_pool(pool[i], t_bits)) continue;
                done = try_move({t}, {pool[i]}, commits);
            }
            if (done || !chosen3.count(t)) continue;
            for (size_t i = 0; i < pool.size() && !done; ++i) {
                if (!sub_in_pool(pool[i], t_bits)) continue;
                for (size_t j = i + 1; j < pool.size() && !done; ++j) {
                    if (!disjoint(pool[i], pool[j]) || !sub_in_pool(pool[j], t_bits)) continue;
                    done = try_move({t}, {pool[i], pool[j]}, commits);
                }
            }
        }
        return commits;
    }

    bool region_has(int id) const {
        for (int e : subs3[size_t(id)].e)
            if (!region.test(e)) return false;
        return true;
    }
    bool disjoint(int a, int b) const {
        for (int x : subs3[size_t(a)].e)
            for (int y : subs3[size_t(b)].e)
                if (x == y) return false;
        return true;
    }

    SemiLocalResult run(const Bitset& reg) {
        region = reg;
        chosen3.clear();
        covered3 = Bitset(n);
        active = Bitset(n);
        std::fill(mate.begin(), mate.end(), -1);
        match_size = 0;
        journaling = false;

        // greedy maximal 3-sets in canonical order
        for (size_t i = 0; i < subs3.size(); ++i) {
            const auto& s = subs3[i];
            if (!region_has(int(i))) continue;
            if (covered3.test(s.e[0]) || covered3.test(s.e[1]) || covered3.test(s.e[2])) continue;
            chosen3.insert(int(i));
            for (int e : s.e) covered3.set(e);
        }
        region.for_each([&](int e) {
            if (!covered3.test(e)) active.set(e);
        });
        // initial matching: greedy canonical seed, then augment the rest
        for (const auto& p : subs2) {
            if (!active.test(p.e[0]) || !active.test(p.e[1])) continue;
            if (mate[size_t(p.e[0])] == -1 && mate[size_t(p.e[1])] == -1) {
                mate[size_t(p.e[0])] = p.e[1];
                mate[size_t(p.e[1])] = p.e[0];
                ++match_size;
            }
        }
        {
            auto al = active_list();
            for (int v : al)
                if (mate[size_t(v)] == -1 && augment_from(v, al)) ++match_size;
        }

        int iterations = 0;
        while (int c = scan_once()) iterations += c;

        SemiLocalResult res;
        res.iterations = iterations;
        res.threes = int(chosen3.size());
        for (int id : chosen3) {
            const auto& s = subs3[size_t(id)];
            res.cover.members.push_back({s.base_index, {s.e[0], s.e[1], s.e[2]}});
        }
        std::map<std::array<int, 2>, int> pair_base;
        for (const auto& p : subs2) pair_base.emplace(p.e, p.base_index);
        active.for_each([&](int v) {
            int w = mate[size_t(v)];
            if (w == -1) {
                res.cover.members.push_back({elem_base[size_t(v)], {v}});
                ++res.ones;
            } else if (w > v) {
                res.cover.members.push_back({pair_base.at({v, w}), {v, w}});
            }
        });
        std::sort(res.cover.members.begin(), res.cover.members.end(), chosen_less);
        return res;
    }
};

SemiLocal::SemiLocal(const Instance& inst) : impl_(std::make_unique<Impl>(inst)) {}
SemiLocal::~SemiLocal() = default;

SemiLocalResult SemiLocal::solve(const Bitset& region) { return impl_->run(region); }

int SemiLocal::ones(const Bitset& region) {
    auto it = impl_->ones_memo.find(region);
    if (it != impl_->ones_memo.end()) return it->second;
    int v = impl_->run(region).ones;
    impl_->ones_memo.emplace(region, v);
    return v;
}

SemiLocalResult semilocal_cover(const Instance& inst) {
    for (const auto& bs : inst.base_sets)
        if (bs.size() > 3) throw DomainError("semi-local solver requires base sets of size <= 3");
    SemiLocal solver(inst);
    return solver.solve(inst.full_universe());
}

int count_ones(const Instance& inst) { return semilocal_cover(inst).ones; }

}  // namespace kcover
