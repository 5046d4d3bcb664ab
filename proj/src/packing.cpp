#include "kcover/packing.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace kcover {

namespace {

struct Cand {
    std::vector<int> elems;
    Bitset bits;
    int base;
};

std::vector<Cand> build_candidates(const Instance& inst, int i, const Bitset& region) {
    std::vector<Cand> cands;
    std::map<std::vector<int>, int> seen;
    for (size_t b = 0; b < inst.base_sets.size(); ++b) {
        std::vector<int> avail;
        for (int e : inst.base_sets[b])
            if (region.test(e)) avail.push_back(e);
        if (int(avail.size()) < i) continue;
        std::vector<int> idx(static_cast<size_t>(i));
        for (int t = 0; t < i; ++t) idx[size_t(t)] = t;
        for (;;) {
            std::vector<int> pick(static_cast<size_t>(i));
            for (int t = 0; t < i; ++t) pick[size_t(t)] = avail[size_t(idx[size_t(t)])];
            if (seen.emplace(pick, 0).second) {
                Cand c{pick, Bitset(inst.n), int(b)};
                for (int e : pick) c.bits.set(e);
                cands.push_back(std::move(c));
            }
            int t = i - 1;
            while (t >= 0 && idx[size_t(t)] == int(avail.size()) - i + t) --t;
            if (t < 0) break;
            ++idx[size_t(t)];
            for (int j = t + 1; j < i; ++j) idx[size_t(j)] = idx[size_t(j - 1)] + 1;
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.elems < b.elems; });
    return cands;
}

struct BudgetExceeded {};

// Local-search engine shared by improve and certify. One Engine scan explores
// every p -> p+1 replacement with p <= s: families S of disjoint non-member
// candidates are grown in canonical order while the union of packing members
// they intersect (the forced removals) stays within s; removals beyond that
// union ("padding") are tried when slack allows, since freeing extra sets can
// only lower the semi-local 1-set count and may unblock a gated move.
class Engine {
public:
    Engine(const Instance& inst, const Bitset& region, const ImprovementParams& params,
           OnesGate gate, uint64_t node_cap)
        : inst_(inst), region_(region), params_(params), gate_(std::move(gate)),
          node_cap_(node_cap), cands_(build_candidates(inst, params.i, region)) {}

    struct Move {
        std::vector<int> removed_members;
        std::vector<int> added_cands;
    };

    void load(const Packing& p) {
        members_ = p.members;
        std::sort(members_.begin(), members_.end(), chosen_less);
        rebuild();
    }

    Packing packing() const { return Packing{params_.i, members_}; }

    ImprovementWitness witness(const Move& m) const {
        ImprovementWitness w;
        for (int idx : m.removed_members) w.removed.push_back(members_[size_t(idx)]);
        for (int c : m.added_cands) w.added.push_back({cands_[size_t(c)].base, cands_[size_t(c)].elems});
        return w;
    }

    void commit(const Move& m, ImproveLog* log) {
        CommitRecord rec;
        rec.removed = int(m.removed_members.size());
        rec.added = int(m.added_cands.size());
        if (params_.restricted) {
            rec.gate_before = gate_before_;
            rec.gate_after = eval_gate(m.removed_members, m.added_cands);
        }
        if (log) log->commits.push_back(rec);
        std::vector<int> rm = m.removed_members;
        std::sort(rm.rbegin(), rm.rend());
        for (int idx : rm) members_.erase(members_.begin() + idx);
        for (int c : m.added_cands)
            members_.push_back({cands_[size_t(c)].base, cands_[size_t(c)].elems});
        std::sort(members_.begin(), members_.end(), chosen_less);
        rebuild();
    }

    // Exhaustive scan. Returns the first committable move in canonical order.
    std::optional<Move> scan() {
        nodes_ = 0;
        if (params_.restricted && gate_) gate_before_ = gate_(region_ - covered_);
        std::optional<Move> found;
        std::vector<int> stack_s;
        Bitset s_bits(inst_.n);
        std::vector<int> blockers;
        dfs(0, stack_s, s_bits, blockers, found);
        return found;
    }

    uint64_t nodes() const { return nodes_; }

private:
    void rebuild() {
        member_bits_.clear();
        covered_ = Bitset(inst_.n);
        std::set<std::vector<int>> member_sets;
        for (const auto& m : members_) {
            member_bits_.push_back(m.bits(inst_.n));
            covered_ |= member_bits_.back();
            member_sets.insert(m.elements);
        }
        cand_blockers_.assign(cands_.size(), {});
        cand_member_.assign(cands_.size(), 0);
        for (size_t c = 0; c < cands_.size(); ++c) {
            if (member_sets.count(cands_[c].elems)) {
                cand_member_[c] = 1;
                continue;
            }
            for (size_t m = 0; m < member_bits_.size(); ++m)
                if (cands_[c].bits.intersects(member_bits_[m]))
                    cand_blockers_[c].push_back(int(m));
        }
        member_touch_bases_.clear();
    }

    void tick() {
        if (++nodes_ > node_cap_) throw BudgetExceeded{};
    }

    // Merge-size first (cheap int compares), bitset work only for survivors.
    static int merged_size(const std::vector<int>& a, const std::vector<int>& b, int cap) {
        size_t i = 0, j = 0;
        int n = 0;
        while (i < a.size() && j < b.size()) {
            if (++n > cap) return n;
            if (a[i] == b[j]) { ++i; ++j; }
            else if (a[i] < b[j]) ++i;
            else ++j;
        }
        n += int(a.size() - i) + int(b.size() - j);
        return n;
    }

    void dfs(size_t start, std::vector<int>& s, Bitset& s_bits, std::vector<int>& blockers,
             std::optional<Move>& found) {
        if (found) return;
        for (size_t c = start; c < cands_.size() && !found; ++c) {
            if (cand_member_[c]) continue;
            if (merged_size(blockers, cand_blockers_[c], params_.s) > params_.s) continue;
            if (cands_[c].bits.intersects(s_bits)) continue;
            tick();
            std::vector<int> merged;
            std::set_union(blockers.begin(), blockers.end(), cand_blockers_[c].begin(),
                           cand_blockers_[c].end(), std::back_inserter(merged));
            s.push_back(int(c));
            s_bits |= cands_[c].bits;
            if (int(s.size()) >= int(merged.size()) + 1) try_moves(merged, s, found);
            if (!found) {
                std::swap(blockers, merged);
                dfs(c + 1, s, s_bits, blockers, found);
                std::swap(blockers, merged);
            }
            s_bits -= cands_[c].bits;
            s.pop_back();
        }
    }

    std::vector<int> extend(const std::vector<int>& s, const std::vector<int>& removal) {
        std::vector<int> ext = s;
        Bitset bits(inst_.n);
        for (int c : s) bits |= cands_[size_t(c)].bits;
        for (size_t c = 0; c < cands_.size(); ++c) {
            if (cand_member_[c]) continue;
            if (cands_[c].bits.intersects(bits)) continue;
            if (!std::includes(removal.begin(), removal.end(), cand_blockers_[c].begin(),
                               cand_blockers_[c].end()))
                continue;
            ext.push_back(int(c));
            bits |= cands_[c].bits;
        }
        std::sort(ext.begin(), ext.end());
        return ext;
    }

    int eval_gate(const std::vector<int>& removal, const std::vector<int>& added) {
        tick();
        Bitset cov = covered_;
        for (int m : removal) cov -= member_bits_[size_t(m)];
        for (int c : added) cov |= cands_[size_t(c)].bits;
        return gate_(region_ - cov);
    }

    bool gate_ok(const std::vector<int>& removal, const std::vector<int>& added) {
        if (!params_.restricted || !gate_) return true;
        return eval_gate(removal, added) <= gate_before_;
    }

    Bitset residual_after(const std::vector<int>& removal, const std::vector<int>& added) {
        Bitset cov = covered_;
        for (int m : removal) cov -= member_bits_[size_t(m)];
        for (int c : added) cov |= cands_[size_t(c)].bits;
        return region_ - cov;
    }

    // Members whose elements share a base set with the residual left by the
    // unpadded move, closed once over their own elements. Freeing any other
    // member cannot change the semi-local count (its elements sit in a
    // separate component of the base-set hypergraph and self-cover without
    // 1-sets), so padding enumeration is limited to these.
    std::vector<int> relevant_paddings(const std::vector<int>& removal, const Bitset& residual) {
        if (member_touch_bases_.empty()) {
            member_touch_bases_.assign(members_.size(), {});
            for (size_t m = 0; m < members_.size(); ++m)
                for (size_t b = 0; b < inst_.base_bits.size(); ++b)
                    if (inst_.base_bits[b].intersects(member_bits_[m]))
                        member_touch_bases_[m].push_back(int(b));
        }
        Bitset reach = residual;
        std::vector<char> rel(members_.size(), 0);
        for (int m : removal) rel[size_t(m)] = 2;  // already removed
        for (bool grew = true; grew;) {
            grew = false;
            for (size_t m = 0; m < members_.size(); ++m) {
                if (rel[m]) continue;
                for (int b : member_touch_bases_[m]) {
                    if (inst_.base_bits[size_t(b)].intersects(reach)) {
                        rel[m] = 1;
                        reach |= member_bits_[m];
                        grew = true;
                        break;
                    }
                }
            }
        }
        std::vector<int> out;
        for (size_t m = 0; m < members_.size(); ++m)
            if (rel[m] == 1) out.push_back(int(m));
        return out;
    }

    void try_moves(const std::vector<int>& blockers, const std::vector<int>& s,
                   std::optional<Move>& found) {
        std::vector<int> ext = extend(s, blockers);
        if (gate_ok(blockers, ext)) {
            found = Move{blockers, ext};
            return;
        }
        if (ext.size() != s.size() && int(s.size()) >= int(blockers.size()) + 1 &&
            gate_ok(blockers, s)) {
            found = Move{blockers, s};
            return;
        }
        // Padded removals. Only reachable in restricted mode (unrestricted
        // moves commit above), and only when budget remains.
        int budget = params_.s - int(blockers.size());
        if (budget <= 0) return;
        std::vector<int> rel = relevant_paddings(blockers, residual_after(blockers, ext));
        std::vector<int> pad;
        auto attempt = [&](const std::vector<int>& p) -> bool {
            std::vector<int> removal;
            std::set_union(blockers.begin(), blockers.end(), p.begin(), p.end(),
                           std::back_inserter(removal));
            std::vector<int> extp = extend(s, removal);
            if (int(extp.size()) < int(removal.size()) + 1) return false;
            if (gate_ok(removal, extp)) {
                found = Move{removal, extp};
                return true;
            }
            return false;
        };
        auto rec = [&](auto&& self, size_t from) -> void {
            if (found) return;
            for (size_t m = from; m < rel.size(); ++m) {
                pad.push_back(rel[m]);
                if (attempt(pad)) {
                    pad.pop_back();
                    return;
                }
                if (int(pad.size()) < budget) self(self, m + 1);
                pad.pop_back();
                if (found) return;
            }
        };
        rec(rec, 0);
    }

    const Instance& inst_;
    Bitset region_;
    ImprovementParams params_;
    OnesGate gate_;
    uint64_t node_cap_;
    std::vector<Cand> cands_;

    std::vector<ChosenSet> members_;
    std::vector<Bitset> member_bits_;
    Bitset covered_{0};
    std::vector<std::vector<int>> cand_blockers_;
    std::vector<char> cand_member_;
    std::vector<std::vector<int>> member_touch_bases_;
    int gate_before_ = -1;
    uint64_t nodes_ = 0;
};

}  // namespace

Packing maximal_packing_on(const Instance& inst, int i, const Bitset& region) {
    auto cands = build_candidates(inst, i, region);
    Packing p;
    p.size_class = i;
    Bitset used(inst.n);
    for (const auto& c : cands)
        if (!c.bits.intersects(used)) {
            p.members.push_back({c.base, c.elems});
            used |= c.bits;
        }
    return p;
}

Packing maximal_packing(const Instance& inst, int i) {
    return maximal_packing_on(inst, i, inst.full_universe());
}

Packing improve_packing_on(const Instance& inst, const Bitset& region, Packing p,
                           const ImprovementParams& params, OnesGate gate, ImproveLog* log) {
    validate_packing(inst, p);
    Engine eng(inst, region, params, std::move(gate), UINT64_MAX);
    eng.load(p);
    while (auto mv = eng.scan()) eng.commit(*mv, log);
    return eng.packing();
}

Packing improve_packing(const Instance& inst, Packing p, const ImprovementParams& params,
                        OnesGate gate, ImproveLog* log) {
    return improve_packing_on(inst, inst.full_universe(), std::move(p), params, std::move(gate), log);
}

CertifyResult certify_no_improvement_on(const Instance& inst, const Bitset& region,
                                        const Packing& p, const ImprovementParams& params,
                                        OnesGate gate, uint64_t node_cap) {
    validate_packing(inst, p);
    Engine eng(inst, region, params, std::move(gate), node_cap);
    eng.load(p);
    CertifyResult res;
    try {
        auto mv = eng.scan();
        res.nodes = eng.nodes();
        if (mv) {
            res.certified = false;
            res.witness = eng.witness(*mv);
        } else {
            res.certified = true;
        }
    } catch (const BudgetExceeded&) {
        res.budget_exceeded = true;
        res.nodes = node_cap;
    }
    return res;
}

CertifyResult certify_no_improvement(const Instance& inst, const Packing& p,
                                     const ImprovementParams& params, OnesGate gate,
                                     uint64_t node_cap) {
    return certify_no_improvement_on(inst, inst.full_universe(), p, params, std::move(gate), node_cap);
}

}  // namespace kcover
