#include "kcover/generators.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>

#include "kcover/packing.hpp"
#include "kcover/semilocal.hpp"

namespace kcover {

namespace {

struct Builder {
    int n = 0;
    std::vector<std::vector<int>> sets;

    int add(std::vector<int> s) {
        std::sort(s.begin(), s.end());
        sets.push_back(std::move(s));
        return int(sets.size()) - 1;
    }
    Instance finish(int k, std::vector<std::string> comments) {
        Instance inst;
        inst.n = n;
        inst.k = k;
        inst.base_sets = sets;
        inst.comments = std::move(comments);
        inst.base_lines.resize(sets.size());
        for (size_t i = 0; i < sets.size(); ++i)
            inst.base_lines[i] = int(inst.comments.size()) + 2 + int(i);
        inst.validate();
        inst.rebuild_bits();
        return inst;
    }
};

ChosenSet whole(const Instance& inst, int base_index) {
    return {base_index, inst.base_sets[size_t(base_index)]};
}

std::vector<std::string> meta_comments(const std::map<std::string, std::string>& meta) {
    std::string line = "#";
    for (const auto& [key, val] : meta) line += " " + key + "=" + val;
    return {line};
}

// Three rounds of stride-4 windows over `ids` (4 | ids.size(), >= 8): round r
// covers element slot r of every blocker, windows shifted by r so that any
// two blockers share at most one window per round and no five windows free
// six blockers. Returns one element vector per covering set; blocker i keeps
// slot 3 free.
std::vector<std::vector<int>> stride_cover(const std::vector<std::array<int, 4>>& blocker_elems) {
    int M = int(blocker_elems.size());
    std::vector<std::vector<int>> out;
    for (int r = 0; r < 3; ++r)
        for (int w = 0; w < M / 4; ++w) {
            std::vector<int> c;
            for (int t = 0; t < 4; ++t)
                c.push_back(blocker_elems[size_t((r + 4 * w + t) % M)][size_t(r)]);
            out.push_back(std::move(c));
        }
    return out;
}

}  // namespace

GeneratedInstance gen_unit_u(int m) {
    if (m < 13) throw DomainError("gen_unit_u requires m >= 13");
    GeneratedInstance g;
    Builder bld;
    bld.n = 64 + 4 * m;
    auto o = [](int i, int j) { return 4 * (i - 1) + (j - 1); };          // i in 1..16
    auto b = [&](int i, int j) { return 64 + 4 * (i - 1) + (j - 1); };    // i in 1..m

    std::vector<int> o_base(17, -1), b_base(size_t(m) + 1, -1), a_base(8, -1);
    for (int i = 1; i <= 16; ++i) o_base[size_t(i)] = bld.add({o(i, 1), o(i, 2), o(i, 3), o(i, 4)});
    for (int i = 1; i <= m; ++i) b_base[size_t(i)] = bld.add({b(i, 1), b(i, 2), b(i, 3), b(i, 4)});
    for (int t = 1; t <= 4; ++t)
        a_base[size_t(t)] = bld.add({o(t, 1), o(t + 4, 1), o(t + 8, 1), o(t + 12, 1)});
    for (int t = 5; t <= 7; ++t) {
        int base = 4 * (t - 5);
        a_base[size_t(t)] = bld.add({o(base + 1, 2), o(base + 2, 2), o(base + 3, 2), o(base + 4, 2)});
    }

    int full = m % 4;       // trailing blockers packed whole
    int proper = m - full;  // >= 12, divisible by 4
    std::vector<std::array<int, 4>> blocker_elems;
    for (int i = 1; i <= proper; ++i)
        blocker_elems.push_back({b(i, 1), b(i, 2), b(i, 3), b(i, 4)});
    std::vector<int> c_base;
    for (auto& c : stride_cover(blocker_elems)) c_base.push_back(bld.add(std::move(c)));

    // pair chains: B_{2j-1} - O_{2j-1} - O_{2j} - B_{2j} for j = 1..6
    for (int j = 1; j <= 6; ++j) {
        int p = 2 * j - 1, q = 2 * j;
        bld.add({b(p, 4), o(p, 3)});
        bld.add({o(p, 4), o(q, 3)});
        bld.add({o(q, 4), b(q, 4)});
    }
    // spare proper blockers pair their free elements up
    for (int i = 13; i + 1 <= proper; i += 2) bld.add({b(i, 4), b(i + 1, 4)});

    g.meta = {{"family", "unit4"}, {"m", std::to_string(m)}, {"opt", std::to_string(16 + m)}};
    g.instance = bld.finish(4, meta_comments(g.meta));

    Cover opt;
    for (int i = 1; i <= 16; ++i) opt.members.push_back(whole(g.instance, o_base[size_t(i)]));
    for (int i = 1; i <= m; ++i) opt.members.push_back(whole(g.instance, b_base[size_t(i)]));
    validate_cover(g.instance, opt);
    g.known_opt = std::move(opt);

    Packing a;
    a.size_class = 4;
    for (int t = 1; t <= 7; ++t) a.members.push_back(whole(g.instance, a_base[size_t(t)]));
    for (int cb : c_base) a.members.push_back(whole(g.instance, cb));
    for (int i = proper + 1; i <= m; ++i) a.members.push_back(whole(g.instance, b_base[size_t(i)]));
    validate_packing(g.instance, a);
    g.intended_packing = std::move(a);
    return g;
}

namespace {

struct ChainFamily {
    GeneratedInstance g;
    bool certified = false;
};

// Shared construction for the 7.2 family and the 9.3 instance. The 2-level
// sets of each unit are split into four triples whose members pairwise differ
// in both grid row and grid column; chains of cross 2-sets take whole triples
// consecutively between two blocker anchors. A replacement that packs a
// 2-level set then always splits its chain into a piece holding no other set
// of the same unit, and the elements the replacement frees all belong to that
// unit, so one stranded element per packed 2-level set survives every
// re-matching and the 1-set gate blocks the move. With `amajor`, elements are
// numbered so every intended packing member occupies a consecutive id block
// and the cross 3-sets over the 1-level residuals sort before the in-set
// 3-subsets; that is what routes the deterministic greedy phases onto the
// adversarial solution.
ChainFamily build_chain_family(int c, int m, uint64_t seed, bool amajor, bool cross3,
                               int certify_s) {
    if (c < 1) throw DomainError("need at least one unit");
    if (m < 8 || m % 4 != 0) throw DomainError("blocker count must be >= 8 and divisible by 4");
    if (cross3 && (4 * c) % 3 != 0) throw DomainError("1-level set count must be divisible by 3");

    int n = 64 * c + 4 * m;
    // semantic coordinates
    struct Elem { int id = -1; };
    std::vector<std::vector<std::vector<Elem>>> oe(size_t(c) + 1);  // [u][i][j], 1-based
    for (int u = 1; u <= c; ++u) {
        oe[size_t(u)].assign(17, std::vector<Elem>(5));
    }
    std::vector<std::vector<Elem>> be(size_t(m) + 1, std::vector<Elem>(5));

    int next_id = 0;
    auto assign = [&](Elem& e) { if (e.id < 0) e.id = next_id++; };

    // member tables (semantic element lists)
    struct Member { std::vector<Elem*> elems; };
    std::vector<Member> packing_members;
    for (int u = 1; u <= c; ++u) {
        for (int t = 1; t <= 4; ++t) {
            Member mm;
            for (int row = 0; row < 4; ++row) mm.elems.push_back(&oe[size_t(u)][size_t(t + 4 * row)][1]);
            packing_members.push_back(std::move(mm));
        }
        for (int t = 0; t < 3; ++t) {
            Member mm;
            for (int col = 1; col <= 4; ++col) mm.elems.push_back(&oe[size_t(u)][size_t(4 * t + col)][2]);
            packing_members.push_back(std::move(mm));
        }
    }
    for (int r = 0; r < 3; ++r)
        for (int w = 0; w < m / 4; ++w) {
            Member mm;
            for (int t = 0; t < 4; ++t)
                mm.elems.push_back(&be[size_t((r + 4 * w + t) % m) + 1][size_t(r) + 1]);
            packing_members.push_back(std::move(mm));
        }

    if (amajor) {
        for (auto& mm : packing_members)
            for (Elem* e : mm.elems) assign(*e);
        // cross-3 anchors next: element 2 of every 1-level set, grouped in triples
        for (int u = 1; u <= c; ++u)
            for (int i = 13; i <= 16; ++i) assign(oe[size_t(u)][size_t(i)][2]);
        for (int u = 1; u <= c; ++u)
            for (int i = 13; i <= 16; ++i) {
                assign(oe[size_t(u)][size_t(i)][3]);
                assign(oe[size_t(u)][size_t(i)][4]);
            }
    }
    // everything else in semantic order
    for (int u = 1; u <= c; ++u)
        for (int i = 1; i <= 16; ++i)
            for (int j = 1; j <= 4; ++j) assign(oe[size_t(u)][size_t(i)][size_t(j)]);
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= 4; ++j) assign(be[size_t(i)][size_t(j)]);

    Builder bld;
    bld.n = n;
    std::vector<int> opt_bases, a_bases;
    for (int u = 1; u <= c; ++u)
        for (int i = 1; i <= 16; ++i) {
            std::vector<int> s;
            for (int j = 1; j <= 4; ++j) s.push_back(oe[size_t(u)][size_t(i)][size_t(j)].id);
            opt_bases.push_back(bld.add(std::move(s)));
        }
    for (int i = 1; i <= m; ++i) {
        std::vector<int> s;
        for (int j = 1; j <= 4; ++j) s.push_back(be[size_t(i)][size_t(j)].id);
        opt_bases.push_back(bld.add(std::move(s)));
    }
    for (auto& mm : packing_members) {
        std::vector<int> s;
        for (Elem* e : mm.elems) s.push_back(e->id);
        a_bases.push_back(bld.add(std::move(s)));
    }

    // Chains over whole triples. Triple t of a unit holds the grid cells
    // (row, col) with col = (row - 1 + t) mod 4 + 1 (members pairwise differ
    // in row and column), listed with the row order rotated by t so no grid
    // row is always the middle member. A unit's four triples go to four
    // distinct chains; two same-unit triples in one chain would let one
    // replacement split a chain next to both of its rescue candidates.
    SplitMix64 rng(seed);
    int chains = m / 2;  // >= 4 since m >= 8
    std::vector<std::vector<std::pair<int, int>>> chain_triples(static_cast<size_t>(chains));
    {
        std::vector<int> pick(static_cast<size_t>(chains));
        std::iota(pick.begin(), pick.end(), 0);
        for (int u = 1; u <= c; ++u) {
            rng.shuffle(pick);
            for (int t = 0; t < 4; ++t) chain_triples[size_t(pick[size_t(t)])].emplace_back(u, t);
        }
        for (auto& list : chain_triples) rng.shuffle(list);
    }
    std::vector<int> blockers(static_cast<size_t>(m));
    std::iota(blockers.begin(), blockers.end(), 1);
    rng.shuffle(blockers);
    std::vector<std::pair<int, int>> seq;  // (u, i) 2-level sets of one chain
    for (int q = 0; q < chains; ++q) {
        seq.clear();
        for (auto [u, tri] : chain_triples[size_t(q)])
            for (int p = 0; p < 3; ++p) {
                int row = (p + tri) % 3 + 1;
                int col = (row - 1 + tri) % 4 + 1;
                seq.emplace_back(u, (row - 1) * 4 + col);
            }
        int b_start = blockers[size_t(2 * q)], b_end = blockers[size_t(2 * q + 1)];
        if (seq.empty()) {  // spare anchors pair up directly
            bld.add({be[size_t(b_start)][4].id, be[size_t(b_end)][4].id});
            continue;
        }
        auto oelem = [&](size_t t, int j) {
            auto [u, i] = seq[t];
            return oe[size_t(u)][size_t(i)][size_t(j)].id;
        };
        bld.add({be[size_t(b_start)][4].id, oelem(0, 3)});
        for (size_t t = 0; t + 1 < seq.size(); ++t) bld.add({oelem(t, 4), oelem(t + 1, 3)});
        bld.add({oelem(seq.size() - 1, 4), be[size_t(b_end)][4].id});
    }

    if (cross3) {
        std::vector<int> anchors;
        for (int u = 1; u <= c; ++u)
            for (int i = 13; i <= 16; ++i) anchors.push_back(oe[size_t(u)][size_t(i)][2].id);
        for (size_t t = 0; t + 2 < anchors.size(); t += 3)
            bld.add({anchors[t], anchors[t + 1], anchors[t + 2]});
    }

    ChainFamily fam;
    fam.g.meta["units"] = std::to_string(c);
    fam.g.meta["blockers"] = std::to_string(m);
    fam.g.meta["seed"] = std::to_string(seed);
    fam.g.meta["opt"] = std::to_string(16 * c + m);
    fam.g.instance = bld.finish(4, {});

    Cover opt;
    for (int ob : opt_bases) opt.members.push_back(whole(fam.g.instance, ob));
    validate_cover(fam.g.instance, opt);
    fam.g.known_opt = std::move(opt);

    Packing a;
    a.size_class = 4;
    for (int ab : a_bases) a.members.push_back(whole(fam.g.instance, ab));
    validate_packing(fam.g.instance, a);
    fam.g.intended_packing = std::move(a);

    SemiLocal sem(fam.g.instance);
    ImprovementParams params{4, certify_s, true};
    auto res = certify_no_improvement(fam.g.instance, *fam.g.intended_packing, params,
                                      [&](const Bitset& u) { return sem.ones(u); });
    fam.certified = res.certified;
    if (!fam.certified && res.witness && std::getenv("KCOVER_GEN_DEBUG")) {
        Bitset cov = fam.g.intended_packing->covered(fam.g.instance.n);
        Bitset cov2 = cov;
        for (const auto& cs : res.witness->removed) cov2 -= cs.bits(fam.g.instance.n);
        for (const auto& cs : res.witness->added) cov2 |= cs.bits(fam.g.instance.n);
        fprintf(stderr, "gate before=%d after=%d\n",
                sem.ones(fam.g.instance.full_universe() - cov),
                sem.ones(fam.g.instance.full_universe() - cov2));
        fprintf(stderr, "uncertified witness: removed");
        for (const auto& cs : res.witness->removed) {
            fprintf(stderr, " {");
            for (int e : cs.elements) fprintf(stderr, "%d,", e);
            fprintf(stderr, "}");
        }
        fprintf(stderr, " added");
        for (const auto& cs : res.witness->added) {
            fprintf(stderr, " {");
            for (int e : cs.elements) fprintf(stderr, "%d,", e);
            fprintf(stderr, "}");
        }
        fprintf(stderr, "\n");
    }
    return fam;
}

}  // namespace

GeneratedInstance gen_tight_r4sp(int n_units, int m_blockers, int s, uint64_t seed,
                                 int max_retries) {
    for (int retry = 0; retry <= max_retries; ++retry) {
        uint64_t sub_seed = SplitMix64(seed + 0x9e37 * uint64_t(retry)).next();
        ChainFamily fam = build_chain_family(n_units, m_blockers, sub_seed, false, false, s);
        if (fam.certified) {
            fam.g.meta["family"] = "tight4";
            fam.g.meta["s"] = std::to_string(s);
            fam.g.meta["seed"] = std::to_string(seed);
            fam.g.meta["retries"] = std::to_string(retry);
            fam.g.instance.comments = meta_comments(fam.g.meta);
            for (size_t i = 0; i < fam.g.instance.base_lines.size(); ++i)
                fam.g.instance.base_lines[i] = int(fam.g.instance.comments.size()) + 2 + int(i);
            return fam.g;
        }
    }
    throw DomainError("gen_tight_r4sp: retry budget exhausted without certification");
}

GeneratedInstance gen_tight_prpsli(int k, long long frac_num, long long frac_den, int scale,
                                   uint64_t seed) {
    if (k != 4)
        throw DomainError("gen_tight_prpsli supports k = 4 only; the k >= 5 families require the "
                          "unrestricted-packing tight example, which this artifact excludes");
    if (frac_num < 0 || frac_den <= 0 || frac_num >= frac_den)
        throw DomainError("fraction must lie in [0, 1)");
    long long N = scale;
    if (N <= 0 || (N * frac_num) % frac_den != 0)
        throw DomainError("scale does not make the 3-level fraction integral");
    long long m = N * frac_num / frac_den;
    long long rest = N - m;
    if (rest % 16 != 0)
        throw DomainError("scale does not split the remaining optimum into whole units");
    long long c = rest / 16;
    if (m < 8 || m % 4 != 0)
        throw DomainError("scale gives " + std::to_string(m) +
                          " blocking sets; need at least 8 and a multiple of 4");
    if ((4 * c) % 3 != 0)
        throw DomainError("scale gives " + std::to_string(4 * c) +
                          " 1-level sets; need a multiple of 3 for the cross 3-sets");
    for (int retry = 0; retry <= 32; ++retry) {
        uint64_t sub_seed = SplitMix64(seed + 0x7f4a * uint64_t(retry)).next();
        ChainFamily fam = build_chain_family(int(c), int(m), sub_seed, true, true, 3);
        if (fam.certified) {
            fam.g.meta["family"] = "tight-k";
            fam.g.meta["k"] = "4";
            fam.g.meta["frac"] = std::to_string(frac_num) + "/" + std::to_string(frac_den);
            fam.g.meta["scale"] = std::to_string(scale);
            fam.g.meta["seed"] = std::to_string(seed);
            fam.g.meta["retries"] = std::to_string(retry);
            fam.g.instance.comments = meta_comments(fam.g.meta);
            for (size_t i = 0; i < fam.g.instance.base_lines.size(); ++i)
                fam.g.instance.base_lines[i] = int(fam.g.instance.comments.size()) + 2 + int(i);
            return fam.g;
        }
    }
    throw DomainError("gen_tight_prpsli: retry budget exhausted without certification");
}

GeneratedInstance gen_random(int n, int k, int m_sets, double density, uint64_t seed) {
    if (n < 0 || k < 1 || m_sets < 0) throw DomainError("bad random-instance parameters");
    GeneratedInstance g;
    SplitMix64 rng(seed);
    Builder bld;
    bld.n = n;
    std::set<std::vector<int>> seen;
    std::vector<int> pool(static_cast<size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    int dens_millis = int(std::min(1.0, std::max(0.0, density)) * 1000);
    for (int t = 0; t < m_sets && n > 0; ++t) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            int size = 1;
            for (int j = 1; j < k; ++j)
                if (rng.below(1000) < uint64_t(dens_millis)) ++size;
            size = std::min(size, n);
            rng.shuffle(pool);
            std::vector<int> s(pool.begin(), pool.begin() + size);
            std::sort(s.begin(), s.end());
            if (seen.insert(s).second) {
                bld.add(std::move(s));
                break;
            }
        }
    }
    for (int e = 0; e < n; ++e) {
        bool covered = false;
        for (const auto& s : bld.sets)
            if (std::binary_search(s.begin(), s.end(), e)) {
                covered = true;
                break;
            }
        if (!covered && seen.insert({e}).second) bld.add({e});
    }
    g.meta = {{"family", "random"}, {"n", std::to_string(n)}, {"k", std::to_string(k)},
              {"seed", std::to_string(seed)}};
    g.instance = bld.finish(k, meta_comments(g.meta));
    return g;
}

GeneratedInstance gen_random_partitioned(int groups, int k, int extra_sets, double density,
                                         uint64_t seed) {
    if (groups < 1 || k < 1) throw DomainError("bad partitioned-instance parameters");
    GeneratedInstance g;
    SplitMix64 rng(seed);
    int n = groups * k;
    Builder bld;
    bld.n = n;
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    std::set<std::vector<int>> seen;
    std::vector<int> opt_bases;
    for (int t = 0; t < groups; ++t) {
        std::vector<int> s(perm.begin() + ptrdiff_t(t) * k, perm.begin() + ptrdiff_t(t + 1) * k);
        std::sort(s.begin(), s.end());
        seen.insert(s);
        opt_bases.push_back(bld.add(std::move(s)));
    }
    std::vector<int> pool(static_cast<size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    int dens_millis = int(std::min(1.0, std::max(0.0, density)) * 1000);
    for (int t = 0; t < extra_sets; ++t) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            int size = 2;
            for (int j = 2; j < k; ++j)
                if (rng.below(1000) < uint64_t(dens_millis)) ++size;
            size = std::min(size, n);
            rng.shuffle(pool);
            std::vector<int> s(pool.begin(), pool.begin() + size);
            std::sort(s.begin(), s.end());
            if (seen.insert(s).second) {
                bld.add(std::move(s));
                break;
            }
        }
    }
    g.meta = {{"family", "randpart"}, {"groups", std::to_string(groups)},
              {"k", std::to_string(k)}, {"seed", std::to_string(seed)},
              {"opt", std::to_string(groups)}};
    g.instance = bld.finish(k, meta_comments(g.meta));
    Cover opt;
    for (int ob : opt_bases) opt.members.push_back(whole(g.instance, ob));
    validate_cover(g.instance, opt);
    g.known_opt = std::move(opt);
    return g;
}

std::string serialize_generated(const GeneratedInstance& g) {
    return serialize_instance(g.instance);
}

}  // namespace kcover
