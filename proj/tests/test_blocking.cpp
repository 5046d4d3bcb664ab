#include <doctest.h>

#include "kcover/blocking.hpp"
#include "kcover/generators.hpp"
#include "kcover/packing.hpp"
#include "kcover/semilocal.hpp"

using namespace kcover;

TEST_CASE("lexfirst: full packing leaves an empty extension") {
    Instance inst = parse_instance_text("p setcover 8 2 4\ns 1 2 3 4\ns 5 6 7 8\n");
    Packing a = maximal_packing(inst, 4);
    Cover opt{{{0, {0, 1, 2, 3}}, {1, {4, 5, 6, 7}}}};
    Extension ext = lexfirst_extension(inst, a, opt.members);
    CHECK(ext.sets.empty());
    CHECK(ext.n1 == 0);
    CHECK(ext.n2 == 0);
    CHECK(ext.n3 == 0);
}

TEST_CASE("lexfirst: prefers in-set pairs over a cross 2-set") {
    // Three 4-sets, levels (3,3,2); element 8's cross pair with 11 would save
    // nothing, so the in-set pair {11,12} wins the tuple comparison.
    Instance inst = parse_instance_text(
        "p setcover 12 6 4\n"
        "s 1 2 3 4\ns 5 6 7 8\ns 9 10 11 12\n"
        "s 1 2 3 5\ns 6 7 9 10\n"
        "s 8 11\n");
    Packing a;
    a.size_class = 4;
    a.members.push_back({3, {0, 1, 2, 4}});
    a.members.push_back({4, {5, 6, 8, 9}});
    Cover opt{{{0, {0, 1, 2, 3}}, {1, {4, 5, 6, 7}}, {2, {8, 9, 10, 11}}}};
    Extension ext = lexfirst_extension(inst, a, opt.members);
    CHECK(ext.n1 == 2);
    CHECK(ext.n2 == 0);
    CHECK(ext.n3 == 0);
    BlockingForest f = build_forest(inst, ext, opt.members, a);
    CHECK(f.edges.empty());
    auto rep = verify_structure(f);
    CHECK(rep.all());
}

TEST_CASE("lexfirst: matches exhaustive enumeration on tiny instances") {
    // brute force over all partitions of the uncovered elements
    for (uint64_t seed = 1; seed <= 15; ++seed) {
        auto g = gen_random_partitioned(3, 4, 8, 0.6, seed * 53);
        Packing a = improve_packing(g.instance, maximal_packing(g.instance, 4), {4, 3, false});
        Bitset covered = a.covered(g.instance.n);
        std::vector<int> uncovered;
        for (int e = 0; e < g.instance.n; ++e)
            if (!covered.test(e)) uncovered.push_back(e);
        if (uncovered.size() > 9) continue;
        Extension ext = lexfirst_extension(g.instance, a, g.known_opt->members);

        // enumerate every partition into available <=3-subsets
        std::vector<Bitset> opt_bits;
        for (const auto& o : g.known_opt->members) opt_bits.push_back(o.bits(g.instance.n));
        int best_n1 = 1 << 20, best_n2 = 0, best_n3 = 0;
        std::vector<char> used(size_t(g.instance.n), 0);
        auto tuple_less = [](int a1, int a2, int a3, int b1, int b2, int b3) {
            if (a1 != b1) return a1 < b1;
            if (a2 != b2) return a2 < b2;
            return a3 < b3;
        };
        auto rec = [&](auto&& self, size_t at, int n1, int n2, int n3) -> void {
            while (at < uncovered.size() && used[size_t(uncovered[at])]) ++at;
            if (at == uncovered.size()) {
                if (tuple_less(n1, n2, n3, best_n1, best_n2, best_n3)) {
                    best_n1 = n1;
                    best_n2 = n2;
                    best_n3 = n3;
                }
                return;
            }
            int e = uncovered[at];
            for (size_t b = 0; b < g.instance.base_sets.size(); ++b) {
                const auto& bs = g.instance.base_sets[b];
                if (!std::binary_search(bs.begin(), bs.end(), e)) continue;
                std::vector<int> pool;
                for (int x : bs)
                    if (x != e && !used[size_t(x)] && !covered.test(x)) pool.push_back(x);
                auto try_set = [&](std::vector<int> s) {
                    s.push_back(e);
                    std::sort(s.begin(), s.end());
                    Bitset sb(g.instance.n);
                    for (int x : s) sb.set(x);
                    bool within = false;
                    for (const auto& ob : opt_bits)
                        if (sb.is_subset_of(ob)) within = true;
                    int cross = within ? 0 : 1;
                    for (int x : s) used[size_t(x)] = 1;
                    self(self, at + 1, n1 + (s.size() == 1), n2 + (s.size() >= 2 ? cross : 0),
                         n3 + (s.size() == 3 ? cross : 0));
                    for (int x : s) used[size_t(x)] = 0;
                };
                try_set({});
                for (size_t i = 0; i < pool.size(); ++i) {
                    try_set({pool[i]});
                    for (size_t j = i + 1; j < pool.size(); ++j) try_set({pool[i], pool[j]});
                }
            }
        };
        rec(rec, 0, 0, 0, 0);
        CHECK(ext.n1 == best_n1);
        CHECK(ext.n2 == best_n2);
        CHECK(ext.n3 == best_n3);
    }
}

TEST_CASE("verify: hand-built cycle fails the forest proposition") {
    BlockingForest f;
    f.k = 4;
    f.node_count = 3;
    f.level = {3, 3, 3};
    f.edges = {{0, 1}, {1, 2}, {0, 2}};
    auto rep = verify_structure(f);
    CHECK(!rep.forest);
}

TEST_CASE("verify: two degree-2 low-level nodes fail the root rule") {
    BlockingForest f;
    f.k = 4;
    f.node_count = 5;
    f.level = {0, 0, 3, 3, 3};
    // path: 2 - 0 - 4 - 1 - 3 puts both 0-level nodes at degree 2
    f.edges = {{2, 0}, {0, 4}, {4, 1}, {1, 3}};
    auto rep = verify_structure(f);
    CHECK(!rep.degree2_root);
}

TEST_CASE("verify: multi-edge rejected") {
    BlockingForest f;
    f.k = 4;
    f.node_count = 2;
    f.level = {3, 3};
    f.edges = {{0, 1}, {0, 1}};
    auto rep = verify_structure(f);
    CHECK(!rep.forest);
}

TEST_CASE("blocking: random restricted fixed points satisfy the propositions") {
    int done = 0;
    for (uint64_t seed = 1; done < 10 && seed <= 40; ++seed) {
        auto g = gen_random_partitioned(4, 4, 12, 0.5, seed * 997);
        SemiLocal sem(g.instance);
        OnesGate gate = [&](const Bitset& u) { return sem.ones(u); };
        Packing a = improve_packing(g.instance, maximal_packing(g.instance, 4), {4, 3, true}, gate);
        if (!certify_no_improvement(g.instance, a, {4, 3, true}, gate).certified) continue;
        Extension ext = lexfirst_extension(g.instance, a, g.known_opt->members);
        BlockingForest f = build_forest(g.instance, ext, g.known_opt->members, a);
        auto rep = verify_structure(f);
        CHECK(rep.all());
        ++done;
    }
    CHECK(done == 10);
}
