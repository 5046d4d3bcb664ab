#include <doctest.h>

#include <set>

#include "kcover/blocking.hpp"
#include "kcover/generators.hpp"
#include "kcover/oracle.hpp"
#include "kcover/packing.hpp"
#include "kcover/semilocal.hpp"

using namespace kcover;

TEST_CASE("unit4: shape of the generated instance") {
    auto g = gen_unit_u(13);
    CHECK(g.instance.n == 4 * 29);
    REQUIRE(g.known_opt.has_value());
    CHECK(g.known_opt->members.size() == 29);
    validate_cover(g.instance, *g.known_opt);
    REQUIRE(g.intended_packing.has_value());
    CHECK(g.intended_packing->members.size() == 17);  // 7 A-sets, 9 covers, 1 whole blocker
    validate_packing(g.instance, *g.intended_packing);
}

TEST_CASE("unit4: restriction blocks every improvement, plain search does not") {
    auto g = gen_unit_u(13);
    SemiLocal sem(g.instance);
    OnesGate gate = [&](const Bitset& u) { return sem.ones(u); };

    // baseline: the chains absorb every unpacked element without singletons
    Bitset residual = g.instance.full_universe() - g.intended_packing->covered(g.instance.n);
    CHECK(sem.ones(residual) == 0);

    auto restricted = certify_no_improvement(g.instance, *g.intended_packing, {4, 5, true}, gate);
    CHECK(restricted.certified);

    auto plain = certify_no_improvement(g.instance, *g.intended_packing, {4, 5, false});
    REQUIRE(!plain.certified);
    REQUIRE(plain.witness.has_value());
    CHECK(plain.witness->removed.size() == 5);
    CHECK(plain.witness->added.size() == 8);

    Packing stay = improve_packing(g.instance, *g.intended_packing, {4, 5, true}, gate);
    CHECK(stay.members.size() == g.intended_packing->members.size());

    Packing grown = improve_packing(g.instance, *g.intended_packing, {4, 5, false});
    CHECK(grown.members.size() > g.intended_packing->members.size());
}

TEST_CASE("unit4: the committed replacement would create singletons") {
    auto g = gen_unit_u(13);
    SemiLocal sem(g.instance);
    auto plain = certify_no_improvement(g.instance, *g.intended_packing, {4, 5, false});
    REQUIRE(plain.witness.has_value());
    Packing after = *g.intended_packing;
    Bitset removed_bits(g.instance.n);
    for (const auto& cs : plain.witness->removed) {
        removed_bits |= cs.bits(g.instance.n);
        std::erase_if(after.members,
                      [&](const ChosenSet& m) { return m.elements == cs.elements; });
    }
    for (const auto& cs : plain.witness->added) after.members.push_back(cs);
    validate_packing(g.instance, after);
    Bitset before_res = g.instance.full_universe() - g.intended_packing->covered(g.instance.n);
    Bitset after_res = g.instance.full_universe() - after.covered(g.instance.n);
    CHECK(sem.ones(after_res) > sem.ones(before_res));
}

TEST_CASE("unit4: exact packing oracle sees the optimal partition") {
    auto g = gen_unit_u(13);
    OracleBudget budget;
    budget.max_universe = 128;
    auto res = max_packing_exact(g.instance, 4, budget);
    CHECK(res.size == 29);
}

TEST_CASE("unit4: forest of the intended packing") {
    // 48 uncovered elements is past the exhaustive lexfirst budget; the
    // chain 2-sets plus the in-set 3-subsets of the 1-level sets are the
    // only singleton-free completion, so assemble it directly.
    auto g = gen_unit_u(13);
    Bitset covered = g.intended_packing->covered(g.instance.n);
    std::vector<ChosenSet> sets;
    for (size_t b = 0; b < g.instance.base_sets.size(); ++b) {
        const auto& bs = g.instance.base_sets[b];
        if (bs.size() == 2 && !covered.test(bs[0]) && !covered.test(bs[1]))
            sets.push_back({int(b), bs});
    }
    for (int i = 13; i <= 16; ++i)
        sets.push_back({i - 1, {4 * (i - 1) + 1, 4 * (i - 1) + 2, 4 * (i - 1) + 3}});
    Extension ext = make_extension(g.instance, *g.intended_packing, sets, g.known_opt->members);
    CHECK(ext.n1 == 0);
    CHECK(ext.n2 == 18);  // three cross 2-sets per chain, six chains
    CHECK(ext.n3 == 0);
    BlockingForest f = build_forest(g.instance, ext, g.known_opt->members, *g.intended_packing);
    CHECK(f.edges.size() == 18);
    auto rep = verify_structure(f);
    CHECK(rep.all());
    // six 4-node paths plus singletons O_13..O_16 and the packed blocker
    std::set<int> comps(f.component.begin(), f.component.end());
    CHECK(comps.size() == 6 + 5);
    int paths = 0;
    for (int root : f.roots) paths += f.degree[size_t(root)] > 0;
    CHECK(paths == 6);
}

TEST_CASE("unit4: parameter validation") { CHECK_THROWS_AS(gen_unit_u(12), DomainError); }

TEST_CASE("tight4: certified and deterministic") {
    auto g = gen_tight_r4sp(3, 8, 3, 7);
    CHECK(g.meta.at("retries") == "0");
    CHECK(g.known_opt->members.size() == 16 * 3 + 8);
    CHECK(g.intended_packing->members.size() == 7 * 3 + 6);
    auto again = gen_tight_r4sp(3, 8, 3, 7);
    CHECK(serialize_generated(g) == serialize_generated(again));
    auto other = gen_tight_r4sp(3, 8, 3, 8);
    CHECK(serialize_generated(g) != serialize_generated(other));
}

TEST_CASE("tight4: restricted search keeps the adversarial packing") {
    auto g = gen_tight_r4sp(2, 8, 3, 11);
    SemiLocal sem(g.instance);
    OnesGate gate = [&](const Bitset& u) { return sem.ones(u); };
    Packing stay = improve_packing(g.instance, *g.intended_packing, {4, 3, true}, gate);
    CHECK(stay.members.size() == g.intended_packing->members.size());
    Packing grown = improve_packing(g.instance, *g.intended_packing, {4, 3, false});
    CHECK(grown.members.size() > g.intended_packing->members.size());
}

TEST_CASE("tight4: parameter validation") {
    CHECK_THROWS_AS(gen_tight_r4sp(2, 6, 3, 1), DomainError);
    CHECK_THROWS_AS(gen_tight_r4sp(2, 10, 3, 1), DomainError);
    CHECK_THROWS_AS(gen_tight_r4sp(0, 8, 3, 1), DomainError);
}

TEST_CASE("tight-k: rejects unsupported parameters") {
    CHECK_THROWS_AS(gen_tight_prpsli(5, 1, 8, 384), DomainError);
    CHECK_THROWS_AS(gen_tight_prpsli(4, 1, 8, 100), DomainError);
    CHECK_THROWS_AS(gen_tight_prpsli(4, 1, 8, 128), DomainError);  // 28 one-level sets, not /3
}

TEST_CASE("random generators: reproducible and valid") {
    auto a = gen_random(20, 4, 30, 0.5, 99);
    auto b = gen_random(20, 4, 30, 0.5, 99);
    CHECK(serialize_generated(a) == serialize_generated(b));
    auto c = gen_random(0, 4, 0, 0.5, 1);
    CHECK(c.instance.n == 0);
    auto p = gen_random_partitioned(4, 4, 10, 0.5, 5);
    validate_cover(p.instance, *p.known_opt);
    CHECK(p.known_opt->members.size() == 4);
}
