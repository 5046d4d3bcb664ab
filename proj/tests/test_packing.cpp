#include <doctest.h>

#include "kcover/generators.hpp"
#include "kcover/oracle.hpp"
#include "kcover/packing.hpp"
#include "kcover/semilocal.hpp"

using namespace kcover;

TEST_CASE("maximal packing: basics") {
    Instance two = parse_instance_text("p setcover 8 2 4\ns 1 2 3 4\ns 5 6 7 8\n");
    CHECK(maximal_packing(two, 4).members.size() == 2);
    Instance one = parse_instance_text("p setcover 4 1 4\ns 1 2 3 4\n");
    CHECK(maximal_packing(one, 5).members.empty());
}

TEST_CASE("maximal packing: no disjoint candidate survives") {
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        auto g = gen_random(13, 4, 22, 0.6, seed * 3);
        Packing p = maximal_packing(g.instance, 4);
        validate_packing(g.instance, p);
        // s = 0 certification is exactly the maximality scan
        auto res = certify_no_improvement(g.instance, p, {4, 0, false});
        CHECK(res.certified);
    }
}

TEST_CASE("improve packing: optimum fixed point is returned unchanged") {
    Instance inst = parse_instance_text("p setcover 8 2 4\ns 1 2 3 4\ns 5 6 7 8\n");
    Packing p = maximal_packing(inst, 4);
    Packing q = improve_packing(inst, p, {4, 3, false});
    CHECK(q.members.size() == p.members.size());
    auto cert = certify_no_improvement(inst, q, {4, 3, false});
    CHECK(cert.certified);
}

TEST_CASE("improve packing: grows monotonically and certifies") {
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        auto g = gen_random(14, 4, 24, 0.7, seed * 101);
        Packing start = maximal_packing(g.instance, 4);
        ImproveLog log;
        Packing done = improve_packing(g.instance, start, {4, 3, false}, nullptr, &log);
        validate_packing(g.instance, done);
        CHECK(done.members.size() >= start.members.size());
        size_t sz = start.members.size();
        for (const auto& c : log.commits) {
            CHECK(c.added > c.removed);
            sz += size_t(c.added - c.removed);
        }
        CHECK(sz == done.members.size());
        CHECK(certify_no_improvement(g.instance, done, {4, 3, false}).certified);
    }
}

TEST_CASE("improve packing: restricted gate values never increase") {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        auto g = gen_random(14, 4, 24, 0.7, seed * 401);
        SemiLocal sem(g.instance);
        OnesGate gate = [&](const Bitset& u) { return sem.ones(u); };
        ImproveLog log;
        Packing done = improve_packing(g.instance, maximal_packing(g.instance, 4),
                                       {4, 3, true}, gate, &log);
        validate_packing(g.instance, done);
        for (const auto& c : log.commits) CHECK(c.gate_after <= c.gate_before);
        auto cert = certify_no_improvement(g.instance, done, {4, 3, true}, gate);
        CHECK(cert.certified);
    }
}

TEST_CASE("certify: witness on an improvable packing") {
    // {1..4} and {5..8} exist, but start from the blocking middle set {3,4,5,6}.
    Instance inst = parse_instance_text("p setcover 8 3 4\ns 1 2 3 4\ns 5 6 7 8\ns 3 4 5 6\n");
    Packing bad;
    bad.size_class = 4;
    bad.members.push_back({2, {2, 3, 4, 5}});
    auto res = certify_no_improvement(inst, bad, {4, 2, false});
    REQUIRE(!res.certified);
    REQUIRE(res.witness.has_value());
    CHECK(res.witness->removed.size() == 1);
    CHECK(res.witness->added.size() == 2);
    Packing fixed = improve_packing(inst, bad, {4, 2, false});
    CHECK(fixed.members.size() == 2);
}

TEST_CASE("certify: node budget reported distinctly") {
    auto g = gen_random(14, 4, 26, 0.8, 9);
    Packing p = maximal_packing(g.instance, 4);
    auto res = certify_no_improvement(g.instance, p, {4, 3, false}, nullptr, 2);
    CHECK(res.budget_exceeded);
    CHECK(!res.certified);
}
