#include <doctest.h>

#include <sstream>

#include "kcover/generators.hpp"
#include "kcover/instance.hpp"

using namespace kcover;

TEST_CASE("parse: empty instance") {
    Instance inst = parse_instance_text("p setcover 0 0 4\n");
    CHECK(inst.n == 0);
    CHECK(inst.base_sets.empty());
}

TEST_CASE("parse: single partition set") {
    Instance inst = parse_instance_text("p setcover 4 1 4\ns 1 2 3 4\n");
    CHECK(inst.n == 4);
    REQUIRE(inst.base_sets.size() == 1);
    CHECK(inst.base_sets[0] == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("parse: element out of range names the line") {
    try {
        parse_instance_text("p setcover 4 1 4\ns 1 2 5 4\n");
        FAIL("expected a parse error");
    } catch (const DomainError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("out of range") != std::string::npos);
    }
}

TEST_CASE("parse: rejects malformed input") {
    CHECK_THROWS_AS(parse_instance_text("p setcover 4 1\ns 1\n"), DomainError);
    CHECK_THROWS_AS(parse_instance_text("p setcover 4 1 4\ns\n"), DomainError);
    CHECK_THROWS_AS(parse_instance_text("p setcover 4 1 4\ns 1 1\n"), DomainError);
    CHECK_THROWS_AS(parse_instance_text("p setcover 4 1 2\ns 1 2 3\n"), DomainError);
    CHECK_THROWS_AS(parse_instance_text("p setcover 4 1 4\ns 1 2\n"), DomainError);  // gap
    CHECK_THROWS_AS(parse_instance_text("p setcover 2 2 2\ns 1 2\ns 1 2\n"), DomainError);
}

TEST_CASE("validate_cover: subset closure and overlap") {
    Instance inst = parse_instance_text("p setcover 4 1 4\ns 1 2 3 4\n");
    Cover whole{{{0, {0, 1, 2, 3}}}};
    CoverStats st = validate_cover(inst, whole);
    CHECK(st.total == 1);
    CHECK(st.ones == 0);

    Cover split{{{0, {0, 1}}, {0, {2}}, {0, {3}}}};
    st = validate_cover(inst, split);
    CHECK(st.total == 3);
    CHECK(st.ones == 2);

    Cover overlap{{{0, {0, 1}}, {0, {1, 2, 3}}}};
    CHECK_THROWS_WITH_AS(validate_cover(inst, overlap), doctest::Contains("overlap"), DomainError);
    Cover gap{{{0, {0, 1}}}};
    CHECK_THROWS_WITH_AS(validate_cover(inst, gap), doctest::Contains("gap"), DomainError);
    Cover outside{{{0, {0, 1, 2, 3}}, {0, {4}}}};
    CHECK_THROWS_AS(validate_cover(inst, outside), DomainError);
}

TEST_CASE("round trip is bit exact") {
    auto g = gen_random(14, 4, 25, 0.7, 42);
    std::string once = serialize_instance(g.instance);
    Instance reparsed = parse_instance_text(once);
    CHECK(serialize_instance(reparsed) == once);
    CHECK(reparsed.base_sets == g.instance.base_sets);
}

TEST_CASE("induced subinstance") {
    Instance inst = parse_instance_text("p setcover 4 1 4\ns 1 2 3 4\n");
    SUBCASE("identity modulo reindexing") {
        Instance sub = induced_subinstance(inst, inst.full_universe(), 4);
        CHECK(sub.n == 4);
        REQUIRE(sub.base_sets.size() == 1);
        CHECK(sub.base_sets[0].size() == 4);
    }
    SUBCASE("restriction keeps the usable subsets") {
        Bitset some(4);
        some.set(0);
        some.set(2);
        Instance sub = induced_subinstance(inst, some, 3);
        REQUIRE(sub.base_sets.size() == 1);
        CHECK(sub.base_sets[0] == std::vector<int>{0, 1});
    }
    SUBCASE("oversize intersections split into max_size subsets") {
        Instance sub = induced_subinstance(inst, inst.full_universe(), 3);
        CHECK(sub.base_sets.size() == 4);  // the four 3-subsets
        for (const auto& s : sub.base_sets) CHECK(s.size() == 3);
    }
}

TEST_CASE("induced subinstance emits only sets inside the region") {
    auto g = gen_random(12, 4, 18, 0.5, 7);
    SplitMix64 rng(9);
    Bitset region(12);
    for (int e = 0; e < 12; ++e)
        if (rng.below(2)) region.set(e);
    Instance sub = induced_subinstance(g.instance, region, 3);
    int expected = region.count();
    CHECK(sub.n == expected);
    for (const auto& s : sub.base_sets) {
        CHECK(int(s.size()) <= 3);
        for (int e : s) CHECK(e < expected);
    }
}

TEST_CASE("cover file round trip") {
    Instance inst = parse_instance_text("p setcover 4 2 4\ns 1 2 3 4\ns 1 2\n");
    Cover c{{{0, {2, 3}}, {1, {0, 1}}}};
    std::string text = serialize_cover(inst, c);
    std::istringstream in(text);
    Cover back = parse_cover(inst, in);
    CHECK(back.members.size() == 2);
    CHECK(serialize_cover(inst, back) == text);
}
