#include <doctest.h>

#include "kcover/generators.hpp"
#include "kcover/oracle.hpp"
#include "kcover/prpsli.hpp"

using namespace kcover;

TEST_CASE("prpsli: perfect partition solves at ratio one") {
    Instance inst = parse_instance_text("p setcover 12 3 4\ns 1 2 3 4\ns 5 6 7 8\ns 9 10 11 12\n");
    PipelineConfig cfg;
    cfg.k = 4;
    auto [cover, rep] = prpsli_solve(inst, cfg);
    CHECK(rep.stats.total == 3);
    CHECK(rep.stats.ones == 0);
    validate_cover(inst, cover);
}

TEST_CASE("prpsli: config validation") {
    Instance inst = parse_instance_text("p setcover 4 1 4\ns 1 2 3 4\n");
    PipelineConfig cfg;
    cfg.k = 5;
    CHECK_THROWS_AS(prpsli_solve(inst, cfg), DomainError);
    cfg.k = 4;
    cfg.eps = {3, 2};
    CHECK_THROWS_AS(prpsli_solve(inst, cfg), DomainError);
}

TEST_CASE("prpsli: default improvement budgets") {
    Frac eps{1, 8};
    CHECK(default_phase_s(6, eps) == 3);   // ceil(16/6)
    CHECK(default_phase_s(5, eps) == 4);   // ceil(16/5)
    CHECK(default_phase_s(4, eps) == 3);   // max(3, ceil(log_4 8))
    CHECK(default_phase_s(7, eps) == 3);
    CHECK(default_phase_s(7, Frac{1, 100000}) == 6);  // 7^6 >= 1e5
    CHECK(default_phase_s(5, Frac{1, 1000}) == 400);
}

TEST_CASE("prpsli: phase accounting on random instances") {
    for (uint64_t seed = 1; seed <= 15; ++seed) {
        int k = 4 + int(seed % 2);
        auto g = gen_random(12 + int(seed % 4), k, 26, 0.6, seed * 313);
        PipelineConfig cfg;
        cfg.k = k;
        auto [cover, rep] = prpsli_solve(g.instance, cfg);
        CoverStats st = validate_cover(g.instance, cover);
        CHECK(st.total == rep.stats.total);
        // packing phases cover exactly i elements per chosen set
        int prev_uncovered = g.instance.n;
        for (const auto& ps : rep.phases) {
            CHECK(ps.uncovered_before == prev_uncovered);
            if (ps.i > 3) prev_uncovered -= ps.i * ps.sets_chosen;
            else prev_uncovered = 0;
        }
        // oracle dominance
        auto oracle = min_cover_exact(g.instance);
        CHECK(rep.stats.total >= oracle.b);
    }
}

TEST_CASE("prpsli: restricted phases never raise the gate across commits") {
    auto g = gen_random(15, 5, 32, 0.7, 77);
    PipelineConfig cfg;
    cfg.k = 5;
    auto [cover, rep] = prpsli_solve(g.instance, cfg);
    validate_cover(g.instance, cover);
    for (const auto& ps : rep.phases)
        for (auto [before, after] : ps.gate_trace) CHECK(after <= before);
}

TEST_CASE("prpsli: phase-6 restriction switch") {
    auto g = gen_random(14, 6, 30, 0.6, 123);
    PipelineConfig cfg;
    cfg.k = 6;
    cfg.restrict_phase6 = Phase6Restrict::Auto;  // even k <= 12: on
    auto [cov_a, rep_a] = prpsli_solve(g.instance, cfg);
    CHECK(rep_a.phases[0].restricted);  // phase 6 comes first for k = 6
    cfg.restrict_phase6 = Phase6Restrict::Off;
    auto [cov_b, rep_b] = prpsli_solve(g.instance, cfg);
    CHECK(!rep_b.phases[0].restricted);
    validate_cover(g.instance, cov_a);
    validate_cover(g.instance, cov_b);
}

TEST_CASE("prpsli: report renders both formats") {
    Instance inst = parse_instance_text("p setcover 12 3 4\ns 1 2 3 4\ns 5 6 7 8\ns 9 10 11 12\n");
    PipelineConfig cfg;
    cfg.k = 4;
    auto [cover, rep] = prpsli_solve(inst, cfg);
    (void)cover;
    std::string human = report_human(rep);
    std::string kv = report_kv(rep);
    CHECK(human.find("semi-local") != std::string::npos);
    CHECK(kv.find("total=3") != std::string::npos);
    CHECK(kv.find("phase.4.chosen=3") != std::string::npos);
}
