#include <doctest.h>

#include "kcover/frlp.hpp"

using namespace kcover;

TEST_CASE("rational parsing and formatting") {
    CHECK(parse_rational("3/4") == Rational(3) / 4);
    CHECK(parse_rational("0.125") == Rational(1) / 8);
    CHECK(parse_rational("1e-7") == Rational(1) / 10000000);
    CHECK(parse_rational("2.5e-3") == Rational(1) / 400);
    CHECK(format_rational(Rational(28) / 15, 4) == "1.8667");
    CHECK(format_rational(Rational(73) / 48, 4) == "1.5208");
    CHECK(format_rational(Rational(26) / 15, 4) == "1.7333");
}

TEST_CASE("closed-form ratios") {
    CHECK(rho_closed_form(3, 0) == Rational(4) / 3);
    CHECK(rho_closed_form(4, 0) == Rational(73) / 48);
    CHECK(rho_closed_form(5, 0) == Rational(26) / 15);
    CHECK(rho_closed_form(6, 0) == Rational(28) / 15);
    CHECK(rho_closed_form(7, 0) == Rational(212) / 105);  // 2/7 + 2/5 + 1/3 + 1
}

TEST_CASE("ratio table matches the published column, k=20 flagged") {
    Rational eps = parse_rational("1e-7");
    auto rows = ratio_table({3, 4, 5, 6, 7, 8, 9, 10, 20, 21, 50, 75, 100}, eps);
    for (const auto& row : rows) {
        if (row.k == 20) {
            CHECK(row.flagged);
            CHECK(row.rendered == "2.9805");
        } else {
            CHECK(!row.flagged);
        }
    }
}

TEST_CASE("lp model dimensions") {
    LpModel m4 = build_lp(4, 0);
    CHECK(m4.num_vars == 8);  // b3*, b4*, a1
    CHECK(m4.rows.size() == 2 + 1 + 2);
    LpModel m6 = build_lp(6, parse_rational("1e-7"));
    CHECK(m6.num_vars == 3 + 4 + 5 + 6 + 1);
    int ones_rows = 0;
    for (auto [tag, i] : m6.row_tags) ones_rows += tag == 'o';
    CHECK(ones_rows == 4);  // i = 3..6
    // all-zero point is feasible with objective 0
    LpSolution sol = solve_lp(m4);
    CHECK(sol.optimum >= 0);
}

TEST_CASE("lp optimum: exact small cases") {
    CHECK(solve_lp(build_lp(4, 0)).optimum == Rational(73) / 48);
    CHECK(solve_lp(build_lp(5, 0)).optimum == Rational(26) / 15);
}

TEST_CASE("dual certificate: k=4 matches the paper's numbers") {
    DualCert c = dual_certificate(4, 0);
    CHECK(c.beta[0] == Rational(1) / 3);
    CHECK(c.beta[1] == Rational(19) / 16);
    CHECK(c.objective == Rational(73) / 48);
    DualCheck chk = check_dual(build_lp(4, 0), c);
    CHECK(chk.feasible);
}

TEST_CASE("dual certificate: k=5 and k=7") {
    Rational eps = parse_rational("1e-9");
    DualCert c5 = dual_certificate(5, eps);
    CHECK(c5.objective == Rational(26) / 15);
    CHECK(check_dual(build_lp(5, eps), c5).feasible);

    DualCert c7 = dual_certificate(7, eps);
    Rational target = Rational(2) / 7 + Rational(2) / 5 + Rational(1) / 3 + 1;
    Rational diff = c7.objective - target;
    if (diff < 0) diff = -diff;
    CHECK(diff <= Rational(1) / 1000000);
    CHECK(check_dual(build_lp(7, eps), c7).feasible);
}

TEST_CASE("weak duality holds exactly for k up to 10") {
    Rational eps = parse_rational("1e-7");
    for (int k = 4; k <= 10; ++k) {
        LpModel m = build_lp(k, eps);
        LpSolution sol = solve_lp(m);
        DualCert cert = dual_certificate(k, eps);
        CHECK(check_dual(m, cert).feasible);
        CHECK(sol.optimum <= cert.objective);
    }
}

TEST_CASE("certificate stays within k/5 eps of the closed form") {
    Rational eps = parse_rational("1e-7");
    for (int k = 4; k <= 30; ++k) {
        DualCert cert = dual_certificate(k, eps);
        Rational diff = cert.objective - rho_closed_form(k, eps);
        if (diff < 0) diff = -diff;
        CHECK(diff <= Rational(k) / 5 * eps);
    }
}

TEST_CASE("lp rejects bad parameters") {
    CHECK_THROWS(build_lp(3, 0));
    CHECK_THROWS(build_lp(4, Rational(1)));
    CHECK_THROWS(dual_certificate(5, 0));
}
