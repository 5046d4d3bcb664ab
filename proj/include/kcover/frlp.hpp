#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace kcover {

using Rational = boost::multiprecision::cpp_rational;

// Parses "3", "3/4", "0.125" or "1e-7" into an exact rational.
Rational parse_rational(const std::string& text);
// Decimal rendering, round half away from zero.
std::string format_rational(const Rational& r, int decimals);

// The factor-revealing LP: maximize the per-phase cost of the pipeline's
// output over the composition ratios b_{i,j} of the phase optima and the
// ratio a_1 of final 1-sets, subject to the per-phase counting constraints
// with the packing ratios plugged in (7/16 for phase 4, 2/i - eps above).
struct LpModel {
    int k = 0;
    Rational eps;
    int num_vars = 0;  // b_{3,1..3}, ..., b_{k,1..k}, a_1
    std::vector<std::string> var_names;
    std::vector<Rational> objective;
    std::vector<std::vector<Rational>> rows;  // A x <= rhs, x >= 0
    std::vector<Rational> rhs;
    // row tags: ('b', i) budget row, ('p', i) phase-i packing row,
    // ('o', i) 1-set row a_1 <= b_{i,1}
    std::vector<std::pair<char, int>> row_tags;

    int var_b(int i, int j) const;  // i in 3..k, j in 1..i
    int var_a1() const { return num_vars - 1; }
};

LpModel build_lp(int k, const Rational& eps);

struct LpSolution {
    Rational optimum;
    std::vector<Rational> x;
    int pivots = 0;
};

// Exact rational simplex, Bland's rule. The model has rhs >= 0, so the slack
// basis is feasible and no phase-1 is needed.
LpSolution solve_lp(const LpModel& m);

// Dual assignment from the paper's closed-form recipe: beta_i on the budget
// rows, gamma_i on the packing rows, delta_i on the 1-set rows.
struct DualCert {
    int k = 0;
    Rational eps;
    std::vector<Rational> beta;   // beta[i], i in 3..k
    std::vector<Rational> gamma;  // gamma[i], i in 4..k
    std::vector<Rational> delta;  // delta[i], i in 3..min(6,k)
    Rational objective;           // sum of beta
};

DualCert dual_certificate(int k, const Rational& eps);

struct DualCheck {
    bool feasible = false;
    Rational objective;
    std::vector<std::string> violations;  // one line per violated constraint
};

// Mechanical feasibility check of the cert against the exact dual of `m`:
// for every primal column, sum_row y_row * A[row][col] >= c[col], all y >= 0.
DualCheck check_dual(const LpModel& m, const DualCert& cert);

// Closed-form rho_k: 4/3 for k=3, 73/48 for k=4, 26/15 for k=5, and the
// odd/even harmonic series beyond, plus eps.
Rational rho_closed_form(int k, const Rational& eps);

struct TableRow {
    int k;
    Rational rho;
    std::string rendered;   // 4 decimals
    bool flagged = false;   // differs from the published table by > 1e-3
    std::string note;
};

std::vector<TableRow> ratio_table(const std::vector<int>& ks, const Rational& eps);
std::string emit_table(const std::vector<int>& ks, const Rational& eps);

}  // namespace kcover
