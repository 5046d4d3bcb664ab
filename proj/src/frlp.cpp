#include "kcover/frlp.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace kcover {

Rational parse_rational(const std::string& text) {
    auto fail = [&] { throw std::runtime_error("cannot parse rational: '" + text + "'"); };
    if (text.empty()) fail();
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Rational num(boost::multiprecision::cpp_int(text.substr(0, slash)));
        boost::multiprecision::cpp_int den(text.substr(slash + 1));
        if (den == 0) fail();
        return num / Rational(den);
    }
    std::string mantissa = text;
    long long exp10 = 0;
    auto e = text.find_first_of("eE");
    if (e != std::string::npos) {
        mantissa = text.substr(0, e);
        exp10 = std::stoll(text.substr(e + 1));
    }
    bool neg = false;
    if (!mantissa.empty() && (mantissa[0] == '+' || mantissa[0] == '-')) {
        neg = mantissa[0] == '-';
        mantissa = mantissa.substr(1);
    }
    auto dot = mantissa.find('.');
    std::string digits = mantissa;
    if (dot != std::string::npos) {
        digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
        exp10 -= (long long)(mantissa.size() - dot - 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) fail();
    // strip leading zeros: cpp_int would read "0125" as octal
    size_t nz = digits.find_first_not_of('0');
    digits = nz == std::string::npos ? "0" : digits.substr(nz);
    Rational r{boost::multiprecision::cpp_int(digits)};
    boost::multiprecision::cpp_int pow = 1;
    for (long long i = 0; i < std::llabs(exp10); ++i) pow *= 10;
    if (exp10 >= 0) r *= Rational(pow);
    else r /= Rational(pow);
    return neg ? -r : r;
}

std::string format_rational(const Rational& r, int decimals) {
    boost::multiprecision::cpp_int scale = 1;
    for (int i = 0; i < decimals; ++i) scale *= 10;
    Rational scaled = r * Rational(scale);
    boost::multiprecision::cpp_int twice = numerator(scaled) * 2 + denominator(scaled) *
                                           (numerator(scaled) >= 0 ? 1 : -1);
    boost::multiprecision::cpp_int rounded = twice / (denominator(scaled) * 2);
    bool neg = rounded < 0;
    if (neg) rounded = -rounded;
    std::string digits = rounded.str();
    while ((int)digits.size() <= decimals) digits = "0" + digits;
    std::string out = digits.substr(0, digits.size() - size_t(decimals)) + "." +
                      digits.substr(digits.size() - size_t(decimals));
    return neg ? "-" + out : out;
}

int LpModel::var_b(int i, int j) const {
    // b_{3,*} first, then b_{4,*}, ...; within block j = 1..i
    int offset = 0;
    for (int t = 3; t < i; ++t) offset += t;
    return offset + (j - 1);
}

LpModel build_lp(int k, const Rational& eps) {
    if (k < 4) throw std::runtime_error("build_lp requires k >= 4");
    if (eps < 0 || eps >= Rational(2) / k) throw std::runtime_error("eps must lie in [0, 2/k)");
    LpModel m;
    m.k = k;
    m.eps = eps;
    for (int i = 3; i <= k; ++i)
        for (int j = 1; j <= i; ++j) m.var_names.push_back("b(" + std::to_string(i) + "," + std::to_string(j) + ")");
    m.var_names.push_back("a1");
    m.num_vars = int(m.var_names.size());

    m.objective.assign(size_t(m.num_vars), Rational(0));
    for (int j = 1; j <= k; ++j) m.objective[size_t(m.var_b(k, j))] = Rational(j) / k;
    for (int i = 4; i <= k - 1; ++i)
        for (int j = 1; j <= i; ++j)
            m.objective[size_t(m.var_b(i, j))] = Rational(j) / (i * (i + 1));
    m.objective[size_t(m.var_b(3, 1))] += Rational(5) / 12;
    m.objective[size_t(m.var_b(3, 2))] += Rational(1) / 2;
    m.objective[size_t(m.var_b(3, 3))] += Rational(7) / 12;
    m.objective[size_t(m.var_a1())] += Rational(1) / 3;

    auto add_row = [&](char tag, int i) -> std::vector<Rational>& {
        m.rows.emplace_back(size_t(m.num_vars), Rational(0));
        m.row_tags.emplace_back(tag, i);
        return m.rows.back();
    };
    // budget rows: sum_j b_{i,j} <= 1
    for (int i = 3; i <= k; ++i) {
        auto& row = add_row('b', i);
        for (int j = 1; j <= i; ++j) row[size_t(m.var_b(i, j))] = 1;
        m.rhs.emplace_back(1);
    }
    // packing rows: sum_j j b_{i-1,j} - sum_{j<i} j b_{i,j} - i(1-rho_i) b_{i,i} <= 0
    for (int i = 4; i <= k; ++i) {
        Rational rho_i = i == 4 ? Rational(7) / 16 : Rational(2) / i - eps;
        auto& row = add_row('p', i);
        for (int j = 1; j <= i - 1; ++j) {
            row[size_t(m.var_b(i - 1, j))] += j;
            row[size_t(m.var_b(i, j))] -= j;
        }
        row[size_t(m.var_b(i, i))] -= Rational(i) * (1 - rho_i);
        m.rhs.emplace_back(0);
    }
    // 1-set rows: a_1 - b_{i,1} <= 0 for i = 3..min(6,k)
    for (int i = 3; i <= std::min(6, k); ++i) {
        auto& row = add_row('o', i);
        row[size_t(m.var_a1())] = 1;
        row[size_t(m.var_b(i, 1))] = -1;
        m.rhs.emplace_back(0);
    }
    return m;
}

LpSolution solve_lp(const LpModel& m) {
    int n = m.num_vars, rows = int(m.rows.size());
    // tableau: rows x (n + rows + 1); basis starts as the slacks
    std::vector<std::vector<Rational>> tab(size_t(rows), std::vector<Rational>(size_t(n + rows + 1), Rational(0)));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < n; ++c) tab[size_t(r)][size_t(c)] = m.rows[size_t(r)][size_t(c)];
        tab[size_t(r)][size_t(n + r)] = 1;
        tab[size_t(r)].back() = m.rhs[size_t(r)];
    }
    std::vector<Rational> cost(size_t(n + rows), Rational(0));
    for (int c = 0; c < n; ++c) cost[size_t(c)] = m.objective[size_t(c)];
    std::vector<int> basis(static_cast<size_t>(rows));
    for (int r = 0; r < rows; ++r) basis[size_t(r)] = n + r;

    std::vector<Rational> reduced = cost;  // reduced costs (z_j - c_j negated form)
    Rational objective = 0;
    int pivots = 0;
    for (;;) {
        // Bland: entering = smallest index with positive reduced cost
        int enter = -1;
        for (int c = 0; c < n + rows; ++c)
            if (reduced[size_t(c)] > 0) {
                enter = c;
                break;
            }
        if (enter < 0) break;
        int leave = -1;
        Rational best_ratio = 0;
        for (int r = 0; r < rows; ++r) {
            const Rational& a = tab[size_t(r)][size_t(enter)];
            if (a <= 0) continue;
            Rational ratio = tab[size_t(r)].back() / a;
            if (leave < 0 || ratio < best_ratio ||
                (ratio == best_ratio && basis[size_t(r)] < basis[size_t(leave)])) {
                leave = r;
                best_ratio = ratio;
            }
        }
        if (leave < 0) throw std::runtime_error("LP unbounded (internal error)");
        // pivot
        ++pivots;
        Rational pv = tab[size_t(leave)][size_t(enter)];
        for (auto& v : tab[size_t(leave)]) v /= pv;
        for (int r = 0; r < rows; ++r) {
            if (r == leave) continue;
            Rational f = tab[size_t(r)][size_t(enter)];
            if (f == 0) continue;
            for (size_t c = 0; c < tab[size_t(r)].size(); ++c)
                tab[size_t(r)][size_t(c)] -= f * tab[size_t(leave)][size_t(c)];
        }
        Rational f = reduced[size_t(enter)];
        for (int c = 0; c < n + rows; ++c)
            reduced[size_t(c)] -= f * tab[size_t(leave)][size_t(c)];
        objective += f * tab[size_t(leave)].back();
        basis[size_t(leave)] = enter;
    }

    LpSolution sol;
    sol.pivots = pivots;
    sol.x.assign(size_t(n), Rational(0));
    for (int r = 0; r < rows; ++r)
        if (basis[size_t(r)] < n) sol.x[size_t(basis[size_t(r)])] = tab[size_t(r)].back();
    sol.optimum = 0;
    for (int c = 0; c < n; ++c) sol.optimum += m.objective[size_t(c)] * sol.x[size_t(c)];
    // exact verification of the witness
    for (int r = 0; r < rows; ++r) {
        Rational lhs = 0;
        for (int c = 0; c < n; ++c) lhs += m.rows[size_t(r)][size_t(c)] * sol.x[size_t(c)];
        if (lhs > m.rhs[size_t(r)]) throw std::runtime_error("simplex witness infeasible (internal error)");
    }
    for (const auto& v : sol.x)
        if (v < 0) throw std::runtime_error("simplex witness negative (internal error)");
    if (sol.optimum != objective) throw std::runtime_error("simplex objective mismatch (internal error)");
    return sol;
}

DualCert dual_certificate(int k, const Rational& eps) {
    if (k < 4) throw std::runtime_error("dual_certificate requires k >= 4");
    if (k >= 5 && eps <= 0)
        throw std::runtime_error("dual_certificate requires eps > 0 for k >= 5");
    DualCert c;
    c.k = k;
    c.eps = eps;
    // index helpers: beta[i-3], gamma[i-4], delta[i-3]
    c.beta.assign(size_t(k - 2), Rational(0));
    c.gamma.assign(size_t(std::max(0, k - 3)), Rational(0));
    c.delta.assign(size_t(std::min(6, k) - 2), Rational(0));
    auto beta = [&](int i) -> Rational& { return c.beta[size_t(i - 3)]; };
    auto gamma = [&](int i) -> Rational& { return c.gamma[size_t(i - 4)]; };
    auto delta = [&](int i) -> Rational& { return c.delta[size_t(i - 3)]; };

    beta(3) = Rational(1) / 3;
    if (k == 4) {
        gamma(4) = Rational(1) / 12;
        delta(3) = 0;
        delta(4) = Rational(1) / 3;
        beta(4) = 1 + gamma(4) * Rational(9) / 4;
    } else if (k == 5) {
        gamma(4) = Rational(1) / 12;
        gamma(5) = 0;
        beta(4) = Rational(3) / 20 + 3 * gamma(4);
        beta(5) = 1;
        delta(3) = 0;
        delta(4) = Rational(1) / 10 + 2 * gamma(4);
        delta(5) = Rational(1) / 3;
    } else {
        gamma(4) = Rational(1) / 12;
        gamma(k) = Rational(1) / ((k - 1) * k);
        gamma(k - 1) = 0;
        for (int i = k - 2; i >= 6; --i)
            gamma(i) = gamma(i + 2) + Rational(2) / (i * (i + 1) * (i + 2));
        gamma(5) = Rational(1) / 30 - gamma(6);
        delta(3) = 0;
        delta(4) = 2 * gamma(4) - 2 * gamma(5) + Rational(1) / 10;
        delta(5) = 2 * gamma(5) - 4 * gamma(6) + Rational(2) / 15;
        delta(6) = k % 2 == 0 ? Rational(1) / 15 : Rational(0);
        beta(4) = Rational(3) / 20 + 3 * gamma(4) - 3 * gamma(5);
        beta(5) = Rational(1) / 6 + (3 + 5 * eps) * gamma(5) - 5 * gamma(6);
        for (int i = 6; i <= k - 1; ++i)
            beta(i) = Rational(1) / (i + 1) - i * gamma(i + 1) + (i - 2 + i * eps) * gamma(i);
        beta(k) = 1 + (k - 2 + k * eps) * gamma(k);
    }
    c.objective = 0;
    for (const auto& b : c.beta) c.objective += b;
    return c;
}

DualCheck check_dual(const LpModel& m, const DualCert& cert) {
    DualCheck out;
    out.objective = cert.objective;
    std::vector<Rational> y(m.rows.size(), Rational(0));
    for (size_t r = 0; r < m.rows.size(); ++r) {
        auto [tag, i] = m.row_tags[r];
        if (tag == 'b') y[r] = cert.beta[size_t(i - 3)];
        else if (tag == 'p') y[r] = cert.gamma[size_t(i - 4)];
        else y[r] = cert.delta[size_t(i - 3)];
        if (y[r] < 0)
            out.violations.push_back("negative multiplier on row " + std::string(1, tag) +
                                     std::to_string(i));
    }
    for (int col = 0; col < m.num_vars; ++col) {
        Rational lhs = 0;
        for (size_t r = 0; r < m.rows.size(); ++r)
            if (m.rows[r][size_t(col)] != 0) lhs += y[r] * m.rows[r][size_t(col)];
        if (lhs < m.objective[size_t(col)]) {
            std::ostringstream msg;
            msg << "column " << m.var_names[size_t(col)] << " slack "
                << format_rational(lhs - m.objective[size_t(col)], 12);
            out.violations.push_back(msg.str());
        }
    }
    // dual objective equals sum_r y_r * rhs_r, which is the beta sum here
    Rational dual_obj = 0;
    for (size_t r = 0; r < m.rows.size(); ++r) dual_obj += y[r] * m.rhs[r];
    if (dual_obj != cert.objective)
        out.violations.push_back("objective mismatch against rhs weights");
    out.feasible = out.violations.empty();
    return out;
}

Rational rho_closed_form(int k, const Rational& eps) {
    // The small cases carry no eps term: the phase-4 ratio 7/16 is exact.
    if (k < 3) throw std::runtime_error("rho_closed_form requires k >= 3");
    if (k == 3) return Rational(4) / 3;
    if (k == 4) return Rational(73) / 48;
    if (k == 5) return Rational(26) / 15;
    Rational r = 1 + Rational(1) / 3;
    if (k % 2 == 1) {
        for (int j = 5; j <= k; j += 2) r += Rational(2) / j;
    } else {
        for (int j = 5; j <= k - 3; j += 2) r += Rational(2) / j;
        r += Rational(1) / (k - 1) + Rational(2) / k;
    }
    return r + eps;
}

namespace {

const std::map<int, const char*> kPublishedTable = {
    {3, "1.3333"}, {4, "1.5208"}, {5, "1.7333"}, {6, "1.8667"}, {7, "2.0190"},
    {8, "2.1262"}, {9, "2.2413"}, {10, "2.3302"}, {20, "2.9779"}, {21, "3.0284"},
    {50, "3.8683"}, {75, "4.2678"}, {100, "4.5520"},
};

}  // namespace

std::vector<TableRow> ratio_table(const std::vector<int>& ks, const Rational& eps) {
    std::vector<TableRow> rows;
    for (int k : ks) {
        TableRow row;
        row.k = k;
        row.rho = rho_closed_form(k, eps);
        row.rendered = format_rational(row.rho, 4);
        auto it = kPublishedTable.find(k);
        if (it != kPublishedTable.end()) {
            Rational published = parse_rational(it->second);
            Rational diff = row.rho - published;
            if (diff < 0) diff = -diff;
            if (diff > Rational(1) / 1000) {
                row.flagged = true;
                row.note = std::string("published table lists ") + it->second;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string emit_table(const std::vector<int>& ks, const Rational& eps) {
    std::ostringstream out;
    out << "  k   PRPSLI\n";
    for (const auto& row : ratio_table(ks, eps)) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%3d   %s", row.k, row.rendered.c_str());
        out << buf;
        if (row.flagged) out << "   [" << row.note << "]";
        out << '\n';
    }
    return out.str();
}

}  // namespace kcover
