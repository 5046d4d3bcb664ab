#include "kcover/prpsli.hpp"

#include <algorithm>
#include <sstream>

#include "kcover/semilocal.hpp"

namespace kcover {

int default_phase_s(int i, Frac eps) {
    if (eps.num <= 0 || eps.den <= 0) throw DomainError("epsilon must be positive");
    if (i == 5 || i == 6) {
        // ceil(2 * den / (i * num))
        long long num = 2 * eps.den, den = (long long)i * eps.num;
        return int((num + den - 1) / den);
    }
    // smallest t with i^t >= den/num, at least 3
    long long target = (eps.den + eps.num - 1) / eps.num;
    long long pow = 1;
    int t = 0;
    while (pow < target) {
        pow *= i;
        ++t;
        if (t > 62) break;
    }
    return std::max(3, t);
}

std::pair<Cover, SolveReport> prpsli_solve(const Instance& inst, const PipelineConfig& cfg) {
    if (cfg.k != inst.k) throw DomainError("config k does not match the instance");
    if (cfg.k < 3) throw DomainError("k must be at least 3");
    if (cfg.eps.num <= 0 || cfg.eps.den <= 0 || cfg.eps.num >= cfg.eps.den)
        throw DomainError("epsilon must lie in (0, 1)");

    SolveReport rep;
    rep.k = cfg.k;
    rep.n = inst.n;
    Cover cover;
    Bitset residual = inst.full_universe();
    SemiLocal sem(inst);
    OnesGate gate = [&sem](const Bitset& u) { return sem.ones(u); };

    auto phase_s = [&](int i) {
        auto it = cfg.s_overrides.find(i);
        return it != cfg.s_overrides.end() ? it->second : default_phase_s(i, cfg.eps);
    };
    auto run_phase = [&](int i, bool restricted) {
        PhaseStats ps;
        ps.i = i;
        ps.restricted = restricted;
        ps.uncovered_before = residual.count();
        ps.s_used = phase_s(i);
        Packing p = maximal_packing_on(inst, i, residual);
        ImproveLog log;
        ImprovementParams params{i, ps.s_used, restricted};
        p = improve_packing_on(inst, residual, std::move(p), params, restricted ? gate : OnesGate{},
                               &log);
        ps.commits = int(log.commits.size());
        for (const auto& c : log.commits) ps.gate_trace.emplace_back(c.gate_before, c.gate_after);
        ps.sets_chosen = int(p.members.size());
        residual -= p.covered(inst.n);
        for (auto& m : p.members) cover.members.push_back(std::move(m));
        rep.phases.push_back(std::move(ps));
    };

    for (int i = cfg.k; i >= 7; --i) run_phase(i, false);

    rep.baseline_ones = sem.ones(residual);
    bool phase6_restricted = cfg.restrict_phase6 == Phase6Restrict::On ||
                             (cfg.restrict_phase6 == Phase6Restrict::Auto &&
                              cfg.k % 2 == 0 && cfg.k <= 12);
    for (int i = std::min(6, cfg.k); i >= 4; --i)
        run_phase(i, i == 6 ? phase6_restricted : true);

    {
        PhaseStats ps;
        ps.i = 3;
        ps.restricted = false;
        ps.uncovered_before = residual.count();
        ps.s_used = 2;
        SemiLocalResult res = sem.solve(residual);
        ps.sets_chosen = int(res.cover.members.size());
        ps.commits = res.iterations;
        for (auto& m : res.cover.members) cover.members.push_back(std::move(m));
        residual = Bitset(inst.n);
        rep.phases.push_back(std::move(ps));
    }

    std::sort(cover.members.begin(), cover.members.end(), chosen_less);
    rep.stats = validate_cover(inst, cover);
    return {std::move(cover), std::move(rep)};
}

std::string report_human(const SolveReport& rep) {
    std::ostringstream out;
    out << "phase  mode          |U_i|  chosen  commits  s\n";
    for (const auto& ps : rep.phases) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%5d  %-12s %6d  %6d  %7d  %d\n", ps.i,
                      ps.i == 3 ? "semi-local" : (ps.restricted ? "restricted" : "unrestricted"),
                      ps.uncovered_before, ps.sets_chosen, ps.commits, ps.s_used);
        out << buf;
    }
    out << "baseline 1-sets at restricted entry: " << rep.baseline_ones << '\n';
    out << "cover: " << rep.stats.total << " sets, " << rep.stats.ones << " singletons\n";
    return out.str();
}

std::string report_kv(const SolveReport& rep) {
    std::ostringstream out;
    out << "k=" << rep.k << '\n' << "n=" << rep.n << '\n';
    out << "baseline_ones=" << rep.baseline_ones << '\n';
    for (const auto& ps : rep.phases) {
        out << "phase." << ps.i << ".mode="
            << (ps.i == 3 ? "semilocal" : (ps.restricted ? "restricted" : "unrestricted")) << '\n';
        out << "phase." << ps.i << ".uncovered=" << ps.uncovered_before << '\n';
        out << "phase." << ps.i << ".chosen=" << ps.sets_chosen << '\n';
        out << "phase." << ps.i << ".commits=" << ps.commits << '\n';
        out << "phase." << ps.i << ".s=" << ps.s_used << '\n';
        if (!ps.gate_trace.empty()) {
            out << "phase." << ps.i << ".gate=";
            for (size_t t = 0; t < ps.gate_trace.size(); ++t)
                out << (t ? "," : "") << ps.gate_trace[t].first << ">" << ps.gate_trace[t].second;
            out << '\n';
        }
    }
    out << "total=" << rep.stats.total << '\n';
    out << "ones=" << rep.stats.ones << '\n';
    return out.str();
}

}  // namespace kcover
