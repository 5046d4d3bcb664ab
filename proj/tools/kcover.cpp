#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "kcover/blocking.hpp"
#include "kcover/frlp.hpp"
#include "kcover/generators.hpp"
#include "kcover/instance.hpp"
#include "kcover/oracle.hpp"
#include "kcover/packing.hpp"
#include "kcover/prpsli.hpp"
#include "kcover/semilocal.hpp"

namespace {

using namespace kcover;

constexpr const char* kVersion = "0.1.0";

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open output file: " + path);
    out << data;
}

std::string hex64(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
    return buf;
}

struct Manifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    uint64_t seed = 0;
    std::string input_digest = "-", output_digest = "-";
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void emit() const {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        std::ostringstream out;
        out << "manifest command=" << command << " version=" << kVersion << " seed=" << seed;
        for (const auto& [key, val] : params) out << ' ' << key << '=' << val;
        out << " input_digest=" << input_digest << " output_digest=" << output_digest
            << " wall_ms=" << ms << '\n';
        std::cerr << out.str();
    }
};

std::optional<long long> meta_opt(const Instance& inst) {
    for (const auto& line : inst.comments) {
        auto pos = line.find("opt=");
        if (pos != std::string::npos) {
            try {
                return std::stoll(line.substr(pos + 4));
            } catch (...) {
            }
        }
    }
    return std::nullopt;
}

Frac parse_frac(const std::string& text) {
    Rational r = parse_rational(text);
    auto num = numerator(r), den = denominator(r);
    if (num <= 0 || den <= 0 || num > 1'000'000'000'000LL || den > 1'000'000'000'000LL)
        throw DomainError("epsilon out of range: " + text);
    return Frac{(long long)num, (long long)den};
}

Packing load_packing(const Instance& inst, const std::string& path, int i) {
    std::istringstream in(read_file(path));
    Cover c = parse_cover(inst, in);
    Packing p;
    p.size_class = i;
    p.members = c.members;
    validate_packing(inst, p);
    return p;
}

int cmd_solve(const std::string& input, const std::string& output, int k, const std::string& eps,
              uint64_t seed, const std::string& phase6, const std::vector<std::string>& s_phase,
              long long opt_override, Manifest& mf) {
    std::string text = read_file(input);
    mf.input_digest = hex64(fnv1a64(text.data(), text.size()));
    Instance inst = parse_instance_text(text);
    PipelineConfig cfg;
    cfg.k = k ? k : inst.k;
    cfg.eps = parse_frac(eps);
    cfg.seed = seed;
    if (phase6 == "auto") cfg.restrict_phase6 = Phase6Restrict::Auto;
    else if (phase6 == "off") cfg.restrict_phase6 = Phase6Restrict::Off;
    else cfg.restrict_phase6 = Phase6Restrict::On;
    for (const auto& sp : s_phase) {
        auto eq = sp.find('=');
        if (eq == std::string::npos) throw DomainError("--s-phase expects i=s");
        cfg.s_overrides[std::stoi(sp.substr(0, eq))] = std::stoi(sp.substr(eq + 1));
    }
    auto [cover, rep] = prpsli_solve(inst, cfg);
    std::ostringstream out;
    out << report_human(rep) << report_kv(rep);
    auto opt = opt_override > 0 ? std::optional<long long>(opt_override) : meta_opt(inst);
    if (opt && *opt > 0) {
        out << "opt=" << *opt << '\n';
        out << "ratio=" << format_rational(Rational(rep.stats.total) / Rational(*opt), 6) << '\n';
    }
    std::string cover_text = serialize_cover(inst, cover);
    if (!output.empty()) {
        write_file(output, cover_text);
        mf.output_digest = hex64(fnv1a64(cover_text.data(), cover_text.size()));
    } else {
        out << cover_text;
    }
    std::string s = out.str();
    if (output.empty()) mf.output_digest = hex64(fnv1a64(s.data(), s.size()));
    std::cout << s;
    return 0;
}

int cmd_oracle(const std::string& input, const std::string& objective, int i, int max_universe,
               Manifest& mf) {
    std::string text = read_file(input);
    mf.input_digest = hex64(fnv1a64(text.data(), text.size()));
    Instance inst = parse_instance_text(text);
    OracleBudget budget;
    budget.max_universe = max_universe;
    std::ostringstream out;
    if (objective == "cover") {
        auto res = min_cover_exact(inst, budget);
        out << "b=" << res.b << '\n'
            << "b1=" << res.b1 << '\n'
            << "b1_global=" << res.b1_global << '\n'
            << "simultaneous=" << (res.simultaneous ? "true" : "false") << '\n';
        out << serialize_cover(inst, res.witness_min);
    } else if (objective == "ones") {
        out << "min_ones=" << min_ones_exact(inst, budget) << '\n';
    } else if (objective == "packing") {
        auto res = max_packing_exact(inst, i, budget);
        out << "max_packing=" << res.size << '\n';
        Cover as_cover{res.witness.members};
        out << serialize_cover(inst, as_cover);
    } else {
        throw DomainError("unknown objective: " + objective);
    }
    std::string s = out.str();
    mf.output_digest = hex64(fnv1a64(s.data(), s.size()));
    std::cout << s;
    return 0;
}

int cmd_gen(const std::string& family, const std::string& output, int m, int n_units,
            int m_blockers, int s, uint64_t seed, const std::string& frac, int scale, int n,
            int sets, double density, int k, Manifest& mf) {
    GeneratedInstance g;
    if (family == "unit4") {
        g = gen_unit_u(m);
    } else if (family == "tight4") {
        g = gen_tight_r4sp(n_units, m_blockers, s, seed);
    } else if (family == "tight-k") {
        Frac f = parse_frac(frac);
        g = gen_tight_prpsli(k, f.num, f.den, scale, seed);
    } else if (family == "random") {
        g = gen_random(n, k, sets, density, seed);
    } else {
        throw DomainError("unknown family: " + family);
    }
    std::string text = serialize_generated(g);
    if (!output.empty()) write_file(output, text);
    else std::cout << text;
    mf.output_digest = hex64(fnv1a64(text.data(), text.size()));
    return 0;
}

int cmd_certify(const std::string& input, const std::string& packing_file, int i, int s,
                bool restricted, uint64_t node_cap, Manifest& mf) {
    std::string text = read_file(input);
    mf.input_digest = hex64(fnv1a64(text.data(), text.size()));
    Instance inst = parse_instance_text(text);
    Packing p = load_packing(inst, packing_file, i);
    SemiLocal sem(inst);
    ImprovementParams params{i, s, restricted};
    auto res = certify_no_improvement(inst, p, params,
                                      restricted ? OnesGate([&](const Bitset& u) { return sem.ones(u); })
                                                 : OnesGate{},
                                      node_cap);
    std::ostringstream out;
    if (res.budget_exceeded) {
        out << "result=budget-exceeded\nnodes=" << res.nodes << '\n';
    } else if (res.certified) {
        out << "result=certified\nnodes=" << res.nodes << '\n';
    } else {
        out << "result=improvable\nnodes=" << res.nodes << '\n';
        out << "removed=" << res.witness->removed.size() << " added=" << res.witness->added.size()
            << '\n';
        for (const auto& cs : res.witness->removed) {
            out << "out";
            for (int e : cs.elements) out << ' ' << e + 1;
            out << '\n';
        }
        for (const auto& cs : res.witness->added) {
            out << "in";
            for (int e : cs.elements) out << ' ' << e + 1;
            out << '\n';
        }
    }
    std::string str = out.str();
    mf.output_digest = hex64(fnv1a64(str.data(), str.size()));
    std::cout << str;
    return res.certified ? 0 : 1;
}

int cmd_verify_blocking(const std::string& input, const std::string& packing_file,
                        const std::string& optimal_file, int max_uncovered, Manifest& mf) {
    std::string text = read_file(input);
    mf.input_digest = hex64(fnv1a64(text.data(), text.size()));
    Instance inst = parse_instance_text(text);
    Packing a = load_packing(inst, packing_file, inst.k);
    std::istringstream opt_in(read_file(optimal_file));
    Cover opt = parse_cover(inst, opt_in);
    validate_cover(inst, opt);
    Extension ext = lexfirst_extension(inst, a, opt.members, max_uncovered);
    BlockingForest forest = build_forest(inst, ext, opt.members, a);
    StructureReport rep = verify_structure(forest);
    std::ostringstream out;
    out << "extension=(" << ext.n1 << ',' << ext.n2 << ',' << ext.n3 << ")\n";
    out << "nodes=" << forest.node_count << " edges=" << forest.edges.size() << '\n';
    out << "prop1_forest=" << (rep.forest ? "pass" : "fail") << '\n';
    out << "prop2_ones_in_top_level=" << (rep.ones_in_top_level ? "pass" : "fail") << '\n';
    out << "prop3_low_degree_unique=" << (rep.low_degree_unique ? "pass" : "fail") << '\n';
    out << "prop4_degree2_root=" << (rep.degree2_root ? "pass" : "fail") << '\n';
    if (!rep.all()) out << "detail=" << rep.detail << '\n';
    std::string s = out.str();
    mf.output_digest = hex64(fnv1a64(s.data(), s.size()));
    std::cout << s;
    return rep.all() ? 0 : 1;
}

int cmd_lp(const std::string& mode, int k, const std::string& eps_text,
           const std::string& k_list, Manifest& mf) {
    Rational eps = parse_rational(eps_text);
    std::ostringstream out;
    if (mode == "table") {
        std::vector<int> ks;
        std::stringstream ss(k_list);
        std::string tok;
        while (std::getline(ss, tok, ',')) if (!tok.empty()) ks.push_back(std::stoi(tok));
        if (ks.empty()) ks = {3, 4, 5, 6, 7, 8, 9, 10, 20, 21, 50, 75, 100};
        out << emit_table(ks, eps);
    } else {
        if (mode == "solve" || mode == "both") {
            LpModel m = build_lp(k, eps);
            LpSolution sol = solve_lp(m);
            out << "lp_optimum=" << sol.optimum << " (" << format_rational(sol.optimum, 6)
                << ") pivots=" << sol.pivots << '\n';
        }
        if (mode == "dual" || mode == "both") {
            LpModel m = build_lp(k, eps);
            DualCert cert = dual_certificate(k, eps);
            DualCheck chk = check_dual(m, cert);
            out << "dual_objective=" << cert.objective << " ("
                << format_rational(cert.objective, 6) << ")\n";
            out << "dual_feasible=" << (chk.feasible ? "true" : "false") << '\n';
            for (const auto& v : chk.violations) out << "violation: " << v << '\n';
            if (!chk.feasible) {
                std::string s = out.str();
                mf.output_digest = hex64(fnv1a64(s.data(), s.size()));
                std::cout << s;
                return 1;
            }
        }
        if (mode != "solve" && mode != "dual" && mode != "both")
            throw DomainError("unknown lp mode: " + mode);
    }
    std::string s = out.str();
    mf.output_digest = hex64(fnv1a64(s.data(), s.size()));
    std::cout << s;
    return 0;
}

int cmd_bench(const std::string& corpus, const std::string& eps, Manifest& mf) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    if (!corpus.empty() && fs::is_directory(corpus))
        for (const auto& entry : fs::directory_iterator(corpus))
            if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    struct Row {
        std::string name, line;
        int k = 0;
        double ratio = -1;
        bool failed = false;
    };
    std::vector<Row> rows(files.size());
    int threads = 1;
    if (const char* env = std::getenv("KCOVER_THREADS")) threads = std::max(1, atoi(env));
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t idx = next.fetch_add(1);
            if (idx >= files.size()) return;
            Row& row = rows[idx];
            row.name = files[idx].filename().string();
            try {
                Instance inst = parse_instance_text(read_file(files[idx].string()));
                PipelineConfig cfg;
                cfg.k = inst.k;
                cfg.eps = parse_frac(eps);
                auto [cover, rep] = prpsli_solve(inst, cfg);
                (void)cover;
                row.k = inst.k;
                std::ostringstream line;
                line << row.name << " k=" << inst.k << " total=" << rep.stats.total;
                if (auto opt = meta_opt(inst); opt && *opt > 0) {
                    row.ratio = double(rep.stats.total) / double(*opt);
                    line << " opt=" << *opt << " ratio="
                         << format_rational(Rational(rep.stats.total) / Rational(*opt), 6);
                }
                row.line = line.str();
            } catch (const std::exception& ex) {
                row.failed = true;
                row.line = row.name + " error=" + ex.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::ostringstream out;
    std::map<int, double> max_ratio;
    int failures = 0;
    for (const auto& row : rows) {
        out << row.line << '\n';
        failures += row.failed;
        if (row.ratio >= 0)
            max_ratio[row.k] = std::max(max_ratio[row.k], row.ratio);
    }
    for (auto [k, r] : max_ratio) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "max_ratio.k%d=%.6f\n", k, r);
        out << buf;
    }
    out << "instances=" << rows.size() << " failures=" << failures << '\n';
    std::string s = out.str();
    mf.output_digest = hex64(fnv1a64(s.data(), s.size()));
    std::cout << s;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"packing-based k-set cover toolkit"};
    app.require_subcommand(0, 1);

    // solve
    auto* solve = app.add_subcommand("solve", "run the packing-based pipeline");
    std::string in_file = "-", out_file, eps = "1/8", phase6 = "on";
    int k = 0;
    uint64_t seed = 0;
    long long opt_override = 0;
    std::vector<std::string> s_phase;
    solve->add_option("--input", in_file);
    solve->add_option("--output", out_file);
    solve->add_option("--k", k);
    solve->add_option("--eps", eps);
    solve->add_option("--seed", seed);
    solve->add_option("--restrict-phase6", phase6)->check(CLI::IsMember({"auto", "on", "off"}));
    solve->add_option("--s-phase", s_phase);
    solve->add_option("--opt", opt_override);

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact solvers at desk scale");
    std::string objective = "cover";
    int oi = 4, max_universe = 20;
    oracle->add_option("--input", in_file);
    oracle->add_option("--objective", objective)->check(CLI::IsMember({"cover", "ones", "packing"}));
    oracle->add_option("--i", oi);
    oracle->add_option("--max-universe", max_universe);

    // gen
    auto* gen = app.add_subcommand("gen", "instance generators");
    std::string family = "random", frac = "1/8";
    int m = 13, n_units = 10, m_blockers = 8, gs = 3, scale = 384, n = 12, sets = 20, gk = 4;
    double density = 0.6;
    gen->add_option("--family", family)->check(CLI::IsMember({"unit4", "tight4", "tight-k", "random"}));
    gen->add_option("--output", out_file);
    gen->add_option("--m", m);
    gen->add_option("--n-units", n_units);
    gen->add_option("--m-blockers", m_blockers);
    gen->add_option("--s", gs);
    gen->add_option("--seed", seed);
    gen->add_option("--frac", frac);
    gen->add_option("--scale", scale);
    gen->add_option("--n", n);
    gen->add_option("--sets", sets);
    gen->add_option("--density", density);
    gen->add_option("--k", gk);

    // certify
    auto* certify = app.add_subcommand("certify", "certify a packing improvement-free");
    std::string packing_file;
    bool restricted = false;
    uint64_t node_cap = 50'000'000;
    certify->add_option("--input", in_file);
    certify->add_option("--packing", packing_file)->required();
    certify->add_option("--i", oi);
    certify->add_option("--s", gs);
    certify->add_flag("--restricted", restricted);
    certify->add_option("--node-cap", node_cap);

    // verify-blocking
    auto* vb = app.add_subcommand("verify-blocking", "check the blocking propositions");
    std::string optimal_file;
    int max_uncovered = 18;
    vb->add_option("--input", in_file);
    vb->add_option("--packing", packing_file)->required();
    vb->add_option("--optimal", optimal_file)->required();
    vb->add_option("--max-uncovered", max_uncovered);

    // lp
    auto* lp = app.add_subcommand("lp", "factor-revealing LP and ratio table");
    std::string mode = "table", k_list;
    std::string lp_eps = "1e-7";
    int lpk = 4;
    lp->add_option("--mode", mode)->check(CLI::IsMember({"solve", "dual", "both", "table"}));
    lp->add_option("--k", lpk);
    lp->add_option("--eps", lp_eps);
    lp->add_option("--k-list", k_list);

    // bench
    auto* bench = app.add_subcommand("bench", "solve a corpus and aggregate ratios");
    std::string corpus;
    bench->add_option("--corpus", corpus)->required();
    bench->add_option("--eps", eps);

    CLI11_PARSE(app, argc, argv);
    if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return 2;
    }

    Manifest mf;
    mf.seed = seed;
    try {
        int rc = 0;
        if (solve->parsed()) {
            mf.command = "solve";
            mf.params = {{"k", std::to_string(k)}, {"eps", eps}, {"phase6", phase6}};
            rc = cmd_solve(in_file, out_file, k, eps, seed, phase6, s_phase, opt_override, mf);
        } else if (oracle->parsed()) {
            mf.command = "oracle";
            mf.params = {{"objective", objective}, {"i", std::to_string(oi)}};
            rc = cmd_oracle(in_file, objective, oi, max_universe, mf);
        } else if (gen->parsed()) {
            mf.command = "gen";
            mf.params = {{"family", family}};
            rc = cmd_gen(family, out_file, m, n_units, m_blockers, gs, seed, frac, scale, n, sets,
                         density, gk, mf);
        } else if (certify->parsed()) {
            mf.command = "certify";
            mf.params = {{"i", std::to_string(oi)}, {"s", std::to_string(gs)},
                         {"restricted", restricted ? "1" : "0"}};
            rc = cmd_certify(in_file, packing_file, oi, gs, restricted, node_cap, mf);
        } else if (vb->parsed()) {
            mf.command = "verify-blocking";
            rc = cmd_verify_blocking(in_file, packing_file, optimal_file, max_uncovered, mf);
        } else if (lp->parsed()) {
            mf.command = "lp";
            mf.params = {{"mode", mode}, {"eps", lp_eps}};
            rc = cmd_lp(mode, lpk, lp_eps, k_list, mf);
        } else if (bench->parsed()) {
            mf.command = "bench";
            mf.params = {{"corpus", corpus}};
            rc = cmd_bench(corpus, eps, mf);
        }
        mf.emit();
        return rc;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        mf.emit();
        return 1;
    }
}
