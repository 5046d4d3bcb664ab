#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "kcover/instance.hpp"
#include "kcover/packing.hpp"

namespace kcover {

// Exact fraction for the epsilon parameter; kept out of big-rational land
// because only s_i derivations and reports need it here.
struct Frac {
    long long num = 1;
    long long den = 8;
};

enum class Phase6Restrict { Auto, On, Off };

struct PipelineConfig {
    int k = 4;
    Frac eps{1, 8};
    // Literal Algorithm-1 default is On; Auto applies the remark that the
    // phase-6 restriction matters only for even k <= 12.
    Phase6Restrict restrict_phase6 = Phase6Restrict::On;
    std::map<int, int> s_overrides;
    uint64_t seed = 0;
};

struct PhaseStats {
    int i = 0;
    bool restricted = false;
    int uncovered_before = 0;
    int sets_chosen = 0;
    int commits = 0;
    int s_used = 0;
    std::vector<std::pair<int, int>> gate_trace;  // (before, after) per commit
};

struct SolveReport {
    int k = 0;
    int n = 0;
    int baseline_ones = 0;  // semi-local 1-sets at restricted-block entry
    std::vector<PhaseStats> phases;
    CoverStats stats;
};

// Local-improvement budget per phase: ceil(2/(i*eps)) for i in {5,6}, else
// max(3, ceil(log_i(1/eps))).
int default_phase_s(int i, Frac eps);

std::pair<Cover, SolveReport> prpsli_solve(const Instance& inst, const PipelineConfig& cfg);

std::string report_human(const SolveReport& rep);
std::string report_kv(const SolveReport& rep);

}  // namespace kcover
