#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "kcover/instance.hpp"

namespace kcover {

struct ImprovementParams {
    int i = 4;              // set size of the phase
    int s = 3;              // at most s sets replaced per improvement
    bool restricted = false;
};

// Returns the semi-local 1-set count for the uncovered set left by a
// tentative replacement. Must be deterministic per bitset.
using OnesGate = std::function<int(const Bitset& uncovered)>;

struct ImprovementWitness {
    std::vector<ChosenSet> removed;
    std::vector<ChosenSet> added;
};

struct CommitRecord {
    int removed = 0;
    int added = 0;
    int gate_before = -1;  // -1 when unrestricted
    int gate_after = -1;
};

struct ImproveLog {
    std::vector<CommitRecord> commits;
};

struct CertifyResult {
    bool certified = false;
    bool budget_exceeded = false;
    uint64_t nodes = 0;
    std::optional<ImprovementWitness> witness;
};

// Greedy maximal disjoint i-sets over canonical candidate order.
Packing maximal_packing(const Instance& inst, int i);
Packing maximal_packing_on(const Instance& inst, int i, const Bitset& region);

// Local search to a fixed point: replace p <= s members with p+1 disjoint
// i-sets (first improvement, canonical order, committed sets extended
// maximally). In restricted mode a replacement commits only when the gate
// value does not increase against the value immediately before it.
Packing improve_packing(const Instance& inst, Packing p, const ImprovementParams& params,
                        OnesGate gate = nullptr, ImproveLog* log = nullptr);
Packing improve_packing_on(const Instance& inst, const Bitset& region, Packing p,
                           const ImprovementParams& params, OnesGate gate = nullptr,
                           ImproveLog* log = nullptr);

// Exhaustive search for a committable improvement. True means fixed point;
// false carries the first witness in canonical order. A blown node budget is
// reported distinctly from both.
CertifyResult certify_no_improvement(const Instance& inst, const Packing& p,
                                     const ImprovementParams& params, OnesGate gate = nullptr,
                                     uint64_t node_cap = 50'000'000);
CertifyResult certify_no_improvement_on(const Instance& inst, const Bitset& region,
                                        const Packing& p, const ImprovementParams& params,
                                        OnesGate gate = nullptr, uint64_t node_cap = 50'000'000);

}  // namespace kcover
