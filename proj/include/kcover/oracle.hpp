#pragma once

#include <cstdint>

#include "kcover/instance.hpp"

namespace kcover {

struct OracleBudget {
    int max_universe = 20;
    uint64_t node_cap = 200'000'000;
};

struct CoverOracleResult {
    int b = 0;          // minimum cover size
    int b1 = 0;         // minimum 1-sets among minimum-size covers
    int b1_global = 0;  // minimum 1-sets over all covers
    bool simultaneous = false;  // some cover achieves (b, b1_global)
    Cover witness_min;          // achieves (b, b1)
};

// Exact bound-and-memoize solver over the subset-closed collection.
// Computes the full (size, ones) Pareto frontier, which is what Lemma-style
// simultaneity checks need.
CoverOracleResult min_cover_exact(const Instance& inst, const OracleBudget& budget = {});

struct PackingOracleResult {
    int size = 0;
    Packing witness;
};

// Exact maximum i-set packing by branch and bound.
PackingOracleResult max_packing_exact(const Instance& inst, int i, const OracleBudget& budget = {});

// Minimum possible number of 1-sets in any cover by sets of size <= 3.
int min_ones_exact(const Instance& inst, const OracleBudget& budget = {});

}  // namespace kcover
