#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "kcover/instance.hpp"

namespace kcover {

struct GeneratedInstance {
    Instance instance;
    std::optional<Cover> known_opt;
    std::optional<Packing> intended_packing;
    std::map<std::string, std::string> meta;  // family, parameters, seed, retries, opt
};

// Example-1 unit: 16 O-sets pinned by A_1..A_7, m blocking 4-sets whose
// unpacked elements are reachable only through 2-sets into their O partners.
// The A-side covering of the blocking sets uses three staggered rounds of
// stride-4 windows so that no p <= 5 replacement can free whole blocking sets;
// m mod 4 trailing blockers are packed whole to keep the element count
// divisible by 4. Requires m >= 13.
GeneratedInstance gen_unit_u(int m);

// Appendix-7.2 family: n_units copies of the unit whose 2-level sets are
// threaded into blocker-anchored chains of cross 2-sets, assignment and order
// seeded. Re-samples until the intended packing certifies improvement-free
// for the restricted algorithm at parameter s. Requires m_blockers >= 8,
// divisible by 4, and at most 24 * n_units.
GeneratedInstance gen_tight_r4sp(int n_units, int m_blockers, int s, uint64_t seed,
                                 int max_retries = 32);

// Appendix-9.3 tight instance for PRPSLI with k = 4: the 7.2 family sized so
// a `frac` fraction of the optimum is 3-covered, plus cross 3-sets over the
// 1-level residuals and an element numbering that steers the deterministic
// greedy phases onto the adversarial run. `scale` is the number of optimal
// sets. k >= 5 is rejected: those families need the unrestricted-packing
// tight example, which is out of scope here.
GeneratedInstance gen_tight_prpsli(int k, long long frac_num, long long frac_den, int scale,
                                   uint64_t seed = 1);

// Seeded random instance; singleton sets are added for any uncovered element.
GeneratedInstance gen_random(int n, int k, int m_sets, double density, uint64_t seed);

// Random instance built around a hidden perfect partition into k-sets
// (returned as known_opt) plus extra random sets. Used by the structural
// test suites that need an optimal packing.
GeneratedInstance gen_random_partitioned(int groups, int k, int extra_sets, double density,
                                         uint64_t seed);

// Canonical serialization with the sidecar metadata block.
std::string serialize_generated(const GeneratedInstance& g);

}  // namespace kcover
