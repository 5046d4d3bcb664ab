#pragma once

#include <memory>
#include <unordered_map>

#include "kcover/instance.hpp"

namespace kcover {

struct SemiLocalResult {
    Cover cover;
    int ones = 0;
    int threes = 0;
    int iterations = 0;  // committed improvements
};

// Semi-local (2,1)-improvement solver for 3-Set Cover. Greedy maximal 3-sets,
// then improvements inserting up to 2 and deleting up to 1 three-set, accepted
// iff (total sets, 1-sets) drops lexicographically after re-matching the
// remaining elements with available 2-sets. Deterministic: canonical subset
// order, first improvement commits.
//
// The solver is bound to one instance and reuses its subset tables across
// regions, which is what the restricted-packing gate needs. Only subsets of
// size <= 3 of base sets are ever used, so the instance may contain larger
// base sets.
class SemiLocal {
public:
    explicit SemiLocal(const Instance& inst);
    ~SemiLocal();
    SemiLocal(const SemiLocal&) = delete;
    SemiLocal& operator=(const SemiLocal&) = delete;

    SemiLocalResult solve(const Bitset& region);
    // Memoized 1-set count of the deterministic run on `region`.
    int ones(const Bitset& region);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Spec surface: full-universe runs on a 3-set instance.
SemiLocalResult semilocal_cover(const Instance& inst);
int count_ones(const Instance& inst);

}  // namespace kcover
