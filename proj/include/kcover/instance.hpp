#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcover/bits.hpp"

namespace kcover {

// Thrown for malformed input files and contract violations that name a
// specific offender. `line` is 0 when no file position applies.
struct DomainError : std::runtime_error {
    int line;
    explicit DomainError(const std::string& msg, int line_no = 0)
        : std::runtime_error(line_no ? ("line " + std::to_string(line_no) + ": " + msg) : msg),
          line(line_no) {}
};

// A k-set cover instance. Elements are 0-based internally, 1-based in files.
// The collection is closed under subsets implicitly: any nonempty subset of a
// base set is usable, so solvers enumerate subsets instead of materializing
// them.
struct Instance {
    int n = 0;  // universe {0..n-1}
    int k = 0;  // maximum base set size
    std::vector<std::vector<int>> base_sets;  // each sorted ascending, distinct
    std::vector<int> base_lines;              // source line per base set
    std::vector<std::string> comments;        // leading '#' lines, verbatim
    std::vector<Bitset> base_bits;            // cache, parallel to base_sets

    void rebuild_bits();
    Bitset full_universe() const;
    // Throws DomainError if any structural invariant fails.
    void validate() const;
};

// One set actually used in a packing or cover: a subset of a named base set.
struct ChosenSet {
    int base_index = -1;
    std::vector<int> elements;  // sorted ascending, nonempty

    Bitset bits(int universe) const;
};

bool chosen_less(const ChosenSet& a, const ChosenSet& b);

struct Packing {
    int size_class = 0;  // every member has exactly this many elements
    std::vector<ChosenSet> members;

    Bitset covered(int universe) const;
};

struct Cover {
    std::vector<ChosenSet> members;
};

struct CoverStats {
    int total = 0;
    std::vector<int> by_size;  // index s -> number of s-sets
    int ones = 0;
};

// Canonical text format, see README. Errors carry the offending line number.
Instance parse_instance(std::istream& in);
Instance parse_instance_text(const std::string& text);
std::string serialize_instance(const Instance& inst);

// Cover file: `c <base_line> <e1> ...` lines plus a trailing `stats` line.
std::string serialize_cover(const Instance& inst, const Cover& c);
// Reads chosen-set lines against `inst` (stats line optional, verified).
Cover parse_cover(const Instance& inst, std::istream& in);

// Checks disjointness, exact coverage and subset-of-base for every member.
CoverStats validate_cover(const Instance& inst, const Cover& c);
// Same member checks for a packing (disjointness + uniform size).
void validate_packing(const Instance& inst, const Packing& p);

// Restriction of the instance to `uncovered`, re-indexed over the surviving
// elements. A base intersection larger than max_size is emitted through its
// max_size-subsets, which preserves exactly the usable sets of size <=
// max_size under subset closure while keeping the size invariant.
Instance induced_subinstance(const Instance& inst, const Bitset& uncovered, int max_size);

}  // namespace kcover
