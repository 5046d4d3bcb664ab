#pragma once

#include <string>

#include "kcover/instance.hpp"

namespace kcover {

// Completion of a packing to a full cover by 1-, 2- and 3-sets, together with
// the lexicographic key (number of 1-sets, number of 2-/3-sets not inside one
// optimal set, number of such 3-sets).
struct Extension {
    std::vector<ChosenSet> sets;
    int n1 = 0, n2 = 0, n3 = 0;
};

struct BlockingForest {
    int k = 0;
    int node_count = 0;                        // one node per optimal set
    std::vector<int> level;                    // elements covered by the packing
    std::vector<std::pair<int, int>> edges;    // cross 2-sets of the extension
    std::vector<int> one_set_node;             // node holding each extension 1-set
    // derived annotations (recomputed by verify_structure from the above)
    std::vector<int> degree;
    std::vector<int> component;
    std::vector<int> roots;                    // per component
    bool simple = true;
    bool acyclic = true;
};

// Exact lexicographically-first extension by exhaustive search over
// partitions of the uncovered elements. Throws when more than max_uncovered
// elements remain.
Extension lexfirst_extension(const Instance& inst, const Packing& a,
                             const std::vector<ChosenSet>& optimal, int max_uncovered = 18);

// Wraps a proposed extension: verifies it partitions exactly the elements
// left uncovered by `a` and computes its lexicographic key. Lets generators
// hand analytic extensions to build_forest past the exhaustive-search budget.
Extension make_extension(const Instance& inst, const Packing& a, std::vector<ChosenSet> sets,
                         const std::vector<ChosenSet>& optimal);

// Builds the graph on optimal sets whose edges are the extension's 2-sets
// crossing two optimal sets. `optimal` must partition the universe.
BlockingForest build_forest(const Instance& inst, const Extension& ext,
                            const std::vector<ChosenSet>& optimal, const Packing& a);

struct StructureReport {
    bool forest = false;          // no multi-edges, no cycles
    bool ones_in_top_level = false;  // 1-sets only inside (k-1)-level sets
    bool low_degree_unique = false;  // at most one node per tree with degree < k-level
    bool degree2_root = false;       // at most one 0/1-level degree-2 node, and it roots
    std::string detail;
    bool all() const { return forest && ones_in_top_level && low_degree_unique && degree2_root; }
};

// Checks the four structural propositions; recomputes degrees, components and
// roots from the edge list so hand-built graphs can be fed as negative
// controls. Annotates `f` with the derived data.
StructureReport verify_structure(BlockingForest& f);

}  // namespace kcover
