#pragma once

#include <utility>
#include <vector>

namespace kcover {

struct Graph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;  // unordered pairs, no loops, no duplicates
};

struct Matching {
    std::vector<std::pair<int, int>> edges;
};

// Exact maximum-cardinality matching on general graphs (blossom contraction).
// Deterministic for a fixed input: vertices are scanned in index order and
// adjacency lists keep insertion order.
Matching max_matching(const Graph& g);

// Incremental form used by the semi-local solver: `mate` holds a valid
// matching on entry (mate[v] = -1 for free vertices) and is augmented to
// maximum cardinality in place. Returns the matching size.
int max_matching_augment(int vertex_count, const std::vector<std::vector<int>>& adj,
                         std::vector<int>& mate);

// Exhaustive oracle, exact for <= 16 vertices. Throws on larger graphs.
Matching max_matching_bruteforce(const Graph& g);

bool is_valid_matching(const Graph& g, const Matching& m);

}  // namespace kcover
