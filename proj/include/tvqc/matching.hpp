#pragma once

#include <cstdint>
#include <vector>

namespace tvqc {

struct WeightedEdge {
    int u;
    int v;
    std::int64_t weight;
};

/// Maximum-weight matching on a general graph (Edmonds' blossom algorithm
/// with primal-dual updates, O(V^3)). Integer weights keep every dual
/// update exact. With `max_cardinality`, only maximum-cardinality
/// matchings are considered.
///
/// Returns mate[v] (or -1) for every vertex 0..num_vertices-1. The result
/// depends only on the input edge order, never on timing or addresses.
std::vector<int> max_weight_matching(int num_vertices, const std::vector<WeightedEdge>& edges,
                                     bool max_cardinality = false);

/// Minimum-weight perfect matching via max_weight_matching on negated
/// weights. Throws NumericalError when no perfect matching exists.
std::vector<int> min_weight_perfect_matching(int num_vertices, const std::vector<WeightedEdge>& edges);

} // namespace tvqc
