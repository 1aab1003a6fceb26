#pragma once

#include "qrc/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace qrc {

/// Undirected simple graph with vertices 0..n-1. Edges are stored as
/// (i, j) with i < j, sorted lexicographically.
struct Graph {
    int n_vertices = 0;
    int degree = 0;
    std::vector<std::pair<int, int>> edges;

    bool operator==(const Graph&) const = default;
};

struct RrgOptions {
    int max_attempts = 10000;
};

/// Samples a connected k-regular graph on n vertices.
///
/// Stubs are paired at random, drawing only among pairs that keep the graph
/// simple, and the whole pairing restarts when it gets stuck. Disconnected
/// results are rejected. For k > (n-1)/2 the complement, which is
/// (n-1-k)-regular, is sampled instead and then complemented.
///
/// Throws InfeasibleDegreeError if n*k is odd or k is outside [1, n), and
/// RetryExhaustedError after `max_attempts` failed attempts.
Graph sample_rrg(int n, int k, Rng& rng, const RrgOptions& options = {});

/// N x N symmetric 0/1 matrix.
RMatrix adjacency(const Graph& g);

/// Breadth-first search from vertex 0 reaches every vertex.
bool is_connected(const Graph& g);

/// Throws DomainError unless every vertex has degree g.degree, and there are
/// no loops or duplicate edges.
void validate_regular(const Graph& g);

} // namespace qrc
