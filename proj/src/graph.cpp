#include "qrc/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>

namespace qrc {
namespace {

// One attempt at a simple k-regular pairing. Returns false when the
// remaining stubs admit no valid pair.
bool try_pairing(int n, int k, Rng& rng, std::vector<std::pair<int, int>>& edges) {
    edges.clear();
    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * k);
    for (int v = 0; v < n; ++v) {
        for (int s = 0; s < k; ++s) stubs.push_back(v);
    }
    std::set<std::pair<int, int>> present;

    auto usable = [&](int a, int b) {
        if (a == b) return false;
        return !present.contains({std::min(a, b), std::max(a, b)});
    };

    while (!stubs.empty()) {
        bool paired = false;
        for (int draw = 0; draw < 64 && !paired; ++draw) {
            std::uniform_int_distribution<std::size_t> pick(0, stubs.size() - 1);
            const std::size_t i = pick(rng);
            const std::size_t j = pick(rng);
            if (i == j || !usable(stubs[i], stubs[j])) continue;
            const int a = stubs[i];
            const int b = stubs[j];
            present.insert({std::min(a, b), std::max(a, b)});
            // erase the higher index first so the lower one stays valid
            stubs.erase(stubs.begin() + static_cast<std::ptrdiff_t>(std::max(i, j)));
            stubs.erase(stubs.begin() + static_cast<std::ptrdiff_t>(std::min(i, j)));
            paired = true;
        }
        if (paired) continue;

        bool any = false;
        for (std::size_t i = 0; i < stubs.size() && !any; ++i) {
            for (std::size_t j = i + 1; j < stubs.size() && !any; ++j) {
                any = usable(stubs[i], stubs[j]);
            }
        }
        if (!any) return false;
    }
    edges.assign(present.begin(), present.end());
    return true;
}

std::vector<std::pair<int, int>> complement_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    std::set<std::pair<int, int>> present(edges.begin(), edges.end());
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!present.contains({i, j})) out.emplace_back(i, j);
        }
    }
    return out;
}

} // namespace

Graph sample_rrg(int n, int k, Rng& rng, const RrgOptions& options) {
    if (n < 1 || k < 1 || k >= n) {
        throw InfeasibleDegreeError("no " + std::to_string(k) + "-regular graph on " + std::to_string(n) +
                                    " vertices: need 1 <= k < n");
    }
    if ((static_cast<long long>(n) * k) % 2 != 0) {
        throw InfeasibleDegreeError("n*k must be even, got n=" + std::to_string(n) + ", k=" + std::to_string(k));
    }

    const bool via_complement = 2 * k > n - 1;
    const int sample_degree = via_complement ? n - 1 - k : k;

    Graph g;
    g.n_vertices = n;
    g.degree = k;
    std::vector<std::pair<int, int>> edges;
    for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
        if (sample_degree == 0) {
            edges.clear();
        } else if (!try_pairing(n, sample_degree, rng, edges)) {
            continue;
        }
        g.edges = via_complement ? complement_edges(n, edges) : edges;
        if (is_connected(g)) return g;
    }
    throw RetryExhaustedError("failed to sample a connected " + std::to_string(k) + "-regular graph on " +
                              std::to_string(n) + " vertices after " + std::to_string(options.max_attempts) +
                              " attempts");
}

RMatrix adjacency(const Graph& g) {
    RMatrix a = RMatrix::Zero(g.n_vertices, g.n_vertices);
    for (auto [i, j] : g.edges) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
    }
    return a;
}

bool is_connected(const Graph& g) {
    if (g.n_vertices <= 1) return true;
    std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(g.n_vertices));
    for (auto [i, j] : g.edges) {
        nbrs[i].push_back(j);
        nbrs[j].push_back(i);
    }
    std::vector<bool> seen(nbrs.size(), false);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = true;
    int reached = 1;
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop();
        for (int w : nbrs[v]) {
            if (!seen[w]) {
                seen[w] = true;
                ++reached;
                frontier.push(w);
            }
        }
    }
    return reached == g.n_vertices;
}

void validate_regular(const Graph& g) {
    std::vector<int> deg(static_cast<std::size_t>(g.n_vertices), 0);
    std::set<std::pair<int, int>> seen;
    for (auto [i, j] : g.edges) {
        if (i < 0 || j < 0 || i >= g.n_vertices || j >= g.n_vertices) throw DomainError("edge endpoint out of range");
        if (i == j) throw DomainError("self-loop at vertex " + std::to_string(i));
        if (!seen.insert({std::min(i, j), std::max(i, j)}).second) throw DomainError("duplicate edge");
        ++deg[i];
        ++deg[j];
    }
    for (int v = 0; v < g.n_vertices; ++v) {
        if (deg[v] != g.degree) {
            throw DomainError("vertex " + std::to_string(v) + " has degree " + std::to_string(deg[v]) + ", expected " +
                              std::to_string(g.degree));
        }
    }
}

} // namespace qrc
