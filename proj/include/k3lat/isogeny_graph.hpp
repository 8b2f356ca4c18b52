#pragma once

// Isogeny classes as undirected multigraphs with degree-labelled edges.
// The distance between two curves is the minimal product of edge degrees
// along a path (log of the degree is an honest metric), and the diameter
// is the maximum over pairs.

#include "k3lat/rational.hpp"

#include <algorithm>
#include <queue>
#include <string>
#include <vector>

namespace k3lat {

struct IsogenyEdge {
    int i = 0, j = 0;
    Int degree;
};

struct IsogenyClassGraph {
    std::vector<std::string> vertices;
    std::vector<IsogenyEdge> edges;
};

inline void validate_graph(const IsogenyClassGraph& g) {
    int n = static_cast<int>(g.vertices.size());
    if (n == 0) throw std::invalid_argument("graph needs at least one vertex");
    for (const auto& e : g.edges) {
        if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (e.degree < 2) throw std::invalid_argument("isogeny degree must be at least 2");
    }
}

// Minimal product of edge degrees over paths from i to j; d(i, i) = 1.
// Dijkstra on multiplicative weights with exact integer products.
inline Int min_isogeny_degree(const IsogenyClassGraph& g, int i, int j) {
    validate_graph(g);
    int n = static_cast<int>(g.vertices.size());
    if (i < 0 || i >= n || j < 0 || j >= n) throw std::invalid_argument("vertex out of range");
    std::vector<std::vector<std::pair<int, Int>>> adj(n);
    for (const auto& e : g.edges) {
        if (e.i == e.j) continue;  // self-loops never shorten a path
        adj[e.i].push_back({e.j, e.degree});
        adj[e.j].push_back({e.i, e.degree});
    }
    std::vector<Int> best(n, Int(-1));
    using Item = std::pair<Int, int>;
    auto cmp = [](const Item& a, const Item& b) { return a > b; };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
    pq.push({Int(1), i});
    while (!pq.empty()) {
        auto [deg, v] = pq.top();
        pq.pop();
        if (best[v] != -1) continue;
        best[v] = deg;
        if (v == j) return deg;
        for (const auto& [w, d] : adj[v])
            if (best[w] == -1) pq.push({deg * d, w});
    }
    throw std::domain_error("vertices are not connected");
}

inline Int diameter(const IsogenyClassGraph& g) {
    validate_graph(g);
    int n = static_cast<int>(g.vertices.size());
    Int dia = 1;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) dia = std::max(dia, min_isogeny_degree(g, i, j));
    return dia;
}

}  // namespace k3lat
