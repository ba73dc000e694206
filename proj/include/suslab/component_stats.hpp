#pragma once

// Connected components and susceptibility statistics of a multigraph.
// Components come out ordered by size, ties broken toward the component
// holding the largest vertex label, which pins down C1 deterministically.
// Susceptibilities are exact: squared sizes accumulate in integers and are
// divided by n once.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "config_sampler.hpp"
#include "degree_model.hpp"

namespace suslab {

struct ComponentSummary {
    std::vector<std::int64_t> sizes;       // nonincreasing; ties by max label, descending
    std::vector<std::int32_t> membership;  // vertex -> index into sizes
    std::int64_t largest_id = -1;          // index of C1 (0 whenever n > 0)
    std::map<std::int64_t, std::int64_t> spectrum;  // k -> N_k, vertices in size-k components
};

inline ComponentSummary components(const MultiGraph& g) {
    ComponentSummary s;
    const std::int64_t n = g.n;
    std::vector<std::int64_t> parent(n), size(n, 1);
    for (std::int64_t v = 0; v < n; ++v) parent[v] = v;
    const auto find = [&](std::int64_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (const auto& [u, v] : g.edges) {
        if (u == v) continue;
        std::int64_t ru = find(u), rv = find(v);
        if (ru == rv) continue;
        if (size[ru] < size[rv]) std::swap(ru, rv);
        parent[rv] = ru;
        size[ru] += size[rv];
    }
    // Order roots by (size desc, max member label desc) and index components.
    std::vector<std::int64_t> max_label(n, -1);
    for (std::int64_t v = 0; v < n; ++v) {
        const std::int64_t r = find(v);
        max_label[r] = std::max(max_label[r], v);
    }
    std::vector<std::int64_t> roots;
    for (std::int64_t v = 0; v < n; ++v)
        if (find(v) == v) roots.push_back(v);
    std::sort(roots.begin(), roots.end(), [&](std::int64_t a, std::int64_t b) {
        if (size[a] != size[b]) return size[a] > size[b];
        return max_label[a] > max_label[b];
    });
    std::vector<std::int32_t> index(n, -1);
    s.sizes.reserve(roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        index[roots[i]] = static_cast<std::int32_t>(i);
        s.sizes.push_back(size[roots[i]]);
        s.spectrum[size[roots[i]]] += size[roots[i]];
    }
    s.membership.resize(n);
    for (std::int64_t v = 0; v < n; ++v) s.membership[v] = index[find(v)];
    s.largest_id = roots.empty() ? -1 : 0;
    return s;
}

// chi = (1/n) sum |C_i|^2. The size-square sum and the spectrum sum
// sum_k k N_k group the same integers, so both routes agree exactly.
inline double susceptibility(const ComponentSummary& s) {
    const std::int64_t n = static_cast<std::int64_t>(s.membership.size());
    if (n == 0) throw std::invalid_argument("susceptibility of an empty graph");
    std::int64_t sq = 0;
    for (std::int64_t size : s.sizes) sq += size * size;
    return static_cast<double>(sq) / static_cast<double>(n);
}

// chi with C1 removed from the sum: chi - |C1|^2 / n over the same integers.
inline double modified_susceptibility(const ComponentSummary& s) {
    const std::int64_t n = static_cast<std::int64_t>(s.membership.size());
    if (n == 0) throw std::invalid_argument("susceptibility of an empty graph");
    std::int64_t sq = 0;
    for (std::size_t i = 1; i < s.sizes.size(); ++i) sq += s.sizes[i] * s.sizes[i];
    return static_cast<double>(sq) / static_cast<double>(n);
}

// Degree histogram of C1: k -> number of C1 vertices with degree k.
inline std::map<std::int64_t, std::int64_t> giant_degree_profile(const MultiGraph& g,
                                                                 const ComponentSummary& s) {
    if (s.largest_id < 0) throw std::invalid_argument("no components");
    std::map<std::int64_t, std::int64_t> profile;
    for (std::int64_t v = 0; v < g.n; ++v)
        if (s.membership[v] == s.largest_id) ++profile[g.degrees[v]];
    return profile;
}

struct RemovalResult {
    MultiGraph graph;        // induced on the complement of C1, labels compacted
    DegreeSequence residual; // degrees of survivors in original label order
};

// Removes C1. Edges never straddle components, so the residual degrees are
// exactly the original degrees of the surviving vertices.
inline RemovalResult remove_largest(const MultiGraph& g, const ComponentSummary& s) {
    if (s.largest_id < 0) throw std::invalid_argument("no components");
    std::vector<std::int64_t> new_label(g.n, -1);
    std::vector<std::int64_t> surviving_degrees;
    std::int64_t next = 0;
    for (std::int64_t v = 0; v < g.n; ++v) {
        if (s.membership[v] == s.largest_id) continue;
        new_label[v] = next++;
        surviving_degrees.push_back(g.degrees[v]);
    }
    MultiGraph out;
    out.n = next;
    out.degrees = surviving_degrees;
    for (const auto& [u, v] : g.edges) {
        if (new_label[u] < 0) continue;
        out.edges.emplace_back(new_label[u], new_label[v]);
    }
    const SimpleCheck check = is_simple(out);
    out.loops = check.loops;
    out.multi_pairs = check.multi_pairs;
    return RemovalResult{std::move(out), DegreeSequence::from_degrees(std::move(surviving_degrees))};
}

// Exact count of directed paths with length edges: alternating sequences of
// distinct vertices and edges. Parallel edges give distinct paths; loops can
// never appear in one. Exponential search, so inputs are capped.
inline std::int64_t count_paths(const MultiGraph& g, int length) {
    if (length < 0 || length > 6) throw std::invalid_argument("path length must be in [0, 6]");
    if (g.n > 1000) throw std::invalid_argument("count_paths is capped at n <= 1000");
    if (length == 0) return g.n;
    std::vector<std::vector<std::int64_t>> adj(g.n);
    for (const auto& [u, v] : g.edges) {
        if (u == v) continue;
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::int64_t total = 0;
    std::vector<char> used(g.n, 0);
    const auto dfs = [&](auto&& self, std::int64_t v, int remaining) -> void {
        if (remaining == 0) {
            ++total;
            return;
        }
        used[v] = 1;
        for (std::int64_t w : adj[v])
            if (!used[w]) self(self, w, remaining - 1);
        used[v] = 0;
    };
    for (std::int64_t v = 0; v < g.n; ++v) dfs(dfs, v, length);
    return total;
}

}  // namespace suslab
