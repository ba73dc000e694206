#pragma once

// Configuration-model sampling: a uniform random pairing of labelled
// half-edges gives the multigraph; rejection until simple gives a uniform
// simple graph with the same degrees. Half-edges are laid out vertex-major
// and shuffled with Fisher-Yates, so a (seed, stream) pair fixes the graph.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "degree_model.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace suslab {

// Multigraph with 0-based vertices. Edges keep pairing order with endpoints
// normalized to u <= v; loops count twice in the degree of their vertex.
struct MultiGraph {
    std::int64_t n = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> edges;
    std::vector<std::int64_t> degrees;
    std::int64_t loops = 0;
    std::int64_t multi_pairs = 0;  // unordered non-loop pairs joined by >= 2 edges

    std::int64_t m() const { return static_cast<std::int64_t>(edges.size()); }
};

struct SimpleCheck {
    bool simple = false;
    std::int64_t loops = 0;
    std::int64_t multi_pairs = 0;
};

// Recomputes loop and parallel-pair counts from the edge list.
inline SimpleCheck is_simple(const MultiGraph& g) {
    SimpleCheck check;
    std::vector<std::pair<std::int64_t, std::int64_t>> sorted;
    sorted.reserve(g.edges.size());
    for (const auto& e : g.edges) {
        if (e.first == e.second) {
            ++check.loops;
        } else {
            sorted.push_back(e);
        }
    }
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        if (j - i >= 2) ++check.multi_pairs;
        i = j;
    }
    check.simple = check.loops == 0 && check.multi_pairs == 0;
    return check;
}

// Uniform random pairing of the half-edges of seq.
inline MultiGraph sample_multigraph(const DegreeSequence& seq, SeededRng& rng) {
    MultiGraph g;
    g.n = seq.n();
    g.degrees = seq.degrees();
    std::vector<std::int64_t> half;
    half.reserve(seq.total_degree());
    for (std::int64_t v = 0; v < g.n; ++v)
        for (std::int64_t i = 0; i < g.degrees[v]; ++i) half.push_back(v);
    for (std::size_t i = half.size(); i > 1; --i)
        std::swap(half[i - 1], half[rng.next_below(i)]);
    g.edges.reserve(half.size() / 2);
    for (std::size_t i = 0; i + 1 < half.size(); i += 2) {
        const std::int64_t u = std::min(half[i], half[i + 1]);
        const std::int64_t v = std::max(half[i], half[i + 1]);
        g.edges.emplace_back(u, v);
    }
    const SimpleCheck check = is_simple(g);
    g.loops = check.loops;
    g.multi_pairs = check.multi_pairs;
    return g;
}

struct SimpleSample {
    MultiGraph graph;
    int attempts = 0;
};

// Rejection sampling until the pairing is simple. Conditioning a uniform
// pairing on simplicity leaves the simple graph uniform over all simple
// graphs with these degrees.
inline SimpleSample sample_simple(const DegreeSequence& seq, SeededRng& rng,
                                  int max_attempts = 1000) {
    if (max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        MultiGraph g = sample_multigraph(seq, rng);
        if (g.loops == 0 && g.multi_pairs == 0) return SimpleSample{std::move(g), attempt};
    }
    throw exhaustion_error(max_attempts, 1.0);
}

}  // namespace suslab
