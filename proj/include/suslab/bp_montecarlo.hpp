#pragma once

// Monte Carlo simulation of the two-stage branching process: exact sampling
// from cumulative offspring tables, total progeny with an escape cap, and
// replicate-parallel estimators for the mean finite cluster size and the
// cluster size law. Replicate r always draws from stream r of the seed, so
// estimates are byte-identical for any worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "degree_model.hpp"
#include "gf_analytics.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace suslab {

// Draws from a fixed law by binary search on its cumulative table.
class OffspringSampler {
  public:
    explicit OffspringSampler(std::span<const double> probs) {
        if (probs.empty()) throw std::invalid_argument("empty offspring law");
        cdf_.reserve(probs.size());
        double acc = 0.0;
        for (double p : probs) {
            acc += p;
            cdf_.push_back(acc);
        }
        cdf_.back() = std::max(cdf_.back(), 1.0);
    }

    std::int64_t sample(SeededRng& rng) const {
        const double u = rng.next_unit();
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        const std::size_t idx = std::min<std::size_t>(it - cdf_.begin(), cdf_.size() - 1);
        return static_cast<std::int64_t>(idx);
    }

  private:
    std::vector<double> cdf_;
};

inline std::int64_t sample_root_offspring(const DegreeDistribution& dist, SeededRng& rng) {
    return OffspringSampler(dist.probs()).sample(rng);
}

inline std::int64_t sample_general_offspring(const DegreeDistribution& dist, SeededRng& rng) {
    const auto table = size_biased_shifted_table(dist);
    return OffspringSampler(table).sample(rng);
}

struct ProgenyOutcome {
    std::int64_t total = 0;  // individuals born, root included
    bool escaped = false;    // true once births exceeded the cap with work pending
};

inline constexpr std::int64_t kDefaultProgenyCap = 100000;

// Root and general offspring samplers bundled for repeated runs.
class BranchingSimulator {
  public:
    explicit BranchingSimulator(const DegreeDistribution& dist)
        : root_(dist.probs()), general_(size_biased_shifted_table(dist)) {}

    BranchingSimulator(std::span<const double> root_law, std::span<const double> general_law)
        : root_(root_law), general_(general_law) {}

    // Total progeny by a pending counter: no tree is materialized. Outcomes
    // with pending work after the cap are Escaped; a walk that terminates
    // just past the cap still counts as finite.
    ProgenyOutcome total_progeny(SeededRng& rng, std::int64_t cap = kDefaultProgenyCap) const {
        std::int64_t born = 1;
        std::int64_t pending = root_.sample(rng);
        born += pending;
        while (pending > 0) {
            if (born > cap) return ProgenyOutcome{born, true};
            const std::int64_t c = general_.sample(rng);
            born += c;
            pending += c - 1;
        }
        return ProgenyOutcome{born, false};
    }

  private:
    OffspringSampler root_;
    OffspringSampler general_;
};

struct ChiHatEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::int64_t reps = 0;
    std::int64_t cap = 0;
    double escaped_fraction = 0.0;
    bool subcritical_escape_warning = false;
};

// Mean finite cluster size: escaped walks contribute 0, so the estimator
// targets E(|X|; |X| < inf). Totals are integers, summed exactly.
inline ChiHatEstimate estimate_chi_hat(const DegreeDistribution& dist, std::int64_t reps,
                                       std::int64_t cap, std::uint64_t seed, int workers = 1) {
    if (reps < 1) throw std::invalid_argument("estimate_chi_hat needs reps >= 1");
    const BranchingSimulator sim(dist);
    std::vector<std::int64_t> totals(reps, 0);
    std::vector<char> escaped(reps, 0);
    parallel_replicates(reps, workers, [&](std::int64_t r) {
        SeededRng rng(seed, static_cast<std::uint64_t>(r));
        const ProgenyOutcome out = sim.total_progeny(rng, cap);
        totals[r] = out.escaped ? 0 : out.total;
        escaped[r] = out.escaped ? 1 : 0;
    });
    std::int64_t sum = 0, sum_sq = 0, escapes = 0;
    for (std::int64_t r = 0; r < reps; ++r) {
        sum += totals[r];
        sum_sq += totals[r] * totals[r];
        escapes += escaped[r];
    }
    ChiHatEstimate est;
    est.reps = reps;
    est.cap = cap;
    est.estimate = static_cast<double>(sum) / static_cast<double>(reps);
    if (reps > 1) {
        const double nd = static_cast<double>(reps);
        const double var =
            (static_cast<double>(sum_sq) - nd * est.estimate * est.estimate) / (nd - 1.0);
        est.std_error = std::sqrt(std::max(0.0, var) / nd);
    }
    est.escaped_fraction = static_cast<double>(escapes) / static_cast<double>(reps);
    est.subcritical_escape_warning =
        escapes > 0 && classify(dist_moments(dist)) == CriticalityClass::Subcritical;
    return est;
}

struct ClusterLawEstimate {
    std::vector<double> rho;        // rho[k] estimates P(|X| = k), k = 0 unused
    std::vector<double> std_error;  // binomial standard errors
    std::int64_t reps = 0;
    std::int64_t cap = 0;
    double escaped_fraction = 0.0;
};

// Empirical law of the finite total progeny up to k_track.
inline ClusterLawEstimate estimate_cluster_law(const DegreeDistribution& dist, std::int64_t reps,
                                               std::int64_t cap, std::int64_t k_track,
                                               std::uint64_t seed, int workers = 1) {
    if (reps < 1) throw std::invalid_argument("estimate_cluster_law needs reps >= 1");
    if (k_track < 1) throw std::invalid_argument("k_track must be >= 1");
    const BranchingSimulator sim(dist);
    std::vector<std::int32_t> bucket(reps, -1);
    parallel_replicates(reps, workers, [&](std::int64_t r) {
        SeededRng rng(seed, static_cast<std::uint64_t>(r));
        const ProgenyOutcome out = sim.total_progeny(rng, cap);
        if (!out.escaped && out.total <= k_track)
            bucket[r] = static_cast<std::int32_t>(out.total);
        else
            bucket[r] = out.escaped ? -2 : -1;
    });
    std::vector<std::int64_t> counts(k_track + 1, 0);
    std::int64_t escapes = 0;
    for (std::int64_t r = 0; r < reps; ++r) {
        if (bucket[r] >= 0) ++counts[bucket[r]];
        if (bucket[r] == -2) ++escapes;
    }
    ClusterLawEstimate est;
    est.reps = reps;
    est.cap = cap;
    est.rho.assign(k_track + 1, 0.0);
    est.std_error.assign(k_track + 1, 0.0);
    const double nd = static_cast<double>(reps);
    for (std::int64_t k = 1; k <= k_track; ++k) {
        const double p = static_cast<double>(counts[k]) / nd;
        est.rho[k] = p;
        est.std_error[k] = std::sqrt(p * (1.0 - p) / nd);
    }
    est.escaped_fraction = static_cast<double>(escapes) / nd;
    return est;
}

}  // namespace suslab
