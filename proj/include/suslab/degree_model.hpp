#pragma once

// Degree laws and finite degree sequences for the configuration model:
// explicit and heavy-tailed distributions, deterministic realization of a
// law as a degree sequence, exact empirical moments, and criticality
// classification by the sign of nu - mu.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"

namespace suslab {

enum class CriticalityClass { Subcritical, Critical, Supercritical };

inline const char* to_string(CriticalityClass c) {
    switch (c) {
        case CriticalityClass::Subcritical: return "subcritical";
        case CriticalityClass::Critical: return "critical";
        case CriticalityClass::Supercritical: return "supercritical";
    }
    return "unknown";
}

// First moment mu = E D and second factorial moment nu = E D(D-1).
struct Moments {
    double mu = 0.0;
    double nu = 0.0;
};

inline constexpr double kCriticalityTol = 1e-12;

inline CriticalityClass classify(const Moments& mo) {
    const double gap = mo.nu - mo.mu;
    if (gap > kCriticalityTol) return CriticalityClass::Supercritical;
    if (gap < -kCriticalityTol) return CriticalityClass::Subcritical;
    return CriticalityClass::Critical;
}

inline CriticalityClass classify(double mu, double nu) { return classify(Moments{mu, nu}); }

// Provenance of a degree law: how its probability table was produced.
struct TailSpec {
    enum class Kind { Explicit, PowerTail, PowerLogTail, LambdaMix };
    Kind kind = Kind::Explicit;
    double alpha = 0.0;   // exponent offset (power tail) or log exponent (log tail)
    double loglog = 0.0;  // exponent on log log k, log tail only
    double lambda = 0.0;  // mix weight, lambda_mix only
};

// A probability law on degrees 0..kmax stored as a dense table.
class DegreeDistribution {
  public:
    // probs[k] = P(D = k); entries must be nonnegative and sum to 1 within sum_tol.
    static DegreeDistribution from_probs(std::vector<double> probs, double sum_tol = 1e-12) {
        validate_table(probs, sum_tol);
        return DegreeDistribution(std::move(probs), TailSpec{}, false);
    }

    static DegreeDistribution from_probs(const std::map<std::int64_t, double>& p,
                                         double sum_tol = 1e-12) {
        std::vector<double> probs;
        for (const auto& [k, v] : p) {
            if (k < 0) throw std::invalid_argument("degree must be nonnegative");
            if (static_cast<std::size_t>(k) >= probs.size()) probs.resize(k + 1, 0.0);
            probs[k] = v;
        }
        return from_probs(std::move(probs), sum_tol);
    }

    // p1_floor mass at degree 1 plus a tail proportional to k^-(3+alpha)
    // on [max(kmin,2), kmax], renormalized.
    static DegreeDistribution power_tail(double alpha, std::int64_t kmin, std::int64_t kmax,
                                         double p1_floor) {
        TailSpec tail;
        tail.kind = TailSpec::Kind::PowerTail;
        tail.alpha = alpha;
        return from_weights(tail, kmin, kmax, p1_floor, [alpha](std::int64_t k) {
            return std::pow(static_cast<double>(k), -(3.0 + alpha));
        });
    }

    // Automatic kmax: grows the truncation point until the discarded mass of
    // k^2 p_k is below tail_tol, throwing when no kmax under the cap suffices.
    static DegreeDistribution power_tail_auto(double alpha, std::int64_t kmin, double p1_floor,
                                              double tail_tol = 1e-10,
                                              std::int64_t kmax_cap = (1 << 26)) {
        const std::int64_t lo = std::max<std::int64_t>(kmin, 2);
        for (std::int64_t kmax = std::max<std::int64_t>(lo + 1, 1024); kmax <= kmax_cap; kmax *= 2) {
            // Discarded integral of k^2 * k^-(3+alpha) = k^-(1+alpha) past kmax,
            // relative to the kept weight.
            NeumaierSum kept;
            for (std::int64_t k = lo; k <= kmax; ++k)
                kept.add(std::pow(static_cast<double>(k), -(1.0 + alpha)));
            const double discarded =
                alpha > 0.0 ? std::pow(static_cast<double>(kmax), -alpha) / alpha
                            : std::numeric_limits<double>::infinity();
            if (discarded <= tail_tol * kept.value()) return power_tail(alpha, kmin, kmax, p1_floor);
        }
        throw convergence_error("power_tail: no kmax under cap meets the k^2 tail tolerance");
    }

    // Tail k^-3 (log k)^-alpha (log log k)^-loglog; loglog > 0 needs kmin >= 3
    // so the weight stays positive and finite.
    static DegreeDistribution power_log_tail(double alpha, double loglog, std::int64_t kmin,
                                             std::int64_t kmax, double p1_floor) {
        if (loglog != 0.0 && kmin < 3)
            throw std::invalid_argument("power_log_tail: loglog exponent needs kmin >= 3");
        TailSpec tail;
        tail.kind = TailSpec::Kind::PowerLogTail;
        tail.alpha = alpha;
        tail.loglog = loglog;
        return from_weights(tail, kmin, kmax, p1_floor, [alpha, loglog](std::int64_t k) {
            const double kd = static_cast<double>(k);
            double w = std::pow(kd, -3.0) * std::pow(std::log(kd), -alpha);
            if (loglog != 0.0) w *= std::pow(std::log(std::log(kd)), -loglog);
            return w;
        });
    }

    std::int64_t kmax() const { return static_cast<std::int64_t>(probs_.size()) - 1; }

    double p(std::int64_t k) const {
        if (k < 0 || static_cast<std::size_t>(k) >= probs_.size()) return 0.0;
        return probs_[k];
    }

    const std::vector<double>& probs() const { return probs_; }
    const TailSpec& tail() const { return tail_; }
    bool renormalized() const { return renormalized_; }

    // Internal constructor for tables that are valid by construction
    // (builders, lambda mixes, dual laws).
    static DegreeDistribution from_trusted(std::vector<double> probs, TailSpec tail,
                                           bool renormalized) {
        return DegreeDistribution(std::move(probs), tail, renormalized);
    }

  private:
    DegreeDistribution(std::vector<double> probs, TailSpec tail, bool renormalized)
        : probs_(std::move(probs)), tail_(tail), renormalized_(renormalized) {
        while (probs_.size() > 1 && probs_.back() == 0.0) probs_.pop_back();
        if (probs_.empty()) probs_.push_back(0.0);
    }

    static void validate_table(const std::vector<double>& probs, double sum_tol) {
        if (probs.empty()) throw std::invalid_argument("degree law needs at least one entry");
        NeumaierSum sum;
        for (double v : probs) {
            if (!(v >= 0.0)) throw std::invalid_argument("degree probabilities must be nonnegative");
            sum.add(v);
        }
        if (std::abs(sum.value() - 1.0) > sum_tol)
            throw std::invalid_argument("degree probabilities sum to " + std::to_string(sum.value()) +
                                        ", outside tolerance");
    }

    template <class WeightFn>
    static DegreeDistribution from_weights(TailSpec tail, std::int64_t kmin, std::int64_t kmax,
                                           double p1_floor, WeightFn&& weight) {
        if (!(p1_floor >= 0.0 && p1_floor < 1.0))
            throw std::invalid_argument("p1_floor must lie in [0, 1)");
        const std::int64_t lo = std::max<std::int64_t>(kmin, 2);
        if (kmax < lo) throw std::invalid_argument("kmax must be at least max(kmin, 2)");
        std::vector<double> probs(kmax + 1, 0.0);
        NeumaierSum total;
        for (std::int64_t k = lo; k <= kmax; ++k) {
            probs[k] = weight(k);
            if (!std::isfinite(probs[k]) || probs[k] < 0.0)
                throw std::invalid_argument("tail weight must be finite and nonnegative");
            total.add(probs[k]);
        }
        const double w = total.value();
        if (!(w > 0.0)) throw std::invalid_argument("tail carries no weight");
        const double scale = (1.0 - p1_floor) / w;
        for (std::int64_t k = lo; k <= kmax; ++k) probs[k] *= scale;
        probs[1] = p1_floor;
        return DegreeDistribution(std::move(probs), tail, true);
    }

    std::vector<double> probs_;
    TailSpec tail_;
    bool renormalized_ = false;
};

// Exact limit moments of a (finite-support) degree law.
inline Moments dist_moments(const DegreeDistribution& dist) {
    NeumaierSum mu, nu;
    const auto& p = dist.probs();
    for (std::size_t k = 1; k < p.size(); ++k) {
        const double kd = static_cast<double>(k);
        mu.add(kd * p[k]);
        nu.add(kd * (kd - 1.0) * p[k]);
    }
    return Moments{mu.value(), nu.value()};
}

// A finite degree sequence d_1..d_n with vertex labels 1..n.
class DegreeSequence {
  public:
    // Labels vertices 1..n nondecreasing by degree. Rejects odd totals.
    static DegreeSequence from_counts(const std::map<std::int64_t, std::int64_t>& counts) {
        std::vector<std::int64_t> degrees;
        std::int64_t n = 0;
        for (const auto& [k, c] : counts) {
            if (k < 0) throw std::invalid_argument("degrees must be nonnegative");
            if (c < 0) throw std::invalid_argument("degree counts must be nonnegative");
            n += c;
        }
        degrees.reserve(n);
        for (const auto& [k, c] : counts)
            for (std::int64_t i = 0; i < c; ++i) degrees.push_back(k);
        return from_degrees(std::move(degrees));
    }

    // Keeps the given vertex order. Rejects odd totals.
    static DegreeSequence from_degrees(std::vector<std::int64_t> degrees) {
        std::int64_t total = 0;
        for (std::int64_t d : degrees) {
            if (d < 0) throw std::invalid_argument("degrees must be nonnegative");
            total += d;
        }
        if (total % 2 != 0) throw parity_error(total);
        return DegreeSequence(std::move(degrees), total);
    }

    std::int64_t n() const { return static_cast<std::int64_t>(degrees_.size()); }
    std::int64_t m() const { return total_ / 2; }
    std::int64_t total_degree() const { return total_; }
    const std::vector<std::int64_t>& degrees() const { return degrees_; }

    std::map<std::int64_t, std::int64_t> counts() const {
        std::map<std::int64_t, std::int64_t> c;
        for (std::int64_t d : degrees_) ++c[d];
        return c;
    }

    // FNV-1a over the degree vector; identifies the sequence in file headers.
    std::uint64_t digest() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::int64_t d : degrees_) {
            std::uint64_t v = static_cast<std::uint64_t>(d);
            for (int byte = 0; byte < 8; ++byte) {
                h ^= (v >> (8 * byte)) & 0xffULL;
                h *= 0x100000001b3ULL;
            }
        }
        return h;
    }

  private:
    DegreeSequence(std::vector<std::int64_t> degrees, std::int64_t total)
        : degrees_(std::move(degrees)), total_(total) {}

    std::vector<std::int64_t> degrees_;
    std::int64_t total_ = 0;
};

// Empirical moments mu_n = (1/n) sum d_i and nu_n = (1/n) sum d_i (d_i - 1),
// accumulated over the count table with compensation.
inline Moments moments(const DegreeSequence& seq) {
    if (seq.n() == 0) throw std::invalid_argument("moments of an empty sequence");
    NeumaierSum mu, nu;
    for (const auto& [k, c] : seq.counts()) {
        const double kd = static_cast<double>(k);
        const double cd = static_cast<double>(c);
        mu.add(cd * kd);
        nu.add(cd * kd * (kd - 1.0));
    }
    const double nd = static_cast<double>(seq.n());
    return Moments{mu.value() / nd, nu.value() / nd};
}

// Deterministic realization of a law as an n-vertex sequence: largest
// remainder rounding of n p_k, nondecreasing emission, and parity repair by
// incrementing the degree of the highest-labelled vertex.
inline DegreeSequence realize_sequence(const DegreeDistribution& dist, std::int64_t n) {
    if (n <= 0) throw std::invalid_argument("realize_sequence needs n >= 1");
    const auto& p = dist.probs();
    std::vector<std::int64_t> counts(p.size(), 0);
    std::vector<std::pair<double, std::int64_t>> remainders;
    std::int64_t assigned = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] <= 0.0) continue;
        const double target = static_cast<double>(n) * p[k];
        const double fl = std::floor(target);
        counts[k] = static_cast<std::int64_t>(fl);
        assigned += counts[k];
        remainders.emplace_back(target - fl, static_cast<std::int64_t>(k));
    }
    std::int64_t leftover = n - assigned;
    // Ties broken toward smaller degree for a stable, deterministic rounding.
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) {
                         if (a.first != b.first) return a.first > b.first;
                         return a.second < b.second;
                     });
    for (std::size_t i = 0; leftover > 0 && i < remainders.size(); ++i, --leftover)
        ++counts[remainders[i].second];
    if (leftover > 0) throw std::logic_error("largest remainder rounding failed");

    std::vector<std::int64_t> degrees;
    degrees.reserve(n);
    std::int64_t total = 0;
    for (std::size_t k = 0; k < counts.size(); ++k)
        for (std::int64_t i = 0; i < counts[k]; ++i) {
            degrees.push_back(static_cast<std::int64_t>(k));
            total += static_cast<std::int64_t>(k);
        }
    if (total % 2 != 0) ++degrees.back();
    return DegreeSequence::from_degrees(std::move(degrees));
}

}  // namespace suslab
