#pragma once

// Experiment drivers: the lambda interpolation family and its critical
// sweeps, log-log exponent fits, finite-n convergence runs, giant-removal
// duality runs, path-count bound audits, and the classical counterexample
// constructions (a heavy star, two heavy stars, a cubic core plus dust).
// Every stochastic driver takes (seed, workers) and assigns stream r to
// replicate r, so output is byte-identical under any worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bp_montecarlo.hpp"
#include "component_stats.hpp"
#include "config_sampler.hpp"
#include "degree_model.hpp"
#include "ext_real.hpp"
#include "gf_analytics.hpp"
#include "numeric.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace suslab {

// Interpolation family g_lambda(x) = (1 - lambda) x + lambda h(x): mass
// lambda on the base law h, the rest on degree 1.
inline DegreeDistribution lambda_family(const DegreeDistribution& h, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("lambda must lie in [0, 1]");
    const Moments mh = dist_moments(h);
    if (mh.nu <= mh.mu)
        throw std::invalid_argument(
            "lambda family needs h''(1) > h'(1); this h has no phase transition");
    std::vector<double> probs(std::max<std::size_t>(h.probs().size(), 2), 0.0);
    for (std::size_t k = 0; k < h.probs().size(); ++k) probs[k] = lambda * h.probs()[k];
    probs[1] += 1.0 - lambda;
    TailSpec tail;
    tail.kind = TailSpec::Kind::LambdaMix;
    tail.lambda = lambda;
    return DegreeDistribution::from_trusted(std::move(probs), tail, false);
}

// Critical mix weight 1 / (1 - h'(1) + h''(1)); the family satisfies
// mu(lambda) - nu(lambda) = 1 - lambda / lambda_c.
inline double lambda_critical(const DegreeDistribution& h) {
    const Moments mh = dist_moments(h);
    if (mh.nu <= mh.mu)
        throw std::invalid_argument(
            "lambda family needs h''(1) > h'(1); this h has no phase transition");
    return 1.0 / (1.0 - mh.mu + mh.nu);
}

struct SweepPoint {
    double lambda = 0.0;
    double mu = 0.0;
    double nu = 0.0;
    double kappa = 1.0;
    ExtReal chi_inf;
    ExtReal chi_hat_inf;
};

// Analytic sweep of the family across the given mix weights.
inline std::vector<SweepPoint> critical_sweep(const DegreeDistribution& h,
                                              std::span<const double> lambdas) {
    std::vector<SweepPoint> points;
    points.reserve(lambdas.size());
    for (double lambda : lambdas) {
        const DegreeDistribution dist = lambda_family(h, lambda);
        SweepPoint pt;
        pt.lambda = lambda;
        const Moments mo = dist_moments(dist);
        pt.mu = mo.mu;
        pt.nu = mo.nu;
        pt.kappa = solve_kappa(dist);
        pt.chi_inf = chi_graph_limit(dist);
        pt.chi_hat_inf = chi_hat_forms_at(dist, pt.kappa).ratio;
        points.push_back(pt);
    }
    return points;
}

// Geometric grid with the given number of points, endpoints included.
inline std::vector<double> geometric_grid(double lo, double hi, int points) {
    if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("grid needs 0 < lo < hi");
    if (points < 2) throw std::invalid_argument("grid needs at least two points");
    std::vector<double> xs(points);
    const double step = std::log(hi / lo) / (points - 1);
    for (int i = 0; i < points; ++i) xs[i] = lo * std::exp(step * i);
    xs.front() = lo;
    xs.back() = hi;
    return xs;
}

struct ExponentFit {
    double slope = 0.0;      // divergence exponent: value ~ const * distance^-slope
    double intercept = 0.0;  // log-space intercept of the least squares line
    double r_squared = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    int points = 0;

    double leading_constant() const { return std::exp(intercept); }
};

// Least squares in log-log space on (distance, value) pairs. Requires at
// least four points spanning at least a decade, all values finite positive.
inline ExponentFit fit_exponent(std::span<const std::pair<double, double>> pts) {
    if (pts.size() < 4) throw std::invalid_argument("exponent fit needs at least 4 points");
    double lo = pts.front().first, hi = pts.front().first;
    for (const auto& [x, y] : pts) {
        if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
            throw std::invalid_argument("exponent fit needs finite positive points");
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (hi < 10.0 * lo * (1.0 - 1e-12))
        throw std::invalid_argument("exponent fit window must span at least a decade");
    NeumaierSum sx, sy;
    for (const auto& [x, y] : pts) {
        sx.add(std::log(x));
        sy.add(std::log(y));
    }
    const double n = static_cast<double>(pts.size());
    const double mx = sx.value() / n, my = sy.value() / n;
    NeumaierSum sxx, sxy, syy;
    for (const auto& [x, y] : pts) {
        const double dx = std::log(x) - mx, dy = std::log(y) - my;
        sxx.add(dx * dx);
        sxy.add(dx * dy);
        syy.add(dy * dy);
    }
    if (!(sxx.value() > 0.0)) throw std::invalid_argument("exponent fit needs distinct distances");
    const double b = sxy.value() / sxx.value();
    ExponentFit fit;
    fit.slope = -b;
    fit.intercept = my - b * mx;
    fit.r_squared = syy.value() > 0.0 ? (sxy.value() * sxy.value()) / (sxx.value() * syy.value()) : 1.0;
    fit.window_lo = lo;
    fit.window_hi = hi;
    fit.points = static_cast<int>(pts.size());
    return fit;
}

struct ConvergenceRow {
    std::int64_t n = 0;
    std::int64_t reps = 0;
    Moments empirical;  // moments of the realized sequence
    MeanStderr chi;
    MeanStderr chi_hat;
    ExtReal chi_limit;
    ExtReal chi_hat_limit;
    ExtReal finite_pred;
    double delta_chi_vs_limit = 0.0;
    double delta_chi_vs_pred = 0.0;
    double abs_chi_hat_vs_limit = 0.0;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
};

// Realizes the law at each n, samples multigraphs, and compares measured
// susceptibilities with the limit values and the finite-n prediction. The
// delta metric applies to chi (always >= 1); chi_hat, which may sit below 1,
// is compared absolutely.
inline ConvergenceResult convergence_experiment(const DegreeDistribution& dist,
                                                std::span<const std::int64_t> n_grid,
                                                std::int64_t reps, std::uint64_t seed,
                                                int workers = 1) {
    if (reps < 1) throw std::invalid_argument("convergence experiment needs reps >= 1");
    ConvergenceResult result;
    const ExtReal chi_limit = chi_graph_limit(dist);
    const ExtReal chi_hat_limit = chi_hat_graph_limit(dist);
    std::uint64_t stream_base = 0;
    for (std::int64_t n : n_grid) {
        const DegreeSequence seq = realize_sequence(dist, n);
        ConvergenceRow row;
        row.n = n;
        row.reps = reps;
        row.empirical = moments(seq);
        std::vector<double> chis(reps), chi_hats(reps);
        parallel_replicates(reps, workers, [&](std::int64_t r) {
            SeededRng rng(seed, stream_base + static_cast<std::uint64_t>(r));
            const MultiGraph g = sample_multigraph(seq, rng);
            const ComponentSummary s = components(g);
            chis[r] = susceptibility(s);
            chi_hats[r] = modified_susceptibility(s);
        });
        stream_base += static_cast<std::uint64_t>(reps);
        row.chi = mean_stderr(chis);
        row.chi_hat = mean_stderr(chi_hats);
        row.chi_limit = chi_limit;
        row.chi_hat_limit = chi_hat_limit;
        row.finite_pred = finite_n_prediction(row.empirical);
        row.delta_chi_vs_limit = delta_metric(ExtReal(row.chi.mean), chi_limit);
        row.delta_chi_vs_pred = delta_metric(ExtReal(row.chi.mean), row.finite_pred);
        row.abs_chi_hat_vs_limit = chi_hat_limit.is_finite()
                                       ? std::abs(row.chi_hat.mean - chi_hat_limit.value())
                                       : std::numeric_limits<double>::infinity();
        result.rows.push_back(std::move(row));
    }
    return result;
}

struct DualityResult {
    std::int64_t n = 0;
    std::int64_t reps = 0;
    // Analytic references.
    double kappa = 1.0;
    double rho_inf = 0.0;
    double mu_hat = 0.0;
    double nu_hat = 0.0;
    ExtReal residual_chi_target;
    ExtReal chi_hat_target;
    // Measured aggregates.
    MeanStderr c1_fraction;
    MeanStderr tv_residual_law;
    MeanStderr residual_chi;
    MeanStderr chi_hat;
    MeanStderr identity_gap;  // |g(kappa) * chi(residual) - chi_hat(full)|
    std::map<std::int64_t, MeanStderr> giant_degree_fraction;  // k -> mean v_k(C1)/n
    std::int64_t residual_subcritical_count = 0;
    bool all_residual_subcritical = false;
    bool c2_comparable_warning = false;  // some replicate had |C2| >= |C1| / 2
};

// Samples the supercritical law, removes the giant, and compares the
// residual graph against the dual law: degree law in total variation,
// susceptibility against the dual prediction, criticality per replicate,
// and the identity chi_hat(G) ~ g(kappa) chi(G - C1).
inline DualityResult duality_experiment(const DegreeDistribution& dist, std::int64_t n,
                                        std::int64_t reps, std::uint64_t seed, int workers = 1) {
    if (reps < 1) throw std::invalid_argument("duality experiment needs reps >= 1");
    const AnalyticsReport rep = analyze(dist);
    if (rep.criticality != CriticalityClass::Supercritical || rep.numerically_critical)
        throw std::invalid_argument("duality experiment needs a cleanly supercritical law");
    DualityResult result;
    result.n = n;
    result.reps = reps;
    result.kappa = rep.kappa;
    result.rho_inf = rep.rho_inf;
    result.mu_hat = rep.mu_hat;
    result.nu_hat = rep.nu_hat;
    result.residual_chi_target = finite_n_prediction(Moments{rep.mu_hat, rep.nu_hat});
    result.chi_hat_target = rep.chi_hat_inf;
    const DegreeSequence seq = realize_sequence(dist, n);
    const double g_kappa = pgf(dist, rep.kappa, 0);
    const std::vector<double>& dual_probs = rep.dual.probs();

    std::vector<double> c1_frac(reps), tv(reps), res_chi(reps), chi_hat(reps), gap(reps);
    std::vector<char> res_subcritical(reps, 0), c2_warn(reps, 0);
    std::map<std::int64_t, std::vector<double>> vk_frac;
    for (const auto& [k, c] : seq.counts()) {
        (void)c;
        vk_frac[k] = std::vector<double>(reps, 0.0);
    }
    parallel_replicates(reps, workers, [&](std::int64_t r) {
        SeededRng rng(seed, static_cast<std::uint64_t>(r));
        const MultiGraph g = sample_multigraph(seq, rng);
        const ComponentSummary s = components(g);
        c1_frac[r] = static_cast<double>(s.sizes[0]) / static_cast<double>(n);
        c2_warn[r] = s.sizes.size() > 1 && 2 * s.sizes[1] >= s.sizes[0];
        chi_hat[r] = modified_susceptibility(s);
        for (const auto& [k, count] : giant_degree_profile(g, s)) {
            auto it = vk_frac.find(k);
            if (it != vk_frac.end())
                it->second[r] = static_cast<double>(count) / static_cast<double>(n);
        }
        RemovalResult removal = remove_largest(g, s);
        const std::int64_t rn = removal.residual.n();
        if (rn == 0) {
            tv[r] = 1.0;
            res_chi[r] = 1.0;
            gap[r] = std::abs(g_kappa - chi_hat[r]);
            return;
        }
        // Total variation between the residual degree law and the dual law.
        double tv_acc = 0.0;
        const auto res_counts = removal.residual.counts();
        for (const auto& [k, count] : res_counts) {
            const double q = static_cast<double>(count) / static_cast<double>(rn);
            const double ref = static_cast<std::size_t>(k) < dual_probs.size() ? dual_probs[k] : 0.0;
            tv_acc += std::abs(q - ref);
        }
        for (std::size_t k = 0; k < dual_probs.size(); ++k)
            if (dual_probs[k] > 0.0 && res_counts.find(k) == res_counts.end())
                tv_acc += dual_probs[k];
        tv[r] = 0.5 * tv_acc;
        const ComponentSummary rs = components(removal.graph);
        res_chi[r] = susceptibility(rs);
        res_subcritical[r] =
            classify(moments(removal.residual)) == CriticalityClass::Subcritical;
        gap[r] = std::abs(g_kappa * res_chi[r] - chi_hat[r]);
    });
    result.c1_fraction = mean_stderr(c1_frac);
    result.tv_residual_law = mean_stderr(tv);
    result.residual_chi = mean_stderr(res_chi);
    result.chi_hat = mean_stderr(chi_hat);
    result.identity_gap = mean_stderr(gap);
    for (const auto& [k, xs] : vk_frac) result.giant_degree_fraction[k] = mean_stderr(xs);
    for (std::int64_t r = 0; r < reps; ++r) {
        result.residual_subcritical_count += res_subcritical[r];
        if (c2_warn[r]) result.c2_comparable_warning = true;
    }
    result.all_residual_subcritical = result.residual_subcritical_count == reps;
    return result;
}

struct PathBoundRow {
    int length = 0;
    MeanStderr count;
    double bound = 0.0;  // n nu^(len-1) / mu^(len-2); n at length 0
    bool within = false; // mean <= bound + 3 standard errors
};

struct PathBoundResult {
    std::int64_t n = 0;
    std::int64_t reps = 0;
    Moments empirical;
    std::vector<PathBoundRow> rows;
};

// Exact path counts on sampled multigraphs against the first-moment bound.
inline PathBoundResult path_bound_audit(const DegreeSequence& seq, int max_length,
                                        std::int64_t reps, std::uint64_t seed, int workers = 1) {
    if (max_length < 0 || max_length > 6)
        throw std::invalid_argument("path audit length must be in [0, 6]");
    if (reps < 1) throw std::invalid_argument("path audit needs reps >= 1");
    PathBoundResult result;
    result.n = seq.n();
    result.reps = reps;
    result.empirical = moments(seq);
    std::vector<std::vector<double>> counts(max_length + 1, std::vector<double>(reps, 0.0));
    parallel_replicates(reps, workers, [&](std::int64_t r) {
        SeededRng rng(seed, static_cast<std::uint64_t>(r));
        const MultiGraph g = sample_multigraph(seq, rng);
        for (int len = 0; len <= max_length; ++len)
            counts[len][r] = static_cast<double>(count_paths(g, len));
    });
    const double nd = static_cast<double>(seq.n());
    for (int len = 0; len <= max_length; ++len) {
        PathBoundRow row;
        row.length = len;
        row.count = mean_stderr(counts[len]);
        row.bound = len == 0 ? nd
                             : nd * std::pow(result.empirical.nu, len - 1) /
                                   std::pow(result.empirical.mu, len - 2);
        row.within = row.count.mean <= row.bound + 3.0 * row.count.std_error;
        result.rows.push_back(row);
    }
    return result;
}

// A star with hub degree a sqrt(n) plus a perfect matching on the leftover
// degree-one vertices. chi stays bounded while nu_n/mu_n explodes.
struct StarReport {
    std::int64_t n = 0;
    std::int64_t hub_degree = 0;        // floor(a sqrt(n)), as constructed in the limit
    double formula_chi = 0.0;           // ((hub+1)^2 + 2(n-1-hub)) / n
    double limit_chi = 0.0;             // a^2 + 2
    ExtReal naive_limit;                // (2 - a^2)/(1 - a^2), infinite at a >= 1
    std::int64_t realized_hub = 0;      // hub adjusted so the matching pairs up
    double realized_formula = 0.0;
    double realized_chi = 0.0;          // measured on one simple sample
    bool realized_matches = false;
};

// Two hubs of degree a sqrt(n) in a sea of degree-one vertices. chi becomes
// a two-point law depending on whether the hubs touch.
struct TwoStarReport {
    std::int64_t n = 0;
    std::int64_t hub_degree = 0;
    std::int64_t reps = 0;
    std::int64_t edge_count = 0;       // replicates with a hub-hub edge
    double edge_freq = 0.0;
    double freq_std_error = 0.0;
    double claimed_limit = 0.0;        // a^2 / (a^2 + 2)
    double exact_prob = 0.0;           // d^2 / (d^2 + N - 2d + 2), N = n - 2 ones
    double chi_with_edge = 0.0;        // (4d^2 + 2(N - 2d + 2)) / n
    double chi_without_edge = 0.0;     // (2(d+1)^2 + 2(N - 2d)) / n
    bool chi_two_point = false;        // every replicate hit one of the two values
};

// A random cubic core of 2 floor(a sqrt(n)) vertices plus isolated dust.
struct CubicCoreReport {
    std::int64_t n = 0;
    std::int64_t core_size = 0;
    std::int64_t reps = 0;
    std::int64_t connected_count = 0;
    double connected_fraction = 0.0;
    double mean_chi_connected = 0.0;  // == formula_chi whenever the core is connected
    double formula_chi = 0.0;         // (n - core + core^2) / n
    double limit_chi = 0.0;           // 1 + 4 a^2
};

struct CounterexampleResult {
    double a = 0.0;
    StarReport star;
    TwoStarReport two_star;
    CubicCoreReport cubic_core;
};

inline StarReport star_counterexample(double a, std::int64_t n, std::uint64_t seed) {
    StarReport rep;
    rep.n = n;
    rep.hub_degree = static_cast<std::int64_t>(std::floor(a * std::sqrt(static_cast<double>(n))));
    rep.formula_chi = (static_cast<double>((rep.hub_degree + 1) * (rep.hub_degree + 1)) +
                       2.0 * static_cast<double>(n - 1 - rep.hub_degree)) /
                      static_cast<double>(n);
    rep.limit_chi = a * a + 2.0;
    rep.naive_limit = a * a < 1.0 ? ExtReal((2.0 - a * a) / (1.0 - a * a)) : ExtReal::infinity();
    // The leftover degree-one vertices must pair up; bump the hub when the
    // leftover count is odd.
    rep.realized_hub = rep.hub_degree + ((n - 1 - rep.hub_degree) % 2 == 0 ? 0 : 1);
    rep.realized_formula = (static_cast<double>((rep.realized_hub + 1) * (rep.realized_hub + 1)) +
                            2.0 * static_cast<double>(n - 1 - rep.realized_hub)) /
                           static_cast<double>(n);
    std::vector<std::int64_t> degrees(n, 1);
    degrees[n - 1] = rep.realized_hub;
    const DegreeSequence seq = DegreeSequence::from_degrees(std::move(degrees));
    SeededRng rng(seed, 0);
    const SimpleSample sample = sample_simple(seq, rng);
    rep.realized_chi = susceptibility(components(sample.graph));
    rep.realized_matches = rep.realized_chi == rep.realized_formula;
    return rep;
}

inline TwoStarReport two_star_counterexample(double a, std::int64_t n, std::int64_t reps,
                                             std::uint64_t seed, int workers = 1) {
    if (n < 10) throw std::invalid_argument("two-star counterexample needs n >= 10");
    if (reps < 1) throw std::invalid_argument("two-star counterexample needs reps >= 1");
    TwoStarReport rep;
    rep.n = n;
    rep.reps = reps;
    rep.hub_degree = static_cast<std::int64_t>(std::floor(a * std::sqrt(static_cast<double>(n))));
    const std::int64_t d = rep.hub_degree;
    const std::int64_t ones = n - 2;
    if ((2 * d + ones) % 2 != 0)
        throw std::invalid_argument("two-star counterexample needs an even one count");
    rep.claimed_limit = a * a / (a * a + 2.0);
    rep.exact_prob = static_cast<double>(d * d) /
                     static_cast<double>(d * d + ones - 2 * d + 2);
    rep.chi_with_edge = (4.0 * static_cast<double>(d * d) +
                         2.0 * static_cast<double>(ones - 2 * d + 2)) /
                        static_cast<double>(n);
    rep.chi_without_edge = (2.0 * static_cast<double>((d + 1) * (d + 1)) +
                            2.0 * static_cast<double>(ones - 2 * d)) /
                           static_cast<double>(n);
    std::vector<std::int64_t> degrees(n, 1);
    degrees[0] = d;
    degrees[1] = d;
    const DegreeSequence seq = DegreeSequence::from_degrees(std::move(degrees));
    std::vector<char> has_edge(reps, 0), on_point(reps, 0);
    parallel_replicates(reps, workers, [&](std::int64_t r) {
        SeededRng rng(seed, static_cast<std::uint64_t>(r));
        const SimpleSample sample = sample_simple(seq, rng);
        bool edge12 = false;
        for (const auto& [u, v] : sample.graph.edges)
            if (u == 0 && v == 1) {
                edge12 = true;
                break;
            }
        has_edge[r] = edge12;
        const double chi = susceptibility(components(sample.graph));
        on_point[r] = chi == (edge12 ? rep.chi_with_edge : rep.chi_without_edge);
    });
    for (std::int64_t r = 0; r < reps; ++r) rep.edge_count += has_edge[r];
    rep.edge_freq = static_cast<double>(rep.edge_count) / static_cast<double>(reps);
    rep.freq_std_error =
        std::sqrt(rep.edge_freq * (1.0 - rep.edge_freq) / static_cast<double>(reps));
    rep.chi_two_point = std::all_of(on_point.begin(), on_point.end(), [](char c) { return c != 0; });
    return rep;
}

inline CubicCoreReport cubic_core_counterexample(double a, std::int64_t n, std::int64_t reps,
                                                 std::uint64_t seed, int workers = 1) {
    if (reps < 1) throw std::invalid_argument("cubic core counterexample needs reps >= 1");
    CubicCoreReport rep;
    rep.n = n;
    rep.reps = reps;
    rep.core_size =
        2 * static_cast<std::int64_t>(std::floor(a * std::sqrt(static_cast<double>(n))));
    if (rep.core_size < 4 || rep.core_size > n)
        throw std::invalid_argument("cubic core size out of range");
    rep.formula_chi = (static_cast<double>(n - rep.core_size) +
                       static_cast<double>(rep.core_size) * static_cast<double>(rep.core_size)) /
                      static_cast<double>(n);
    rep.limit_chi = 1.0 + 4.0 * a * a;
    std::vector<std::int64_t> degrees(n, 0);
    for (std::int64_t v = 0; v < rep.core_size; ++v) degrees[v] = 3;
    const DegreeSequence seq = DegreeSequence::from_degrees(std::move(degrees));
    std::vector<char> connected(reps, 0);
    std::vector<double> chis(reps, 0.0);
    parallel_replicates(reps, workers, [&](std::int64_t r) {
        SeededRng rng(seed, static_cast<std::uint64_t>(r));
        const MultiGraph g = sample_multigraph(seq, rng);
        const ComponentSummary s = components(g);
        connected[r] = s.sizes[0] == rep.core_size;
        chis[r] = susceptibility(s);
    });
    NeumaierSum chi_sum;
    for (std::int64_t r = 0; r < reps; ++r) {
        if (!connected[r]) continue;
        ++rep.connected_count;
        chi_sum.add(chis[r]);
    }
    rep.connected_fraction = static_cast<double>(rep.connected_count) / static_cast<double>(reps);
    rep.mean_chi_connected =
        rep.connected_count > 0 ? chi_sum.value() / static_cast<double>(rep.connected_count) : 0.0;
    return rep;
}

inline CounterexampleResult counterexample_suite(double a, std::int64_t n,
                                                 std::int64_t two_star_reps,
                                                 std::int64_t cubic_reps, std::uint64_t seed,
                                                 int workers = 1) {
    CounterexampleResult result;
    result.a = a;
    result.star = star_counterexample(a, n, seed);
    result.two_star = two_star_counterexample(a, n, two_star_reps, seed + 1, workers);
    result.cubic_core = cubic_core_counterexample(a, n, cubic_reps, seed + 2, workers);
    return result;
}

}  // namespace suslab
