// Acceptance gate: one line per criterion, [PASS]/[FAIL] with the measured
// values and the pinned tolerances. Exit code 0 only when every criterion
// holds. Stochastic criteria rerun under 1, 4, and 8 workers and must be
// byte-identical (criterion 9).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <suslab/suslab.hpp>

#include "support/stats.hpp"

namespace {

using namespace suslab;

constexpr std::uint64_t kSeedC1 = 202608011;
constexpr std::uint64_t kSeedC23 = 202608012;
constexpr std::uint64_t kSeedC4Graph = 202608013;
constexpr std::uint64_t kSeedC4Bp = 202608014;
constexpr std::uint64_t kSeedC5Paths = 202608015;
constexpr std::uint64_t kSeedC5Chi = 202608016;
constexpr std::uint64_t kSeedC6Quad = 202608017;
constexpr std::uint64_t kSeedC6Duo = 202608018;
constexpr std::uint64_t kSeedC8 = 202608019;

int g_failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << id << ": " << detail << "\n";
    if (!pass) ++g_failures;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DegreeDistribution sub_law() { return DegreeDistribution::from_probs({0.0, 0.8, 0.0, 0.2}); }
DegreeDistribution super_law() { return DegreeDistribution::from_probs({0.0, 0.5, 0.0, 0.5}); }

// ---- criterion 1: subcritical chi and chi-hat convergence ------------------

struct C1Run {
    ConvergenceRow row;
    double seconds = 0.0;
    std::string bytes;
};

C1Run run_c1(int workers) {
    const std::vector<std::int64_t> grid{100000};
    const auto t0 = std::chrono::steady_clock::now();
    const ConvergenceResult res = convergence_experiment(sub_law(), grid, 50, kSeedC1, workers);
    C1Run r;
    r.row = res.rows.at(0);
    r.seconds = seconds_since(t0);
    r.bytes = to_json(res).dump();
    return r;
}

bool gate_c1(const C1Run& r) {
    const double tol = 0.05 * 10.8;
    const double chi_dev = std::abs(r.row.chi.mean - 10.8) / 10.8 * 100.0;
    const double chi_hat_dev = std::abs(r.row.chi_hat.mean - 10.8) / 10.8 * 100.0;
    const bool ok = std::abs(r.row.chi.mean - 10.8) <= tol &&
                    std::abs(r.row.chi_hat.mean - 10.8) <= tol && r.seconds < 120.0;
    report("C1 subcritical convergence (n=1e5, 50 reps)", ok,
           "mean chi=" + num(r.row.chi.mean) + " (dev " + num(chi_dev) +
               "%), mean chi_hat=" + num(r.row.chi_hat.mean) + " (dev " + num(chi_hat_dev) +
               "%), target 10.8 within 5%, runtime=" + num(r.seconds) + "s (limit 120s)");
    return ok;
}

// ---- criteria 2 and 3: supercritical giant and duality ---------------------

struct C23Run {
    DualityResult res;
    std::string bytes;
};

C23Run run_c23(int workers) {
    C23Run r;
    r.res = duality_experiment(super_law(), 100000, 50, kSeedC23, workers);
    r.bytes = to_json(r.res).dump();
    return r;
}

bool gate_c2(const C23Run& r) {
    const double rho = 22.0 / 27.0;
    const double chi_hat_target = 17.0 / 27.0;
    const double v1 = r.res.giant_degree_fraction.at(1).mean;
    const bool ok = std::abs(r.res.c1_fraction.mean - rho) <= 0.02 * rho &&
                    std::abs(r.res.chi_hat.mean - chi_hat_target) <= 0.05 * chi_hat_target &&
                    std::abs(v1 - 1.0 / 3.0) <= 0.01;
    report("C2 supercritical giant and chi_hat (n=1e5, 50 reps)", ok,
           "|C1|/n=" + num(r.res.c1_fraction.mean) + " (target " + num(rho) +
               " within 2%), chi_hat=" + num(r.res.chi_hat.mean) + " (target " +
               num(chi_hat_target) + " within 5%), v1(C1)/n=" + num(v1) +
               " (target 1/3 within 0.01)");
    return ok;
}

bool gate_c3(const C23Run& r) {
    const bool ok = r.res.tv_residual_law.mean <= 0.02 &&
                    std::abs(r.res.residual_chi.mean - 3.4) <= 0.05 * 3.4 &&
                    r.res.all_residual_subcritical;
    report("C3 duality of the residual graph", ok,
           "TV(residual law, dual)=" + num(r.res.tv_residual_law.mean) +
               " (limit 0.02), residual chi=" + num(r.res.residual_chi.mean) +
               " (target 3.4 within 5%), subcritical runs=" +
               std::to_string(r.res.residual_subcritical_count) + "/" +
               std::to_string(r.res.reps));
    return ok;
}

// ---- criterion 4: component spectrum against the branching process ---------

struct C4Run {
    std::vector<double> graph_mean = std::vector<double>(7, 0.0);
    std::vector<double> graph_se = std::vector<double>(7, 0.0);
    ClusterLawEstimate law;
    std::string bytes;
};

C4Run run_c4(int workers) {
    C4Run r;
    const DegreeSequence seq = realize_sequence(super_law(), 100000);
    constexpr std::int64_t kGraphReps = 20;
    std::vector<std::vector<double>> nk(7, std::vector<double>(kGraphReps, 0.0));
    for (std::int64_t rep = 0; rep < kGraphReps; ++rep) {
        SeededRng rng(kSeedC4Graph, static_cast<std::uint64_t>(rep));
        const MultiGraph g = sample_multigraph(seq, rng);
        const ComponentSummary s = components(g);
        for (std::int64_t k = 1; k <= 6; ++k) {
            const auto it = s.spectrum.find(k);
            if (it != s.spectrum.end())
                nk[k][rep] = static_cast<double>(it->second) / 100000.0;
        }
    }
    for (std::int64_t k = 1; k <= 6; ++k) {
        const MeanStderr ms = mean_stderr(nk[k]);
        r.graph_mean[k] = ms.mean;
        r.graph_se[k] = ms.std_error;
    }
    r.law = estimate_cluster_law(super_law(), 100000, 10000, 6, kSeedC4Bp, workers);
    json j;
    j["graph_mean"] = r.graph_mean;
    j["graph_se"] = r.graph_se;
    j["rho"] = r.law.rho;
    j["rho_se"] = r.law.std_error;
    j["escaped_fraction"] = r.law.escaped_fraction;
    r.bytes = j.dump();
    return r;
}

bool gate_c4(const C4Run& r) {
    bool ok = true;
    for (std::int64_t k = 1; k <= 6; ++k) {
        const double diff = std::abs(r.graph_mean[k] - r.law.rho[k]);
        const double combined = std::sqrt(r.graph_se[k] * r.graph_se[k] +
                                          r.law.std_error[k] * r.law.std_error[k]);
        if (diff > 3.0 * combined) ok = false;
    }
    const bool spot = std::abs(r.law.rho[2] - 0.125) <= 3.0 * r.law.std_error[2];
    ok = ok && spot;
    report("C4 spectrum N_k/n vs branching-process rho_k (k=1..6)", ok,
           "N2/n=" + num(r.graph_mean[2]) + " vs rho_2=" + num(r.law.rho[2]) +
               " (spot target 0.125), N4/n=" + num(r.graph_mean[4]) + " vs rho_4=" +
               num(r.law.rho[4]) + ", N6/n=" + num(r.graph_mean[6]) + " vs rho_6=" +
               num(r.law.rho[6]) + ", all |diff| <= 3 combined se");
    return ok;
}

// ---- criterion 5: first-moment path bounds and the chi bound ---------------

struct C5Run {
    PathBoundResult pb;
    MeanStderr chi;
    double chi_bound = 0.0;
    std::string bytes;
};

C5Run run_c5(int workers) {
    C5Run r;
    const DegreeSequence seq = DegreeSequence::from_counts({{1, 240}, {3, 60}});
    r.pb = path_bound_audit(seq, 4, 200, kSeedC5Paths, workers);
    std::vector<double> chis(200, 0.0);
    for (std::int64_t rep = 0; rep < 200; ++rep) {
        SeededRng rng(kSeedC5Chi, static_cast<std::uint64_t>(rep));
        chis[rep] = susceptibility(components(sample_multigraph(seq, rng)));
    }
    r.chi = mean_stderr(chis);
    const Moments mo = moments(seq);
    r.chi_bound = 1.0 + mo.mu * mo.mu / (mo.mu - mo.nu);
    r.bytes = to_json(r.pb).dump() + "|" + format_double(r.chi.mean) + "," +
              format_double(r.chi.std_error);
    return r;
}

bool gate_c5(const C5Run& r) {
    bool paths_ok = true;
    for (const auto& row : r.pb.rows) paths_ok = paths_ok && row.within;
    const bool chi_ok = r.chi.mean <= r.chi_bound + 3.0 * r.chi.std_error;
    const bool ok = paths_ok && chi_ok;
    std::string path_means;
    for (const auto& row : r.pb.rows) {
        if (!path_means.empty()) path_means += "/";
        path_means += num(row.count.mean);
    }
    report("C5 path and chi moment bounds ({1:240,3:60}, 200 reps)", ok,
           "mean P_0..4=" + path_means + " all within bound+3se, mean chi=" + num(r.chi.mean) +
               " <= " + num(r.chi_bound) + "+3se");
    return ok;
}

// ---- criterion 6: pairing uniformity against exact matchings ---------------

struct C6Run {
    std::vector<std::int64_t> quad = std::vector<std::int64_t>(3, 0);
    std::vector<std::int64_t> duo = std::vector<std::int64_t>(2, 0);
    double p_quad = 0.0;
    double p_duo = 0.0;
    std::string bytes;
};

C6Run run_c6() {
    C6Run r;
    constexpr std::int64_t kSamples = 100000;
    const DegreeSequence four = DegreeSequence::from_counts({{1, 4}});
    for (std::int64_t i = 0; i < kSamples; ++i) {
        SeededRng rng(kSeedC6Quad, static_cast<std::uint64_t>(i));
        const MultiGraph g = sample_multigraph(four, rng);
        std::int64_t partner = -1;
        for (const auto& [u, v] : g.edges) {
            if (u == 0) partner = v;
            if (v == 0) partner = u;
        }
        ++r.quad.at(static_cast<std::size_t>(partner - 1));
    }
    const std::vector<double> quad_probs(3, 1.0 / 3.0);
    r.p_quad = suslab_test::chi_square_pvalue(r.quad, quad_probs, kSamples);

    const DegreeSequence two = DegreeSequence::from_counts({{2, 2}});
    for (std::int64_t i = 0; i < kSamples; ++i) {
        SeededRng rng(kSeedC6Duo, static_cast<std::uint64_t>(i));
        const MultiGraph g = sample_multigraph(two, rng);
        ++r.duo.at(g.loops == 2 ? 0 : 1);
    }
    const std::vector<double> duo_probs{1.0 / 3.0, 2.0 / 3.0};
    r.p_duo = suslab_test::chi_square_pvalue(r.duo, duo_probs, kSamples);

    for (auto c : r.quad) r.bytes += std::to_string(c) + ",";
    for (auto c : r.duo) r.bytes += std::to_string(c) + ",";
    return r;
}

bool gate_c6(const C6Run& r) {
    const bool ok = r.p_quad > 1e-3 && r.p_duo > 1e-3;
    report("C6 pairing uniformity (1e5 samples each)", ok,
           "d=(1,1,1,1) partner counts " + std::to_string(r.quad[0]) + "/" +
               std::to_string(r.quad[1]) + "/" + std::to_string(r.quad[2]) +
               " p=" + num(r.p_quad) + ", d=(2,2) loops/doubled " + std::to_string(r.duo[0]) +
               "/" + std::to_string(r.duo[1]) + " p=" + num(r.p_duo) + " (need p > 1e-3)");
    return ok;
}

// ---- criterion 7: critical exponents of the lambda family ------------------

struct SideFits {
    ExponentFit sub;
    ExponentFit sup;
};

SideFits fit_both_sides(const DegreeDistribution& h, double lo, double hi, int points) {
    const double lc = lambda_critical(h);
    const std::vector<double> xs = geometric_grid(lo, hi, points);
    std::vector<double> lambdas;
    for (double x : xs) lambdas.push_back(lc - x);
    for (double x : xs) lambdas.push_back(lc + x);
    const std::vector<SweepPoint> pts = critical_sweep(h, lambdas);
    std::vector<std::pair<double, double>> sub_pts, sup_pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sub_pts.emplace_back(xs[i], pts[i].chi_inf.value());
        sup_pts.emplace_back(xs[i], pts[xs.size() + i].chi_hat_inf.value());
    }
    SideFits f;
    f.sub = fit_exponent(sub_pts);
    f.sup = fit_exponent(sup_pts);
    return f;
}

bool run_and_gate_c7() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto cubic = DegreeDistribution::from_probs({0.0, 0.0, 0.0, 1.0});
    const double lc = lambda_critical(cubic);
    const double mu_c = dist_moments(lambda_family(cubic, lc)).mu;
    const double target = lc * mu_c * mu_c;
    const SideFits cf = fit_both_sides(cubic, 1e-4, 1e-2, 9);

    const auto e2 = DegreeDistribution::power_log_tail(2.0, 0.0, 2, 1000000, 0.1);
    const SideFits ef = fit_both_sides(e2, 1e-2, 1e-1, 9);
    const double seconds = seconds_since(t0);

    const bool slopes_ok = std::abs(cf.sub.slope - 1.0) <= 0.05 &&
                           std::abs(cf.sup.slope - 1.0) <= 0.05;
    const bool consts_ok =
        std::abs(cf.sub.leading_constant() - target) <= 0.05 * target &&
        std::abs(cf.sup.leading_constant() - target) <= 0.05 * target;
    const bool e2_ok = std::abs(ef.sup.slope - 2.0) <= 0.3 && ef.sup.slope > ef.sub.slope;
    const bool ok = slopes_ok && consts_ok && e2_ok && seconds < 300.0;
    report("C7 critical exponents (x^3 family and the log-tail law)", ok,
           "cubic slopes sub=" + num(cf.sub.slope) + " sup=" + num(cf.sup.slope) +
               " (need 1.00 +- 0.05), constants sub=" + num(cf.sub.leading_constant()) +
               " sup=" + num(cf.sup.leading_constant()) + " (need " + num(target) +
               " within 5%), log-tail sup slope=" + num(ef.sup.slope) +
               " (need 2.0 +- 0.3 and > sub slope=" + num(ef.sub.slope) +
               "), runtime=" + num(seconds) + "s (limit 300s)");
    return ok;
}

// ---- criterion 8: counterexample regressions --------------------------------

struct C8Run {
    CounterexampleResult res;
    std::string bytes;
};

C8Run run_c8(int workers) {
    C8Run r;
    r.res = counterexample_suite(1.0, 10000, 10000, 200, kSeedC8, workers);
    r.bytes = to_json(r.res).dump();
    return r;
}

bool gate_c8(const C8Run& r) {
    const bool star_ok = r.res.star.formula_chi == 2.9999;
    const double freq = r.res.two_star.edge_freq;
    const double se = r.res.two_star.freq_std_error;
    const double sigmas = se > 0.0 ? std::abs(freq - 1.0 / 3.0) / se
                                   : std::numeric_limits<double>::infinity();
    const bool two_star_ok = sigmas <= 3.0;
    const bool core_ok = r.res.cubic_core.connected_count >= 1 &&
                         std::abs(r.res.cubic_core.mean_chi_connected - 5.0) <= 0.25;
    const bool ok = star_ok && two_star_ok && core_ok;
    report("C8 counterexample regressions (a=1, n=1e4)", ok,
           "star chi=" + num(r.res.star.formula_chi) + " (need exactly 2.9999), hub-hub freq=" +
               num(freq) + " vs claimed 1/3 at " + num(sigmas) +
               " sigma (need <= 3; exact pairing prob=" + num(r.res.two_star.exact_prob) +
               "), core chi=" + num(r.res.cubic_core.mean_chi_connected) +
               " (need 5 within 0.25, connected " +
               std::to_string(r.res.cubic_core.connected_count) + "/" +
               std::to_string(r.res.cubic_core.reps) + ")");
    return ok;
}

// ---- criterion 9: worker-count determinism ----------------------------------

bool run_and_gate_c9(const std::string& base_bytes) {
    bool ok = true;
    for (int workers : {4, 8}) {
        std::string bytes = run_c1(workers).bytes;
        bytes += run_c23(workers).bytes;
        bytes += run_c4(workers).bytes;
        bytes += run_c5(workers).bytes;
        bytes += run_c6().bytes;
        bytes += run_c8(workers).bytes;
        if (bytes != base_bytes) ok = false;
    }
    report("C9 determinism across workers", ok,
           std::string(ok ? "criteria 1-6 and 8 byte-identical" : "byte mismatch") +
               " under workers 1, 4, and 8 with fixed seeds");
    return ok;
}

}  // namespace

int main() {
    const C1Run c1 = run_c1(1);
    gate_c1(c1);
    const C23Run c23 = run_c23(1);
    gate_c2(c23);
    gate_c3(c23);
    const C4Run c4 = run_c4(1);
    gate_c4(c4);
    const C5Run c5 = run_c5(1);
    gate_c5(c5);
    const C6Run c6 = run_c6();
    gate_c6(c6);
    run_and_gate_c7();
    const C8Run c8 = run_c8(1);
    gate_c8(c8);
    run_and_gate_c9(c1.bytes + c23.bytes + c4.bytes + c5.bytes + c6.bytes + c8.bytes);

    std::cout << "acceptance: " << (9 - g_failures) << "/9 criteria passed\n";
    return g_failures == 0 ? 0 : 1;
}
