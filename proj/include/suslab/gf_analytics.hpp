#pragma once

// Generating-function analytics for the limiting branching process of the
// configuration model: PGF evaluation, the extinction fixed point kappa,
// survival probability, limit susceptibilities in both branching-process and
// degree-law form, the dual (subcritical shadow) law, the finite-n
// prediction, and the delta metric used to compare values in [1, inf].

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "degree_model.hpp"
#include "ext_real.hpp"
#include "numeric.hpp"

namespace suslab {

// PGF of a probability table and its first two derivatives:
// order 0 -> sum p_k x^k, 1 -> sum k p_k x^(k-1), 2 -> sum k(k-1) p_k x^(k-2).
// Ascending k with a running power and compensated accumulation.
inline double pgf(std::span<const double> probs, double x, int order) {
    if (order < 0 || order > 2) throw std::invalid_argument("pgf order must be 0, 1, or 2");
    NeumaierSum sum;
    double xp = 1.0;  // x^(k - order) for the current k
    for (std::size_t k = order; k < probs.size(); ++k) {
        const double kd = static_cast<double>(k);
        double coeff = probs[k];
        if (order >= 1) coeff *= kd;
        if (order == 2) coeff *= kd - 1.0;
        sum.add(coeff * xp);
        xp *= x;
    }
    return sum.value();
}

inline double pgf(const DegreeDistribution& dist, double x, int order) {
    return pgf(std::span<const double>(dist.probs()), x, order);
}

// Offspring law of the two-stage branching process after the root: the
// shifted size-biased degree, P(D* = k) = (k+1) p_{k+1} / mu.
inline std::vector<double> size_biased_shifted_table(const DegreeDistribution& dist) {
    const Moments mo = dist_moments(dist);
    if (!(mo.mu > 0.0))
        throw std::invalid_argument("size-biased law needs a positive mean degree");
    const auto& p = dist.probs();
    std::vector<double> q(p.size() > 1 ? p.size() - 1 : 1, 0.0);
    for (std::size_t k = 1; k < p.size(); ++k)
        q[k - 1] = static_cast<double>(k) * p[k] / mo.mu;
    return q;
}

// Two-stage branching process: the root reproduces by the root law, every
// later individual by the general law.
struct BranchingSpec {
    std::vector<double> root;
    std::vector<double> general;

    static BranchingSpec two_stage(const DegreeDistribution& dist) {
        return BranchingSpec{dist.probs(), size_biased_shifted_table(dist)};
    }

    double root_mean() const { return pgf(std::span<const double>(root), 1.0, 1); }
    double general_mean() const { return pgf(std::span<const double>(general), 1.0, 1); }
};

struct FixedPoint {
    double kappa = 1.0;
    int evaluations = 0;
    double residual = 0.0;  // |G(kappa) - kappa|
};

inline constexpr int kFixedPointEvalCap = 200;

// Smallest s in [0, 1] with G(s) = s, where G is the PGF of the offspring
// law q. q_0 = 0 makes 0 a root; a mean at most 1 leaves only s = 1;
// otherwise the root is bracketed in (0, 1) and bisected to full precision.
inline FixedPoint smallest_fixed_point(std::span<const double> q) {
    FixedPoint fp;
    if (q.empty()) throw std::invalid_argument("empty offspring law");
    if (q[0] == 0.0) {
        fp.kappa = 0.0;
        return fp;
    }
    const double mean = pgf(q, 1.0, 1);
    if (mean <= 1.0) {
        fp.kappa = 1.0;
        return fp;
    }
    const auto psi = [&](double s) { return pgf(q, s, 0) - s; };
    // psi(0) = q_0 > 0; find an upper bracket with psi < 0 just left of 1.
    double hi = 1.0 - 1e-3;
    double psi_hi = psi(hi);
    ++fp.evaluations;
    while (psi_hi >= 0.0) {
        hi = 1.0 - 0.5 * (1.0 - hi);
        if (1.0 - hi < 1e-15) {
            // Root indistinguishable from 1 at double precision.
            fp.kappa = 1.0;
            return fp;
        }
        psi_hi = psi(hi);
        if (++fp.evaluations > kFixedPointEvalCap)
            throw convergence_error("fixed point bracketing exceeded evaluation budget");
    }
    double lo = 0.0;
    while (hi - lo > 1e-15) {
        const double mid = 0.5 * (lo + hi);
        const double v = psi(mid);
        if (++fp.evaluations > kFixedPointEvalCap)
            throw convergence_error("fixed point bisection exceeded evaluation budget");
        if (v >= 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    fp.kappa = 0.5 * (lo + hi);
    fp.residual = std::abs(psi(fp.kappa));
    return fp;
}

// Extinction fixed point of the degree law's branching process: the smallest
// nonnegative root of g'(s) = mu s. Exactly 1 when nu <= mu and p1 > 0;
// exactly 0 iff p1 = 0.
inline FixedPoint solve_kappa_detail(const DegreeDistribution& dist) {
    return smallest_fixed_point(size_biased_shifted_table(dist));
}

inline double solve_kappa(const DegreeDistribution& dist) {
    return solve_kappa_detail(dist).kappa;
}

// Survival probability 1 - g(kappa); exactly 0 at and below criticality.
inline double survival(const DegreeDistribution& dist) {
    const double kappa = solve_kappa(dist);
    if (kappa == 1.0) return 0.0;
    return 1.0 - pgf(dist, kappa, 0);
}

// Mean cluster size of the branching process: 1 + E xi0 / (1 - E xi)+.
inline ExtReal chi_general(const BranchingSpec& spec) {
    const double mean = spec.general_mean();
    if (mean >= 1.0) return ExtReal::infinity();
    return ExtReal(1.0 + spec.root_mean() / (1.0 - mean));
}

// Mean finite-cluster size G0(kappa) + kappa G0'(kappa) / (1 - G'(kappa)).
// kappa = 0 (the degenerate P(xi = 1) = 1 law included) reduces to G0(0);
// kappa = 1 coincides with chi_general exactly.
inline ExtReal chi_hat_general(const BranchingSpec& spec) {
    const FixedPoint fp = smallest_fixed_point(std::span<const double>(spec.general));
    const std::span<const double> root(spec.root);
    const std::span<const double> general(spec.general);
    if (fp.kappa == 0.0) return ExtReal(pgf(root, 0.0, 0));
    if (fp.kappa == 1.0) return chi_general(spec);
    const double denom = 1.0 - pgf(general, fp.kappa, 1);
    if (denom <= 0.0) return ExtReal::infinity();
    return ExtReal(pgf(root, fp.kappa, 0) + fp.kappa * pgf(root, fp.kappa, 1) / denom);
}

// Limit susceptibility of the graph: 1 + mu^2 / (mu - nu)+, infinite at and
// above criticality. A law with no edges has chi = 1.
inline ExtReal chi_graph_limit(const DegreeDistribution& dist) {
    const Moments mo = dist_moments(dist);
    if (mo.mu == 0.0) return ExtReal(1.0);
    if (mo.nu >= mo.mu) return ExtReal::infinity();
    return ExtReal(1.0 + mo.mu * mo.mu / (mo.mu - mo.nu));
}

// The two closed forms of the modified susceptibility limit. They agree to
// 1e-9 on any law the fixed point solver resolves cleanly; the ratio form is
// the one reported.
struct ChiHatForms {
    ExtReal mixed;  // g(k) + k g'(k) / (1 - g''(k)/mu)
    ExtReal ratio;  // g(k) + k g'(k)^2 / (g'(k) - k g''(k))
};

inline ChiHatForms chi_hat_forms_at(const DegreeDistribution& dist, double kappa) {
    if (kappa == 1.0) {
        const ExtReal chi = chi_graph_limit(dist);
        return ChiHatForms{chi, chi};
    }
    if (kappa == 0.0) {
        // Both numerators vanish with kappa; only the isolated mass remains.
        const ExtReal p0 = ExtReal(pgf(dist, 0.0, 0));
        return ChiHatForms{p0, p0};
    }
    const Moments mo = dist_moments(dist);
    const double gk = pgf(dist, kappa, 0);
    const double g1 = pgf(dist, kappa, 1);
    const double g2 = pgf(dist, kappa, 2);
    ChiHatForms forms;
    const double mixed_denom = 1.0 - g2 / mo.mu;
    forms.mixed = mixed_denom > 0.0 ? ExtReal(gk + kappa * g1 / mixed_denom)
                                    : ExtReal::infinity();
    const double ratio_denom = g1 - kappa * g2;
    forms.ratio = ratio_denom > 0.0 ? ExtReal(gk + kappa * g1 * g1 / ratio_denom)
                                    : ExtReal::infinity();
    return forms;
}

inline ChiHatForms chi_hat_forms(const DegreeDistribution& dist) {
    return chi_hat_forms_at(dist, solve_kappa(dist));
}

inline ExtReal chi_hat_graph_limit(const DegreeDistribution& dist) {
    return chi_hat_forms(dist).ratio;
}

// Dual law p^_k = p_k kappa^k / g(kappa). Identity at or below criticality.
inline DegreeDistribution dual_distribution_at(const DegreeDistribution& dist, double kappa) {
    if (kappa == 1.0) return dist;
    const double gk = pgf(dist, kappa, 0);
    if (!(gk > 0.0))
        throw std::domain_error("dual law undefined: no finite clusters (g(kappa) = 0)");
    const auto& p = dist.probs();
    std::vector<double> dual(p.size(), 0.0);
    double kp = 1.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        dual[k] = p[k] * kp / gk;
        kp *= kappa;
    }
    return DegreeDistribution::from_trusted(std::move(dual), TailSpec{}, true);
}

inline DegreeDistribution dual_distribution(const DegreeDistribution& dist) {
    return dual_distribution_at(dist, solve_kappa(dist));
}

// Finite-n prediction 1 + mu_n^2 / (mu_n - nu_n)+; 1 for edgeless sequences.
inline ExtReal finite_n_prediction(const Moments& mo) {
    if (mo.mu == 0.0) return ExtReal(1.0);
    if (mo.nu >= mo.mu) return ExtReal::infinity();
    return ExtReal(1.0 + mo.mu * mo.mu / (mo.mu - mo.nu));
}

inline ExtReal finite_n_prediction(double mu, double nu) {
    return finite_n_prediction(Moments{mu, nu});
}

// Metric |1/x - 1/y| on [1, inf]; 1/inf = 0.
inline double delta_metric(const ExtReal& x, const ExtReal& y) {
    const auto check = [](const ExtReal& v) {
        if (v.is_finite() && v.value() < 1.0 - 1e-12)
            throw std::invalid_argument("delta metric is defined on [1, inf]");
    };
    check(x);
    check(y);
    return std::abs(x.inverse() - y.inverse());
}

// Guard width around criticality: closer than this (but not exactly at it)
// the report flags the law as numerically critical and reports the critical
// values rather than huge finite ones.
inline constexpr double kNearCriticalGuard = 1e-9;

struct AnalyticsReport {
    Moments moments;
    CriticalityClass criticality = CriticalityClass::Critical;
    bool numerically_critical = false;
    double kappa = 1.0;
    double kappa_residual = 0.0;
    double rho_inf = 0.0;
    ExtReal chi_inf;
    ExtReal chi_hat_inf;
    DegreeDistribution dual = DegreeDistribution::from_probs({1.0});
    double mu_hat = 0.0;
    double nu_hat = 0.0;
};

inline AnalyticsReport analyze(const DegreeDistribution& dist) {
    AnalyticsReport rep;
    rep.moments = dist_moments(dist);
    if (!(rep.moments.mu > 0.0))
        throw std::invalid_argument("analytics need a positive mean degree");
    rep.criticality = classify(rep.moments);
    const double gap = rep.moments.nu - rep.moments.mu;
    rep.numerically_critical = gap != 0.0 && std::abs(gap) < kNearCriticalGuard;
    if (rep.numerically_critical || rep.criticality == CriticalityClass::Critical) {
        rep.kappa = 1.0;
        rep.rho_inf = 0.0;
        rep.chi_inf = ExtReal::infinity();
        rep.chi_hat_inf = ExtReal::infinity();
        rep.dual = dist;
        rep.mu_hat = rep.moments.mu;
        rep.nu_hat = rep.moments.nu;
        return rep;
    }
    const FixedPoint fp = solve_kappa_detail(dist);
    rep.kappa = fp.kappa;
    rep.kappa_residual = fp.residual;
    rep.rho_inf = fp.kappa == 1.0 ? 0.0 : 1.0 - pgf(dist, fp.kappa, 0);
    rep.chi_inf = chi_graph_limit(dist);
    rep.chi_hat_inf = chi_hat_forms_at(dist, fp.kappa).ratio;
    rep.dual = dual_distribution_at(dist, fp.kappa);
    if (fp.kappa == 1.0) {
        rep.mu_hat = rep.moments.mu;
        rep.nu_hat = rep.moments.nu;
    } else {
        const double gk = pgf(dist, fp.kappa, 0);
        rep.mu_hat = fp.kappa * fp.kappa * rep.moments.mu / gk;
        rep.nu_hat = fp.kappa * fp.kappa * pgf(dist, fp.kappa, 2) / gk;
    }
    return rep;
}

}  // namespace suslab
