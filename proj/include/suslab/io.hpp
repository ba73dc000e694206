#pragma once

// File formats and serialization: distribution spec JSON, "degree count"
// sequence files, edge lists with a reproducibility header, CSV tables, and
// JSON report rendering. Infinite values serialize as the string "inf" in
// JSON and as an empty cell in CSV. Doubles render via std::to_chars
// (shortest round-trip form) so identical runs emit identical bytes.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bp_montecarlo.hpp"
#include "component_stats.hpp"
#include "config_sampler.hpp"
#include "degree_model.hpp"
#include "experiment_harness.hpp"
#include "ext_real.hpp"
#include "gf_analytics.hpp"

namespace suslab {

using json = nlohmann::ordered_json;

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline json ext_to_json(const ExtReal& v) {
    if (!v.is_finite()) return json("inf");
    return json(v.value());
}

inline std::string ext_to_csv(const ExtReal& v) {
    return v.is_finite() ? format_double(v.value()) : std::string();
}

// ---- distribution specs ----------------------------------------------------

inline DegreeDistribution parse_distribution(const json& spec) {
    if (!spec.is_object() || !spec.contains("type"))
        throw std::invalid_argument("distribution spec needs a \"type\" field");
    const std::string type = spec.at("type").get<std::string>();
    if (type == "explicit") {
        if (!spec.contains("p") || !spec.at("p").is_object())
            throw std::invalid_argument("explicit spec needs a \"p\" object");
        std::map<std::int64_t, double> p;
        for (const auto& [key, value] : spec.at("p").items()) {
            std::int64_t k = 0;
            const auto res = std::from_chars(key.data(), key.data() + key.size(), k);
            if (res.ec != std::errc() || res.ptr != key.data() + key.size())
                throw std::invalid_argument("explicit spec keys must be integer degrees");
            p[k] = value.get<double>();
        }
        return DegreeDistribution::from_probs(p);
    }
    if (type == "power_tail") {
        const double alpha = spec.at("alpha").get<double>();
        const std::int64_t kmin = spec.value("kmin", std::int64_t{2});
        const double p1_floor = spec.value("p1_floor", 0.1);
        if (spec.contains("kmax"))
            return DegreeDistribution::power_tail(alpha, kmin, spec.at("kmax").get<std::int64_t>(),
                                                  p1_floor);
        return DegreeDistribution::power_tail_auto(alpha, kmin, p1_floor);
    }
    if (type == "power_log_tail") {
        const double alpha = spec.at("alpha").get<double>();
        const double loglog = spec.value("loglog", 0.0);
        const std::int64_t kmin = spec.value("kmin", loglog != 0.0 ? std::int64_t{4} : std::int64_t{2});
        const std::int64_t kmax = spec.value("kmax", std::int64_t{1000000});
        const double p1_floor = spec.value("p1_floor", 0.1);
        return DegreeDistribution::power_log_tail(alpha, loglog, kmin, kmax, p1_floor);
    }
    if (type == "lambda_mix") {
        if (!spec.contains("h")) throw std::invalid_argument("lambda_mix spec needs \"h\"");
        const DegreeDistribution h = parse_distribution(spec.at("h"));
        return lambda_family(h, spec.at("lambda").get<double>());
    }
    throw std::invalid_argument("unknown distribution type \"" + type + "\"");
}

inline DegreeDistribution load_distribution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open distribution spec " + path);
    json spec = json::parse(in);
    return parse_distribution(spec);
}

// Canonical explicit form of a law.
inline json distribution_to_json(const DegreeDistribution& dist) {
    json p = json::object();
    const auto& probs = dist.probs();
    for (std::size_t k = 0; k < probs.size(); ++k)
        if (probs[k] > 0.0) p[std::to_string(k)] = probs[k];
    json out;
    out["type"] = "explicit";
    out["p"] = std::move(p);
    return out;
}

// ---- degree sequence files: "degree count" per line, '#' comments ----------

inline DegreeSequence parse_degree_sequence(std::istream& in) {
    std::map<std::int64_t, std::int64_t> counts;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        std::int64_t degree = 0, count = 0;
        if (!(row >> degree)) continue;
        if (!(row >> count)) throw std::invalid_argument("degree sequence line needs \"degree count\"");
        counts[degree] += count;
    }
    return DegreeSequence::from_counts(counts);
}

inline DegreeSequence load_degree_sequence(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open degree sequence " + path);
    return parse_degree_sequence(in);
}

inline void write_degree_sequence(std::ostream& out, const DegreeSequence& seq) {
    for (const auto& [k, c] : seq.counts()) out << k << ' ' << c << '\n';
}

// ---- edge lists -------------------------------------------------------------

// "u v" per line, 1-based labels, preceded by a reproducibility header.
inline void write_edge_list(std::ostream& out, const MultiGraph& g, std::uint64_t seed,
                            std::uint64_t stream, std::uint64_t degree_digest) {
    out << "# suslab edge list\n";
    out << "# n=" << g.n << " m=" << g.m() << "\n";
    out << "# seed=" << seed << " stream=" << stream << "\n";
    char digest[17];
    std::snprintf(digest, sizeof(digest), "%016llx",
                  static_cast<unsigned long long>(degree_digest));
    out << "# degree-digest=" << digest << "\n";
    for (const auto& [u, v] : g.edges) out << (u + 1) << ' ' << (v + 1) << '\n';
}

inline MultiGraph parse_edge_list(std::istream& in) {
    MultiGraph g;
    std::int64_t declared_n = -1;
    std::string line;
    std::int64_t max_label = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') {
            const auto pos = line.find("n=");
            if (pos != std::string::npos && declared_n < 0) {
                std::istringstream field(line.substr(pos + 2));
                field >> declared_n;
            }
            continue;
        }
        std::istringstream row(line);
        std::int64_t u = 0, v = 0;
        if (!(row >> u)) continue;
        if (!(row >> v)) throw std::invalid_argument("edge list line needs \"u v\"");
        if (u < 1 || v < 1) throw std::invalid_argument("edge list labels are 1-based");
        max_label = std::max({max_label, u, v});
        g.edges.emplace_back(std::min(u, v) - 1, std::max(u, v) - 1);
    }
    g.n = declared_n > 0 ? declared_n : max_label;
    if (max_label > g.n) throw std::invalid_argument("edge label exceeds declared n");
    g.degrees.assign(g.n, 0);
    for (const auto& [u, v] : g.edges) {
        ++g.degrees[u];
        ++g.degrees[v];
    }
    const SimpleCheck check = is_simple(g);
    g.loops = check.loops;
    g.multi_pairs = check.multi_pairs;
    return g;
}

inline MultiGraph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list " + path);
    return parse_edge_list(in);
}

// ---- CSV tables -------------------------------------------------------------

inline void write_components_csv(std::ostream& out, const ComponentSummary& s) {
    out << "component_id,size\n";
    for (std::size_t i = 0; i < s.sizes.size(); ++i) out << i << ',' << s.sizes[i] << '\n';
}

inline void write_spectrum_csv(std::ostream& out, const ComponentSummary& s) {
    out << "k,N_k\n";
    for (const auto& [k, nk] : s.spectrum) out << k << ',' << nk << '\n';
}

inline void write_convergence_csv(std::ostream& out, const ConvergenceResult& result) {
    out << "n,reps,mu_n,nu_n,mean_chi,se_chi,mean_chi_hat,se_chi_hat,"
           "chi_limit,chi_hat_limit,finite_n_prediction,"
           "delta_chi_vs_limit,delta_chi_vs_prediction,abs_chi_hat_vs_limit\n";
    for (const auto& row : result.rows) {
        out << row.n << ',' << row.reps << ',' << format_double(row.empirical.mu) << ','
            << format_double(row.empirical.nu) << ',' << format_double(row.chi.mean) << ','
            << format_double(row.chi.std_error) << ',' << format_double(row.chi_hat.mean) << ','
            << format_double(row.chi_hat.std_error) << ',' << ext_to_csv(row.chi_limit) << ','
            << ext_to_csv(row.chi_hat_limit) << ',' << ext_to_csv(row.finite_pred) << ','
            << format_double(row.delta_chi_vs_limit) << ','
            << format_double(row.delta_chi_vs_pred) << ','
            << (std::isfinite(row.abs_chi_hat_vs_limit)
                    ? format_double(row.abs_chi_hat_vs_limit)
                    : std::string())
            << '\n';
    }
}

inline void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points,
                            double lambda_c) {
    out << "lambda,distance,mu,nu,kappa,chi_inf,chi_hat_inf\n";
    for (const auto& pt : points) {
        out << format_double(pt.lambda) << ',' << format_double(std::abs(pt.lambda - lambda_c))
            << ',' << format_double(pt.mu) << ',' << format_double(pt.nu) << ','
            << format_double(pt.kappa) << ',' << ext_to_csv(pt.chi_inf) << ','
            << ext_to_csv(pt.chi_hat_inf) << '\n';
    }
}

inline void write_pathbound_csv(std::ostream& out, const PathBoundResult& result) {
    out << "length,mean_count,se_count,bound,within\n";
    for (const auto& row : result.rows) {
        out << row.length << ',' << format_double(row.count.mean) << ','
            << format_double(row.count.std_error) << ',' << format_double(row.bound) << ','
            << (row.within ? 1 : 0) << '\n';
    }
}

// ---- JSON reports -----------------------------------------------------------

inline json to_json(const Moments& mo) {
    return json{{"mu", mo.mu}, {"nu", mo.nu}};
}

inline json to_json(const MeanStderr& ms) {
    return json{{"mean", ms.mean}, {"stderr", ms.std_error}, {"count", ms.count}};
}

inline json report_to_json(const AnalyticsReport& rep) {
    json out;
    out["mu"] = rep.moments.mu;
    out["nu"] = rep.moments.nu;
    out["criticality"] = to_string(rep.criticality);
    out["numerically_critical"] = rep.numerically_critical;
    out["kappa"] = rep.kappa;
    out["rho_inf"] = rep.rho_inf;
    out["chi_inf"] = ext_to_json(rep.chi_inf);
    out["chi_hat_inf"] = ext_to_json(rep.chi_hat_inf);
    out["dual"] = distribution_to_json(rep.dual);
    out["mu_hat"] = rep.mu_hat;
    out["nu_hat"] = rep.nu_hat;
    return out;
}

inline json to_json(const ChiHatEstimate& est) {
    json out;
    out["estimate"] = est.estimate;
    out["stderr"] = est.std_error;
    out["reps"] = est.reps;
    out["cap"] = est.cap;
    out["escaped_fraction"] = est.escaped_fraction;
    if (est.subcritical_escape_warning)
        out["warning"] = "escapes in a subcritical run: cap too small";
    return out;
}

inline json to_json(const ExponentFit& fit) {
    json out;
    out["slope"] = fit.slope;
    out["intercept"] = fit.intercept;
    out["leading_constant"] = fit.leading_constant();
    out["r_squared"] = fit.r_squared;
    out["window"] = json{fit.window_lo, fit.window_hi};
    out["points"] = fit.points;
    return out;
}

inline json to_json(const ConvergenceResult& result) {
    json rows = json::array();
    for (const auto& row : result.rows) {
        json r;
        r["n"] = row.n;
        r["reps"] = row.reps;
        r["mu_n"] = row.empirical.mu;
        r["nu_n"] = row.empirical.nu;
        r["chi"] = to_json(row.chi);
        r["chi_hat"] = to_json(row.chi_hat);
        r["chi_limit"] = ext_to_json(row.chi_limit);
        r["chi_hat_limit"] = ext_to_json(row.chi_hat_limit);
        r["finite_n_prediction"] = ext_to_json(row.finite_pred);
        r["delta_chi_vs_limit"] = row.delta_chi_vs_limit;
        r["delta_chi_vs_prediction"] = row.delta_chi_vs_pred;
        if (std::isfinite(row.abs_chi_hat_vs_limit))
            r["abs_chi_hat_vs_limit"] = row.abs_chi_hat_vs_limit;
        rows.push_back(std::move(r));
    }
    return json{{"rows", std::move(rows)}};
}

inline json to_json(const DualityResult& result) {
    json out;
    out["n"] = result.n;
    out["reps"] = result.reps;
    out["kappa"] = result.kappa;
    out["rho_inf"] = result.rho_inf;
    out["mu_hat"] = result.mu_hat;
    out["nu_hat"] = result.nu_hat;
    out["residual_chi_target"] = ext_to_json(result.residual_chi_target);
    out["chi_hat_target"] = ext_to_json(result.chi_hat_target);
    out["c1_fraction"] = to_json(result.c1_fraction);
    out["tv_residual_law"] = to_json(result.tv_residual_law);
    out["residual_chi"] = to_json(result.residual_chi);
    out["chi_hat"] = to_json(result.chi_hat);
    out["identity_gap"] = to_json(result.identity_gap);
    json vk = json::object();
    for (const auto& [k, ms] : result.giant_degree_fraction)
        vk[std::to_string(k)] = to_json(ms);
    out["giant_degree_fraction"] = std::move(vk);
    out["residual_subcritical_count"] = result.residual_subcritical_count;
    out["all_residual_subcritical"] = result.all_residual_subcritical;
    if (result.c2_comparable_warning)
        out["warning"] = "second component comparable to the largest in some replicate";
    return out;
}

inline json to_json(const PathBoundResult& result) {
    json rows = json::array();
    for (const auto& row : result.rows) {
        json r;
        r["length"] = row.length;
        r["count"] = to_json(row.count);
        r["bound"] = row.bound;
        r["within"] = row.within;
        rows.push_back(std::move(r));
    }
    json out;
    out["n"] = result.n;
    out["reps"] = result.reps;
    out["mu_n"] = result.empirical.mu;
    out["nu_n"] = result.empirical.nu;
    out["rows"] = std::move(rows);
    return out;
}

inline json to_json(const CounterexampleResult& result) {
    json star;
    star["n"] = result.star.n;
    star["hub_degree"] = result.star.hub_degree;
    star["formula_chi"] = result.star.formula_chi;
    star["limit_chi"] = result.star.limit_chi;
    star["naive_limit"] = ext_to_json(result.star.naive_limit);
    star["realized_hub"] = result.star.realized_hub;
    star["realized_formula"] = result.star.realized_formula;
    star["realized_chi"] = result.star.realized_chi;
    star["realized_matches"] = result.star.realized_matches;
    json two_star;
    two_star["n"] = result.two_star.n;
    two_star["hub_degree"] = result.two_star.hub_degree;
    two_star["reps"] = result.two_star.reps;
    two_star["edge_count"] = result.two_star.edge_count;
    two_star["edge_freq"] = result.two_star.edge_freq;
    two_star["freq_stderr"] = result.two_star.freq_std_error;
    two_star["claimed_limit"] = result.two_star.claimed_limit;
    two_star["exact_prob"] = result.two_star.exact_prob;
    two_star["chi_with_edge"] = result.two_star.chi_with_edge;
    two_star["chi_without_edge"] = result.two_star.chi_without_edge;
    two_star["chi_two_point"] = result.two_star.chi_two_point;
    json core;
    core["n"] = result.cubic_core.n;
    core["core_size"] = result.cubic_core.core_size;
    core["reps"] = result.cubic_core.reps;
    core["connected_count"] = result.cubic_core.connected_count;
    core["connected_fraction"] = result.cubic_core.connected_fraction;
    core["mean_chi_connected"] = result.cubic_core.mean_chi_connected;
    core["formula_chi"] = result.cubic_core.formula_chi;
    core["limit_chi"] = result.cubic_core.limit_chi;
    json out;
    out["a"] = result.a;
    out["star"] = std::move(star);
    out["two_star"] = std::move(two_star);
    out["cubic_core"] = std::move(core);
    return out;
}

// Machine readable error envelope for the CLI.
inline json error_envelope(const std::string& type, const std::string& message) {
    return json{{"error", json{{"type", type}, {"message", message}}}};
}

}  // namespace suslab
