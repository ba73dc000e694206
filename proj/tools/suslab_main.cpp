// suslab: susceptibility laboratory for random graphs with given degrees.
//
// Subcommands:
//   sample      draw a multigraph (or simple graph) from a law or a degree file
//   measure     component and susceptibility statistics of an edge list
//   predict     analytic report for a degree law, optionally with finite-n rows
//   bp          branching-process Monte Carlo estimate of the finite-cluster mean
//   experiment  convergence | duality | sweep | pathbound | counterexamples
//
// Stochastic subcommands require --seed; reruns with the same arguments are
// byte-identical for any --workers value. Errors print a JSON envelope on
// stderr; degree-parity violations, sampler exhaustion, and solver failures
// exit with code 2, failed experiment assertions with code 1.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <suslab/suslab.hpp>

namespace {

using suslab::json;

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw CliError("cannot open output file " + path);
    return file;
}

suslab::DegreeSequence sequence_from_options(const std::string& dist_path,
                                             const std::string& degrees_path, std::int64_t n) {
    if (!dist_path.empty() && !degrees_path.empty())
        throw CliError("give either --dist or --degrees, not both");
    if (!dist_path.empty()) {
        if (n <= 0) throw CliError("--dist needs --n to realize a sequence");
        return suslab::realize_sequence(suslab::load_distribution(dist_path), n);
    }
    if (!degrees_path.empty()) return suslab::load_degree_sequence(degrees_path);
    throw CliError("need --dist or --degrees");
}

void emit(const json& out, const std::string& path) {
    std::ofstream file;
    std::ostream& os = open_output(file, path);
    os << out.dump(2) << '\n';
}

int run_sample(const std::string& dist_path, const std::string& degrees_path, std::int64_t n,
               std::uint64_t seed, std::uint64_t stream, bool simple, int max_attempts,
               const std::string& out_path) {
    const suslab::DegreeSequence seq = sequence_from_options(dist_path, degrees_path, n);
    suslab::SeededRng rng(seed, stream);
    suslab::MultiGraph g;
    if (simple) {
        g = suslab::sample_simple(seq, rng, max_attempts).graph;
    } else {
        g = suslab::sample_multigraph(seq, rng);
    }
    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    suslab::write_edge_list(os, g, seed, stream, seq.digest());
    return 0;
}

int run_measure(const std::string& graph_path, int paths, const std::string& components_csv,
                const std::string& spectrum_csv, const std::string& out_path) {
    const suslab::MultiGraph g = suslab::load_edge_list(graph_path);
    const suslab::ComponentSummary s = suslab::components(g);
    json out;
    out["n"] = g.n;
    out["m"] = g.m();
    out["loops"] = g.loops;
    out["multi_pairs"] = g.multi_pairs;
    out["simple"] = g.loops == 0 && g.multi_pairs == 0;
    out["components"] = static_cast<std::int64_t>(s.sizes.size());
    out["largest"] = s.sizes.empty() ? 0 : s.sizes.front();
    out["chi"] = suslab::susceptibility(s);
    out["chi_hat"] = suslab::modified_susceptibility(s);
    if (paths >= 0) {
        json counts = json::array();
        for (int len = 0; len <= paths; ++len) counts.push_back(suslab::count_paths(g, len));
        out["path_counts"] = std::move(counts);
    }
    if (!components_csv.empty()) {
        std::ofstream csv(components_csv);
        if (!csv) throw CliError("cannot open " + components_csv);
        suslab::write_components_csv(csv, s);
    }
    if (!spectrum_csv.empty()) {
        std::ofstream csv(spectrum_csv);
        if (!csv) throw CliError("cannot open " + spectrum_csv);
        suslab::write_spectrum_csv(csv, s);
    }
    emit(out, out_path);
    return 0;
}

int run_predict(const std::string& dist_path, const std::vector<std::int64_t>& ns,
                const std::string& out_path) {
    const suslab::DegreeDistribution dist = suslab::load_distribution(dist_path);
    const suslab::AnalyticsReport rep = suslab::analyze(dist);
    json out = suslab::report_to_json(rep);
    if (!ns.empty()) {
        json rows = json::array();
        for (std::int64_t n : ns) {
            const suslab::DegreeSequence seq = suslab::realize_sequence(dist, n);
            const suslab::Moments mo = suslab::moments(seq);
            const suslab::ExtReal pred = suslab::finite_n_prediction(mo);
            json row;
            row["n"] = n;
            row["mu_n"] = mo.mu;
            row["nu_n"] = mo.nu;
            row["criticality"] = suslab::to_string(suslab::classify(mo));
            row["finite_n_prediction"] = suslab::ext_to_json(pred);
            row["delta_vs_limit"] = suslab::delta_metric(pred, rep.chi_inf);
            rows.push_back(std::move(row));
        }
        out["finite_n"] = std::move(rows);
    }
    emit(out, out_path);
    return 0;
}

int run_bp(const std::string& dist_path, std::int64_t reps, std::int64_t cap, std::uint64_t seed,
           int workers, std::int64_t track, const std::string& out_path) {
    const suslab::DegreeDistribution dist = suslab::load_distribution(dist_path);
    const suslab::ChiHatEstimate est = suslab::estimate_chi_hat(dist, reps, cap, seed, workers);
    json out = suslab::to_json(est);
    if (track > 0) {
        const suslab::ClusterLawEstimate law =
            suslab::estimate_cluster_law(dist, reps, cap, track, seed, workers);
        json rho = json::object();
        for (std::int64_t k = 1; k <= track; ++k) {
            rho[std::to_string(k)] =
                json{{"estimate", law.rho[k]}, {"stderr", law.std_error[k]}};
        }
        out["cluster_law"] = std::move(rho);
    }
    emit(out, out_path);
    return 0;
}

struct SpecFile {
    suslab::DegreeDistribution dist = suslab::DegreeDistribution::from_probs({1.0});
    std::vector<std::int64_t> n_grid;
    std::int64_t reps = 0;
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::string output;
};

SpecFile load_spec(const std::string& path, const std::string& expected_kind) {
    std::ifstream in(path);
    if (!in) throw CliError("cannot open experiment spec " + path);
    json spec = json::parse(in);
    if (spec.contains("experiment") &&
        spec.at("experiment").get<std::string>() != expected_kind)
        throw CliError("spec is for experiment \"" +
                       spec.at("experiment").get<std::string>() + "\", expected \"" +
                       expected_kind + "\"");
    SpecFile out;
    if (!spec.contains("dist")) throw CliError("experiment spec needs \"dist\"");
    out.dist = suslab::parse_distribution(spec.at("dist"));
    if (spec.contains("n_grid")) out.n_grid = spec.at("n_grid").get<std::vector<std::int64_t>>();
    if (spec.contains("n")) out.n_grid.push_back(spec.at("n").get<std::int64_t>());
    if (spec.contains("reps")) out.reps = spec.at("reps").get<std::int64_t>();
    if (spec.contains("seed")) {
        out.seed = spec.at("seed").get<std::uint64_t>();
        out.has_seed = true;
    }
    if (spec.contains("output")) out.output = spec.at("output").get<std::string>();
    return out;
}

int run_convergence(const SpecFile& spec, int workers) {
    if (spec.n_grid.empty()) throw CliError("convergence experiment needs an n grid");
    if (spec.reps < 1) throw CliError("convergence experiment needs reps >= 1");
    const suslab::ConvergenceResult result = suslab::convergence_experiment(
        spec.dist, spec.n_grid, spec.reps, spec.seed, workers);
    if (!spec.output.empty()) {
        std::ofstream csv(spec.output + "_convergence.csv");
        if (!csv) throw CliError("cannot open " + spec.output + "_convergence.csv");
        suslab::write_convergence_csv(csv, result);
    }
    emit(suslab::to_json(result), spec.output.empty() ? "" : spec.output + "_summary.json");
    if (!spec.output.empty()) emit(suslab::to_json(result), "");
    return 0;
}

int run_duality(const SpecFile& spec, int workers) {
    if (spec.n_grid.size() != 1) throw CliError("duality experiment needs exactly one n");
    if (spec.reps < 1) throw CliError("duality experiment needs reps >= 1");
    const suslab::DualityResult result = suslab::duality_experiment(
        spec.dist, spec.n_grid.front(), spec.reps, spec.seed, workers);
    if (!spec.output.empty()) emit(suslab::to_json(result), spec.output + "_duality.json");
    emit(suslab::to_json(result), "");
    if (!result.all_residual_subcritical) {
        std::cerr << suslab::error_envelope("assertion",
                                            "residual graph classified non-subcritical")
                         .dump()
                  << '\n';
        return 1;
    }
    return 0;
}

int run_sweep(const std::string& h_path, double lo, double hi, int points,
              const std::string& side, const std::string& out_prefix) {
    const suslab::DegreeDistribution h = suslab::load_distribution(h_path);
    const double lambda_c = suslab::lambda_critical(h);
    const std::vector<double> xs = suslab::geometric_grid(lo, hi, points);
    std::vector<double> lambdas;
    const bool sub = side == "both" || side == "subcritical";
    const bool super = side == "both" || side == "supercritical";
    if (!sub && !super) throw CliError("--side must be both, subcritical, or supercritical");
    if (sub)
        for (double x : xs) lambdas.push_back(lambda_c - x);
    if (super)
        for (double x : xs) {
            if (lambda_c + x <= 1.0) lambdas.push_back(lambda_c + x);
        }
    const std::vector<suslab::SweepPoint> pts = suslab::critical_sweep(h, lambdas);
    json out;
    out["lambda_critical"] = lambda_c;
    const suslab::Moments mc = suslab::dist_moments(suslab::lambda_family(h, lambda_c));
    out["mu_critical"] = mc.mu;
    out["target_constant"] = lambda_c * mc.mu * mc.mu;
    std::vector<std::pair<double, double>> sub_pts, super_pts;
    for (const auto& pt : pts) {
        if (pt.lambda < lambda_c && pt.chi_inf.is_finite())
            sub_pts.emplace_back(lambda_c - pt.lambda, pt.chi_inf.value());
        if (pt.lambda > lambda_c && pt.chi_hat_inf.is_finite())
            super_pts.emplace_back(pt.lambda - lambda_c, pt.chi_hat_inf.value());
    }
    if (sub_pts.size() >= 4) out["subcritical_fit"] = suslab::to_json(suslab::fit_exponent(sub_pts));
    if (super_pts.size() >= 4)
        out["supercritical_fit"] = suslab::to_json(suslab::fit_exponent(super_pts));
    if (!out_prefix.empty()) {
        std::ofstream csv(out_prefix + "_sweep.csv");
        if (!csv) throw CliError("cannot open " + out_prefix + "_sweep.csv");
        suslab::write_sweep_csv(csv, pts, lambda_c);
    }
    emit(out, "");
    return 0;
}

int run_pathbound(const std::string& degrees_path, const std::string& dist_path, std::int64_t n,
                  std::int64_t reps, int max_length, std::uint64_t seed, int workers,
                  const std::string& out_prefix) {
    const suslab::DegreeSequence seq = sequence_from_options(dist_path, degrees_path, n);
    const suslab::PathBoundResult result =
        suslab::path_bound_audit(seq, max_length, reps, seed, workers);
    if (!out_prefix.empty()) {
        std::ofstream csv(out_prefix + "_pathbound.csv");
        if (!csv) throw CliError("cannot open " + out_prefix + "_pathbound.csv");
        suslab::write_pathbound_csv(csv, result);
    }
    emit(suslab::to_json(result), "");
    for (const auto& row : result.rows) {
        if (!row.within) {
            std::cerr << suslab::error_envelope("assertion",
                                                "path count exceeded bound at length " +
                                                    std::to_string(row.length))
                             .dump()
                      << '\n';
            return 1;
        }
    }
    return 0;
}

int run_counterexamples(double a, std::int64_t n, std::int64_t two_star_reps,
                        std::int64_t core_reps, std::uint64_t seed, int workers,
                        const std::string& out_path) {
    const suslab::CounterexampleResult result =
        suslab::counterexample_suite(a, n, two_star_reps, core_reps, seed, workers);
    emit(suslab::to_json(result), out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"susceptibility laboratory for random graphs with given degrees"};
    app.require_subcommand(1);

    // sample ------------------------------------------------------------
    auto* sample = app.add_subcommand("sample", "sample a configuration-model graph");
    std::string s_dist, s_degrees, s_out;
    std::int64_t s_n = 0;
    std::uint64_t s_seed = 0, s_stream = 0;
    bool s_simple = false;
    int s_attempts = 1000;
    sample->add_option("--dist", s_dist, "degree law spec (JSON)");
    sample->add_option("--degrees,--seq", s_degrees, "degree sequence file");
    sample->add_option("--n", s_n, "vertices when realizing --dist");
    sample->add_option("--seed", s_seed, "RNG seed")->required();
    sample->add_option("--stream", s_stream, "RNG stream id (default 0)");
    sample->add_flag("--simple", s_simple, "reject until the graph is simple");
    sample->add_option("--max-attempts", s_attempts, "rejection budget for --simple");
    sample->add_option("--out", s_out, "output edge list path (default stdout)");

    // measure -----------------------------------------------------------
    auto* measure = app.add_subcommand("measure", "susceptibility statistics of an edge list");
    std::string m_graph, m_components_csv, m_spectrum_csv, m_out;
    int m_paths = -1;
    measure->add_option("--graph,--edges", m_graph, "edge list path")->required();
    measure->add_option("--paths", m_paths, "also count paths up to this length (<= 6)");
    measure->add_option("--components-csv", m_components_csv, "write component_id,size CSV");
    measure->add_option("--spectrum-csv", m_spectrum_csv, "write k,N_k CSV");
    measure->add_option("--out", m_out, "output JSON path (default stdout)");

    // predict -------------------------------------------------------------
    auto* predict = app.add_subcommand("predict", "analytic report for a degree law");
    std::string p_dist, p_out;
    std::vector<std::int64_t> p_ns;
    predict->add_option("--dist", p_dist, "degree law spec (JSON)")->required();
    predict->add_option("--n", p_ns, "finite sizes to evaluate the prediction at");
    predict->add_option("--out", p_out, "output JSON path (default stdout)");

    // bp ------------------------------------------------------------------
    auto* bp = app.add_subcommand("bp", "branching-process Monte Carlo");
    std::string b_dist, b_out;
    std::int64_t b_reps = 100000, b_cap = suslab::kDefaultProgenyCap, b_track = 0;
    std::uint64_t b_seed = 0;
    int b_workers = 1;
    bp->add_option("--dist", b_dist, "degree law spec (JSON)")->required();
    bp->add_option("--reps", b_reps, "replicates");
    bp->add_option("--cap", b_cap, "escape cap on births");
    bp->add_option("--track", b_track, "also estimate the cluster law up to this size");
    bp->add_option("--seed", b_seed, "RNG seed")->required();
    bp->add_option("--workers", b_workers, "worker threads")->envname("SUSLAB_WORKERS");
    bp->add_option("--out", b_out, "output JSON path (default stdout)");

    // experiment ----------------------------------------------------------
    auto* experiment = app.add_subcommand("experiment", "experiment drivers");
    experiment->require_subcommand(1);

    auto* conv = experiment->add_subcommand("convergence", "finite-n convergence of chi");
    std::string c_spec, c_dist, c_output;
    std::vector<std::int64_t> c_ns;
    std::int64_t c_reps = 0;
    std::uint64_t c_seed = 0;
    bool c_seed_given = false;
    int c_workers = 1;
    conv->add_option("--spec", c_spec, "experiment spec JSON");
    conv->add_option("--dist", c_dist, "degree law spec (JSON)");
    conv->add_option("--n", c_ns, "n grid");
    conv->add_option("--reps", c_reps, "replicates per n");
    conv->add_option("--seed", c_seed, "RNG seed")->each([&](const std::string&) { c_seed_given = true; });
    conv->add_option("--output", c_output, "output file prefix");
    conv->add_option("--workers", c_workers, "worker threads")->envname("SUSLAB_WORKERS");

    auto* dual = experiment->add_subcommand("duality", "giant removal against the dual law");
    std::string d_spec, d_dist, d_output;
    std::vector<std::int64_t> d_ns;
    std::int64_t d_reps = 0;
    std::uint64_t d_seed = 0;
    bool d_seed_given = false;
    int d_workers = 1;
    dual->add_option("--spec", d_spec, "experiment spec JSON");
    dual->add_option("--dist", d_dist, "degree law spec (JSON)");
    dual->add_option("--n", d_ns, "graph size");
    dual->add_option("--reps", d_reps, "replicates");
    dual->add_option("--seed", d_seed, "RNG seed")->each([&](const std::string&) { d_seed_given = true; });
    dual->add_option("--output", d_output, "output file prefix");
    dual->add_option("--workers", d_workers, "worker threads")->envname("SUSLAB_WORKERS");

    auto* sweep = experiment->add_subcommand("sweep", "analytic sweep toward the critical mix");
    std::string w_h, w_side = "both", w_out;
    double w_lo = 1e-4, w_hi = 1e-2;
    int w_points = 9;
    sweep->set_help_flag("--help", "print help");
    sweep->add_option("--h", w_h, "base law h spec (JSON)")->required();
    sweep->add_option("--window-lo", w_lo, "smallest distance to lambda_c");
    sweep->add_option("--window-hi", w_hi, "largest distance to lambda_c");
    sweep->add_option("--points", w_points, "grid points per side");
    sweep->add_option("--side", w_side, "both | subcritical | supercritical");
    sweep->add_option("--output", w_out, "output file prefix");

    auto* pathb = experiment->add_subcommand("pathbound", "path counts against the moment bound");
    std::string pb_degrees, pb_dist, pb_out;
    std::int64_t pb_n = 0, pb_reps = 0;
    int pb_len = 4, pb_workers = 1;
    std::uint64_t pb_seed = 0;
    pathb->add_option("--degrees,--seq", pb_degrees, "degree sequence file");
    pathb->add_option("--dist", pb_dist, "degree law spec (JSON)");
    pathb->add_option("--n", pb_n, "vertices when realizing --dist");
    pathb->add_option("--reps", pb_reps, "replicates")->required();
    pathb->add_option("--max-length", pb_len, "longest path length (<= 6)");
    pathb->add_option("--seed", pb_seed, "RNG seed")->required();
    pathb->add_option("--output", pb_out, "output file prefix");
    pathb->add_option("--workers", pb_workers, "worker threads")->envname("SUSLAB_WORKERS");

    auto* counter = experiment->add_subcommand("counterexamples",
                                               "star, two-star, and cubic-core constructions");
    double x_a = 1.0;
    std::int64_t x_n = 10000, x_two_star = 10000, x_core = 200;
    std::uint64_t x_seed = 0;
    int x_workers = 1;
    std::string x_out;
    counter->add_option("--a", x_a, "hub scale a");
    counter->add_option("--n", x_n, "graph size");
    counter->add_option("--two-star-reps", x_two_star, "two-star replicates");
    counter->add_option("--core-reps", x_core, "cubic-core replicates");
    counter->add_option("--seed", x_seed, "RNG seed")->required();
    counter->add_option("--workers", x_workers, "worker threads")->envname("SUSLAB_WORKERS");
    counter->add_option("--out", x_out, "output JSON path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*sample)
            return run_sample(s_dist, s_degrees, s_n, s_seed, s_stream, s_simple, s_attempts,
                              s_out);
        if (*measure)
            return run_measure(m_graph, m_paths, m_components_csv, m_spectrum_csv, m_out);
        if (*predict) return run_predict(p_dist, p_ns, p_out);
        if (*bp) return run_bp(b_dist, b_reps, b_cap, b_seed, b_workers, b_track, b_out);
        if (*conv) {
            SpecFile spec;
            if (!c_spec.empty()) {
                spec = load_spec(c_spec, "convergence");
            } else {
                if (c_dist.empty()) throw CliError("convergence needs --spec or --dist");
                if (!c_seed_given) throw CliError("convergence needs --seed without --spec");
                spec.dist = suslab::load_distribution(c_dist);
                spec.n_grid = c_ns;
                spec.reps = c_reps;
                spec.seed = c_seed;
                spec.has_seed = true;
                spec.output = c_output;
            }
            if (!spec.has_seed) throw CliError("experiment spec needs a seed");
            return run_convergence(spec, c_workers);
        }
        if (*dual) {
            SpecFile spec;
            if (!d_spec.empty()) {
                spec = load_spec(d_spec, "duality");
            } else {
                if (d_dist.empty()) throw CliError("duality needs --spec or --dist");
                if (!d_seed_given) throw CliError("duality needs --seed without --spec");
                spec.dist = suslab::load_distribution(d_dist);
                spec.n_grid = d_ns;
                spec.reps = d_reps;
                spec.seed = d_seed;
                spec.has_seed = true;
                spec.output = d_output;
            }
            if (!spec.has_seed) throw CliError("experiment spec needs a seed");
            return run_duality(spec, d_workers);
        }
        if (*sweep) return run_sweep(w_h, w_lo, w_hi, w_points, w_side, w_out);
        if (*pathb)
            return run_pathbound(pb_degrees, pb_dist, pb_n, pb_reps, pb_len, pb_seed, pb_workers,
                                 pb_out);
        if (*counter)
            return run_counterexamples(x_a, x_n, x_two_star, x_core, x_seed, x_workers, x_out);
        throw CliError("no subcommand selected");
    } catch (const suslab::parity_error& e) {
        std::cerr << suslab::error_envelope("parity", e.what()).dump() << '\n';
        return 2;
    } catch (const suslab::exhaustion_error& e) {
        std::cerr << suslab::error_envelope("exhaustion", e.what()).dump() << '\n';
        return 2;
    } catch (const suslab::convergence_error& e) {
        std::cerr << suslab::error_envelope("convergence", e.what()).dump() << '\n';
        return 2;
    } catch (const CliError& e) {
        std::cerr << suslab::error_envelope("argument", e.what()).dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << suslab::error_envelope("error", e.what()).dump() << '\n';
        return 1;
    }
}
