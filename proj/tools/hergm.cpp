// Command-line driver: synth, estimate, stats, compare, simulate.
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hergm/cli.hpp"

using namespace hergm;

namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : fallback;
}

CovariateSpec parse_cov_spec(const std::string& text) {
    // name:categories[:block_correlation]
    CovariateSpec spec;
    std::istringstream ss(text);
    std::string field;
    if (!std::getline(ss, field, ':') || field.empty())
        throw ConfigError("covariate spec '" + text + "': expected name:categories[:corr]");
    spec.name = field;
    if (!std::getline(ss, field, ':'))
        throw ConfigError("covariate spec '" + text + "': missing category count");
    spec.categories = std::stoi(field);
    if (std::getline(ss, field, ':')) spec.block_correlation = std::stod(field);
    return spec;
}

ModelParams load_params(const std::string& path, const std::vector<std::string>& cov_names) {
    if (path.empty()) {
        ModelParams p;
        p.alpha_w = -1.0;
        p.alpha_b = -2.5;
        p.beta_w.assign(cov_names.size(), 0.25);
        p.beta_b.assign(cov_names.size(), 0.1);
        return p;
    }
    return params_from_json(read_json(path), cov_names);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Block recovery and structural estimation for network data"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "cap on worker threads (0 = hardware)");
    std::string default_out = env_or("HERGM_OUT_DIR", ".");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    SynthCli sy;
    sy.out_dir = default_out;
    std::string sy_params_path;
    std::vector<std::string> sy_cov_specs;
    synth->add_option("--n", sy.n, "number of nodes")->required();
    synth->add_option("--k", sy.K, "number of blocks");
    synth->add_option("--eta", sy.eta, "block probabilities (default uniform)");
    synth->add_option("--params", sy_params_path, "coefficient JSON file");
    synth->add_option("--cov", sy_cov_specs, "covariate spec name:categories[:corr], repeatable");
    synth->add_option("--steps", sy.steps, "chain steps (default 100 dyad sweeps)");
    synth->add_option("--seed", sy.seed, "random seed");
    synth->add_option("--out", sy.out_dir, "output directory");

    // estimate
    auto* est = app.add_subcommand("estimate", "recover blocks and fit coefficients");
    EstimateCli ec;
    ec.out_dir = default_out;
    est->add_option("--edges", ec.edges_path, "edge list (tab separated)")->required();
    est->add_option("--covariates", ec.covariates_path, "covariates CSV");
    est->add_option("--blocks", ec.blocks_path, "fixed block assignment CSV (skips recovery)");
    est->add_flag("--no-covariates", ec.no_covariates,
                  "ignore covariates during block recovery");
    est->add_option("--use-cov", ec.use_covariates, "covariate names to use (default all)");
    est->add_option("--k-max", ec.k_max, "maximum number of blocks");
    est->add_option("--em-iters", ec.em_iters, "maximum EM iterations");
    est->add_option("--rel-tol", ec.rel_tol, "EM convergence tolerance");
    est->add_flag("--case-control", ec.case_control, "subsample non-edges in the fits");
    est->add_option("--control-ratio", ec.control_ratio, "non-edges kept per edge");
    est->add_flag("--write-xi", ec.write_xi, "write the membership-probability checkpoint");
    est->add_option("--seed", ec.seed, "random seed");
    est->add_option("--out", ec.out_dir, "output directory");

    // stats
    auto* stats = app.add_subcommand("stats", "descriptive statistics of a graph");
    StatsCli st;
    stats->add_option("--edges", st.edges_path, "edge list")->required();
    stats->add_option("--covariates", st.covariates_path, "covariates CSV");
    stats->add_option("--out", st.out_dir, "output directory (default stdout only)");

    // compare
    auto* cmp = app.add_subcommand("compare", "similarity of two partitions");
    CompareCli cc;
    cmp->add_option("--a", cc.a_path, "first partition CSV")->required();
    cmp->add_option("--b", cc.b_path, "second partition CSV")->required();
    cmp->add_option("--out", cc.out_dir, "output directory (default stdout only)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "run the link-formation chain");
    SimulateCli sc;
    sc.out_dir = default_out;
    std::string sim_params_path;
    sim->add_option("--blocks", sc.blocks_path, "block assignment CSV")->required();
    sim->add_option("--covariates", sc.covariates_path, "covariates CSV");
    sim->add_option("--params", sim_params_path, "coefficient JSON file");
    sim->add_option("--steps", sc.steps, "chain steps")->required();
    sim->add_option("--burn-in", sc.burn_in, "steps to skip before tracing");
    sim->add_option("--trace-every", sc.trace_every, "trace interval (0 = none)");
    sim->add_option("--seed", sc.seed, "random seed");
    sim->add_option("--out", sc.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::string env_threads = env_or("HERGM_THREADS", "");
        if (threads == 0 && !env_threads.empty()) threads = std::stoi(env_threads);
        if (threads > 0) set_thread_cap(threads);

        if (*synth) {
            std::vector<CovariateSpec> covs;
            std::vector<std::string> names;
            for (const auto& text : sy_cov_specs) {
                covs.push_back(parse_cov_spec(text));
                names.push_back(covs.back().name);
            }
            sy.covs = covs;
            sy.params = load_params(sy_params_path, names);
            Dataset ds = cmd_synth(sy);
            std::cout << "wrote " << ds.graph.m() << " edges for " << ds.graph.n()
                      << " nodes to " << sy.out_dir << "\n";
        } else if (*est) {
            EstimateCliResult res = cmd_estimate(ec);
            std::cout << "blocks: " << res.blocks.K << "\n";
            for (const FitResult* f : {&res.fits.within, &res.fits.between}) {
                std::cout << (f == &res.fits.within ? "within" : "between") << ":";
                for (size_t c = 0; c < f->names.size(); ++c)
                    std::cout << ' ' << f->names[c] << '=' << f->coef[c];
                std::cout << "\n";
            }
            for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
        } else if (*stats) {
            std::cout << cmd_stats(st).dump(2) << "\n";
        } else if (*cmp) {
            std::cout << cmd_compare(cc).dump(2) << "\n";
        } else if (*sim) {
            // covariate names are only needed to key the beta entries
            std::vector<std::string> names;
            if (!sim_params_path.empty()) {
                json j = read_json(sim_params_path);
                for (auto& [key, val] : j.items()) {
                    const std::string prefix = "within_same_";
                    if (key.rfind(prefix, 0) == 0) names.push_back(key.substr(prefix.size()));
                }
            }
            sc.params = load_params(sim_params_path, names);
            ChainResult res = cmd_simulate(sc);
            std::cout << "final graph: " << res.graph.m() << " edges\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
