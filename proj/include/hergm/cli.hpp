#ifndef HERGM_CLI_HPP
#define HERGM_CLI_HPP

#include <filesystem>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "block_em.hpp"
#include "io.hpp"
#include "mple.hpp"
#include "simulator.hpp"

namespace hergm {

inline constexpr const char* kVersion = "1.0.0";

namespace detail {

inline void require_dir(const std::string& dir) {
    if (dir.empty()) throw ConfigError("output directory is empty");
    std::filesystem::create_directories(dir);
}

inline std::string join_errors(const std::vector<std::string>& errors) {
    std::string all;
    for (size_t e = 0; e < errors.size(); ++e) {
        if (e) all += "; ";
        all += errors[e];
    }
    return all;
}

inline void write_block_histogram(const std::string& path, const BlockAssignment& z) {
    std::vector<int64_t> size(z.K, 0);
    for (int v : z.z) size[v]++;
    std::ofstream out(path);
    if (!out) throw InputError("cannot write: " + path);
    out << "block,size\n";
    for (int k = 0; k < z.K; ++k) out << k << ',' << size[k] << '\n';
}

inline json partition_summary(const BlockAssignment& z) {
    std::vector<int64_t> size(z.K, 0);
    for (int v : z.z) size[v]++;
    std::sort(size.begin(), size.end());
    auto quantile = [&](double q) {
        if (size.empty()) return 0.0;
        double pos = q * (size.size() - 1);
        size_t lo = static_cast<size_t>(pos);
        size_t hi = std::min(lo + 1, size.size() - 1);
        return size[lo] + (pos - lo) * (size[hi] - size[lo]);
    };
    json j;
    j["blocks"] = z.K;
    j["nodes"] = z.n();
    j["size_min"] = size.front();
    j["size_max"] = size.back();
    j["size_median"] = quantile(0.5);
    j["size_iqr"] = quantile(0.75) - quantile(0.25);
    return j;
}

}  // namespace detail

struct SynthCli {
    int n = 0;
    int K = 2;
    std::vector<double> eta;  // empty: uniform
    ModelParams params;
    std::vector<CovariateSpec> covs;
    int64_t steps = 0;  // 0: 100 dyad sweeps
    uint64_t seed = 1;
    std::string out_dir;
};

inline Dataset cmd_synth(const SynthCli& cli) {
    std::vector<std::string> errors;
    if (cli.n <= 0) errors.push_back("n must be positive");
    if (cli.K < 1) errors.push_back("K must be >= 1");
    if (!cli.eta.empty() && static_cast<int>(cli.eta.size()) != cli.K)
        errors.push_back("eta must have K entries");
    for (const auto& spec : cli.covs)
        if (spec.categories < 1)
            errors.push_back("covariate '" + spec.name + "' needs >= 1 category");
    if (!errors.empty()) throw ConfigError(detail::join_errors(errors));

    SimConfig cfg;
    cfg.n = cli.n;
    cfg.K = cli.K;
    cfg.eta = cli.eta.empty() ? std::vector<double>(cli.K, 1.0 / cli.K) : cli.eta;
    cfg.params = cli.params;
    if (cfg.params.beta_w.size() != cli.covs.size()) cfg.params.beta_w.resize(cli.covs.size(), 0.0);
    if (cfg.params.beta_b.size() != cli.covs.size()) cfg.params.beta_b.resize(cli.covs.size(), 0.0);
    int64_t dyads = static_cast<int64_t>(cli.n) * (cli.n - 1) / 2;
    cfg.steps = cli.steps > 0 ? cli.steps : 100 * dyads;
    cfg.seed = cli.seed;
    Dataset ds = generate_dataset(cfg, cli.covs);

    detail::require_dir(cli.out_dir);
    std::filesystem::path dir(cli.out_dir);
    write_edge_list((dir / "edges.tsv").string(), ds.graph);
    write_covariates((dir / "covariates.csv").string(), ds.covariates);
    write_blocks_csv((dir / "truth_blocks.csv").string(), ds.truth);
    std::vector<std::string> names;
    for (int c = 0; c < ds.covariates.p(); ++c) names.push_back(ds.covariates.name_of(c));
    write_json((dir / "truth_params.json").string(), params_to_json(ds.params, names));
    json manifest;
    manifest["command"] = "synth";
    manifest["version"] = kVersion;
    manifest["n"] = cli.n;
    manifest["K"] = cli.K;
    manifest["eta"] = cfg.eta;
    manifest["steps"] = cfg.steps;
    manifest["seed"] = cli.seed;
    manifest["covariates"] = json::array();
    for (const auto& spec : cli.covs)
        manifest["covariates"].push_back({{"name", spec.name},
                                          {"categories", spec.categories},
                                          {"block_correlation", spec.block_correlation}});
    write_json((dir / "manifest.json").string(), manifest);
    return ds;
}

struct EstimateCli {
    std::string edges_path;
    std::string covariates_path;  // optional
    std::string blocks_path;      // optional: skip block recovery
    bool no_covariates = false;   // block recovery ignores covariates
    std::vector<std::string> use_covariates;  // empty: all columns
    int k_max = 50;
    int em_iters = 250;
    double rel_tol = 1e-9;
    uint64_t seed = 1;
    bool case_control = false;
    int control_ratio = 5;
    int case_control_threshold_n = 20000;
    bool write_xi = false;
    std::string out_dir;
};

struct EstimateCliResult {
    LoadedGraph loaded;
    std::optional<CovariateSet> covariates;
    BlockAssignment blocks;
    std::vector<double> lb_trace;
    EstimateResult fits;
    std::vector<std::string> warnings;
};

inline EstimateCliResult cmd_estimate(const EstimateCli& cli) {
    std::vector<std::string> errors;
    if (cli.k_max < 1) errors.push_back("k-max must be >= 1");
    if (cli.em_iters < 1) errors.push_back("em-iters must be >= 1");
    if (cli.control_ratio < 1) errors.push_back("control-ratio must be >= 1");
    if (cli.edges_path.empty()) errors.push_back("edges path is required");
    if (cli.covariates_path.empty() && !cli.use_covariates.empty())
        errors.push_back("covariate names given but no covariates file");
    if (!errors.empty()) throw ConfigError(detail::join_errors(errors));

    EstimateCliResult res;
    res.loaded = load_edge_list(cli.edges_path);
    const Graph& g = res.loaded.graph;
    if (!cli.covariates_path.empty())
        res.covariates = load_covariates(cli.covariates_path, res.loaded);

    std::vector<int> cov_indices;
    if (res.covariates) {
        if (cli.use_covariates.empty()) {
            cov_indices.resize(res.covariates->p());
            std::iota(cov_indices.begin(), cov_indices.end(), 0);
        } else {
            for (const auto& want : cli.use_covariates) {
                int found = -1;
                for (int c = 0; c < res.covariates->p(); ++c)
                    if (res.covariates->name_of(c) == want) found = c;
                if (found < 0)
                    errors.push_back("covariate '" + want + "' not in covariates file");
                else
                    cov_indices.push_back(found);
            }
            if (!errors.empty()) throw ConfigError(detail::join_errors(errors));
        }
    }

    if (!cli.blocks_path.empty()) {
        res.blocks = load_blocks_csv(cli.blocks_path, &res.loaded);
    } else {
        CovariateUse use;
        if (res.covariates && !cli.no_covariates) {
            use.set = &*res.covariates;
            use.indices = cov_indices;
        }
        EmOptions opts;
        opts.max_iters = cli.em_iters;
        opts.rel_tol = cli.rel_tol;
        opts.seed = cli.seed;
        EmResult em = em_run(g, use, cli.k_max, opts);
        res.blocks = em.assignment;
        res.lb_trace = em.state.lb_trace;
        res.warnings = em.warnings;
        if (cli.write_xi && !cli.out_dir.empty()) {
            detail::require_dir(cli.out_dir);
            write_xi_checkpoint(
                (std::filesystem::path(cli.out_dir) / "xi_checkpoint.bin").string(), em.state);
        }
    }

    EstimateConfig ecfg;
    ecfg.design.covariates = cov_indices;
    ecfg.design.case_control = cli.case_control;
    ecfg.design.control_ratio = cli.control_ratio;
    ecfg.design.seed = cli.seed;
    ecfg.case_control_threshold_n = cli.case_control_threshold_n;
    CovariateSet empty(g.n(), 0);
    res.fits = estimate(g, res.covariates ? *res.covariates : empty, res.blocks, ecfg);

    if (!cli.out_dir.empty()) {
        detail::require_dir(cli.out_dir);
        std::filesystem::path dir(cli.out_dir);
        write_blocks_csv((dir / "blocks.csv").string(), res.blocks, &res.loaded.id_of_index);
        write_trace_csv((dir / "trace.csv").string(), res.lb_trace);
        detail::write_block_histogram((dir / "block_histogram.csv").string(), res.blocks);
        json coeffs;
        coeffs["within"] = fit_to_json(res.fits.within);
        coeffs["between"] = fit_to_json(res.fits.between);
        write_json((dir / "coefficients.json").string(), coeffs);
        {
            std::ofstream out(dir / "coefficients.csv");
            out << "group,name,coef,se,z\n";
            out.precision(17);
            for (const FitResult* f : {&res.fits.within, &res.fits.between}) {
                const char* group = f == &res.fits.within ? "within" : "between";
                for (size_t c = 0; c < f->names.size(); ++c)
                    out << group << ',' << f->names[c] << ',' << f->coef[c] << ',' << f->se[c]
                        << ',' << (f->se[c] > 0 ? f->coef[c] / f->se[c] : 0.0) << '\n';
            }
        }
        json manifest;
        manifest["command"] = "estimate";
        manifest["version"] = kVersion;
        manifest["edges"] = cli.edges_path;
        manifest["covariates"] = cli.covariates_path;
        manifest["blocks_input"] = cli.blocks_path;
        manifest["no_covariates"] = cli.no_covariates;
        manifest["k_max"] = cli.k_max;
        manifest["em_iters"] = cli.em_iters;
        manifest["seed"] = cli.seed;
        manifest["case_control"] = cli.case_control;
        manifest["control_ratio"] = cli.control_ratio;
        manifest["recovered_blocks"] = res.blocks.K;
        manifest["warnings"] = res.warnings;
        write_json((dir / "manifest.json").string(), manifest);
    }
    return res;
}

struct StatsCli {
    std::string edges_path;
    std::string covariates_path;  // optional
    std::string out_dir;          // optional: stdout only
};

inline json cmd_stats(const StatsCli& cli) {
    if (cli.edges_path.empty()) throw ConfigError("edges path is required");
    LoadedGraph lg = load_edge_list(cli.edges_path);
    GraphStats s = graph_stats(lg.graph);
    json j;
    j["nodes"] = lg.graph.n();
    j["edges"] = lg.graph.m();
    j["density"] = s.density;
    j["two_stars"] = s.two_stars;
    j["triangles"] = s.triangles;
    if (!cli.covariates_path.empty()) {
        CovariateSet cov = load_covariates(cli.covariates_path, lg);
        json match;
        for (int c = 0; c < cov.p(); ++c) {
            int64_t same = 0;
            for (auto [a, b] : lg.graph.edges())
                if (cov.same(a, b, c)) ++same;
            match[cov.name_of(c)] =
                lg.graph.m() > 0 ? static_cast<double>(same) / lg.graph.m() : 0.0;
        }
        j["edge_match_rate"] = match;
    }
    if (!cli.out_dir.empty()) {
        detail::require_dir(cli.out_dir);
        std::filesystem::path dir(cli.out_dir);
        write_json((dir / "stats.json").string(), j);
        std::ofstream out(dir / "degree_histogram.csv");
        out << "degree,count\n";
        for (size_t d = 0; d < s.degree_histogram.size(); ++d)
            out << d << ',' << s.degree_histogram[d] << '\n';
    }
    return j;
}

struct CompareCli {
    std::string a_path;
    std::string b_path;
    std::string out_dir;  // optional
};

inline json cmd_compare(const CompareCli& cli) {
    if (cli.a_path.empty() || cli.b_path.empty())
        throw ConfigError("compare needs two partition files");
    BlockAssignment a = load_blocks_csv(cli.a_path);
    BlockAssignment b = load_blocks_csv(cli.b_path);
    if (a.n() != b.n())
        throw InputError("partitions cover different node sets (" + std::to_string(a.n()) +
                         " vs " + std::to_string(b.n()) + " nodes)");
    json j;
    j["yule"] = yule_coefficient(a, b);
    j["adjusted_rand"] = adjusted_rand(a, b);
    j["partition_a"] = detail::partition_summary(a);
    j["partition_b"] = detail::partition_summary(b);
    if (!cli.out_dir.empty()) {
        detail::require_dir(cli.out_dir);
        write_json((std::filesystem::path(cli.out_dir) / "compare.json").string(), j);
    }
    return j;
}

struct SimulateCli {
    std::string blocks_path;
    std::string covariates_path;  // optional
    ModelParams params;
    int64_t steps = 0;
    int64_t burn_in = 0;
    int64_t trace_every = 0;
    uint64_t seed = 1;
    std::string out_dir;
};

inline ChainResult cmd_simulate(const SimulateCli& cli) {
    std::vector<std::string> errors;
    if (cli.blocks_path.empty()) errors.push_back("blocks path is required");
    if (cli.steps <= 0) errors.push_back("steps must be positive");
    if (!errors.empty()) throw ConfigError(detail::join_errors(errors));
    BlockAssignment z = load_blocks_csv(cli.blocks_path);
    CovariateSet cov(z.n(), 0);
    if (!cli.covariates_path.empty()) {
        // build an id map from row order of the blocks file (dense indices)
        LoadedGraph fake;
        fake.graph = Graph::from_edge_list({}, z.n());
        for (int i = 0; i < z.n(); ++i) {
            fake.id_of_index.push_back(std::to_string(i));
            fake.index_of_id[std::to_string(i)] = i;
        }
        cov = load_covariates(cli.covariates_path, fake);
    }
    SimConfig cfg;
    cfg.n = z.n();
    cfg.K = z.K;
    cfg.eta.assign(z.K, 0.0);
    for (int v : z.z) cfg.eta[v] += 1.0 / z.n();
    cfg.params = cli.params;
    if (static_cast<int>(cfg.params.beta_w.size()) != cov.p()) cfg.params.beta_w.resize(cov.p(), 0.0);
    if (static_cast<int>(cfg.params.beta_b.size()) != cov.p()) cfg.params.beta_b.resize(cov.p(), 0.0);
    cfg.steps = cli.steps;
    cfg.burn_in = cli.burn_in;
    cfg.trace_every = cli.trace_every;
    cfg.seed = cli.seed;
    ChainResult result = run_chain(cfg, cov, z);
    if (!cli.out_dir.empty()) {
        detail::require_dir(cli.out_dir);
        std::filesystem::path dir(cli.out_dir);
        write_edge_list((dir / "edges.tsv").string(), result.graph);
        {
            std::ofstream out(dir / "chain_trace.csv");
            out << "step,edges,two_stars,triangles\n";
            for (const auto& t : result.trace)
                out << t.step << ',' << t.edges << ',' << t.two_stars << ',' << t.triangles
                    << '\n';
        }
        json manifest;
        manifest["command"] = "simulate";
        manifest["version"] = kVersion;
        manifest["blocks"] = cli.blocks_path;
        manifest["steps"] = cli.steps;
        manifest["burn_in"] = cli.burn_in;
        manifest["seed"] = cli.seed;
        write_json((dir / "manifest.json").string(), manifest);
    }
    return result;
}

}  // namespace hergm

#endif
