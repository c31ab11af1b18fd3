// Acceptance harness: one pass/fail line per criterion, exit 0 only if all pass.
// An optional list of criterion numbers on the command line restricts the run.
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <random>
#include <set>

#include "hergm/cli.hpp"

using namespace hergm;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Graph random_graph(int n, double density, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (u(rng) < density) edges.emplace_back(i, j);
    return Graph::from_edge_list(edges, n);
}

VariationalState random_state(int n, int K, int p, std::mt19937_64& rng) {
    VariationalState st;
    st.p = p;
    st.xi = Mat(n, K);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = 0; k < K; ++k) {
            st.xi(i, k) = u(rng);
            s += st.xi(i, k);
        }
        for (int k = 0; k < K; ++k) st.xi(i, k) /= s;
    }
    st.eta.assign(K, 1.0 / K);
    st.pi1.assign(1 << p, Mat(K, K));
    std::uniform_real_distribution<double> up(0.05, 0.95);
    for (auto& m : st.pi1)
        for (int k = 0; k < K; ++k)
            for (int l = k; l < K; ++l) m(k, l) = m(l, k) = up(rng);
    return st;
}

// 1. fast and naive membership-score kernels agree on random instances
bool criterion_1() {
    std::mt19937_64 rng(101);
    for (int rep = 0; rep < 50; ++rep) {
        int n = 20 + static_cast<int>(rng() % 181);
        int K = 1 + static_cast<int>(rng() % 10);
        int p = static_cast<int>(rng() % 4);
        Graph g = random_graph(n, 0.03 + 0.05 * (rng() % 3), rng);
        CovariateSet cov(n, std::max(p, 1));
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < cov.p(); ++c) cov.set_value(i, c, static_cast<int>(rng() % 6));
        CovariateUse use;
        use.set = &cov;
        for (int s = 0; s < p; ++s) use.indices.push_back(s);
        VariationalState st = random_state(n, K, p, rng);
        Mat fast = omega(g, use, st);
        Mat naive = omega_naive(g, use, st);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < K; ++k)
                if (std::abs(fast(i, k) - naive(i, k)) > 1e-9) {
                    std::printf("    mismatch %.3e at rep %d\n",
                                std::abs(fast(i, k) - naive(i, k)), rep);
                    return false;
                }
    }
    return true;
}

// 2. sparse kernel is at least 50x faster than the nested-loop reference
bool criterion_2() {
    std::mt19937_64 rng(102);
    int n = 1000, K = 50;
    Graph g = random_graph(n, 0.01, rng);
    CovariateUse use;
    VariationalState st = random_state(n, K, 0, rng);
    auto time_best = [&](auto&& fn, int reps) {
        double best = 1e300;
        for (int r = 0; r < reps; ++r) {
            auto start = Clock::now();
            fn();
            best = std::min(best, seconds_since(start));
        }
        return best;
    };
    double fast = time_best([&] { omega(g, use, st); }, 5);
    double naive = time_best([&] { omega_naive(g, use, st); }, 2);
    double ratio = naive / fast;
    std::printf("    naive %.3fs, sparse %.6fs, ratio %.0fx\n", naive, fast, ratio);
    return ratio >= 50.0;
}

// 3. lower-bound trace is monotone on a 2000-node planted instance
bool criterion_3() {
    std::mt19937_64 rng(103);
    int n = 2000, blocks = 20;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<int> z(n);
    for (int i = 0; i < n; ++i) z[i] = i % blocks;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (u(rng) < (z[i] == z[j] ? 0.05 : 0.002)) edges.emplace_back(i, j);
    Graph g = Graph::from_edge_list(edges, n);
    CovariateSet cov(n, 2);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < 2; ++c) cov.set_value(i, c, static_cast<int>(rng() % 6));
    CovariateUse use;
    use.set = &cov;
    use.indices = {0, 1};
    EmOptions opts;
    opts.max_iters = 100;
    opts.rel_tol = 0.0;  // run all iterations
    opts.seed = 7;
    opts.feature_budget = std::numeric_limits<int64_t>::max();
    EmResult res = em_run(g, use, blocks, opts);
    const auto& trace = res.state.lb_trace;
    for (size_t t = 1; t < trace.size(); ++t)
        if (trace[t] < trace[t - 1] - 1e-8 * std::abs(trace[t])) {
            std::printf("    decrease at iteration %zu: %.12g -> %.12g\n", t, trace[t - 1],
                        trace[t]);
            return false;
        }
    std::printf("    %zu iterations, lower bound %.6g -> %.6g\n", trace.size(), trace.front(),
                trace.back());
    return true;
}

// 4. long chains match the exact stationary law in total variation
bool criterion_4() {
    std::mt19937_64 rng(104);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    int n = 4;
    CovariateSet x(n, 0);
    BlockAssignment z{std::vector<int>(n, 0), 1};
    for (int draw = 0; draw < 3; ++draw) {
        ModelParams p;
        p.alpha_w = coeff(rng);
        p.psi = coeff(rng);
        p.gamma = coeff(rng);
        StationaryTable exact = exact_stationary(n, x, z, p);
        Chain chain(x, z, p, 1000 + draw);
        std::vector<int64_t> counts(64, 0);
        uint64_t mask = 0;
        int64_t steps = 1000000;
        for (int64_t t = 0; t < steps; ++t) {
            auto [i, j] = chain.step();
            uint64_t bit = uint64_t{1} << dyad_bit(n, i, j);
            if (chain.has_edge(i, j))
                mask |= bit;
            else
                mask &= ~bit;
            counts[mask]++;
        }
        double tv = 0.0;
        for (int s = 0; s < 64; ++s)
            tv += std::abs(static_cast<double>(counts[s]) / steps - exact.probs[s]);
        tv *= 0.5;
        std::printf("    draw %d: total variation %.4f\n", draw, tv);
        if (tv > 0.02) return false;
    }
    return true;
}

// 5. change statistics equal the literal potential difference
bool criterion_5() {
    std::mt19937_64 rng(105);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (int rep = 0; rep < 1000; ++rep) {
        int n = 4 + static_cast<int>(rng() % 17);
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng() % 3 == 0) edges.emplace_back(i, j);
        Graph g = Graph::from_edge_list(edges, n);
        CovariateSet x(n, 2);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < 2; ++c) x.set_value(i, c, static_cast<int>(rng() % 3));
        BlockAssignment z;
        z.K = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < n; ++i) z.z.push_back(static_cast<int>(rng() % z.K));
        ModelParams p;
        p.alpha_w = coeff(rng);
        p.alpha_b = coeff(rng);
        p.psi = coeff(rng);
        p.gamma = coeff(rng);
        p.beta_w = {coeff(rng), coeff(rng)};
        p.beta_b = {coeff(rng), coeff(rng)};
        int i = static_cast<int>(rng() % n), j;
        do {
            j = static_cast<int>(rng() % n);
        } while (j == i);
        auto [cs, dq] = change_stats(g, x, z, p, i, j);
        std::vector<std::pair<int, int>> with = edges, without;
        for (auto e : edges)
            if (!(e.first == std::min(i, j) && e.second == std::max(i, j)))
                without.push_back(e);
        with.emplace_back(i, j);
        double q_on = potential(Graph::from_edge_list(with, n), x, z, p);
        double q_off = potential(Graph::from_edge_list(without, n), x, z, p);
        if (std::abs(dq - (q_on - q_off)) > 1e-10 * std::max(1.0, std::abs(dq))) return false;
    }
    return true;
}

// 6. planted two-block partition is recovered essentially exactly
bool criterion_6() {
    std::mt19937_64 rng(106);
    int n = 400;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    BlockAssignment truth{std::vector<int>(n), 2};
    for (int i = 0; i < n; ++i) truth.z[i] = i < n / 2 ? 0 : 1;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (u(rng) < (truth.z[i] == truth.z[j] ? 0.1 : 0.005)) edges.emplace_back(i, j);
    Graph g = Graph::from_edge_list(edges, n);
    CovariateUse use;
    EmOptions opts;
    opts.seed = 5;
    EmResult res = em_run(g, use, 2, opts);
    double ari = adjusted_rand(res.assignment, truth);
    double yule = yule_coefficient(res.assignment, truth);
    std::printf("    adjusted Rand %.4f, Yule %.4f\n", ari, yule);
    return ari >= 0.99 && yule >= 0.99;
}

// 7. end-to-end synth -> estimate with the true blocks recovers the
//    within-group coefficients
bool criterion_7() {
    fs::path root = fs::temp_directory_path() / "hergm_acceptance_c7";
    fs::remove_all(root);
    int reps = 20;
    std::map<std::string, double> truth = {
        {"edges", -3.0}, {"two_stars", 0.01}, {"triangles", 0.04}, {"same_c", 0.6}};
    std::map<std::string, int> hits;
    for (int rep = 0; rep < reps; ++rep) {
        fs::path dir = root / ("rep_" + std::to_string(rep));
        SynthCli sy;
        sy.n = 2000;
        sy.K = 20;
        sy.seed = 7000 + rep;
        sy.out_dir = (dir / "syn").string();
        sy.params.alpha_w = truth["edges"] / 2;
        sy.params.alpha_b = -3.0;
        sy.params.psi = truth["two_stars"];
        sy.params.gamma = truth["triangles"] / 4;
        sy.params.beta_w = {truth["same_c"] / 2};
        sy.params.beta_b = {0.2};
        sy.covs = {{"c", 4, 0.0}};
        cmd_synth(sy);

        EstimateCli ec;
        ec.edges_path = (dir / "syn" / "edges.tsv").string();
        ec.covariates_path = (dir / "syn" / "covariates.csv").string();
        ec.blocks_path = (dir / "syn" / "truth_blocks.csv").string();
        ec.seed = 7100 + rep;
        ec.out_dir = (dir / "est").string();
        EstimateCliResult res = cmd_estimate(ec);
        for (size_t c = 0; c < res.fits.within.names.size(); ++c) {
            const std::string& name = res.fits.within.names[c];
            double err = std::abs(res.fits.within.coef[c] - truth.at(name));
            if (err <= 3.0 * res.fits.within.se[c]) hits[name]++;
        }
    }
    fs::remove_all(root);
    bool ok = true;
    for (auto& [name, truth_val] : truth) {
        std::printf("    %s: %d/%d within 3 SE\n", name.c_str(), hits[name], reps);
        if (hits[name] < static_cast<int>(0.9 * reps)) ok = false;
    }
    return ok;
}

// 8. without externalities the pseudolikelihood is the exact independent-link
//    likelihood and the fit matches a reference IRLS
bool criterion_8() {
    std::mt19937_64 rng(108);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 8 + static_cast<int>(rng() % 13);
        Graph g = random_graph(n, 0.4, rng);
        CovariateSet x(n, 1);
        for (int i = 0; i < n; ++i) x.set_value(i, 0, static_cast<int>(rng() % 2));
        BlockAssignment z{std::vector<int>(n), 2};
        for (int i = 0; i < n; ++i) z.z[i] = static_cast<int>(rng() % 2);
        ModelParams p;
        p.alpha_w = 0.3;
        p.alpha_b = -0.5;
        p.beta_w = {0.4};
        p.beta_b = {-0.1};
        double exact = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double q = 2.0 * direct_utility(p, x, i, j, z.z[i] == z.z[j]);
                double link = logistic(q);
                exact += std::log(g.has_edge(i, j) ? link : 1.0 - link);
            }
        double pl = log_pseudolikelihood(g, x, z, p);
        if (std::abs(pl - exact) > 1e-10 * std::max(1.0, std::abs(exact))) return false;
    }

    // reference IRLS on the between-group design of one fixed instance
    std::mt19937_64 rng2(1088);
    int n = 60;
    Graph g = random_graph(n, 0.3, rng2);
    CovariateSet x(n, 1);
    x.set_names({"c"});
    for (int i = 0; i < n; ++i) x.set_value(i, 0, static_cast<int>(rng2() % 2));
    BlockAssignment z{std::vector<int>(n), 2};
    for (int i = 0; i < n; ++i) z.z[i] = i % 2;
    DesignConfig cfg;
    cfg.covariates = {0};
    auto rows = build_design(g, x, z, DyadGroup::between, cfg);
    FitResult fit = fit_logistic(rows, design_columns(x, cfg, DyadGroup::between));
    std::vector<double> theta(2, 0.0);
    for (int it = 0; it < 50; ++it) {
        double s0 = 0, s1 = 0, h00 = 0, h01 = 0, h11 = 0;
        for (const auto& r : rows) {
            double eta = theta[0] + theta[1] * r.stats[1];
            double mu = logistic(eta);
            double w = mu * (1 - mu);
            s0 += r.y - mu;
            s1 += (r.y - mu) * r.stats[1];
            h00 += w;
            h01 += w * r.stats[1];
            h11 += w * r.stats[1] * r.stats[1];
        }
        double det = h00 * h11 - h01 * h01;
        theta[0] += (h11 * s0 - h01 * s1) / det;
        theta[1] += (h00 * s1 - h01 * s0) / det;
        if (std::max(std::abs(s0), std::abs(s1)) < 1e-12) break;
    }
    return std::abs(fit.coef[0] - theta[0]) < 1e-7 && std::abs(fit.coef[1] - theta[1]) < 1e-7;
}

// 9. density formula at the reference network size
bool criterion_9() {
    int64_t n = 242223, m = 682920;
    double density = static_cast<double>(m) / (static_cast<double>(n) * (n - 1) / 2.0);
    std::printf("    density %.3e\n", density);
    return std::abs(density - 2.3e-5) < 0.05e-5;
}

// 10. results that require the proprietary source network are declared out of
//     scope; oracle and property checks above stand in for them
bool criterion_10() {
    std::printf(
        "    fitted-coefficient tables and block statistics of the original study rely on a\n"
        "    proprietary network and are NOT reproduced here; criteria 1-8 cover the\n"
        "    implementation with oracles and property checks instead\n");
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    struct Entry {
        int id;
        const char* title;
        bool (*fn)();
    };
    const Entry entries[] = {
        {1, "sparse membership-score kernel matches the nested-loop reference", criterion_1},
        {2, "sparse kernel speedup >= 50x at n=1000, K=50", criterion_2},
        {3, "lower-bound trace is monotone over 100 iterations", criterion_3},
        {4, "chain matches the exact stationary law (TV <= 0.02)", criterion_4},
        {5, "change statistics equal potential differences", criterion_5},
        {6, "planted two-block partition recovered (ARI, Yule >= 0.99)", criterion_6},
        {7, "end-to-end coefficient recovery within 3 SE in >= 90% of runs", criterion_7},
        {8, "no-externality pseudolikelihood is exact; fit matches reference IRLS", criterion_8},
        {9, "density formula reproduces 2.3e-5 at the reference size", criterion_9},
        {10, "proprietary-data results declared non-reproduced", criterion_10},
    };
    std::set<int> only;
    for (int a = 1; a < argc; ++a) only.insert(std::atoi(argv[a]));
    int failures = 0;
    for (const Entry& e : entries) {
        if (!only.empty() && !only.count(e.id)) continue;
        auto start = Clock::now();
        bool ok = false;
        try {
            ok = e.fn();
        } catch (const std::exception& ex) {
            std::printf("    exception: %s\n", ex.what());
        }
        std::printf("[%s] criterion %d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", e.id, e.title,
                    seconds_since(start));
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
