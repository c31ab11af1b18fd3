#ifndef HERGM_MPLE_HPP
#define HERGM_MPLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "common.hpp"
#include "graph.hpp"
#include "model.hpp"

namespace hergm {

enum class DyadGroup { within, between };

// One logistic-regression observation. stats holds the change statistics in
// the unordered coefficient convention: edge indicator, then (within group
// only) two-star and triangle change counts, then the covariate matches.
struct DyadRow {
    int y = 0;
    std::vector<double> stats;
    double offset = 0.0;
    DyadGroup group = DyadGroup::within;
    int block_k = 0;
    int block_l = 0;
};

struct FitResult {
    std::vector<std::string> names;
    std::vector<double> coef;
    std::vector<double> se;
    double log_pl = 0.0;
    double bic = 0.0;
    int64_t n_rows = 0;
    int iterations = 0;
    bool converged = false;
    std::string sampling;
};

struct DesignConfig {
    std::vector<int> covariates;   // columns of the CovariateSet used as f_p
    bool case_control = false;
    int control_ratio = 5;         // non-edges kept per edge
    uint64_t seed = 1;
};

namespace detail {

inline std::vector<double> within_stats(const Graph& g, const CovariateSet& x,
                                        const BlockAssignment& z, const DesignConfig& cfg, int i,
                                        int j) {
    int k = z.z[i];
    std::vector<double> s;
    s.reserve(3 + cfg.covariates.size());
    s.push_back(1.0);
    int two_star = 0;
    for (int r : g.neighbors(i))
        if (r != j && z.z[r] == k) ++two_star;
    for (int r : g.neighbors(j))
        if (r != i && z.z[r] == k) ++two_star;
    s.push_back(static_cast<double>(two_star));
    s.push_back(static_cast<double>(common_neighbors(g, i, j, &z, k)));
    for (int c : cfg.covariates) s.push_back(x.same(i, j, c) ? 1.0 : 0.0);
    return s;
}

inline std::vector<double> between_stats(const CovariateSet& x, const DesignConfig& cfg, int i,
                                         int j) {
    std::vector<double> s;
    s.reserve(1 + cfg.covariates.size());
    s.push_back(1.0);
    for (int c : cfg.covariates) s.push_back(x.same(i, j, c) ? 1.0 : 0.0);
    return s;
}

}  // namespace detail

inline std::vector<std::string> design_columns(const CovariateSet& x, const DesignConfig& cfg,
                                               DyadGroup group) {
    std::vector<std::string> names;
    names.push_back("edges");
    if (group == DyadGroup::within) {
        names.push_back("two_stars");
        names.push_back("triangles");
    }
    for (int c : cfg.covariates) names.push_back("same_" + x.name_of(c));
    return names;
}

// Enumerates the dyads of one group. Full enumeration by default; with
// case-control sampling every edge is kept plus control_ratio random
// non-edges per edge, and the intercept offset log(N0 / (r * m)) makes the
// fitted intercept consistent for the full-universe value.
inline std::vector<DyadRow> build_design(const Graph& g, const CovariateSet& x,
                                         const BlockAssignment& z, DyadGroup group,
                                         const DesignConfig& cfg) {
    int n = g.n();
    std::vector<DyadRow> rows;
    auto in_group = [&](int i, int j) {
        return group == DyadGroup::within ? z.z[i] == z.z[j] : z.z[i] != z.z[j];
    };
    auto make_row = [&](int i, int j, double offset) {
        DyadRow r;
        r.y = g.has_edge(i, j) ? 1 : 0;
        r.group = group;
        r.block_k = z.z[i];
        r.block_l = z.z[j];
        r.offset = offset;
        r.stats = group == DyadGroup::within ? detail::within_stats(g, x, z, cfg, i, j)
                                             : detail::between_stats(x, cfg, i, j);
        return r;
    };
    if (!cfg.case_control) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (in_group(i, j)) rows.push_back(make_row(i, j, 0.0));
        return rows;
    }
    // group sizes
    int64_t group_dyads = 0;
    {
        std::vector<int64_t> block_size(z.K, 0);
        for (int v : z.z) block_size[v]++;
        int64_t within = 0;
        for (int64_t s : block_size) within += s * (s - 1) / 2;
        int64_t total = static_cast<int64_t>(n) * (n - 1) / 2;
        group_dyads = group == DyadGroup::within ? within : total - within;
    }
    int64_t group_edges = 0;
    for (int i = 0; i < n; ++i)
        for (int j : g.neighbors(i))
            if (i < j && in_group(i, j)) ++group_edges;
    int64_t non_edges = group_dyads - group_edges;
    int64_t want_controls = cfg.control_ratio * group_edges;
    if (group_edges == 0 || non_edges == 0)
        throw NumericalError("case-control sampling: group has no edges or no non-edges");
    if (want_controls > non_edges) want_controls = non_edges;
    double offset = std::log(static_cast<double>(non_edges) / static_cast<double>(want_controls));
    for (int i = 0; i < n; ++i)
        for (int j : g.neighbors(i))
            if (i < j && in_group(i, j)) rows.push_back(make_row(i, j, offset));
    Rng rng(cfg.seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::unordered_set<int64_t> chosen;
    while (static_cast<int64_t>(chosen.size()) < want_controls) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        if (i > j) std::swap(i, j);
        if (!in_group(i, j) || g.has_edge(i, j)) continue;
        if (chosen.insert(static_cast<int64_t>(i) * n + j).second)
            rows.push_back(make_row(i, j, offset));
    }
    return rows;
}

namespace detail {

// Solve the symmetric system H x = b in place; reports the offending column
// on rank deficiency.
inline std::vector<double> solve_sym(std::vector<std::vector<double>> h, std::vector<double> b,
                                     const std::vector<std::string>& names) {
    int p = static_cast<int>(b.size());
    for (int c = 0; c < p; ++c) {
        int piv = c;
        for (int r = c + 1; r < p; ++r)
            if (std::abs(h[r][c]) > std::abs(h[piv][c])) piv = r;
        if (std::abs(h[piv][c]) < 1e-12) {
            throw NumericalError("design is rank deficient at column '" +
                                 (c < static_cast<int>(names.size()) ? names[c]
                                                                     : std::to_string(c)) +
                                 "'");
        }
        std::swap(h[c], h[piv]);
        std::swap(b[c], b[piv]);
        for (int r = c + 1; r < p; ++r) {
            double f = h[r][c] / h[c][c];
            for (int cc = c; cc < p; ++cc) h[r][cc] -= f * h[c][cc];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(p);
    for (int r = p - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < p; ++c) acc -= h[r][c] * x[c];
        x[r] = acc / h[r][r];
    }
    return x;
}

inline std::vector<std::vector<double>> invert_sym(const std::vector<std::vector<double>>& h,
                                                   const std::vector<std::string>& names) {
    int p = static_cast<int>(h.size());
    std::vector<std::vector<double>> inv(p);
    for (int c = 0; c < p; ++c) {
        std::vector<double> e(p, 0.0);
        e[c] = 1.0;
        inv[c] = solve_sym(h, e, names);
    }
    // inv[c][r] is column c; symmetric so orientation does not matter
    return inv;
}

}  // namespace detail

// Newton-Raphson maximization of the log-pseudolikelihood; standard errors
// from the inverse observed information.
inline FitResult fit_logistic(const std::vector<DyadRow>& rows,
                              const std::vector<std::string>& names) {
    if (rows.empty()) throw InputError("fit_logistic: no rows");
    int64_t positives = 0;
    for (const auto& r : rows) positives += r.y;
    if (positives == 0 || positives == static_cast<int64_t>(rows.size()))
        throw NumericalError("fit_logistic: outcomes have no variation (all " +
                             std::string(positives ? "edges" : "non-edges") + ")");
    int p = static_cast<int>(rows.front().stats.size());
    FitResult fit;
    fit.names = names;
    fit.n_rows = static_cast<int64_t>(rows.size());
    std::vector<double> theta(p, 0.0);

    auto loglik = [&](const std::vector<double>& th) {
        double ll = 0.0;
        for (const auto& r : rows) {
            double eta = r.offset;
            for (int c = 0; c < p; ++c) eta += th[c] * r.stats[c];
            // log-likelihood of Bernoulli(logistic(eta)) in a stable form
            double lp = eta >= 0 ? -std::log1p(std::exp(-eta)) : eta - std::log1p(std::exp(eta));
            ll += r.y ? lp : lp - eta;
        }
        return ll;
    };

    double ll = loglik(theta);
    for (int it = 0; it < 100; ++it) {
        std::vector<double> score(p, 0.0);
        std::vector<std::vector<double>> info(p, std::vector<double>(p, 0.0));
        for (const auto& r : rows) {
            double eta = r.offset;
            for (int c = 0; c < p; ++c) eta += theta[c] * r.stats[c];
            double mu = logistic(eta);
            double w = mu * (1.0 - mu);
            double resid = r.y - mu;
            for (int c = 0; c < p; ++c) {
                score[c] += resid * r.stats[c];
                for (int cc = c; cc < p; ++cc) info[c][cc] += w * r.stats[c] * r.stats[cc];
            }
        }
        for (int c = 0; c < p; ++c)
            for (int cc = 0; cc < c; ++cc) info[c][cc] = info[cc][c];
        double max_score = 0.0;
        for (double s : score) max_score = std::max(max_score, std::abs(s));
        fit.iterations = it;
        std::vector<double> delta;
        double gain = 0.0;  // Newton decrement: the expected improvement scale
        if (max_score > 1e-8) {
            delta = detail::solve_sym(info, score, names);
            for (int c = 0; c < p; ++c) gain += score[c] * delta[c];
        }
        if (max_score <= 1e-8 || gain <= 1e-14) {
            fit.converged = true;
            std::vector<std::vector<double>> inv = detail::invert_sym(info, names);
            fit.coef = theta;
            fit.se.resize(p);
            for (int c = 0; c < p; ++c) fit.se[c] = std::sqrt(std::max(inv[c][c], 0.0));
            fit.log_pl = ll;
            fit.bic = -2.0 * ll + p * std::log(static_cast<double>(rows.size()));
            return fit;
        }
        if (gain < 0.1) {
            // near the optimum the true improvement sinks below the rounding
            // noise of the summed likelihood, so a line search cannot see it;
            // the pure Newton step is safe in this regime
            for (int c = 0; c < p; ++c) theta[c] += delta[c];
            ll = loglik(theta);
        } else {
            // step-halving if the likelihood does not improve
            double step = 1.0;
            for (int h = 0; h < 40; ++h) {
                std::vector<double> cand(p);
                for (int c = 0; c < p; ++c) cand[c] = theta[c] + step * delta[c];
                double cand_ll = loglik(cand);
                if (cand_ll >= ll - 1e-14 * std::abs(ll)) {
                    theta = std::move(cand);
                    ll = cand_ll;
                    break;
                }
                step *= 0.5;
            }
        }
        for (double t : theta) {
            if (std::abs(t) > 50.0) {
                throw NumericalError(
                    "fit_logistic: coefficient diverging (|theta| > 50); the data are "
                    "perfectly separated or a cell has no variation");
            }
        }
    }
    throw NumericalError("fit_logistic: Newton-Raphson did not converge in 100 iterations");
}

struct EstimateConfig {
    DesignConfig design;
    // threshold beyond which the between fit switches to case-control
    int case_control_threshold_n = 20000;
};

struct EstimateResult {
    FitResult within;
    FitResult between;
};

// Two independent MPLE fits: within-block dyads (with externality change
// statistics) and between-block dyads (conditionally independent links).
inline EstimateResult estimate(const Graph& g, const CovariateSet& x, const BlockAssignment& z,
                               EstimateConfig cfg = {}) {
    if (z.n() != g.n()) throw InputError("estimate: block assignment size mismatch");
    DesignConfig dcfg = cfg.design;
    if (g.n() > cfg.case_control_threshold_n) dcfg.case_control = true;
    EstimateResult out;
    {
        auto rows = build_design(g, x, z, DyadGroup::within, dcfg);
        out.within = fit_logistic(rows, design_columns(x, dcfg, DyadGroup::within));
        out.within.sampling = dcfg.case_control
                                  ? "case-control r=" + std::to_string(dcfg.control_ratio)
                                  : "all";
    }
    {
        auto rows = build_design(g, x, z, DyadGroup::between, dcfg);
        out.between = fit_logistic(rows, design_columns(x, dcfg, DyadGroup::between));
        out.between.sampling = dcfg.case_control
                                   ? "case-control r=" + std::to_string(dcfg.control_ratio)
                                   : "all";
    }
    return out;
}

// Log-pseudolikelihood of the structural model at given parameters; with
// psi = gamma = 0 this coincides with the exact independent-links
// log-likelihood.
inline double log_pseudolikelihood(const Graph& g, const CovariateSet& x,
                                   const BlockAssignment& z, const ModelParams& params) {
    double ll = 0.0;
    int n = g.n();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            auto [cs, dq] = change_stats(g, x, z, params, i, j);
            double lp = dq >= 0 ? -std::log1p(std::exp(-dq)) : dq - std::log1p(std::exp(dq));
            ll += g.has_edge(i, j) ? lp : lp - dq;
        }
    return ll;
}

}  // namespace hergm

#endif
