#ifndef HERGM_SIMULATOR_HPP
#define HERGM_SIMULATOR_HPP

#include <algorithm>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include "common.hpp"
#include "graph.hpp"
#include "model.hpp"

namespace hergm {

struct SimConfig {
    int n = 0;
    int K = 1;
    std::vector<double> eta;  // length K, sums to 1
    ModelParams params;
    int64_t steps = 0;
    int64_t burn_in = 0;
    int64_t trace_every = 0;  // 0 = no trace
    uint64_t seed = 1;

    void validate() const {
        if (n <= 0) throw ConfigError("simulator: n must be positive");
        if (static_cast<int>(eta.size()) != K) throw ConfigError("simulator: eta must have length K");
        double total = 0.0;
        for (double e : eta) {
            if (e < 0.0) throw ConfigError("simulator: eta entries must be non-negative");
            total += e;
        }
        if (std::abs(total - 1.0) > 1e-9) throw ConfigError("simulator: eta must sum to 1");
        if (burn_in < 0 || steps <= burn_in) throw ConfigError("simulator: need steps > burn_in >= 0");
    }
};

inline BlockAssignment draw_types(int n, const std::vector<double>& eta, uint64_t seed) {
    Rng rng(seed);
    std::discrete_distribution<int> dist(eta.begin(), eta.end());
    BlockAssignment z;
    z.K = static_cast<int>(eta.size());
    z.z.resize(n);
    for (int i = 0; i < n; ++i) z.z[i] = dist(rng);
    return z;
}

// Sequential link dynamics: pick a dyad, then a Gibbs (logit) update with
// acceptance probability Lambda(deltaQ of forming the link), whose stationary
// law is exp(Q)/c. Adjacency is mutable here; everything else is shared
// immutable state.
class Chain {
  public:
    using MeetingRule = std::function<std::pair<int, int>(Rng&)>;

    Chain(const CovariateSet& x, const BlockAssignment& z, const ModelParams& params,
          uint64_t seed)
        : x_(&x), z_(&z), params_(params), n_(z.n()), adj_(z.n()), rng_(seed) {}

    // Override the default uniform-pair meeting rule.
    void set_meeting_rule(MeetingRule rule) { meet_ = std::move(rule); }

    int n() const { return n_; }
    int64_t edge_count() const { return m_; }

    bool has_edge(int i, int j) const {
        const auto& nb = adj_[i];
        return std::binary_search(nb.begin(), nb.end(), j);
    }

    const std::vector<int>& neighbors(int i) const { return adj_[i]; }

    double form_surplus(int i, int j) const {
        // counts exclude the dyad itself, so this is valid whether or not
        // the edge is currently present
        bool same_block = z_->z[i] == z_->z[j];
        double dq = 2.0 * direct_utility(params_, *x_, i, j, same_block);
        if (same_block) {
            int k = z_->z[i];
            int two_star = 0;
            for (int r : adj_[i])
                if (r != j && z_->z[r] == k) ++two_star;
            for (int r : adj_[j])
                if (r != i && z_->z[r] == k) ++two_star;
            int tri = 0;
            const auto& ni = adj_[i];
            const auto& nj = adj_[j];
            auto a = ni.begin();
            auto b = nj.begin();
            while (a != ni.end() && b != nj.end()) {
                if (*a < *b)
                    ++a;
                else if (*b < *a)
                    ++b;
                else {
                    if (*a != i && *a != j && z_->z[*a] == k) ++tri;
                    ++a;
                    ++b;
                }
            }
            dq += params_.psi * two_star + 4.0 * params_.gamma * tri;
        }
        return dq;
    }

    // One dyad update; returns the dyad touched.
    std::pair<int, int> step() {
        int i, j;
        if (meet_) {
            auto pr = meet_(rng_);
            i = pr.first;
            j = pr.second;
        } else {
            std::uniform_int_distribution<int> pick(0, n_ - 1);
            i = pick(rng_);
            do {
                j = pick(rng_);
            } while (j == i);
        }
        double p_form = logistic(form_surplus(i, j));
        bool want = std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p_form;
        set_edge(i, j, want);
        return {std::min(i, j), std::max(i, j)};
    }

    Graph snapshot() const {
        std::vector<std::pair<int, int>> edges;
        edges.reserve(static_cast<size_t>(m_));
        for (int i = 0; i < n_; ++i)
            for (int j : adj_[i])
                if (i < j) edges.emplace_back(i, j);
        return Graph::from_edge_list(edges, n_);
    }

  private:
    void set_edge(int i, int j, bool present) {
        auto& ni = adj_[i];
        auto it = std::lower_bound(ni.begin(), ni.end(), j);
        bool have = it != ni.end() && *it == j;
        if (have == present) return;
        if (present) {
            ni.insert(it, j);
            auto& nj = adj_[j];
            nj.insert(std::lower_bound(nj.begin(), nj.end(), i), i);
            ++m_;
        } else {
            ni.erase(it);
            auto& nj = adj_[j];
            nj.erase(std::lower_bound(nj.begin(), nj.end(), i));
            --m_;
        }
    }

    const CovariateSet* x_;
    const BlockAssignment* z_;
    ModelParams params_;
    int n_;
    std::vector<std::vector<int>> adj_;
    int64_t m_ = 0;
    Rng rng_;
    MeetingRule meet_;
};

struct ChainTracePoint {
    int64_t step = 0;
    int64_t edges = 0;
    int64_t two_stars = 0;
    int64_t triangles = 0;
};

struct ChainResult {
    Graph graph;
    std::vector<ChainTracePoint> trace;
};

inline ChainResult run_chain(const SimConfig& config, const CovariateSet& x,
                             const BlockAssignment& z) {
    config.validate();
    Chain chain(x, z, config.params, config.seed);
    ChainResult result;
    for (int64_t t = 1; t <= config.steps; ++t) {
        chain.step();
        if (config.trace_every > 0 && t > config.burn_in && t % config.trace_every == 0) {
            Graph snap = chain.snapshot();
            GraphStats s = graph_stats(snap);
            result.trace.push_back({t, snap.m(), s.two_stars, s.triangles});
        }
    }
    result.graph = chain.snapshot();
    return result;
}

struct CovariateSpec {
    std::string name;
    int categories = 2;
    // Probability that a node's category is tied to its block rather than
    // drawn uniformly; 0 = independent of blocks.
    double block_correlation = 0.0;
};

struct Dataset {
    Graph graph;
    CovariateSet covariates;
    BlockAssignment truth;
    ModelParams params;
    uint64_t seed = 0;
};

inline Dataset generate_dataset(const SimConfig& config, const std::vector<CovariateSpec>& covs) {
    config.validate();
    if (static_cast<int>(config.params.beta_w.size()) != static_cast<int>(covs.size()) ||
        config.params.beta_b.size() != config.params.beta_w.size()) {
        throw ConfigError("generate_dataset: beta length must match covariate spec count");
    }
    Dataset ds;
    ds.seed = config.seed;
    ds.params = config.params;
    ds.truth = draw_types(config.n, config.eta, config.seed);
    ds.covariates = CovariateSet(config.n, static_cast<int>(covs.size()));
    std::vector<std::string> names;
    Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    for (int s = 0; s < static_cast<int>(covs.size()); ++s) {
        const auto& spec = covs[s];
        if (spec.categories < 1) throw ConfigError("covariate spec needs >= 1 category");
        names.push_back(spec.name.empty() ? "cov_" + std::to_string(s + 1) : spec.name);
        std::uniform_int_distribution<int> cat(0, spec.categories - 1);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < config.n; ++i) {
            int v;
            if (spec.block_correlation > 0.0 && u(rng) < spec.block_correlation)
                v = ds.truth.z[i] % spec.categories;
            else
                v = cat(rng);
            ds.covariates.set_value(i, s, v);
        }
    }
    ds.covariates.set_names(std::move(names));
    SimConfig chain_cfg = config;
    chain_cfg.trace_every = 0;
    chain_cfg.seed = config.seed + 1;
    ds.graph = run_chain(chain_cfg, ds.covariates, ds.truth).graph;
    return ds;
}

}  // namespace hergm

#endif
