#ifndef HERGM_BLOCK_EM_HPP
#define HERGM_BLOCK_EM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "common.hpp"
#include "graph.hpp"

namespace hergm {

inline constexpr double kXiFloor = 1e-12;
inline constexpr double kPiClamp = 1e-12;
inline constexpr int kMaxEmCovariates = 6;

// Binds the covariates actually used by the EM (a subset of the CovariateSet
// columns, possibly empty).
struct CovariateUse {
    const CovariateSet* set = nullptr;
    std::vector<int> indices;

    int p() const { return static_cast<int>(indices.size()); }
    bool same(int i, int j, int s) const { return set->same(i, j, indices[s]); }
};

// Variational EM state. pi1[chi] is the K x K table of link probabilities
// P(g_ij = 1 | blocks k,l and covariate-match configuration chi); the d = 0
// entry is 1 - pi1.
struct VariationalState {
    Mat xi;                   // n x K
    std::vector<double> eta;  // length K
    std::vector<Mat> pi1;     // 2^p entries of K x K
    int p = 0;
    int iteration = 0;
    std::vector<double> lb_trace;

    int n() const { return xi.rows(); }
    int K() const { return xi.cols(); }
};

// Dyad (i < j) with its configuration bits: bit 0 = g_ij, bit 1+s = chi_s.
// Only dyads with a nonzero configuration are stored; everything else is the
// A0 * Pi0^T baseline.
struct DyadSupport {
    std::vector<int> i, j, config;

    size_t size() const { return i.size(); }
};

inline DyadSupport build_support(const Graph& g, const CovariateUse& use,
                                 int64_t feature_budget = std::numeric_limits<int64_t>::max()) {
    int n = g.n();
    std::vector<int64_t> keys;
    for (int a = 0; a < n; ++a)
        for (int b : g.neighbors(a))
            if (a < b) keys.push_back(static_cast<int64_t>(a) * n + b);
    for (int s = 0; s < use.p(); ++s) {
        const auto& fa = use.set->feature_adjacency(use.indices[s], feature_budget);
        for (auto [a, b] : fa.pairs) keys.push_back(static_cast<int64_t>(a) * n + b);
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    DyadSupport sup;
    sup.i.reserve(keys.size());
    sup.j.reserve(keys.size());
    sup.config.reserve(keys.size());
    for (int64_t key : keys) {
        int a = static_cast<int>(key / n);
        int b = static_cast<int>(key % n);
        int cfg = g.has_edge(a, b) ? 1 : 0;
        for (int s = 0; s < use.p(); ++s)
            if (use.same(a, b, s)) cfg |= 1 << (1 + s);
        sup.i.push_back(a);
        sup.j.push_back(b);
        sup.config.push_back(cfg);
    }
    return sup;
}

inline double clamped_log(double v) {
    return std::log(std::clamp(v, kPiClamp, 1.0 - kPiClamp));
}

// log pi_{kl}(d, chi) from the state table.
inline Mat log_pi_matrix(const VariationalState& state, int d, int chi) {
    int K = state.K();
    Mat out(K, K);
    const Mat& p1 = state.pi1[chi];
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < K; ++l)
            out(k, l) = clamped_log(d ? p1(k, l) : 1.0 - p1(k, l));
    return out;
}

// Omega_ik = sum_{j != i} sum_l xi_jl log pi_{kl}(g_ij, chi_ij), computed as
// the A0 * Pi0^T baseline plus one sparse correction per nonzero dyad
// configuration. No dense n x n matrix is ever formed: every correction is
// supported on the union of the edge set and the feature adjacency sets,
// which is exactly where some configuration bit is on.
inline Mat omega(const Graph& g, const CovariateUse& use, const VariationalState& state,
                 const DyadSupport* support = nullptr) {
    int n = state.n();
    int K = state.K();
    DyadSupport local;
    if (!support) {
        local = build_support(g, use);
        support = &local;
    }
    // baseline: A0_il = tau(l) - xi_il, against log pi(0, chi=0)
    std::vector<double> tau(K, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < K; ++k) tau[k] += state.xi(i, k);
    Mat a0(n, K);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < K; ++k) a0(i, k) = tau[k] - state.xi(i, k);
    Mat pi0 = log_pi_matrix(state, 0, 0);
    Mat result = mul_abt(a0, pi0);

    // per-configuration log-ratio tables, relative to the baseline
    int num_cfg = 2 << use.p();
    std::vector<Mat> ratio(num_cfg);
    std::vector<char> seen(num_cfg, 0);
    for (size_t t = 0; t < support->size(); ++t) seen[support->config[t]] = 1;
    for (int cfg = 1; cfg < num_cfg; ++cfg) {
        if (!seen[cfg]) continue;
        Mat lp = log_pi_matrix(state, cfg & 1, cfg >> 1);
        ratio[cfg] = Mat(K, K);
        for (int k = 0; k < K; ++k)
            for (int l = 0; l < K; ++l) ratio[cfg](k, l) = lp(k, l) - pi0(k, l);
    }

    int nw = worker_count();
    std::vector<Mat> partial(nw);
    parallel_chunks(0, static_cast<int64_t>(support->size()), [&](int w, int64_t lo, int64_t hi) {
        Mat& acc = partial[w];
        if (acc.rows() == 0) acc = Mat(n, K);
        for (int64_t t = lo; t < hi; ++t) {
            int a = support->i[t];
            int b = support->j[t];
            const Mat& r = ratio[support->config[t]];
            const double* xa = state.xi.row(a);
            const double* xb = state.xi.row(b);
            double* oa = acc.row(a);
            double* ob = acc.row(b);
            for (int k = 0; k < K; ++k) {
                const double* rk = r.row(k);
                double sa = 0.0, sb = 0.0;
                for (int l = 0; l < K; ++l) {
                    sa += rk[l] * xb[l];
                    sb += rk[l] * xa[l];
                }
                oa[k] += sa;
                ob[k] += sb;
            }
        }
    });
    for (const Mat& acc : partial) {
        if (acc.rows() == 0) continue;
        for (size_t t = 0; t < result.data().size(); ++t) result.data()[t] += acc.data()[t];
    }
    return result;
}

// Nested-loop reference for omega; testing and benchmark oracle only.
inline Mat omega_naive(const Graph& g, const CovariateUse& use, const VariationalState& state) {
    int n = state.n();
    if (n > 2000) throw CapacityError("omega_naive is a desk-scale oracle; n must be <= 2000");
    int K = state.K();
    int num_chi = 1 << use.p();
    std::vector<Mat> logpi(2 * num_chi);
    for (int d = 0; d <= 1; ++d)
        for (int chi = 0; chi < num_chi; ++chi) logpi[d * num_chi + chi] = log_pi_matrix(state, d, chi);
    Mat result(n, K);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            int d = g.has_edge(i, j) ? 1 : 0;
            int chi = 0;
            for (int s = 0; s < use.p(); ++s)
                if (use.same(i, j, s)) chi |= 1 << s;
            const Mat& lp = logpi[d * num_chi + chi];
            for (int k = 0; k < K; ++k) {
                double acc = 0.0;
                for (int l = 0; l < K; ++l) acc += state.xi(j, l) * lp(k, l);
                result(i, k) += acc;
            }
        }
    }
    return result;
}

// argmax sum_k a_k x_k^2 + b_k x_k on the probability simplex, a_k < 0.
// Bisection on the Lagrange multiplier: x_k(lambda) = max(0, (lambda - b_k) / (2 a_k)).
inline std::vector<double> qp_simplex(const std::vector<double>& a, const std::vector<double>& b) {
    int K = static_cast<int>(a.size());
    if (static_cast<int>(b.size()) != K) throw InputError("qp_simplex: size mismatch");
    for (double ak : a)
        if (!(ak < 0.0)) throw NumericalError("qp_simplex: quadratic coefficients must be negative");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
        lo = std::min(lo, b[k] + 2.0 * a[k]);  // x_k = 1 here, so sum >= 1
        hi = std::max(hi, b[k]);               // all x_k = 0 here
    }
    auto total = [&](double lambda) {
        double s = 0.0;
        for (int k = 0; k < K; ++k) s += std::max(0.0, (lambda - b[k]) / (2.0 * a[k]));
        return s;
    };
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (total(mid) >= 1.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-14 * (1.0 + std::abs(hi))) break;
    }
    double lambda = 0.5 * (lo + hi);
    std::vector<double> x(K);
    double s = 0.0;
    for (int k = 0; k < K; ++k) {
        x[k] = std::max(0.0, (lambda - b[k]) / (2.0 * a[k]));
        s += x[k];
    }
    if (s <= 0.0) throw NumericalError("qp_simplex: degenerate solution");
    for (double& v : x) v /= s;
    return x;
}

// One MM step for the variational probabilities. The quadratic coefficient is
// the derived form (Omega/2 - 1)/xi; the appendix_form flag switches to the
// compact rearranged variant (Omega/(2 xi) - 1)/xi for study.
inline Mat update_xi(const Mat& omega_mat, const VariationalState& state,
                     bool appendix_form = false) {
    int n = state.n();
    int K = state.K();
    Mat next(n, K);
    parallel_chunks(0, n, [&](int, int64_t lo, int64_t hi) {
        std::vector<double> a(K), b(K);
        for (int64_t i = lo; i < hi; ++i) {
            for (int k = 0; k < K; ++k) {
                double xi_s = std::max(state.xi(static_cast<int>(i), k), kXiFloor);
                double om = omega_mat(static_cast<int>(i), k);
                a[k] = appendix_form ? (om / (2.0 * xi_s) - 1.0) / xi_s : (om / 2.0 - 1.0) / xi_s;
                b[k] = std::log(state.eta[k]) - std::log(xi_s) + 1.0;
            }
            std::vector<double> x = qp_simplex(a, b);
            double s = 0.0;
            for (int k = 0; k < K; ++k) {
                x[k] = std::max(x[k], kXiFloor);
                s += x[k];
            }
            for (int k = 0; k < K; ++k) next(static_cast<int>(i), k) = x[k] / s;
        }
    });
    return next;
}

struct PiUpdateResult {
    std::vector<Mat> pi1;  // 2^p of K x K
    std::vector<std::string> warnings;
};

// Closed-form M-step for the link-probability cells. The chi = 0 denominator
// uses tau tau^T - xi^T xi minus the sparse nonzero-chi mass, which is the
// inclusion-exclusion decomposition in grouped form; no dense n x n matrix is
// involved.
inline PiUpdateResult update_pi(const Graph& g, const CovariateUse& use, const Mat& xi,
                                const DyadSupport* support = nullptr) {
    int n = xi.rows();
    int K = xi.cols();
    DyadSupport local;
    if (!support) {
        local = build_support(g, use);
        support = &local;
    }
    int num_chi = 1 << use.p();
    int nw = worker_count();
    std::vector<std::vector<Mat>> num_w(nw), den_w(nw);
    parallel_chunks(0, static_cast<int64_t>(support->size()), [&](int w, int64_t lo, int64_t hi) {
        auto& num = num_w[w];
        auto& den = den_w[w];
        if (num.empty()) {
            num.assign(num_chi, Mat(K, K));
            den.assign(num_chi, Mat(K, K));
        }
        for (int64_t t = lo; t < hi; ++t) {
            int a = support->i[t];
            int b = support->j[t];
            int cfg = support->config[t];
            int d = cfg & 1;
            int chi = cfg >> 1;
            const double* xa = xi.row(a);
            const double* xb = xi.row(b);
            Mat* targets[2] = {chi != 0 ? &den[chi] : nullptr, d ? &num[chi] : nullptr};
            for (Mat* m : targets) {
                if (!m) continue;
                for (int k = 0; k < K; ++k) {
                    double* mk = m->row(k);
                    for (int l = 0; l < K; ++l) mk[l] += xa[k] * xb[l] + xb[k] * xa[l];
                }
            }
        }
    });
    std::vector<Mat> num(num_chi, Mat(K, K)), den(num_chi, Mat(K, K));
    for (int w = 0; w < nw; ++w) {
        if (num_w[w].empty()) continue;
        for (int chi = 0; chi < num_chi; ++chi)
            for (size_t t = 0; t < num[chi].data().size(); ++t) {
                num[chi].data()[t] += num_w[w][chi].data()[t];
                den[chi].data()[t] += den_w[w][chi].data()[t];
            }
    }
    // chi = 0 denominator: P1 = xi^T J xi = tau tau^T - xi^T xi, minus the
    // mass already attributed to nonzero chi configurations.
    std::vector<double> tau(K, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < K; ++k) tau[k] += xi(i, k);
    Mat xtx(K, K);
    for (int i = 0; i < n; ++i) {
        const double* xr = xi.row(i);
        for (int k = 0; k < K; ++k)
            for (int l = 0; l < K; ++l) xtx(k, l) += xr[k] * xr[l];
    }
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < K; ++l) {
            double p1 = tau[k] * tau[l] - xtx(k, l);
            double others = 0.0;
            for (int chi = 1; chi < num_chi; ++chi) others += den[chi](k, l);
            den[0](k, l) = p1 - others;
        }
    PiUpdateResult out;
    out.pi1.assign(num_chi, Mat(K, K));
    int64_t dyads = static_cast<int64_t>(n) * (n - 1) / 2;
    double global_density = dyads > 0 ? static_cast<double>(g.m()) / dyads : 0.0;
    for (int chi = 0; chi < num_chi; ++chi) {
        bool warned = false;
        for (int k = 0; k < K; ++k)
            for (int l = 0; l < K; ++l) {
                double d = den[chi](k, l);
                if (d <= 1e-14) {
                    out.pi1[chi](k, l) = global_density;
                    if (!warned) {
                        out.warnings.push_back("pi update: empty cell for covariate config " +
                                               std::to_string(chi) +
                                               "; using global density fallback");
                        warned = true;
                    }
                } else {
                    out.pi1[chi](k, l) = std::clamp(num[chi](k, l) / d, 0.0, 1.0);
                }
            }
    }
    return out;
}

// Variational lower bound: 0.5 * sum(xi .* Omega) + sum_i sum_k xi_ik (log eta_k - log xi_ik).
inline double lower_bound(const Graph& g, const CovariateUse& use, const VariationalState& state,
                          const DyadSupport* support = nullptr) {
    Mat om = omega(g, use, state, support);
    double lb = 0.0;
    int n = state.n();
    int K = state.K();
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < K; ++k) {
            double xi = state.xi(i, k);
            lb += 0.5 * xi * om(i, k);
            if (xi > 0.0) lb += xi * (std::log(state.eta[k]) - std::log(xi));
        }
    return lb;
}

// Label propagation with a modularity-greedy merge down to K_max blocks.
inline BlockAssignment init_blocks(const Graph& g, int K_max, uint64_t seed = 1) {
    int n = g.n();
    if (K_max < 1) throw ConfigError("init_blocks: K_max must be >= 1");
    BlockAssignment out;
    if (n == 0) {
        out.K = 1;
        return out;
    }
    if (g.m() == 0 || K_max == 1) {
        // no signal: one block
        out.z.assign(n, 0);
        out.K = 1;
        return out;
    }
    Rng rng(seed);
    std::vector<int> label(n);
    std::iota(label.begin(), label.end(), 0);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::unordered_map<int, int> counts;
    for (int round = 0; round < 100; ++round) {
        std::shuffle(order.begin(), order.end(), rng);
        bool changed = false;
        for (int i : order) {
            if (g.degree(i) == 0) continue;
            counts.clear();
            for (int j : g.neighbors(i)) counts[label[j]]++;
            int best_count = 0;
            for (auto& [lab, c] : counts) best_count = std::max(best_count, c);
            std::vector<int> best;
            for (auto& [lab, c] : counts)
                if (c == best_count) best.push_back(lab);
            std::sort(best.begin(), best.end());
            int pick;
            if (std::find(best.begin(), best.end(), label[i]) != best.end()) {
                pick = label[i];
            } else {
                pick = best[std::uniform_int_distribution<size_t>(0, best.size() - 1)(rng)];
            }
            if (pick != label[i]) {
                label[i] = pick;
                changed = true;
            }
        }
        if (!changed) break;
    }
    // compact labels
    std::unordered_map<int, int> remap;
    for (int i = 0; i < n; ++i) {
        auto [it, fresh] = remap.emplace(label[i], static_cast<int>(remap.size()));
        label[i] = it->second;
    }
    int K = static_cast<int>(remap.size());

    // merge smallest communities by modularity gain until K <= K_max
    double m2 = 2.0 * static_cast<double>(g.m());
    std::vector<int64_t> size(K, 0), deg(K, 0);
    std::map<std::pair<int, int>, int64_t> between;  // (a < b) -> edge count
    for (int i = 0; i < n; ++i) {
        size[label[i]]++;
        deg[label[i]] += g.degree(i);
    }
    for (int i = 0; i < n; ++i)
        for (int j : g.neighbors(i)) {
            if (j <= i) continue;
            int a = label[i], b = label[j];
            if (a != b) between[{std::min(a, b), std::max(a, b)}]++;
        }
    std::vector<char> alive(K, 1);
    int alive_count = K;
    while (alive_count > K_max) {
        int smallest = -1;
        for (int c = 0; c < K; ++c)
            if (alive[c] && (smallest < 0 || size[c] < size[smallest])) smallest = c;
        int best_other = -1;
        double best_gain = -std::numeric_limits<double>::infinity();
        for (auto& [pr, e] : between) {
            int other = -1;
            if (pr.first == smallest)
                other = pr.second;
            else if (pr.second == smallest)
                other = pr.first;
            if (other < 0 || !alive[other]) continue;
            double gain = static_cast<double>(e) / g.m() -
                          static_cast<double>(deg[smallest]) * deg[other] / (m2 * m2) * 2.0;
            if (gain > best_gain) {
                best_gain = gain;
                best_other = other;
            }
        }
        if (best_other < 0) {
            // disconnected from everything: merge with the next smallest
            for (int c = 0; c < K; ++c)
                if (alive[c] && c != smallest &&
                    (best_other < 0 || size[c] < size[best_other]))
                    best_other = c;
        }
        int keep = best_other, drop = smallest;
        for (int i = 0; i < n; ++i)
            if (label[i] == drop) label[i] = keep;
        size[keep] += size[drop];
        deg[keep] += deg[drop];
        alive[drop] = 0;
        --alive_count;
        std::map<std::pair<int, int>, int64_t> rebuilt;
        for (auto& [pr, e] : between) {
            int a = pr.first == drop ? keep : pr.first;
            int b = pr.second == drop ? keep : pr.second;
            if (a == b) continue;
            rebuilt[{std::min(a, b), std::max(a, b)}] += e;
        }
        between = std::move(rebuilt);
    }
    std::unordered_map<int, int> final_map;
    for (int i = 0; i < n; ++i) {
        auto [it, fresh] = final_map.emplace(label[i], static_cast<int>(final_map.size()));
        label[i] = it->second;
    }
    out.z = std::move(label);
    out.K = static_cast<int>(final_map.size());
    return out;
}

struct EmOptions {
    int max_iters = 250;
    double rel_tol = 1e-9;
    uint64_t seed = 1;
    bool appendix_coeff_form = false;
    int64_t feature_budget = -1;  // -1: 50 * m
    std::function<void(const VariationalState&)> on_iteration;
};

struct EmResult {
    BlockAssignment assignment;
    BlockAssignment init;
    VariationalState state;
    std::vector<std::string> warnings;
};

inline EmResult em_run(const Graph& g, const CovariateUse& use, int K_max,
                       const EmOptions& opts = {}) {
    if (opts.max_iters < 1) throw ConfigError("em_run: need at least one iteration");
    if (use.p() > kMaxEmCovariates)
        throw ConfigError("em_run: at most " + std::to_string(kMaxEmCovariates) +
                          " covariates supported (correction matrices grow as 2^(p+1))");
    int n = g.n();
    int64_t budget = opts.feature_budget >= 0 ? opts.feature_budget : 50 * g.m();
    EmResult result;
    result.init = init_blocks(g, K_max, opts.seed);
    int K = result.init.K;

    VariationalState state;
    state.p = use.p();
    state.xi = Mat(n, K);
    double off = K > 1 ? 0.1 / (K - 1) : 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < K; ++k)
            state.xi(i, k) = (k == result.init.z[i]) ? (K > 1 ? 0.9 : 1.0) : off;
    state.eta.assign(K, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < K; ++k) state.eta[k] += state.xi(i, k) / n;

    DyadSupport support = build_support(g, use, budget);
    {
        auto pi = update_pi(g, use, state.xi, &support);
        state.pi1 = std::move(pi.pi1);
        for (auto& w : pi.warnings) result.warnings.push_back(w);
    }

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        Mat om = omega(g, use, state, &support);
        double lb = 0.0;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < K; ++k) {
                double xi = state.xi(i, k);
                lb += 0.5 * xi * om(i, k);
                if (xi > 0.0) lb += xi * (std::log(state.eta[k]) - std::log(xi));
            }
        bool converged = !state.lb_trace.empty() &&
                         lb - state.lb_trace.back() < opts.rel_tol * std::abs(lb);
        state.lb_trace.push_back(lb);
        if (opts.on_iteration) opts.on_iteration(state);
        if (converged) break;

        state.xi = update_xi(om, state, opts.appendix_coeff_form);
        for (int k = 0; k < K; ++k) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += state.xi(i, k);
            state.eta[k] = std::max(s / n, kXiFloor);
        }
        auto pi = update_pi(g, use, state.xi, &support);
        state.pi1 = std::move(pi.pi1);
        for (auto& w : pi.warnings) result.warnings.push_back(w);
        state.iteration = iter + 1;
    }

    result.assignment.K = K;
    result.assignment.z.resize(n);
    for (int i = 0; i < n; ++i) {
        int best = 0;
        for (int k = 1; k < K; ++k)
            if (state.xi(i, k) > state.xi(i, best)) best = k;  // ties: lowest index
        result.assignment.z[i] = best;
    }
    result.state = std::move(state);
    return result;
}

// Label-free partition similarity from the 2x2 dyad co-membership table,
// (ad - bc) / (ad + bc). Computed from the contingency table, not a dyad loop.
inline double yule_coefficient(const BlockAssignment& z1, const BlockAssignment& z2) {
    if (z1.n() != z2.n()) throw InputError("yule_coefficient: partitions differ in length");
    int n = z1.n();
    std::map<std::pair<int, int>, int64_t> cell;
    std::map<int, int64_t> row, col;
    for (int i = 0; i < n; ++i) {
        cell[{z1.z[i], z2.z[i]}]++;
        row[z1.z[i]]++;
        col[z2.z[i]]++;
    }
    auto choose2 = [](int64_t v) { return static_cast<double>(v) * (v - 1) / 2.0; };
    double a = 0.0, ab = 0.0, ac = 0.0;
    for (auto& [k, v] : cell) a += choose2(v);
    for (auto& [k, v] : row) ab += choose2(v);
    for (auto& [k, v] : col) ac += choose2(v);
    double total = choose2(n);
    double b = ab - a, c = ac - a, d = total - a - b - c;
    double denom = a * d + b * c;
    if (denom == 0.0) {
        bool identical = b == 0.0 && c == 0.0;
        return identical ? 1.0 : 0.0;
    }
    return (a * d - b * c) / denom;
}

inline double adjusted_rand(const BlockAssignment& z1, const BlockAssignment& z2) {
    if (z1.n() != z2.n()) throw InputError("adjusted_rand: partitions differ in length");
    int n = z1.n();
    std::map<std::pair<int, int>, int64_t> cell;
    std::map<int, int64_t> row, col;
    for (int i = 0; i < n; ++i) {
        cell[{z1.z[i], z2.z[i]}]++;
        row[z1.z[i]]++;
        col[z2.z[i]]++;
    }
    auto choose2 = [](int64_t v) { return static_cast<double>(v) * (v - 1) / 2.0; };
    double sum_cell = 0.0, sum_row = 0.0, sum_col = 0.0;
    for (auto& [k, v] : cell) sum_cell += choose2(v);
    for (auto& [k, v] : row) sum_row += choose2(v);
    for (auto& [k, v] : col) sum_col += choose2(v);
    double total = choose2(n);
    if (total == 0.0) return 1.0;
    double expected = sum_row * sum_col / total;
    double max_index = 0.5 * (sum_row + sum_col);
    if (max_index == expected) return 1.0;
    return (sum_cell - expected) / (max_index - expected);
}

}  // namespace hergm

#endif
