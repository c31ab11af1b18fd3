#ifndef HERGM_MODEL_HPP
#define HERGM_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "common.hpp"
#include "graph.hpp"

namespace hergm {

// Structural payoff parameters. Internally everything uses the ordered-sum
// convention (each edge contributes u_ij + u_ji = 2*alpha + ...); reported
// coefficients use the unordered sufficient-statistics mapping
//   theta_edges = 2*alpha, theta_2star = psi, theta_tri = 4*gamma,
//   theta_p = 2*beta_p.
struct ModelParams {
    double alpha_w = 0.0;
    double alpha_b = 0.0;
    std::vector<double> beta_w;  // length P
    std::vector<double> beta_b;  // length P
    double psi = 0.0;            // popularity (2-star), within-block only
    double gamma = 0.0;          // transitivity (triangle), within-block only

    int P() const { return static_cast<int>(beta_w.size()); }
};

struct ChangeStats {
    double edge_pair_utility = 0.0;  // u_ij + u_ji
    int two_star_count = 0;          // sum over shared-block r of g_ir + g_jr
    int triangle_count = 0;          // shared-block common neighbors
    std::vector<int> same_cov;       // f_p(x_i, x_j), 0/1
};

// f_p is the equality indicator on covariate p.
inline double direct_utility(const ModelParams& params, const CovariateSet& x, int i, int j,
                             bool same_block) {
    double u = same_block ? params.alpha_w : params.alpha_b;
    const auto& beta = same_block ? params.beta_w : params.beta_b;
    for (int p = 0; p < static_cast<int>(beta.size()); ++p) {
        if (x.same(i, j, p)) u += beta[p];
    }
    return u;
}

// Potential of Prop-1 form, computed per unordered object:
//   2 * sum_{edges} u_ij  +  psi * (within-block 2-stars)  +  4*gamma * (within-block triangles)
// where a 2-star/triangle counts only if all three nodes share a block.
inline double potential(const Graph& g, const CovariateSet& x, const BlockAssignment& z,
                        const ModelParams& params) {
    double q = 0.0;
    int n = g.n();
    for (int i = 0; i < n; ++i) {
        for (int j : g.neighbors(i)) {
            if (j <= i) continue;
            q += 2.0 * direct_utility(params, x, i, j, z.z[i] == z.z[j]);
        }
    }
    if (params.psi != 0.0) {
        for (int j = 0; j < n; ++j) {
            int64_t c = 0;
            for (int r : g.neighbors(j))
                if (z.z[r] == z.z[j]) ++c;
            q += params.psi * static_cast<double>(c * (c - 1) / 2);
        }
    }
    if (params.gamma != 0.0) {
        int64_t tri = 0;
        for (int i = 0; i < n; ++i) {
            const auto& ni = g.neighbors(i);
            for (int j : ni) {
                if (j <= i || z.z[j] != z.z[i]) continue;
                const auto& nj = g.neighbors(j);
                auto a = std::upper_bound(ni.begin(), ni.end(), j);
                auto b = std::upper_bound(nj.begin(), nj.end(), j);
                while (a != ni.end() && b != nj.end()) {
                    if (*a < *b)
                        ++a;
                    else if (*b < *a)
                        ++b;
                    else {
                        if (z.z[*a] == z.z[i]) ++tri;
                        ++a;
                        ++b;
                    }
                }
            }
        }
        q += 4.0 * params.gamma * static_cast<double>(tri);
    }
    return q;
}

// Toggle surplus for dyad (i, j):
//   deltaQ = (u_ij + u_ji) + psi * [2-star change] + 4*gamma * [triangle change]
// Externality terms are structurally zero when z_i != z_j. The counts do not
// depend on g_ij itself, so the same value serves both directions of the
// toggle.
inline std::pair<ChangeStats, double> change_stats(const Graph& g, const CovariateSet& x,
                                                   const BlockAssignment& z,
                                                   const ModelParams& params, int i, int j) {
    if (i == j) throw InputError("change_stats requires i != j");
    ChangeStats cs;
    bool same_block = z.z[i] == z.z[j];
    cs.edge_pair_utility = 2.0 * direct_utility(params, x, i, j, same_block);
    cs.same_cov.resize(params.P());
    for (int p = 0; p < params.P(); ++p) cs.same_cov[p] = x.same(i, j, p) ? 1 : 0;
    if (same_block) {
        int k = z.z[i];
        for (int r : g.neighbors(i))
            if (r != j && z.z[r] == k) ++cs.two_star_count;
        for (int r : g.neighbors(j))
            if (r != i && z.z[r] == k) ++cs.two_star_count;
        cs.triangle_count = common_neighbors(g, i, j, &z, k);
    }
    double dq = cs.edge_pair_utility + params.psi * cs.two_star_count +
                4.0 * params.gamma * cs.triangle_count;
    return {cs, dq};
}

// Exact stationary law over all 2^{n(n-1)/2} graphs; enumeration oracle for
// desk-scale checks only.
struct StationaryTable {
    int n = 0;
    // probs[mask] where bit (index of dyad (i,j), i<j, lexicographic) set
    // means the edge is present.
    std::vector<double> probs;
    std::vector<double> potentials;
};

inline int dyad_bit(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    // bits laid out as (0,1),(0,2),...,(0,n-1),(1,2),...
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

inline Graph graph_from_mask(int n, uint64_t mask) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (mask & (uint64_t{1} << dyad_bit(n, i, j))) edges.emplace_back(i, j);
    return Graph::from_edge_list(edges, n);
}

inline StationaryTable exact_stationary(int n, const CovariateSet& x, const BlockAssignment& z,
                                        const ModelParams& params) {
    if (n > 5) throw CapacityError("exact_stationary enumerates all graphs; n must be <= 5");
    int dyads = n * (n - 1) / 2;
    uint64_t count = uint64_t{1} << dyads;
    StationaryTable table;
    table.n = n;
    table.potentials.resize(count);
    table.probs.resize(count);
    double max_q = -std::numeric_limits<double>::infinity();
    for (uint64_t mask = 0; mask < count; ++mask) {
        double q = potential(graph_from_mask(n, mask), x, z, params);
        table.potentials[mask] = q;
        max_q = std::max(max_q, q);
    }
    // log-sum-exp stabilization: Q can be large in magnitude
    double total = 0.0;
    for (uint64_t mask = 0; mask < count; ++mask) {
        table.probs[mask] = std::exp(table.potentials[mask] - max_q);
        total += table.probs[mask];
    }
    for (auto& p : table.probs) p /= total;
    return table;
}

}  // namespace hergm

#endif
