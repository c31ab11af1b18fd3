#ifndef HERGM_GRAPH_HPP
#define HERGM_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace hergm {

// Immutable sparse undirected simple graph. Neighbor lists are sorted, so
// membership tests are O(log deg) and intersections are linear merges.
class Graph {
  public:
    Graph() = default;

    static Graph from_edge_list(const std::vector<std::pair<int, int>>& pairs, int n) {
        if (n < 0) throw InputError("node count must be non-negative");
        std::vector<std::vector<int>> adj(n);
        for (auto [a, b] : pairs) {
            if (a < 0 || a >= n || b < 0 || b >= n) {
                throw InputError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                 ") references node id outside [0," + std::to_string(n) + ")");
            }
            if (a == b) continue;  // self-loops dropped
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        int64_t m = 0;
        for (auto& nb : adj) {
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
            m += static_cast<int64_t>(nb.size());
        }
        Graph g;
        g.adj_ = std::move(adj);
        g.m_ = m / 2;
        return g;
    }

    int n() const { return static_cast<int>(adj_.size()); }
    int64_t m() const { return m_; }
    int degree(int i) const { return static_cast<int>(adj_[i].size()); }
    const std::vector<int>& neighbors(int i) const { return adj_[i]; }

    bool has_edge(int i, int j) const {
        const auto& nb = adj_[i];
        return std::binary_search(nb.begin(), nb.end(), j);
    }

    // Unordered edges with i < j.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        out.reserve(static_cast<size_t>(m_));
        for (int i = 0; i < n(); ++i)
            for (int j : adj_[i])
                if (i < j) out.emplace_back(i, j);
        return out;
    }

  private:
    std::vector<std::vector<int>> adj_;
    int64_t m_ = 0;
};

// Sparse symmetric 0/1 matrix marking dyads with equal values of one
// discrete covariate. Stored as unordered pairs (i < j); nnz counts ordered
// entries, so nnz = 2 * pairs.size().
struct FeatureAdjacency {
    int covariate = -1;
    std::vector<std::pair<int, int>> pairs;
    int64_t nnz = 0;
};

// Per-node discrete covariates plus lazily built feature adjacency matrices.
class CovariateSet {
  public:
    CovariateSet() = default;
    CovariateSet(int n, int p) : n_(n), p_(p), values_(static_cast<size_t>(n) * p, 0) {}

    int n() const { return n_; }
    int p() const { return p_; }

    int value(int node, int cov) const { return values_[static_cast<size_t>(node) * p_ + cov]; }
    void set_value(int node, int cov, int v) {
        values_[static_cast<size_t>(node) * p_ + cov] = v;
        cache_.clear();
    }

    bool same(int i, int j, int cov) const { return value(i, cov) == value(j, cov); }

    const std::vector<std::string>& names() const { return names_; }
    void set_names(std::vector<std::string> names) { names_ = std::move(names); }

    std::string name_of(int cov) const {
        if (cov < static_cast<int>(names_.size())) return names_[cov];
        return "cov_" + std::to_string(cov + 1);
    }

    // Built from the per-category inverted index; categories of size 1
    // contribute nothing and are skipped. nnz_budget bounds the ordered
    // nonzero count (callers typically pass 50 * m).
    const FeatureAdjacency& feature_adjacency(
        int cov, int64_t nnz_budget = std::numeric_limits<int64_t>::max()) const {
        if (cov < 0 || cov >= p_) throw InputError("covariate index out of range");
        auto it = cache_.find(cov);
        if (it != cache_.end()) {
            if (it->second.nnz > nnz_budget) throw_budget(cov, it->second.nnz, nnz_budget);
            return it->second;
        }
        std::map<int, std::vector<int>> by_category;
        for (int i = 0; i < n_; ++i) by_category[value(i, cov)].push_back(i);
        int64_t nnz = 0;
        for (auto& [cat, nodes] : by_category) {
            int64_t c = static_cast<int64_t>(nodes.size());
            nnz += c * (c - 1);
        }
        if (nnz > nnz_budget) throw_budget(cov, nnz, nnz_budget);
        FeatureAdjacency fa;
        fa.covariate = cov;
        fa.nnz = nnz;
        fa.pairs.reserve(static_cast<size_t>(nnz / 2));
        for (auto& [cat, nodes] : by_category) {
            if (nodes.size() < 2) continue;
            for (size_t a = 0; a < nodes.size(); ++a)
                for (size_t b = a + 1; b < nodes.size(); ++b)
                    fa.pairs.emplace_back(nodes[a], nodes[b]);
        }
        return cache_.emplace(cov, std::move(fa)).first->second;
    }

  private:
    void throw_budget(int cov, int64_t nnz, int64_t budget) const {
        throw CapacityError("feature adjacency for covariate '" + name_of(cov) + "' has " +
                            std::to_string(nnz) + " nonzeros, exceeding the sparsity budget " +
                            std::to_string(budget));
    }

    int n_ = 0;
    int p_ = 0;
    std::vector<int> values_;
    std::vector<std::string> names_;
    mutable std::map<int, FeatureAdjacency> cache_;
};

struct GraphStats {
    double density = 0.0;
    std::vector<int64_t> degree_histogram;  // index = degree
    int64_t two_stars = 0;
    int64_t triangles = 0;
};

inline GraphStats graph_stats(const Graph& g) {
    GraphStats s;
    int n = g.n();
    int64_t dyads = static_cast<int64_t>(n) * (n - 1) / 2;
    s.density = dyads > 0 ? static_cast<double>(g.m()) / static_cast<double>(dyads) : 0.0;
    int max_deg = 0;
    for (int i = 0; i < n; ++i) max_deg = std::max(max_deg, g.degree(i));
    s.degree_histogram.assign(max_deg + 1, 0);
    for (int i = 0; i < n; ++i) {
        int64_t d = g.degree(i);
        s.degree_histogram[d]++;
        s.two_stars += d * (d - 1) / 2;
    }
    // Each triangle counted once: i < j < r with j in N(i), r in N(i) cap N(j).
    for (int i = 0; i < n; ++i) {
        const auto& ni = g.neighbors(i);
        for (int j : ni) {
            if (j <= i) continue;
            const auto& nj = g.neighbors(j);
            auto a = std::upper_bound(ni.begin(), ni.end(), j);
            auto b = std::upper_bound(nj.begin(), nj.end(), j);
            while (a != ni.end() && b != nj.end()) {
                if (*a < *b)
                    ++a;
                else if (*b < *a)
                    ++b;
                else {
                    ++s.triangles;
                    ++a;
                    ++b;
                }
            }
        }
    }
    return s;
}

// Hard block labels; exactly one block per node.
struct BlockAssignment {
    std::vector<int> z;
    int K = 0;

    int n() const { return static_cast<int>(z.size()); }
};

// |N(i) cap N(j)|, optionally restricted to nodes of one block.
inline int common_neighbors(const Graph& g, int i, int j, const BlockAssignment* restrict = nullptr,
                            int block = -1) {
    const auto& ni = g.neighbors(i);
    const auto& nj = g.neighbors(j);
    auto a = ni.begin();
    auto b = nj.begin();
    int count = 0;
    while (a != ni.end() && b != nj.end()) {
        if (*a < *b)
            ++a;
        else if (*b < *a)
            ++b;
        else {
            if (*a != i && *a != j && (!restrict || restrict->z[*a] == block)) ++count;
            ++a;
            ++b;
        }
    }
    return count;
}

}  // namespace hergm

#endif
