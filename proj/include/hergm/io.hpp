#ifndef HERGM_IO_HPP
#define HERGM_IO_HPP

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "block_em.hpp"
#include "graph.hpp"
#include "model.hpp"
#include "mple.hpp"

namespace hergm {

using nlohmann::json;

// Graph plus the relabeling map from external string ids to dense 0-based
// indices.
struct LoadedGraph {
    Graph graph;
    std::vector<std::string> id_of_index;
    std::map<std::string, int> index_of_id;
};

// Edge list: one `<id_a><TAB><id_b>` per line, `#` starts a comment. A line
// with a single id declares an isolated node. External ids may be arbitrary
// strings; they are relabeled densely in order of first appearance.
inline LoadedGraph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open edge list: " + path);
    LoadedGraph out;
    std::vector<std::pair<int, int>> pairs;
    std::string line;
    int lineno = 0;
    auto intern = [&](const std::string& id) {
        auto [it, fresh] = out.index_of_id.emplace(id, static_cast<int>(out.id_of_index.size()));
        if (fresh) out.id_of_index.push_back(id);
        return it->second;
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ss(line);
        std::string a, b;
        if (!(ss >> a)) continue;
        if (!(ss >> b)) {
            intern(a);  // isolated node
            continue;
        }
        pairs.emplace_back(intern(a), intern(b));
    }
    out.graph = Graph::from_edge_list(pairs, static_cast<int>(out.id_of_index.size()));
    return out;
}

inline void write_edge_list(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write edge list: " + path);
    for (auto [i, j] : g.edges()) out << i << '\t' << j << '\n';
    for (int i = 0; i < g.n(); ++i)
        if (g.degree(i) == 0) out << i << '\n';
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

// Covariates: CSV with header `node_id,cov_1,...,cov_p`; values are arbitrary
// strings hashed to category ids per column. Every node of the graph must be
// present with no missing values.
inline CovariateSet load_covariates(const std::string& path, const LoadedGraph& lg) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open covariates: " + path);
    std::string line;
    if (!std::getline(in, line)) throw InputError(path + ": empty covariate file");
    auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "node_id")
        throw InputError(path + ": header must be node_id,cov_1,...");
    int p = static_cast<int>(header.size()) - 1;
    int n = lg.graph.n();
    CovariateSet cov(n, p);
    cov.set_names(std::vector<std::string>(header.begin() + 1, header.end()));
    std::vector<std::map<std::string, int>> categories(p);
    std::vector<char> seen(n, 0);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != p + 1)
            throw InputError(path + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(p + 1) + " fields");
        auto it = lg.index_of_id.find(fields[0]);
        if (it == lg.index_of_id.end()) continue;  // covariates for nodes outside the graph
        int node = it->second;
        seen[node] = 1;
        for (int c = 0; c < p; ++c) {
            if (fields[c + 1].empty())
                throw InputError(path + ":" + std::to_string(lineno) + ": missing value for '" +
                                 header[c + 1] + "'");
            auto [cit, fresh] =
                categories[c].emplace(fields[c + 1], static_cast<int>(categories[c].size()));
            cov.set_value(node, c, cit->second);
        }
    }
    for (int i = 0; i < n; ++i)
        if (!seen[i])
            throw InputError(path + ": no covariate row for node '" + lg.id_of_index[i] + "'");
    return cov;
}

inline void write_covariates(const std::string& path, const CovariateSet& cov) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write covariates: " + path);
    out << "node_id";
    for (int c = 0; c < cov.p(); ++c) out << ',' << cov.name_of(c);
    out << '\n';
    for (int i = 0; i < cov.n(); ++i) {
        out << i;
        for (int c = 0; c < cov.p(); ++c) out << ',' << cov.value(i, c);
        out << '\n';
    }
}

// Flat JSON with the unordered-convention coefficient names.
inline json params_to_json(const ModelParams& params, const std::vector<std::string>& cov_names) {
    json j;
    j["within_edges"] = 2.0 * params.alpha_w;
    j["within_two_stars"] = params.psi;
    j["within_triangles"] = 4.0 * params.gamma;
    j["between_edges"] = 2.0 * params.alpha_b;
    for (int p = 0; p < params.P(); ++p) {
        std::string name = p < static_cast<int>(cov_names.size()) ? cov_names[p]
                                                                  : "cov_" + std::to_string(p + 1);
        j["within_same_" + name] = 2.0 * params.beta_w[p];
        j["between_same_" + name] = 2.0 * params.beta_b[p];
    }
    return j;
}

inline ModelParams params_from_json(const json& j, const std::vector<std::string>& cov_names) {
    ModelParams params;
    params.alpha_w = j.at("within_edges").get<double>() / 2.0;
    params.alpha_b = j.at("between_edges").get<double>() / 2.0;
    params.psi = j.value("within_two_stars", 0.0);
    params.gamma = j.value("within_triangles", 0.0) / 4.0;
    for (const auto& name : cov_names) {
        params.beta_w.push_back(j.value("within_same_" + name, 0.0) / 2.0);
        params.beta_b.push_back(j.value("between_same_" + name, 0.0) / 2.0);
    }
    return params;
}

inline json fit_to_json(const FitResult& fit) {
    json j;
    json coef, se, zs;
    for (size_t c = 0; c < fit.names.size(); ++c) {
        coef[fit.names[c]] = fit.coef[c];
        se[fit.names[c]] = fit.se[c];
        zs[fit.names[c]] = fit.se[c] > 0 ? fit.coef[c] / fit.se[c] : 0.0;
    }
    j["coefficients"] = coef;
    j["se"] = se;
    j["z_scores"] = zs;
    j["logPL"] = fit.log_pl;
    j["BIC"] = fit.bic;
    j["n_rows"] = fit.n_rows;
    j["sampling"] = fit.sampling;
    j["converged"] = fit.converged;
    return j;
}

inline void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write: " + path);
    out << j.dump(2) << '\n';
}

inline json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open: " + path);
    json j;
    in >> j;
    return j;
}

inline void write_blocks_csv(const std::string& path, const BlockAssignment& z,
                             const std::vector<std::string>* ids = nullptr) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write: " + path);
    out << "node_id,block\n";
    for (int i = 0; i < z.n(); ++i) {
        if (ids)
            out << (*ids)[i];
        else
            out << i;
        out << ',' << z.z[i] << '\n';
    }
}

inline BlockAssignment load_blocks_csv(const std::string& path, const LoadedGraph* lg = nullptr) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open blocks: " + path);
    std::string line;
    if (!std::getline(in, line)) throw InputError(path + ": empty blocks file");
    std::map<int, int> by_index;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2)
            throw InputError(path + ":" + std::to_string(lineno) + ": expected node_id,block");
        int idx;
        if (lg) {
            auto it = lg->index_of_id.find(fields[0]);
            if (it == lg->index_of_id.end())
                throw InputError(path + ":" + std::to_string(lineno) + ": unknown node '" +
                                 fields[0] + "'");
            idx = it->second;
        } else {
            idx = std::stoi(fields[0]);
        }
        by_index[idx] = std::stoi(fields[1]);
    }
    BlockAssignment z;
    z.z.resize(by_index.size());
    int expect = 0;
    for (auto& [idx, blk] : by_index) {
        if (idx != expect++)
            throw InputError(path + ": node indices are not dense starting at 0");
        z.z[idx] = blk;
        z.K = std::max(z.K, blk + 1);
    }
    return z;
}

inline void write_trace_csv(const std::string& path, const std::vector<double>& trace) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write: " + path);
    out << "iteration,lower_bound,delta\n";
    out.precision(17);
    for (size_t i = 0; i < trace.size(); ++i) {
        out << i << ',' << trace[i] << ',' << (i > 0 ? trace[i] - trace[i - 1] : 0.0) << '\n';
    }
}

// Dense binary layout: int64 header {n, K, iteration}, then row-major
// 64-bit floats.
inline void write_xi_checkpoint(const std::string& path, const VariationalState& state) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write: " + path);
    int64_t header[3] = {state.n(), state.K(), state.iteration};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    out.write(reinterpret_cast<const char*>(state.xi.data().data()),
              static_cast<std::streamsize>(state.xi.data().size() * sizeof(double)));
}

inline Mat read_xi_checkpoint(const std::string& path, int64_t* iteration = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open: " + path);
    int64_t header[3];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in) throw InputError(path + ": truncated checkpoint header");
    Mat xi(static_cast<int>(header[0]), static_cast<int>(header[1]));
    in.read(reinterpret_cast<char*>(xi.data().data()),
            static_cast<std::streamsize>(xi.data().size() * sizeof(double)));
    if (!in) throw InputError(path + ": truncated checkpoint payload");
    if (iteration) *iteration = header[2];
    return xi;
}

}  // namespace hergm

#endif
