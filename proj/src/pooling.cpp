#include "simplex/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace simplex {

Vector row_softmax_diag(const Dense& scores) {
    if (scores.rows() != scores.cols()) {
        throw std::invalid_argument("row_softmax_diag: score matrix must be square");
    }
    Vector out(scores.rows());
    for (index_t i = 0; i < scores.rows(); ++i) {
        const double row_max = scores.row(i).maxCoeff();
        double denom = 0.0;
        for (index_t j = 0; j < scores.cols(); ++j) {
            denom += std::exp(scores(i, j) - row_max);
        }
        // floor keeps entries strictly positive when exp underflows
        out(i) = std::max(std::exp(scores(i, i) - row_max) / denom, 1e-300);
    }
    return out;
}

std::pair<AttentionWeights, AttentionWeights> attention_weights(
    const Signal& x_k1, const Signal& x_k2,
    const ProjectionOperator& down, const ProjectionOperator& up,
    const AttentionParams& params) {
    const index_t d = x_k1.cols();
    const index_t d_k = params.query_k1.cols();
    if (x_k2.cols() != d) {
        throw std::invalid_argument("attention_weights: feature widths differ");
    }
    if (params.query_k1.rows() != d || params.key_k1.rows() != d || params.query_k2.rows() != d || params.key_k2.rows() != d || params.key_k1.cols() != d_k || params.query_k2.cols() != d_k || params.key_k2.cols() != d_k || d_k < 1) {
        throw std::invalid_argument("attention_weights: query/key shapes inconsistent with feature width " + std::to_string(d));
    }
    if (params.alpha_k1 < 0.0 || params.alpha_k1 > 1.0 || params.alpha_k2 < 0.0 || params.alpha_k2 > 1.0) {
        throw std::invalid_argument("attention_weights: alpha outside [0, 1]");
    }
    if (down.matrix.rows() != x_k1.rows() || down.matrix.cols() != x_k2.rows() || up.matrix.rows() != x_k2.rows() || up.matrix.cols() != x_k1.rows()) {
        throw std::invalid_argument("attention_weights: projection operators do not match signal sizes");
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(d_k));
    const Dense q1 = x_k1 * params.query_k1;
    const Dense k1 = x_k1 * params.key_k1;
    const Dense q2 = x_k2 * params.query_k2;
    const Dense k2 = x_k2 * params.key_k2;

    Dense scores1 = params.alpha_k1 * scale * (q1 * k1.transpose()) + (1.0 - params.alpha_k1) * scale * (spmm(down.matrix, q2) * k1.transpose());
    Dense scores2 = params.alpha_k2 * scale * (q2 * k2.transpose()) + (1.0 - params.alpha_k2) * scale * (spmm(up.matrix, q1) * k2.transpose());

    return {AttentionWeights{row_softmax_diag(scores1)}, AttentionWeights{row_softmax_diag(scores2)}};
}

NodeClustering cluster_nodes(const SimplicialComplex& c) {
    const index_t n = c.num_simplices(0);
    std::vector<std::vector<index_t>> adj(static_cast<std::size_t>(n));
    if (c.max_dim >= 1) {
        for (const Simplex& e : c.simplices[1]) {
            adj[static_cast<std::size_t>(e[0])].push_back(e[1]);
            adj[static_cast<std::size_t>(e[1])].push_back(e[0]);
        }
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
    }

    NodeClustering nc;
    nc.cluster_of.assign(static_cast<std::size_t>(n), -1);
    for (index_t u = 0; u < n; ++u) {
        if (nc.cluster_of[static_cast<std::size_t>(u)] >= 0) {
            continue;
        }
        const index_t cluster = nc.num_clusters++;
        nc.cluster_of[static_cast<std::size_t>(u)] = cluster;

        index_t best = -1;
        double best_score = 0.0;
        for (const index_t v : adj[static_cast<std::size_t>(u)]) {
            if (nc.cluster_of[static_cast<std::size_t>(v)] >= 0) {
                continue;
            }
            const double score = 1.0 / static_cast<double>(adj[static_cast<std::size_t>(u)].size()) + 1.0 / static_cast<double>(adj[static_cast<std::size_t>(v)].size());
            if (best < 0 || score > best_score) {  // ties keep the lowest index
                best = v;
                best_score = score;
            }
        }
        if (best >= 0) {
            nc.cluster_of[static_cast<std::size_t>(best)] = cluster;
        }
    }
    return nc;
}

CoarseningResult downsample(const SimplicialComplex& c, const NodeClustering& nc) {
    const index_t n0 = c.num_simplices(0);
    if (static_cast<index_t>(nc.cluster_of.size()) != n0) {
        throw std::invalid_argument("downsample: clustering covers " + std::to_string(nc.cluster_of.size()) + " nodes, complex has " + std::to_string(n0));
    }
    for (const index_t r : nc.cluster_of) {
        if (r < 0 || r >= nc.num_clusters) {
            throw std::invalid_argument("downsample: cluster index out of range");
        }
    }

    CoarseningResult result;
    result.assignment.resize(static_cast<std::size_t>(c.max_dim) + 1);
    result.coarse.max_dim = c.max_dim;
    result.coarse.simplices.resize(static_cast<std::size_t>(c.max_dim) + 1);
    result.coarse.boundary.resize(static_cast<std::size_t>(c.max_dim) + 1);

    {
        std::vector<Triplet> entries;
        entries.reserve(static_cast<std::size_t>(n0));
        for (index_t v = 0; v < n0; ++v) {
            entries.push_back({nc.cluster_of[static_cast<std::size_t>(v)], v, 1.0});
        }
        result.assignment[0] = SparseMatrix(nc.num_clusters, n0, std::move(entries));
        for (index_t r = 0; r < nc.num_clusters; ++r) {
            result.coarse.simplices[0].push_back({r});
        }
    }

    for (int k = 1; k <= c.max_dim; ++k) {
        const auto& originals = c.simplices[static_cast<std::size_t>(k)];
        const index_t n_k = static_cast<index_t>(originals.size());
        const SparseMatrix mapped = spgemm(result.assignment[static_cast<std::size_t>(k) - 1], c.boundary[static_cast<std::size_t>(k)]);

        // Column stats of mapped: a simplex survives the contraction iff
        // its column still has k+1 entries, all of magnitude one.
        std::vector<int> col_nnz(static_cast<std::size_t>(n_k), 0);
        std::vector<bool> col_unit(static_cast<std::size_t>(n_k), true);
        std::vector<std::vector<index_t>> col_support(static_cast<std::size_t>(n_k));
        for (const Triplet& t : mapped.entries()) {
            ++col_nnz[static_cast<std::size_t>(t.col)];
            if (std::fabs(t.value) != 1.0) {
                col_unit[static_cast<std::size_t>(t.col)] = false;
            }
            col_support[static_cast<std::size_t>(t.col)].push_back(t.row);
        }

        // Duplicate columns share a support set; the first original in
        // lexicographic order represents the coarse simplex.
        std::map<std::vector<index_t>, std::vector<index_t>> groups;
        for (index_t j = 0; j < n_k; ++j) {
            if (col_nnz[static_cast<std::size_t>(j)] == k + 1 && col_unit[static_cast<std::size_t>(j)]) {
                auto support = col_support[static_cast<std::size_t>(j)];
                std::sort(support.begin(), support.end());
                groups[std::move(support)].push_back(j);
            }
        }

        // Order coarse simplices by their contracted vertex tuple.
        std::vector<std::pair<Simplex, const std::vector<index_t>*>> images;
        images.reserve(groups.size());
        for (const auto& [support, members] : groups) {
            const Simplex& rep = originals[static_cast<std::size_t>(members.front())];
            Simplex image(rep.size());
            std::transform(rep.begin(), rep.end(), image.begin(), [&](index_t v) { return nc.cluster_of[static_cast<std::size_t>(v)]; });
            std::sort(image.begin(), image.end());
            images.emplace_back(std::move(image), &members);
        }
        std::sort(images.begin(), images.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

        std::vector<Triplet> s_entries;
        auto& coarse_level = result.coarse.simplices[static_cast<std::size_t>(k)];
        for (index_t i = 0; i < static_cast<index_t>(images.size()); ++i) {
            coarse_level.push_back(images[static_cast<std::size_t>(i)].first);
            for (const index_t j : *images[static_cast<std::size_t>(i)].second) {
                s_entries.push_back({i, j, 1.0});
            }
        }
        result.assignment[static_cast<std::size_t>(k)] = SparseMatrix(static_cast<index_t>(images.size()), n_k, std::move(s_entries));
        result.coarse.boundary[static_cast<std::size_t>(k)] = boundary_from_lists(result.coarse.simplices[static_cast<std::size_t>(k) - 1], coarse_level);
    }
    return result;
}

Signal pool_signal(const Signal& x, const AttentionWeights& a, const SparseMatrix& s) {
    if (s.cols() != x.rows() || a.values.size() != x.rows()) {
        throw std::invalid_argument("pool_signal: assignment is " + std::to_string(s.rows()) + "x" + std::to_string(s.cols()) + ", signal has " + std::to_string(x.rows()) + " rows, attention has " + std::to_string(a.values.size()));
    }
    Signal out = Signal::Zero(s.rows(), x.cols());
    Vector denom = Vector::Zero(s.rows());
    for (const Triplet& t : s.entries()) {
        const double weight = a.values(t.col);
        out.row(t.row) += weight * x.row(t.col);
        denom(t.row) += weight;
    }
    for (index_t r = 0; r < out.rows(); ++r) {
        if (denom(r) <= 0.0) {
            throw std::logic_error("pool_signal: coarse simplex " + std::to_string(r) + " has empty preimage");
        }
        out.row(r) /= denom(r);
    }
    return out;
}

std::vector<Signal> pool_signals(const std::vector<Signal>& x, const std::vector<AttentionWeights>& a, const std::vector<SparseMatrix>& s) {
    if (x.size() != a.size() || x.size() > s.size()) {
        throw std::invalid_argument("pool_signals: per-dimension argument counts differ");
    }
    std::vector<Signal> out;
    out.reserve(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        out.push_back(pool_signal(x[k], a[k], s[k]));
    }
    return out;
}

}  // namespace simplex
