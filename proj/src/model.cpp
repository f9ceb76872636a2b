#include "simplex/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace simplex {

namespace {

constexpr double kKernelTol = 1e-8;

double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1), reproducible across platforms
}

Dense random_matrix(std::mt19937_64& rng, index_t rows, index_t cols, index_t fan_in) {
    const double bound = fan_in > 0 ? 1.0 / std::sqrt(static_cast<double>(fan_in)) : 1.0;
    Dense out(rows, cols);
    for (index_t i = 0; i < rows; ++i) {
        for (index_t j = 0; j < cols; ++j) {
            out(i, j) = (2.0 * uniform_unit(rng) - 1.0) * bound;
        }
    }
    return out;
}

Signal apply_activation(Signal x, const ModelConfig& cfg) {
    if (cfg.activation == Activation::ReLU) {
        return x.cwiseMax(0.0);
    }
    const double slope = cfg.leaky_slope;
    return x.unaryExpr([slope](double v) { return v > 0.0 ? v : slope * v; });
}

Vector apply_activation_vec(Vector v, const ModelConfig& cfg) {
    if (cfg.activation == Activation::ReLU) {
        return v.cwiseMax(0.0);
    }
    const double slope = cfg.leaky_slope;
    return v.unaryExpr([slope](double x) { return x > 0.0 ? x : slope * x; });
}

Vector column_means(const Signal& x) {
    if (x.rows() == 0) {
        return Vector::Zero(x.cols());
    }
    return x.colwise().mean().transpose();
}

[[noreturn]] void param_error(const std::string& where, const std::string& what) {
    throw std::invalid_argument("params: " + where + ": " + what);
}

void check_bank(const FilterBank& fb, const ModelConfig& cfg, int dim, index_t d_in, index_t d_out, int b, int l) {
    const std::string where = "block " + std::to_string(b) + ", conv layer " + std::to_string(l) + ", " + (dim == 0 ? "node" : "edge") + " filter bank";
    if (fb.k != dim) {
        param_error(where, "is for dimension " + std::to_string(fb.k) + ", expected " + std::to_string(dim));
    }
    if (fb.order() != cfg.poly_order) {
        param_error(where, "has order " + std::to_string(fb.order()) + ", config expects " + std::to_string(cfg.poly_order));
    }
    for (const Dense& th : fb.theta) {
        if (th.rows() != d_in || th.cols() != d_out) {
            param_error(where, "coefficient shape " + std::to_string(th.rows()) + "x" + std::to_string(th.cols()) + ", expected " + std::to_string(d_in) + "x" + std::to_string(d_out));
        }
    }
}

}  // namespace

void ModelConfig::validate() const {
    if (num_blocks < 1) {
        throw std::invalid_argument("config: num_blocks must be >= 1");
    }
    if (static_cast<int>(conv_layers_per_block.size()) != num_blocks) {
        throw std::invalid_argument("config: conv_layers_per_block has " + std::to_string(conv_layers_per_block.size()) + " entries, expected " + std::to_string(num_blocks));
    }
    if (static_cast<int>(filters_per_layer.size()) != num_blocks) {
        throw std::invalid_argument("config: filters_per_layer has " + std::to_string(filters_per_layer.size()) + " entries, expected " + std::to_string(num_blocks));
    }
    if (static_cast<int>(pooling_enabled.size()) != num_blocks) {
        throw std::invalid_argument("config: pooling_enabled has " + std::to_string(pooling_enabled.size()) + " entries, expected " + std::to_string(num_blocks));
    }
    for (int b = 0; b < num_blocks; ++b) {
        if (conv_layers_per_block[static_cast<std::size_t>(b)] < 1) {
            throw std::invalid_argument("config: block " + std::to_string(b) + " has no conv layers");
        }
        if (filters_per_layer[static_cast<std::size_t>(b)] < 1) {
            throw std::invalid_argument("config: block " + std::to_string(b) + " has no filters");
        }
    }
    if (poly_order < 1) {
        throw std::invalid_argument("config: poly_order must be >= 1");
    }
    if (qk_dim < 1) {
        throw std::invalid_argument("config: qk_dim must be >= 1");
    }
    if (fc_layers.empty()) {
        throw std::invalid_argument("config: fc_layers is empty");
    }
    for (const int w : fc_layers) {
        if (w < 1) {
            throw std::invalid_argument("config: fc layer width must be >= 1");
        }
    }
    if (alpha_node < 0.0 || alpha_node > 1.0 || alpha_edge < 0.0 || alpha_edge > 1.0) {
        throw std::invalid_argument("config: alpha must lie in [0, 1]");
    }
    if (max_dim < 0) {
        throw std::invalid_argument("config: max_dim must be >= 0");
    }
    if (node_pe < 0 || edge_pe < 0) {
        throw std::invalid_argument("config: positional encoding counts must be >= 0");
    }
    if (msi && !edge_filters) {
        throw std::invalid_argument("config: interaction layer requires the edge filter path");
    }
    bool pools = false;
    for (const bool p : pooling_enabled) {
        pools = pools || p;
    }
    if (pools && !edge_filters) {
        throw std::invalid_argument("config: attention pooling requires the edge filter path");
    }
}

ModelConfig ablation_config(const ModelConfig& base, int variant) {
    if (variant < 1 || variant > 4) {
        throw std::invalid_argument("ablation_config: variant must be 1..4");
    }
    ModelConfig cfg = base;
    cfg.edge_filters = variant >= 2;
    cfg.msi = variant >= 3;
    if (variant < 4) {
        cfg.pooling_enabled.assign(static_cast<std::size_t>(cfg.num_blocks), false);
    }
    if (!cfg.edge_filters) {
        cfg.edge_pe = 0;
    }
    return cfg;
}

std::pair<Dense, Dense> positional_encoding(const SimplicialComplex& c, int node_count, int edge_count,
                                            std::optional<std::uint64_t> sign_flip_seed) {
    if (node_count < 0 || edge_count < 0) {
        throw std::invalid_argument("positional_encoding: counts must be >= 0");
    }
    Dense node_pe = Dense::Zero(c.num_simplices(0), node_count);
    if (node_count > 0 && c.num_simplices(0) > 0) {
        const EigenSystem es = eigensystem(hodge_laplacian(c, 0));
        index_t out_col = 0;
        for (index_t j = 0; j < es.eigenvalues.size() && out_col < node_count; ++j) {
            if (es.eigenvalues(j) > kKernelTol) {  // constant/kernel directions carry no position
                node_pe.col(out_col++) = es.eigenvectors.col(j);
            }
        }
    }

    const index_t n_edges = c.num_simplices(1);
    Dense edge_pe = Dense::Zero(n_edges, edge_count);
    if (edge_count > 0 && n_edges > 0 && c.max_dim >= 1) {
        const EigenSystem es = eigensystem(hodge_laplacian(c, 1));
        const index_t take = std::min<index_t>(edge_count, es.eigenvalues.size());
        edge_pe.leftCols(take) = es.eigenvectors.leftCols(take);
    }

    if (sign_flip_seed) {
        std::mt19937_64 rng(*sign_flip_seed);
        for (index_t j = 0; j < node_pe.cols(); ++j) {
            if (rng() & 1u) {
                node_pe.col(j) = -node_pe.col(j);
            }
        }
        for (index_t j = 0; j < edge_pe.cols(); ++j) {
            if (rng() & 1u) {
                edge_pe.col(j) = -edge_pe.col(j);
            }
        }
    }
    return {std::move(node_pe), std::move(edge_pe)};
}

ModelParams init_params(const ModelConfig& cfg, index_t node_channels, index_t edge_channels, std::uint64_t seed) {
    cfg.validate();
    std::mt19937_64 rng(seed);
    ModelParams params;

    index_t d0 = node_channels + cfg.node_pe;
    index_t d1 = edge_channels + (cfg.edge_filters ? cfg.edge_pe : 0);
    for (int b = 0; b < cfg.num_blocks; ++b) {
        BlockParams block;
        const index_t width = cfg.filters_per_layer[static_cast<std::size_t>(b)];
        for (int l = 0; l < cfg.conv_layers_per_block[static_cast<std::size_t>(b)]; ++l) {
            ConvParams conv;
            conv.node.k = 0;
            for (int p = 0; p < cfg.poly_order; ++p) {
                conv.node.theta.push_back(random_matrix(rng, d0, width, d0));
            }
            if (cfg.edge_filters) {
                conv.edge.k = 1;
                for (int p = 0; p < cfg.poly_order; ++p) {
                    conv.edge.theta.push_back(random_matrix(rng, d1, width, d1));
                }
            }
            d0 = width;
            d1 = width;
            block.conv.push_back(std::move(conv));
        }
        if (cfg.msi) {
            block.msi.concat_k1 = random_matrix(rng, 2 * width, width, 2 * width);
            block.msi.mix_k1 = random_matrix(rng, width, width, width);
            block.msi.concat_k2 = random_matrix(rng, 2 * width, width, 2 * width);
            block.msi.mix_k2 = random_matrix(rng, width, width, width);
        }
        if (cfg.pooling_enabled[static_cast<std::size_t>(b)]) {
            block.attention.query_k1 = random_matrix(rng, width, cfg.qk_dim, width);
            block.attention.key_k1 = random_matrix(rng, width, cfg.qk_dim, width);
            block.attention.query_k2 = random_matrix(rng, width, cfg.qk_dim, width);
            block.attention.key_k2 = random_matrix(rng, width, cfg.qk_dim, width);
            block.attention.alpha_k1 = cfg.alpha_node;
            block.attention.alpha_k2 = cfg.alpha_edge;
        }
        params.blocks.push_back(std::move(block));
    }

    index_t in = cfg.filters_per_layer.back() * (cfg.edge_filters ? 2 : 1);
    for (const int w : cfg.fc_layers) {
        HeadLayer layer;
        layer.weight = random_matrix(rng, in, w, in);
        layer.bias = random_matrix(rng, w, 1, in).col(0);
        params.head.push_back(std::move(layer));
        in = w;
    }
    return params;
}

void validate_params(const ModelParams& params, const ModelConfig& cfg, index_t node_channels, index_t edge_channels) {
    cfg.validate();
    if (static_cast<int>(params.blocks.size()) != cfg.num_blocks) {
        throw std::invalid_argument("params: " + std::to_string(params.blocks.size()) + " blocks, config expects " + std::to_string(cfg.num_blocks));
    }
    index_t d0 = node_channels + cfg.node_pe;
    index_t d1 = edge_channels + (cfg.edge_filters ? cfg.edge_pe : 0);
    for (int b = 0; b < cfg.num_blocks; ++b) {
        const BlockParams& block = params.blocks[static_cast<std::size_t>(b)];
        const int layers = cfg.conv_layers_per_block[static_cast<std::size_t>(b)];
        const index_t width = cfg.filters_per_layer[static_cast<std::size_t>(b)];
        if (static_cast<int>(block.conv.size()) != layers) {
            param_error("block " + std::to_string(b), "has " + std::to_string(block.conv.size()) + " conv layers, config expects " + std::to_string(layers));
        }
        for (int l = 0; l < layers; ++l) {
            const ConvParams& conv = block.conv[static_cast<std::size_t>(l)];
            check_bank(conv.node, cfg, 0, d0, width, b, l);
            if (cfg.edge_filters) {
                check_bank(conv.edge, cfg, 1, d1, width, b, l);
            }
            d0 = width;
            d1 = width;
        }
        if (cfg.msi) {
            const MSIWeights& w = block.msi;
            if (w.concat_k1.rows() != 2 * width || w.concat_k1.cols() != width || w.mix_k1.rows() != width || w.mix_k1.cols() != width || w.concat_k2.rows() != 2 * width || w.concat_k2.cols() != width || w.mix_k2.rows() != width || w.mix_k2.cols() != width) {
                param_error("block " + std::to_string(b), "interaction weights do not match width " + std::to_string(width));
            }
        }
        if (cfg.pooling_enabled[static_cast<std::size_t>(b)]) {
            const AttentionParams& a = block.attention;
            if (a.query_k1.rows() != width || a.query_k1.cols() != cfg.qk_dim || a.key_k1.rows() != width || a.key_k1.cols() != cfg.qk_dim || a.query_k2.rows() != width || a.query_k2.cols() != cfg.qk_dim || a.key_k2.rows() != width || a.key_k2.cols() != cfg.qk_dim) {
                param_error("block " + std::to_string(b), "attention weights do not match width " + std::to_string(width) + " and qk dimension " + std::to_string(cfg.qk_dim));
            }
        }
    }

    if (params.head.size() != cfg.fc_layers.size()) {
        throw std::invalid_argument("params: head has " + std::to_string(params.head.size()) + " layers, config expects " + std::to_string(cfg.fc_layers.size()));
    }
    index_t in = cfg.filters_per_layer.back() * (cfg.edge_filters ? 2 : 1);
    for (std::size_t i = 0; i < params.head.size(); ++i) {
        const HeadLayer& layer = params.head[i];
        const index_t out = cfg.fc_layers[i];
        if (layer.weight.rows() != in || layer.weight.cols() != out || layer.bias.size() != out) {
            param_error("head layer " + std::to_string(i), "shape " + std::to_string(layer.weight.rows()) + "x" + std::to_string(layer.weight.cols()) + ", expected " + std::to_string(in) + "x" + std::to_string(out));
        }
        in = out;
    }
}

Vector forward(const SimplicialComplex& c, const Signal& node_signal, const Signal& edge_signal,
               const ModelParams& params, const ModelConfig& cfg, std::uint64_t seed) {
    validate_params(params, cfg, node_signal.cols(), cfg.edge_filters ? edge_signal.cols() : 0);
    if (node_signal.rows() != c.num_simplices(0)) {
        throw std::invalid_argument("forward: node signal has " + std::to_string(node_signal.rows()) + " rows, complex has " + std::to_string(c.num_simplices(0)) + " nodes");
    }
    if (cfg.edge_filters && edge_signal.rows() != c.num_simplices(1)) {
        throw std::invalid_argument("forward: edge signal has " + std::to_string(edge_signal.rows()) + " rows, complex has " + std::to_string(c.num_simplices(1)) + " edges");
    }

    SimplicialComplex current = c;
    Signal x0 = node_signal;
    Signal x1 = cfg.edge_filters ? edge_signal : Signal(c.num_simplices(1), 0);

    if (cfg.node_pe > 0 || (cfg.edge_filters && cfg.edge_pe > 0)) {
        const auto flip = cfg.pe_sign_flip ? std::optional<std::uint64_t>(seed) : std::nullopt;
        auto [node_pe, edge_pe] = positional_encoding(current, cfg.node_pe, cfg.edge_filters ? cfg.edge_pe : 0, flip);
        Signal with_pe(x0.rows(), x0.cols() + node_pe.cols());
        with_pe.leftCols(x0.cols()) = x0;
        with_pe.rightCols(node_pe.cols()) = node_pe;
        x0 = std::move(with_pe);
        if (cfg.edge_filters) {
            Signal edge_with_pe(x1.rows(), x1.cols() + cfg.edge_pe);
            edge_with_pe.leftCols(x1.cols()) = x1;
            edge_with_pe.rightCols(cfg.edge_pe) = edge_pe;
            x1 = std::move(edge_with_pe);
        }
    }

    for (int b = 0; b < cfg.num_blocks; ++b) {
        const BlockParams& block = params.blocks[static_cast<std::size_t>(b)];
        HLOperator l0 = hodge_laplacian(current, 0);
        HLOperator l1{1, SparseMatrix(0, 0)};
        if (cfg.edge_filters) {
            l1 = current.max_dim >= 1 ? hodge_laplacian(current, 1) : HLOperator{1, SparseMatrix(0, 0)};
        }

        for (const ConvParams& conv : block.conv) {
            x0 = apply_activation(filter_poly(l0, conv.node, x0), cfg);
            if (cfg.edge_filters) {
                x1 = apply_activation(filter_poly(l1, conv.edge, x1), cfg);
            }
        }

        const bool needs_pair_ops = cfg.msi || cfg.pooling_enabled[static_cast<std::size_t>(b)];
        ProjectionOperator down{1, 0, SparseMatrix(x0.rows(), x1.rows())};
        ProjectionOperator up{0, 1, SparseMatrix(x1.rows(), x0.rows())};
        if (needs_pair_ops && current.max_dim >= 1) {
            down = project_down(current, 1);
            up = project_up(current, 1);
        }

        if (cfg.msi) {
            std::tie(x0, x1) = msi_forward(x0, x1, down, up, block.msi);
        }

        if (cfg.pooling_enabled[static_cast<std::size_t>(b)]) {
            auto [a0, a1] = attention_weights(x0, x1, down, up, block.attention);
            const NodeClustering nc = cluster_nodes(current);
            CoarseningResult cr = downsample(current, nc);
            x0 = pool_signal(x0, a0, cr.assignment[0]);
            x1 = current.max_dim >= 1 ? pool_signal(x1, a1, cr.assignment[1]) : Signal(0, x1.cols());
            current = std::move(cr.coarse);
        }
    }

    Vector readout;
    if (cfg.edge_filters) {
        readout.resize(x0.cols() + x1.cols());
        readout.head(x0.cols()) = column_means(x0);
        readout.tail(x1.cols()) = column_means(x1);
    } else {
        readout = column_means(x0);
    }

    Vector h = readout;
    for (std::size_t i = 0; i < params.head.size(); ++i) {
        Vector next = params.head[i].weight.transpose() * h + params.head[i].bias;
        h = i + 1 < params.head.size() ? apply_activation_vec(std::move(next), cfg) : std::move(next);
    }
    return h;
}

}  // namespace simplex
