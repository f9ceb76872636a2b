#pragma once

#include "simplex/complex.hpp"
#include "simplex/pooling.hpp"
#include "simplex/projection.hpp"
#include "simplex/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace simplex {

enum class Activation { ReLU, LeakyReLU };

/// Architecture description for the forward pipeline. Mirrors the JSON
/// config file one-to-one. `dropout` is recorded for compatibility but
/// inert: the pipeline is inference-only.
struct ModelConfig {
    int num_blocks = 1;
    std::vector<int> conv_layers_per_block;
    std::vector<int> filters_per_layer;
    int poly_order = 3;
    int qk_dim = 4;
    std::vector<int> fc_layers;
    double alpha_node = 0.5;
    double alpha_edge = 0.5;
    Activation activation = Activation::ReLU;
    double leaky_slope = 0.1;
    std::vector<bool> pooling_enabled;
    int max_dim = 2;
    int node_pe = 0;
    int edge_pe = 8;
    bool pe_sign_flip = false;
    bool edge_filters = true;
    bool msi = true;
    double dropout = 0.25;

    /// Throws std::invalid_argument when list lengths or counts are
    /// inconsistent.
    void validate() const;
};

/// Ablation presets: 1 = node filters only, 2 = node+edge filters,
/// 3 = node+edge filters with interaction, 4 = full pipeline with
/// attention pooling.
ModelConfig ablation_config(const ModelConfig& base, int variant);

struct ConvParams {
    FilterBank node;
    FilterBank edge;  // unused when edge_filters is off
};

struct BlockParams {
    std::vector<ConvParams> conv;
    MSIWeights msi;            // unused when msi is off
    AttentionParams attention; // unused when the block does not pool
};

struct HeadLayer {
    Dense weight;
    Vector bias;
};

struct ModelParams {
    std::vector<BlockParams> blocks;
    std::vector<HeadLayer> head;
};

/// Low spectral coordinates used as extra input channels: for nodes the
/// first non-kernel eigenvectors of the dimension-0 Hodge-Laplacian, for
/// edges the first eigenvectors (kernel included) of the dimension-1
/// operator. Columns beyond the available spectrum are zero. Passing a
/// seed flips each column's sign with probability 1/2 (augmentation);
/// the default is the deterministic sign convention.
std::pair<Dense, Dense> positional_encoding(const SimplicialComplex& c, int node_count, int edge_count,
                                            std::optional<std::uint64_t> sign_flip_seed = std::nullopt);

/// Seeded parameter initialization, uniform on [-1/sqrt(fan_in), 1/sqrt(fan_in)].
ModelParams init_params(const ModelConfig& cfg, index_t node_channels, index_t edge_channels, std::uint64_t seed);

/// Check that parameter shapes match the config and the given raw input
/// widths; errors name the offending block/layer.
void validate_params(const ModelParams& params, const ModelConfig& cfg, index_t node_channels, index_t edge_channels);

/// Full forward pass: positional encoding, then per block HL-filter
/// layers, interaction, and attention pooling, then mean readout and
/// the fully connected head. Deterministic for fixed inputs and seed.
Vector forward(const SimplicialComplex& c, const Signal& node_signal, const Signal& edge_signal,
               const ModelParams& params, const ModelConfig& cfg, std::uint64_t seed = 0);

}  // namespace simplex
