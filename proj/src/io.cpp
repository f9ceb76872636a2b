#include "simplex/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace simplex {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write file: " + path);
    }
    out << text;
}

/// Parse with byte offset converted to line/column for diagnostics.
json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& err) {
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t stop = err.byte == 0 ? 0 : std::min(text.size(), err.byte - 1);
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw DataError(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + err.what());
    }
}

const json& require_field(const json& j, const std::string& key, const std::string& path) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw DataError("missing field '" + (path.empty() ? key : path + "." + key) + "'");
    }
    return *it;
}

Dense dense_from_json(const json& j, const std::string& path) {
    const json& shape = require_field(j, "shape", path);
    const json& data = require_field(j, "data", path);
    if (!shape.is_array() || shape.size() != 2) {
        throw DataError(path + ".shape: expected [rows, cols]");
    }
    const index_t rows = shape[0].get<index_t>();
    const index_t cols = shape[1].get<index_t>();
    if (rows < 0 || cols < 0 || static_cast<index_t>(data.size()) != rows * cols) {
        throw DataError(path + ".data: expected " + std::to_string(rows * cols) + " values, got " + std::to_string(data.size()));
    }
    Dense out(rows, cols);
    for (index_t i = 0; i < rows; ++i) {
        for (index_t j2 = 0; j2 < cols; ++j2) {
            out(i, j2) = data[static_cast<std::size_t>(i * cols + j2)].get<double>();
        }
    }
    return out;
}

json dense_to_json(const Dense& m) {
    json data = json::array();
    for (index_t i = 0; i < m.rows(); ++i) {
        for (index_t j = 0; j < m.cols(); ++j) {
            data.push_back(m(i, j));
        }
    }
    return json{{"shape", {m.rows(), m.cols()}}, {"data", std::move(data)}};
}

Vector vector_from_json(const json& j, const std::string& path) {
    Dense m = dense_from_json(j, path);
    if (m.cols() != 1) {
        throw DataError(path + ": expected a column vector");
    }
    return m.col(0);
}

FilterBank filter_bank_from_json(const json& j, const std::string& path) {
    FilterBank fb;
    fb.k = require_field(j, "k", path).get<int>();
    const int order = require_field(j, "P", path).get<int>();
    const json& theta = require_field(j, "theta", path);
    if (order < 1 || !theta.is_array() || static_cast<int>(theta.size()) != order) {
        throw DataError(path + ".theta: expected " + std::to_string(order) + " coefficient matrices");
    }
    for (int p = 0; p < order; ++p) {
        const json& mat = theta[static_cast<std::size_t>(p)];
        const std::string mat_path = path + ".theta[" + std::to_string(p) + "]";
        if (!mat.is_array() || mat.empty()) {
            throw DataError(mat_path + ": expected a nonempty matrix");
        }
        const index_t d_in = static_cast<index_t>(mat.size());
        const index_t d_out = static_cast<index_t>(mat[0].size());
        Dense coeff(d_in, d_out);
        for (index_t i = 0; i < d_in; ++i) {
            const json& row = mat[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<index_t>(row.size()) != d_out) {
                throw DataError(mat_path + ": ragged rows");
            }
            for (index_t o = 0; o < d_out; ++o) {
                coeff(i, o) = row[static_cast<std::size_t>(o)].get<double>();
            }
        }
        if (!fb.theta.empty() && (coeff.rows() != fb.theta[0].rows() || coeff.cols() != fb.theta[0].cols())) {
            throw DataError(mat_path + ": shape differs across polynomial orders");
        }
        fb.theta.push_back(std::move(coeff));
    }
    return fb;
}

json filter_bank_to_json(const FilterBank& fb) {
    json theta = json::array();
    for (const Dense& coeff : fb.theta) {
        json mat = json::array();
        for (index_t i = 0; i < coeff.rows(); ++i) {
            json row = json::array();
            for (index_t o = 0; o < coeff.cols(); ++o) {
                row.push_back(coeff(i, o));
            }
            mat.push_back(std::move(row));
        }
        theta.push_back(std::move(mat));
    }
    return json{{"k", fb.k}, {"P", fb.order()}, {"theta", std::move(theta)}};
}

Signal signals_from_json(const json& j, index_t expected_rows, const std::string& field) {
    if (!j.is_array()) {
        throw DataError(field + ": expected an array of rows");
    }
    if (static_cast<index_t>(j.size()) != expected_rows) {
        throw DataError(field + ": expected " + std::to_string(expected_rows) + " rows, got " + std::to_string(j.size()));
    }
    if (expected_rows == 0) {
        return Signal(0, 0);
    }
    const index_t cols = static_cast<index_t>(j[0].size());
    Signal out(expected_rows, cols);
    for (index_t i = 0; i < expected_rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<index_t>(row.size()) != cols) {
            throw DataError(field + "[" + std::to_string(i) + "]: ragged row");
        }
        for (index_t c = 0; c < cols; ++c) {
            out(i, c) = row[static_cast<std::size_t>(c)].get<double>();
        }
    }
    return out;
}

}  // namespace

GraphData parse_graph(const std::string& text, const std::string& origin) {
    const json j = parse_json(text, origin);
    if (!j.is_object()) {
        throw DataError(origin + ": expected a JSON object");
    }
    const index_t num_nodes = require_field(j, "num_nodes", "").get<index_t>();
    const json& edges_json = require_field(j, "edges", "");
    if (!edges_json.is_array()) {
        throw DataError("edges: expected an array of [u, v] pairs");
    }
    std::vector<std::pair<index_t, index_t>> edges;
    edges.reserve(edges_json.size());
    for (std::size_t i = 0; i < edges_json.size(); ++i) {
        const json& e = edges_json[i];
        if (!e.is_array() || e.size() != 2) {
            throw DataError("edges[" + std::to_string(i) + "]: expected [u, v]");
        }
        edges.emplace_back(e[0].get<index_t>(), e[1].get<index_t>());
    }

    GraphData data;
    try {
        data.graph = Graph(num_nodes, std::move(edges));
    } catch (const std::invalid_argument& err) {
        throw DataError(err.what());
    }

    data.node_signals = Signal(num_nodes, 0);
    data.edge_signals = Signal(static_cast<index_t>(data.graph.edges().size()), 0);
    if (j.contains("node_signals")) {
        data.node_signals = signals_from_json(j["node_signals"], num_nodes, "node_signals");
    }
    if (j.contains("edge_signals")) {
        data.edge_signals = signals_from_json(j["edge_signals"], static_cast<index_t>(data.graph.edges().size()), "edge_signals");
    }
    return data;
}

GraphData load_graph(const std::string& path) {
    return parse_graph(read_file(path), path);
}

FilterBank load_filter_bank(const std::string& path) {
    return filter_bank_from_json(parse_json(read_file(path), path), "");
}

void save_filter_bank(const FilterBank& fb, const std::string& path) {
    write_file(path, filter_bank_to_json(fb).dump(2) + "\n");
}

ModelConfig load_config(const std::string& path) {
    const json j = parse_json(read_file(path), path);
    ModelConfig cfg;
    cfg.num_blocks = require_field(j, "num_blocks", "").get<int>();
    cfg.conv_layers_per_block = require_field(j, "conv_layers_per_block", "").get<std::vector<int>>();
    cfg.filters_per_layer = require_field(j, "filters_per_layer", "").get<std::vector<int>>();
    cfg.poly_order = require_field(j, "poly_order", "").get<int>();
    cfg.qk_dim = require_field(j, "qk_dim", "").get<int>();
    cfg.fc_layers = require_field(j, "fc_layers", "").get<std::vector<int>>();
    cfg.alpha_node = require_field(j, "alpha_node", "").get<double>();
    cfg.alpha_edge = require_field(j, "alpha_edge", "").get<double>();
    const std::string act = require_field(j, "activation", "").get<std::string>();
    if (act == "relu") {
        cfg.activation = Activation::ReLU;
    } else if (act == "leaky_relu") {
        cfg.activation = Activation::LeakyReLU;
    } else {
        throw DataError("activation: expected 'relu' or 'leaky_relu', got '" + act + "'");
    }
    cfg.leaky_slope = j.value("leaky_slope", 0.1);
    cfg.pooling_enabled = require_field(j, "pooling_enabled", "").get<std::vector<bool>>();
    cfg.max_dim = require_field(j, "max_dim", "").get<int>();
    const json& pe = require_field(j, "pe_dims", "");
    cfg.node_pe = require_field(pe, "node", "pe_dims").get<int>();
    cfg.edge_pe = require_field(pe, "edge", "pe_dims").get<int>();
    cfg.pe_sign_flip = j.value("pe_sign_flip", false);
    cfg.edge_filters = require_field(j, "edge_filters", "").get<bool>();
    cfg.msi = require_field(j, "msi", "").get<bool>();
    cfg.dropout = j.value("dropout", 0.25);
    try {
        cfg.validate();
    } catch (const std::invalid_argument& err) {
        throw DataError(err.what());
    }
    return cfg;
}

void save_config(const ModelConfig& cfg, const std::string& path) {
    json j{
        {"num_blocks", cfg.num_blocks},
        {"conv_layers_per_block", cfg.conv_layers_per_block},
        {"filters_per_layer", cfg.filters_per_layer},
        {"poly_order", cfg.poly_order},
        {"qk_dim", cfg.qk_dim},
        {"fc_layers", cfg.fc_layers},
        {"alpha_node", cfg.alpha_node},
        {"alpha_edge", cfg.alpha_edge},
        {"activation", cfg.activation == Activation::ReLU ? "relu" : "leaky_relu"},
        {"leaky_slope", cfg.leaky_slope},
        {"pooling_enabled", cfg.pooling_enabled},
        {"max_dim", cfg.max_dim},
        {"pe_dims", {{"node", cfg.node_pe}, {"edge", cfg.edge_pe}}},
        {"pe_sign_flip", cfg.pe_sign_flip},
        {"edge_filters", cfg.edge_filters},
        {"msi", cfg.msi},
        {"dropout", cfg.dropout},
    };
    write_file(path, j.dump(2) + "\n");
}

ModelParams load_params(const std::string& path) {
    const json j = parse_json(read_file(path), path);
    ModelParams params;
    const json& blocks = require_field(j, "blocks", "");
    if (!blocks.is_array()) {
        throw DataError("blocks: expected an array");
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const std::string bpath = "blocks[" + std::to_string(b) + "]";
        const json& jb = blocks[b];
        BlockParams block;
        const json& conv = require_field(jb, "conv", bpath);
        if (!conv.is_array()) {
            throw DataError(bpath + ".conv: expected an array");
        }
        for (std::size_t l = 0; l < conv.size(); ++l) {
            const std::string lpath = bpath + ".conv[" + std::to_string(l) + "]";
            const json& jl = conv[l];
            ConvParams layer;
            layer.node = filter_bank_from_json(require_field(jl, "node", lpath), lpath + ".node");
            if (jl.contains("edge") && !jl["edge"].is_null()) {
                layer.edge = filter_bank_from_json(jl["edge"], lpath + ".edge");
            }
            block.conv.push_back(std::move(layer));
        }
        if (jb.contains("msi") && !jb["msi"].is_null()) {
            const json& jm = jb["msi"];
            const std::string mpath = bpath + ".msi";
            block.msi.concat_k1 = dense_from_json(require_field(jm, "concat_k1", mpath), mpath + ".concat_k1");
            block.msi.mix_k1 = dense_from_json(require_field(jm, "mix_k1", mpath), mpath + ".mix_k1");
            block.msi.concat_k2 = dense_from_json(require_field(jm, "concat_k2", mpath), mpath + ".concat_k2");
            block.msi.mix_k2 = dense_from_json(require_field(jm, "mix_k2", mpath), mpath + ".mix_k2");
        }
        if (jb.contains("attention") && !jb["attention"].is_null()) {
            const json& ja = jb["attention"];
            const std::string apath = bpath + ".attention";
            block.attention.query_k1 = dense_from_json(require_field(ja, "query_k1", apath), apath + ".query_k1");
            block.attention.key_k1 = dense_from_json(require_field(ja, "key_k1", apath), apath + ".key_k1");
            block.attention.query_k2 = dense_from_json(require_field(ja, "query_k2", apath), apath + ".query_k2");
            block.attention.key_k2 = dense_from_json(require_field(ja, "key_k2", apath), apath + ".key_k2");
            block.attention.alpha_k1 = require_field(ja, "alpha_k1", apath).get<double>();
            block.attention.alpha_k2 = require_field(ja, "alpha_k2", apath).get<double>();
        }
        params.blocks.push_back(std::move(block));
    }
    const json& head = require_field(j, "head", "");
    if (!head.is_array()) {
        throw DataError("head: expected an array");
    }
    for (std::size_t i = 0; i < head.size(); ++i) {
        const std::string hpath = "head[" + std::to_string(i) + "]";
        HeadLayer layer;
        layer.weight = dense_from_json(require_field(head[i], "weight", hpath), hpath + ".weight");
        layer.bias = vector_from_json(require_field(head[i], "bias", hpath), hpath + ".bias");
        params.head.push_back(std::move(layer));
    }
    return params;
}

void save_params(const ModelParams& params, const std::string& path) {
    json blocks = json::array();
    for (const BlockParams& block : params.blocks) {
        json conv = json::array();
        for (const ConvParams& layer : block.conv) {
            json jl{{"node", filter_bank_to_json(layer.node)}};
            jl["edge"] = layer.edge.order() > 0 ? filter_bank_to_json(layer.edge) : json(nullptr);
            conv.push_back(std::move(jl));
        }
        json jb{{"conv", std::move(conv)}};
        if (block.msi.concat_k1.size() > 0) {
            jb["msi"] = json{
                {"concat_k1", dense_to_json(block.msi.concat_k1)},
                {"mix_k1", dense_to_json(block.msi.mix_k1)},
                {"concat_k2", dense_to_json(block.msi.concat_k2)},
                {"mix_k2", dense_to_json(block.msi.mix_k2)},
            };
        } else {
            jb["msi"] = nullptr;
        }
        if (block.attention.query_k1.size() > 0) {
            jb["attention"] = json{
                {"query_k1", dense_to_json(block.attention.query_k1)},
                {"key_k1", dense_to_json(block.attention.key_k1)},
                {"query_k2", dense_to_json(block.attention.query_k2)},
                {"key_k2", dense_to_json(block.attention.key_k2)},
                {"alpha_k1", block.attention.alpha_k1},
                {"alpha_k2", block.attention.alpha_k2},
            };
        } else {
            jb["attention"] = nullptr;
        }
        blocks.push_back(std::move(jb));
    }
    json head = json::array();
    for (const HeadLayer& layer : params.head) {
        Dense bias(layer.bias.size(), 1);
        bias.col(0) = layer.bias;
        head.push_back(json{{"weight", dense_to_json(layer.weight)}, {"bias", dense_to_json(bias)}});
    }
    const json j{{"blocks", std::move(blocks)}, {"head", std::move(head)}};
    write_file(path, j.dump(2) + "\n");
}

void write_csv(std::ostream& os, const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    auto quote = [](const std::string& field) {
        if (field.find_first_of(",\"\n\r") == std::string::npos) {
            return field;
        }
        std::string quoted = "\"";
        for (const char ch : field) {
            if (ch == '"') {
                quoted += '"';
            }
            quoted += ch;
        }
        quoted += '"';
        return quoted;
    };
    auto write_row = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) {
                os << ',';
            }
            os << quote(row[i]);
        }
        os << '\n';
    };
    write_row(header);
    for (const auto& row : rows) {
        write_row(row);
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace simplex
