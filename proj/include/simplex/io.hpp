#pragma once

#include "simplex/graph.hpp"
#include "simplex/model.hpp"
#include "simplex/spectral.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace simplex {

/// Graph plus optional input signals, as read from the JSON graph
/// format. Edge signal rows follow the sorted edge order the complex
/// builder produces.
struct GraphData {
    Graph graph;
    Signal node_signals;  // num_nodes x d0, or 0 columns when absent
    Signal edge_signals;  // num_edges x d1, or 0 columns when absent
};

/// Thrown for malformed or semantically invalid input data; the CLI
/// maps it to exit code 2.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

GraphData load_graph(const std::string& path);
GraphData parse_graph(const std::string& text, const std::string& origin = "<input>");

FilterBank load_filter_bank(const std::string& path);
void save_filter_bank(const FilterBank& fb, const std::string& path);

ModelConfig load_config(const std::string& path);
void save_config(const ModelConfig& cfg, const std::string& path);

ModelParams load_params(const std::string& path);
void save_params(const ModelParams& params, const std::string& path);

/// RFC-4180 CSV: header always present, fields quoted only when needed.
void write_csv(std::ostream& os, const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

std::string format_double(double v);  // 17 significant digits

}  // namespace simplex
