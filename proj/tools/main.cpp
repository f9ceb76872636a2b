// Command-line front end: build clique complexes, compute spectra,
// apply spectral filters, project signals across dimensions, coarsen,
// and run forward inference. Exit codes: 0 success, 1 usage error,
// 2 data error.

#include <CLI11.hpp>
#include <json.hpp>

#include "simplex/complex.hpp"
#include "simplex/io.hpp"
#include "simplex/model.hpp"
#include "simplex/pooling.hpp"
#include "simplex/projection.hpp"
#include "simplex/spectral.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace simplex;

namespace {

struct CommonOptions {
    std::string input;
    std::string output = ".";
    std::uint64_t seed = 0;
    std::string format = "csv";
    int max_dim = 2;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--input", opt.input, "graph JSON file")->required();
    cmd->add_option("--output", opt.output, "output directory (created if missing)");
    cmd->add_option("--seed", opt.seed, "random seed");
    cmd->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--max-dim", opt.max_dim, "maximum simplex dimension")->check(CLI::Range(0, 8));
}

std::ofstream open_output(const CommonOptions& opt, const std::string& name) {
    fs::create_directories(opt.output);
    const fs::path path = fs::path(opt.output) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    return out;
}

void write_signal_csv(std::ostream& os, const Signal& x, const std::string& value_prefix) {
    std::vector<std::string> header{"index"};
    for (index_t c = 0; c < x.cols(); ++c) {
        header.push_back(value_prefix + std::to_string(c));
    }
    std::vector<std::vector<std::string>> rows;
    for (index_t i = 0; i < x.rows(); ++i) {
        std::vector<std::string> row{std::to_string(i)};
        for (index_t c = 0; c < x.cols(); ++c) {
            row.push_back(format_double(x(i, c)));
        }
        rows.push_back(std::move(row));
    }
    write_csv(os, header, rows);
}

json signal_to_json(const Signal& x) {
    json rows = json::array();
    for (index_t i = 0; i < x.rows(); ++i) {
        json row = json::array();
        for (index_t c = 0; c < x.cols(); ++c) {
            row.push_back(x(i, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_signal(const CommonOptions& opt, const std::string& stem, const Signal& x, const std::string& value_prefix = "c") {
    if (opt.format == "json") {
        auto out = open_output(opt, stem + ".json");
        out << json{{"values", signal_to_json(x)}}.dump(2) << "\n";
    } else {
        auto out = open_output(opt, stem + ".csv");
        write_signal_csv(out, x, value_prefix);
    }
}

Signal default_signal(index_t rows, const Signal& from_file) {
    if (from_file.cols() > 0) {
        return from_file;
    }
    return Signal::Ones(rows, 1);
}

ModelConfig demo_config() {
    ModelConfig cfg;
    cfg.num_blocks = 2;
    cfg.conv_layers_per_block = {2, 2};
    cfg.filters_per_layer = {8, 8};
    cfg.poly_order = 3;
    cfg.qk_dim = 4;
    cfg.fc_layers = {16, 3};
    cfg.pooling_enabled = {true, false};
    cfg.max_dim = 2;
    cfg.node_pe = 4;
    cfg.edge_pe = 4;
    return cfg;
}

int run_complex(const CommonOptions& opt) {
    const GraphData data = load_graph(opt.input);
    const SimplicialComplex c = build_complex(data.graph, opt.max_dim);

    if (opt.format == "json") {
        json levels = json::array();
        for (int k = 0; k <= c.max_dim; ++k) {
            levels.push_back(c.simplices[static_cast<std::size_t>(k)]);
        }
        auto out = open_output(opt, "complex.json");
        out << json{{"max_dim", c.max_dim}, {"simplices", std::move(levels)}}.dump(2) << "\n";
    } else {
        for (int k = 0; k <= c.max_dim; ++k) {
            auto out = open_output(opt, "simplices_" + std::to_string(k) + ".csv");
            std::vector<std::string> header{"index"};
            for (int v = 0; v <= k; ++v) {
                header.push_back("v" + std::to_string(v));
            }
            std::vector<std::vector<std::string>> rows;
            const auto& level = c.simplices[static_cast<std::size_t>(k)];
            for (std::size_t i = 0; i < level.size(); ++i) {
                std::vector<std::string> row{std::to_string(i)};
                for (const index_t v : level[i]) {
                    row.push_back(std::to_string(v));
                }
                rows.push_back(std::move(row));
            }
            write_csv(out, header, rows);
        }
    }
    for (int k = 1; k <= c.max_dim; ++k) {
        auto out = open_output(opt, "boundary_" + std::to_string(k) + ".coo");
        write_coo(out, boundary_operator(c, k));
    }
    for (int k = 0; k <= c.max_dim; ++k) {
        std::cout << "dim " << k << ": " << c.num_simplices(k) << "\n";
    }
    return 0;
}

int run_spectrum(const CommonOptions& opt, int k, index_t count, bool vectors) {
    const GraphData data = load_graph(opt.input);
    const SimplicialComplex c = build_complex(data.graph, opt.max_dim);
    if (k > c.max_dim) {
        throw DataError("spectrum: dimension " + std::to_string(k) + " exceeds complex max_dim " + std::to_string(c.max_dim));
    }
    const EigenSystem es = eigensystem(hodge_laplacian(c, k), count > 0 ? std::optional<index_t>(count) : std::nullopt);

    if (opt.format == "json") {
        json values = json::array();
        for (index_t j = 0; j < es.eigenvalues.size(); ++j) {
            values.push_back(es.eigenvalues(j));
        }
        auto out = open_output(opt, "spectrum_k" + std::to_string(k) + ".json");
        out << json{{"k", k}, {"eigenvalues", std::move(values)}}.dump(2) << "\n";
    } else {
        auto out = open_output(opt, "spectrum_k" + std::to_string(k) + ".csv");
        std::vector<std::vector<std::string>> rows;
        for (index_t j = 0; j < es.eigenvalues.size(); ++j) {
            rows.push_back({std::to_string(j), format_double(es.eigenvalues(j))});
        }
        write_csv(out, {"index", "eigenvalue"}, rows);
    }
    if (vectors) {
        write_signal(opt, "eigenvectors_k" + std::to_string(k), es.eigenvectors, "psi");
    }
    std::cout << "wrote " << es.eigenvalues.size() << " eigenvalues for dimension " << k << "\n";
    return 0;
}

int run_filter(const CommonOptions& opt, int k, const std::string& theta_arg, const std::string& filters_path) {
    const GraphData data = load_graph(opt.input);
    const SimplicialComplex c = build_complex(data.graph, opt.max_dim);
    if (k > c.max_dim) {
        throw DataError("filter: dimension " + std::to_string(k) + " exceeds complex max_dim " + std::to_string(c.max_dim));
    }
    Signal x;
    if (k == 0) {
        x = data.node_signals;
    } else if (k == 1) {
        x = data.edge_signals;
    }
    if (x.cols() == 0) {
        throw DataError("filter: the graph file carries no signals for dimension " + std::to_string(k));
    }

    FilterBank fb;
    if (!filters_path.empty()) {
        fb = load_filter_bank(filters_path);
        if (fb.k != k) {
            throw DataError("filter: bank is for dimension " + std::to_string(fb.k) + ", requested " + std::to_string(k));
        }
        if (fb.in_channels() != x.cols()) {
            throw DataError("filter: bank expects " + std::to_string(fb.in_channels()) + " channels, signals have " + std::to_string(x.cols()));
        }
    } else {
        // inline scalar polynomial: each coefficient acts per channel
        fb.k = k;
        std::stringstream ss(theta_arg);
        std::string token;
        while (std::getline(ss, token, ',')) {
            try {
                fb.theta.push_back(std::stod(token) * Dense::Identity(x.cols(), x.cols()));
            } catch (const std::exception&) {
                throw DataError("filter: cannot parse --theta entry '" + token + "'");
            }
        }
        if (fb.theta.empty()) {
            throw DataError("filter: --theta is empty");
        }
    }

    const Signal filtered = filter_poly(hodge_laplacian(c, k), fb, x);
    write_signal(opt, "filtered_k" + std::to_string(k), filtered);
    std::cout << "filtered " << filtered.rows() << " signals on dimension " << k << " with order " << fb.order() << "\n";
    return 0;
}

int run_project(const CommonOptions& opt, int from, int to, index_t delta) {
    const GraphData data = load_graph(opt.input);
    const SimplicialComplex c = build_complex(data.graph, opt.max_dim);
    if (from > c.max_dim || to > c.max_dim) {
        throw DataError("project: dimensions exceed complex max_dim " + std::to_string(c.max_dim));
    }
    Signal x;
    if (delta >= 0) {
        if (delta >= c.num_simplices(from)) {
            throw DataError("project: delta index " + std::to_string(delta) + " out of range for dimension " + std::to_string(from));
        }
        x = Signal::Zero(c.num_simplices(from), 1);
        x(delta, 0) = 1.0;
    } else if (from == 0 && data.node_signals.cols() > 0) {
        x = data.node_signals;
    } else if (from == 1 && data.edge_signals.cols() > 0) {
        x = data.edge_signals;
    } else {
        throw DataError("project: no signals for dimension " + std::to_string(from) + "; pass --delta");
    }
    const ProjectionOperator op = project_chain(c, from, to);
    write_signal(opt, "projected_" + std::to_string(from) + "to" + std::to_string(to), spmm(op.matrix, x));
    std::cout << "projected dimension " << from << " -> " << to << "\n";
    return 0;
}

int run_coarsen(const CommonOptions& opt) {
    const GraphData data = load_graph(opt.input);
    const SimplicialComplex c = build_complex(data.graph, opt.max_dim);
    const NodeClustering nc = cluster_nodes(c);
    const CoarseningResult cr = downsample(c, nc);

    {
        auto out = open_output(opt, "clusters.txt");
        for (std::size_t v = 0; v < nc.cluster_of.size(); ++v) {
            out << v << ' ' << nc.cluster_of[v] << '\n';
        }
    }
    for (int k = 0; k <= c.max_dim; ++k) {
        auto out = open_output(opt, "assignment_" + std::to_string(k) + ".coo");
        write_coo(out, cr.assignment[static_cast<std::size_t>(k)]);
    }
    for (int k = 1; k <= c.max_dim; ++k) {
        auto out = open_output(opt, "coarse_boundary_" + std::to_string(k) + ".coo");
        write_coo(out, cr.coarse.boundary[static_cast<std::size_t>(k)]);
    }

    // uniform attention: plain averaging within each cluster
    if (data.node_signals.cols() > 0) {
        AttentionWeights uniform{Vector::Ones(c.num_simplices(0))};
        write_signal(opt, "pooled_0", pool_signal(data.node_signals, uniform, cr.assignment[0]));
    }
    if (data.edge_signals.cols() > 0 && c.max_dim >= 1) {
        AttentionWeights uniform{Vector::Ones(c.num_simplices(1))};
        write_signal(opt, "pooled_1", pool_signal(data.edge_signals, uniform, cr.assignment[1]));
    }
    for (int k = 0; k <= c.max_dim; ++k) {
        std::cout << "dim " << k << ": " << c.num_simplices(k) << " -> " << cr.coarse.num_simplices(k) << "\n";
    }
    return 0;
}

void write_prediction(const CommonOptions& opt, const Vector& prediction) {
    if (opt.format == "json") {
        json values = json::array();
        for (index_t i = 0; i < prediction.size(); ++i) {
            values.push_back(prediction(i));
        }
        auto out = open_output(opt, "prediction.json");
        out << json{{"prediction", std::move(values)}}.dump(2) << "\n";
    } else {
        auto out = open_output(opt, "prediction.csv");
        std::vector<std::vector<std::string>> rows;
        for (index_t i = 0; i < prediction.size(); ++i) {
            rows.push_back({std::to_string(i), format_double(prediction(i))});
        }
        write_csv(out, {"index", "value"}, rows);
    }
    std::cout << "prediction:";
    for (index_t i = 0; i < prediction.size(); ++i) {
        std::cout << ' ' << format_double(prediction(i));
    }
    std::cout << "\n";
}

int run_forward(const CommonOptions& opt, const std::string& params_path, const std::string& config_path) {
    const GraphData data = load_graph(opt.input);
    const ModelConfig cfg = load_config(config_path);
    const ModelParams params = load_params(params_path);
    const SimplicialComplex c = build_complex(data.graph, cfg.max_dim);
    const Signal x0 = default_signal(c.num_simplices(0), data.node_signals);
    const Signal x1 = default_signal(c.num_simplices(1), data.edge_signals);
    Vector prediction;
    try {
        prediction = forward(c, x0, x1, params, cfg, opt.seed);
    } catch (const std::invalid_argument& err) {
        throw DataError(err.what());
    }
    write_prediction(opt, prediction);
    return 0;
}

int run_demo(const CommonOptions& opt) {
    const GraphData data = load_graph(opt.input);
    const ModelConfig cfg = demo_config();
    const SimplicialComplex c = build_complex(data.graph, cfg.max_dim);
    const Signal x0 = default_signal(c.num_simplices(0), data.node_signals);
    const Signal x1 = default_signal(c.num_simplices(1), data.edge_signals);
    const ModelParams params = init_params(cfg, x0.cols(), x1.cols(), opt.seed);

    fs::create_directories(opt.output);
    save_config(cfg, (fs::path(opt.output) / "demo_config.json").string());
    save_params(params, (fs::path(opt.output) / "demo_params.json").string());

    const Vector prediction = forward(c, x0, x1, params, cfg, opt.seed);
    write_prediction(opt, prediction);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral filtering, projection, and attention pooling on simplicial complexes"};
    app.require_subcommand(1);

    CommonOptions opt;
    int dim_k = 0;
    index_t count = 0;
    bool vectors = false;
    std::string theta_arg;
    std::string filters_path;
    int from_dim = 1;
    int to_dim = 0;
    index_t delta = -1;
    std::string params_path;
    std::string config_path;

    CLI::App* complex_cmd = app.add_subcommand("complex", "build the clique complex and export boundary operators");
    add_common(complex_cmd, opt);

    CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues of a Hodge-Laplacian operator");
    add_common(spectrum_cmd, opt);
    spectrum_cmd->add_option("--k", dim_k, "simplex dimension")->check(CLI::Range(0, 8));
    spectrum_cmd->add_option("--count", count, "number of eigenpairs (0 = all)");
    spectrum_cmd->add_flag("--vectors", vectors, "also export eigenvectors");

    CLI::App* filter_cmd = app.add_subcommand("filter", "apply a polynomial spectral filter to the stored signals");
    add_common(filter_cmd, opt);
    filter_cmd->add_option("--k", dim_k, "simplex dimension")->check(CLI::Range(0, 8));
    filter_cmd->add_option("--theta", theta_arg, "inline coefficients, e.g. 1,0.5,-0.2");
    filter_cmd->add_option("--filters", filters_path, "filter bank JSON file");

    CLI::App* project_cmd = app.add_subcommand("project", "project signals between simplex dimensions");
    add_common(project_cmd, opt);
    project_cmd->add_option("--from", from_dim, "source dimension")->required()->check(CLI::Range(0, 8));
    project_cmd->add_option("--to", to_dim, "target dimension")->required()->check(CLI::Range(0, 8));
    project_cmd->add_option("--delta", delta, "project a unit pulse at this simplex index");

    CLI::App* coarsen_cmd = app.add_subcommand("coarsen", "cluster nodes and downsample the complex");
    add_common(coarsen_cmd, opt);

    CLI::App* forward_cmd = app.add_subcommand("forward", "run the forward pipeline with stored parameters");
    add_common(forward_cmd, opt);
    forward_cmd->add_option("--params", params_path, "model parameter JSON file")->required();
    forward_cmd->add_option("--config", config_path, "model config JSON file")->required();

    CLI::App* demo_cmd = app.add_subcommand("demo", "seeded random-parameter forward pass");
    add_common(demo_cmd, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (complex_cmd->parsed()) {
            return run_complex(opt);
        }
        if (spectrum_cmd->parsed()) {
            return run_spectrum(opt, dim_k, count, vectors);
        }
        if (filter_cmd->parsed()) {
            if (theta_arg.empty() == filters_path.empty()) {
                std::cerr << "filter: pass exactly one of --theta or --filters\n";
                return 1;
            }
            return run_filter(opt, dim_k, theta_arg, filters_path);
        }
        if (project_cmd->parsed()) {
            return run_project(opt, from_dim, to_dim, delta);
        }
        if (coarsen_cmd->parsed()) {
            return run_coarsen(opt);
        }
        if (forward_cmd->parsed()) {
            return run_forward(opt, params_path, config_path);
        }
        if (demo_cmd->parsed()) {
            return run_demo(opt);
        }
    } catch (const DataError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::out_of_range& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "internal error: " << err.what() << "\n";
        return 2;
    }
    return 1;
}
