#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "simplex/projection.hpp"

#include <random>

using namespace simplex;

namespace {

SimplicialComplex filled_triangle() {
    return build_complex(Graph(3, {{0, 1}, {1, 2}, {0, 2}}), 2);
}

}  // namespace

TEST_CASE("down projection spreads edge signals to endpoints") {
    const SimplicialComplex c = filled_triangle();
    const ProjectionOperator down = project_down(c, 1);
    CHECK(down.from_dim == 1);
    CHECK(down.to_dim == 0);

    Signal delta = Signal::Zero(3, 1);
    delta(0, 0) = 1.0;  // edge (0,1)
    const Signal out = spmm(down.matrix, delta);
    CHECK(out(0, 0) == 1.0);
    CHECK(out(1, 0) == 1.0);
    CHECK(out(2, 0) == 0.0);

    const Signal degrees = spmm(down.matrix, Signal::Ones(3, 1));
    CHECK(degrees(0, 0) == 2.0);
    CHECK(degrees(1, 0) == 2.0);
    CHECK(degrees(2, 0) == 2.0);
}

TEST_CASE("down projection matches the densified incidence oracle") {
    std::mt19937_64 rng(5);
    const SimplicialComplex c = build_complex(oracle::random_graph(rng, 9, 0.5), 2);
    const Signal x = oracle::random_dense(rng, c.num_simplices(1), 3);
    const Signal got = spmm(project_down(c, 1).matrix, x);
    auto abs_b1 = oracle::densify(boundary_operator(c, 1));
    for (auto& row : abs_b1) {
        for (double& v : row) {
            v = std::fabs(v);
        }
    }
    CHECK(oracle::max_abs_diff(oracle::densify(got), oracle::naive_matmul(abs_b1, oracle::densify(x))) <= 1e-12);
}

TEST_CASE("up projection is the structural transpose of down") {
    const SimplicialComplex c = filled_triangle();
    CHECK(project_up(c, 1).matrix == transpose(project_down(c, 1).matrix));

    Signal delta = Signal::Zero(3, 1);
    delta(0, 0) = 1.0;  // node 0
    const Signal out = spmm(project_up(c, 1).matrix, delta);
    CHECK(out(0, 0) == 1.0);  // edge (0,1)
    CHECK(out(1, 0) == 1.0);  // edge (0,2)
    CHECK(out(2, 0) == 0.0);  // edge (1,2)

    CHECK_THROWS_AS(project_down(c, 0), std::out_of_range);
    CHECK_THROWS_AS(project_up(c, 3), std::out_of_range);
}

TEST_CASE("two-step chain on the filled triangle doubles at the nodes") {
    const SimplicialComplex c = filled_triangle();
    const ProjectionOperator chain = project_chain(c, 2, 0);
    Signal delta = Signal::Ones(1, 1);
    const Signal out = spmm(chain.matrix, delta);
    for (index_t v = 0; v < 3; ++v) {
        CHECK(out(v, 0) == 2.0);  // each node touched through two incident edges
    }
}

TEST_CASE("chain of length one equals the single step") {
    const SimplicialComplex c = filled_triangle();
    CHECK(project_chain(c, 1, 0).matrix == project_down(c, 1).matrix);
    CHECK(project_chain(c, 0, 1).matrix == project_up(c, 1).matrix);
    CHECK_THROWS_AS(project_chain(c, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(project_chain(c, 0, 3), std::out_of_range);
}

TEST_CASE("upward chains transpose downward chains on random complexes") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const SimplicialComplex c = build_complex(oracle::random_graph(rng, 9, 0.45), 2);
        for (int from = 0; from <= c.max_dim; ++from) {
            for (int to = 0; to <= c.max_dim; ++to) {
                if (from == to) {
                    continue;
                }
                CHECK(project_chain(c, from, to).matrix == transpose(project_chain(c, to, from).matrix));
            }
        }
    }
}

TEST_CASE("single-step columns hold exactly k+1 ones") {
    std::mt19937_64 rng(7);
    const SimplicialComplex c = build_complex(oracle::random_graph(rng, 10, 0.45), 2);
    for (int k = 1; k <= c.max_dim; ++k) {
        const SparseMatrix& m = project_down(c, k).matrix;
        std::vector<int> per_column(static_cast<std::size_t>(m.cols()), 0);
        for (const Triplet& t : m.entries()) {
            CHECK(t.value == 1.0);
            ++per_column[static_cast<std::size_t>(t.col)];
        }
        for (const int count : per_column) {
            CHECK(count == k + 1);
        }
    }
}

TEST_CASE("interaction layer: zeros, masked pass-through, and widths") {
    const SimplicialComplex c = filled_triangle();
    const ProjectionOperator down = project_down(c, 1);
    const ProjectionOperator up = project_up(c, 1);
    const index_t d = 2;

    MSIWeights w;
    w.concat_k1 = Dense::Zero(2 * d, d);
    w.mix_k1 = Dense::Zero(d, d);
    w.concat_k2 = Dense::Zero(2 * d, d);
    w.mix_k2 = Dense::Zero(d, d);

    std::mt19937_64 rng(8);
    const Signal x0 = oracle::random_dense(rng, 3, d);
    const Signal x1 = oracle::random_dense(rng, 3, d);

    auto [zero0, zero1] = msi_forward(Signal::Zero(3, d), Signal::Zero(3, d), down, up, w);
    CHECK(zero0.cwiseAbs().maxCoeff() == 0.0);
    CHECK(zero1.cwiseAbs().maxCoeff() == 0.0);

    // top-block identity ignores the projected branch entirely
    w.concat_k1.topRows(d) = Dense::Identity(d, d);
    w.mix_k1 = Dense::Identity(d, d);
    w.concat_k2.topRows(d) = Dense::Identity(d, d);
    w.mix_k2 = Dense::Identity(d, d);
    auto [masked0, masked1] = msi_forward(x0, x1, down, up, w);
    CHECK((masked0 - x0.cwiseMax(0.0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((masked1 - x1.cwiseMax(0.0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(masked0.cols() == d);
    CHECK(masked1.cols() == d);

    CHECK_THROWS_AS(msi_forward(x0, oracle::random_dense(rng, 3, d + 1), down, up, w), std::invalid_argument);
    MSIWeights bad = w;
    bad.concat_k1 = Dense::Zero(d, d);
    CHECK_THROWS_AS(msi_forward(x0, x1, down, up, bad), std::invalid_argument);
}

TEST_CASE("interaction layer matches a step-by-step dense oracle") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const SimplicialComplex c = build_complex(oracle::random_graph(rng, 8, 0.5), 2);
        const index_t n0 = c.num_simplices(0);
        const index_t n1 = c.num_simplices(1);
        const index_t d = 3;
        const ProjectionOperator down = project_down(c, 1);
        const ProjectionOperator up = project_up(c, 1);

        MSIWeights w;
        w.concat_k1 = oracle::random_dense(rng, 2 * d, d);
        w.mix_k1 = oracle::random_dense(rng, d, d);
        w.concat_k2 = oracle::random_dense(rng, 2 * d, d);
        w.mix_k2 = oracle::random_dense(rng, d, d);
        const Signal x0 = oracle::random_dense(rng, n0, d);
        const Signal x1 = oracle::random_dense(rng, n1, d);

        auto [got0, got1] = msi_forward(x0, x1, down, up, w);

        auto oracle_side = [d](const oracle::Grid& own, const oracle::Grid& proj_matrix, const oracle::Grid& other, const oracle::Grid& concat_w, const oracle::Grid& mix_w) {
            const oracle::Grid projected = oracle::naive_matmul(proj_matrix, other);
            oracle::Grid cat = oracle::zeros(own.size(), 2 * static_cast<std::size_t>(d));
            for (std::size_t i = 0; i < own.size(); ++i) {
                for (std::size_t j = 0; j < static_cast<std::size_t>(d); ++j) {
                    cat[i][j] = own[i][j];
                    cat[i][static_cast<std::size_t>(d) + j] = projected[i][j];
                }
            }
            oracle::Grid hidden = oracle::naive_matmul(cat, concat_w);
            for (auto& row : hidden) {
                for (double& v : row) {
                    v = std::max(0.0, v);
                }
            }
            return oracle::naive_matmul(hidden, mix_w);
        };
        const auto expected0 = oracle_side(oracle::densify(x0), oracle::densify(down.matrix), oracle::densify(x1), oracle::densify(w.concat_k1), oracle::densify(w.mix_k1));
        const auto expected1 = oracle_side(oracle::densify(x1), oracle::densify(up.matrix), oracle::densify(x0), oracle::densify(w.concat_k2), oracle::densify(w.mix_k2));
        CHECK(oracle::max_abs_diff(oracle::densify(got0), expected0) <= 1e-12);
        CHECK(oracle::max_abs_diff(oracle::densify(got1), expected1) <= 1e-12);
    }
}

TEST_CASE("removing the clamp changes nothing when pre-activations are non-negative") {
    const SimplicialComplex c = filled_triangle();
    const ProjectionOperator down = project_down(c, 1);
    const ProjectionOperator up = project_up(c, 1);
    const index_t d = 2;
    std::mt19937_64 rng(10);

    MSIWeights w;
    w.concat_k1 = oracle::random_dense(rng, 2 * d, d).cwiseAbs();
    w.mix_k1 = oracle::random_dense(rng, d, d);
    w.concat_k2 = oracle::random_dense(rng, 2 * d, d).cwiseAbs();
    w.mix_k2 = oracle::random_dense(rng, d, d);
    const Signal x0 = oracle::random_dense(rng, 3, d).cwiseAbs();
    const Signal x1 = oracle::random_dense(rng, 3, d).cwiseAbs();

    auto [got0, got1] = msi_forward(x0, x1, down, up, w);

    // all inputs and concat weights non-negative -> clamp is the identity
    Signal cat0(3, 2 * d);
    cat0.leftCols(d) = x0;
    cat0.rightCols(d) = spmm(down.matrix, x1);
    const Signal linear0 = (cat0 * w.concat_k1) * w.mix_k1;
    CHECK((got0 - linear0).cwiseAbs().maxCoeff() <= 1e-12);
}
