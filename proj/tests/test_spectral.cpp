#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "simplex/spectral.hpp"

#include <random>
#include <set>

using namespace simplex;

namespace {

SimplicialComplex filled_triangle() {
    return build_complex(Graph(3, {{0, 1}, {1, 2}, {0, 2}}), 2);
}

FilterBank random_bank(std::mt19937_64& rng, int k, int order, index_t d_in, index_t d_out) {
    FilterBank fb;
    fb.k = k;
    for (int p = 0; p < order; ++p) {
        fb.theta.push_back(oracle::random_dense(rng, d_in, d_out));
    }
    return fb;
}

/// Scalar Laguerre values by direct recurrence, independent of the
/// library path.
double laguerre_scalar(int p, double x) {
    double prev = 1.0;
    if (p == 0) {
        return prev;
    }
    double cur = 1.0 - x;
    for (int q = 1; q < p; ++q) {
        const double next = ((2.0 * q + 1.0 - x) * cur - q * prev) / (q + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace

TEST_CASE("node Laplacian of the triangle is degree minus adjacency with spectrum {0,3,3}") {
    const SimplicialComplex c = filled_triangle();
    const HLOperator l0 = hodge_laplacian(c, 0);
    for (index_t i = 0; i < 3; ++i) {
        for (index_t j = 0; j < 3; ++j) {
            CHECK(l0.matrix.value_at(i, j) == (i == j ? 2.0 : -1.0));
        }
    }
    const EigenSystem es = eigensystem(l0);
    CHECK(std::fabs(es.eigenvalues(0)) <= 1e-8);
    CHECK(std::fabs(es.eigenvalues(1) - 3.0) <= 1e-8);
    CHECK(std::fabs(es.eigenvalues(2) - 3.0) <= 1e-8);
}

TEST_CASE("edge Laplacian of the filled triangle is three times the identity") {
    const SimplicialComplex c = filled_triangle();
    const HLOperator l1 = hodge_laplacian(c, 1);
    CHECK(l1.matrix == spgemm(SparseMatrix::identity(3), SparseMatrix(3, 3, {{0, 0, 3.0}, {1, 1, 3.0}, {2, 2, 3.0}})));
}

TEST_CASE("edge Laplacian of a path has no upper term") {
    const SimplicialComplex c = build_complex(Graph(3, {{0, 1}, {1, 2}}), 2);
    const SparseMatrix& b1 = boundary_operator(c, 1);
    CHECK(hodge_laplacian(c, 1).matrix == spgemm(transpose(b1), b1));
}

TEST_CASE("Laplacians are symmetric, positive semidefinite, and degree-minus-adjacency at dimension zero") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 15; ++trial) {
        const Graph g = oracle::random_graph(rng, 9, 0.4);
        const SimplicialComplex c = build_complex(g, 2);
        for (int k = 0; k <= c.max_dim; ++k) {
            const HLOperator l = hodge_laplacian(c, k);
            CHECK(l.matrix == transpose(l.matrix));
            if (l.size() > 0) {
                const EigenSystem es = eigensystem(l);
                CHECK(es.eigenvalues.minCoeff() >= -1e-9);
            }
        }
        // dimension 0: diagonal = degree, off-diagonal = -adjacency
        const auto dense = oracle::densify(hodge_laplacian(c, 0).matrix);
        std::vector<double> degree(static_cast<std::size_t>(g.num_nodes()), 0.0);
        for (const auto& [u, v] : g.edges()) {
            degree[static_cast<std::size_t>(u)] += 1.0;
            degree[static_cast<std::size_t>(v)] += 1.0;
        }
        for (index_t i = 0; i < g.num_nodes(); ++i) {
            for (index_t j = 0; j < g.num_nodes(); ++j) {
                const bool adjacent = std::binary_search(g.edges().begin(), g.edges().end(), std::pair<index_t, index_t>{std::min(i, j), std::max(i, j)});
                const double expected = i == j ? degree[static_cast<std::size_t>(i)] : (adjacent ? -1.0 : 0.0);
                CHECK(dense[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == expected);
            }
        }
    }
    CHECK_THROWS_AS(hodge_laplacian(filled_triangle(), 3), std::out_of_range);
}

TEST_CASE("eigensystem diagnostics: kernel, orthonormality, residuals, clamping") {
    // two components -> kernel of dimension two
    const SimplicialComplex c = build_complex(Graph(5, {{0, 1}, {1, 2}, {3, 4}}), 1);
    const EigenSystem es = eigensystem(hodge_laplacian(c, 0));
    int kernel = 0;
    for (index_t j = 0; j < es.eigenvalues.size(); ++j) {
        if (std::fabs(es.eigenvalues(j)) <= 1e-9) {
            ++kernel;
        }
    }
    CHECK(kernel == 2);

    const Dense gram = es.eigenvectors.transpose() * es.eigenvectors;
    CHECK((gram - Dense::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-8);

    const Dense lap = hodge_laplacian(c, 0).matrix.to_dense();
    for (index_t j = 0; j < es.eigenvalues.size(); ++j) {
        const double residual = (lap * es.eigenvectors.col(j) - es.eigenvalues(j) * es.eigenvectors.col(j)).cwiseAbs().maxCoeff();
        CHECK(residual <= 1e-8 * std::max(1.0, es.eigenvalues(j)));
    }

    const EigenSystem clamped = eigensystem(hodge_laplacian(c, 0), 12);
    CHECK(clamped.eigenvalues.size() == 5);
    const EigenSystem partial = eigensystem(hodge_laplacian(c, 0), 2);
    CHECK(partial.eigenvalues.size() == 2);
    CHECK_FALSE(partial.complete());
}

TEST_CASE("eigensystem of an empty level is empty and complete") {
    const SimplicialComplex c = build_complex(Graph(3, {{0, 1}, {1, 2}}), 2);
    const EigenSystem es = eigensystem(hodge_laplacian(c, 2));
    CHECK(es.eigenvalues.size() == 0);
    CHECK(es.complete());
    const Signal out = filter_exact(es, [](double v) { return v; }, Signal(0, 3));
    CHECK(out.rows() == 0);
    CHECK(out.cols() == 3);
}

TEST_CASE("connected Laplacian kernel is the constant vector") {
    const EigenSystem es = eigensystem(hodge_laplacian(filled_triangle(), 0));
    CHECK(std::fabs(es.eigenvalues(0)) <= 1e-10);
    const Vector v = es.eigenvectors.col(0);
    CHECK((v.array() - v(0)).abs().maxCoeff() <= 1e-10);
    CHECK(v(0) > 0.0);  // deterministic sign convention
}

TEST_CASE("laguerre_eval base cases and frozen values") {
    const Dense t = laguerre_eval(4, {0.0, 1.0, 2.0});
    for (int p = 0; p < 4; ++p) {
        CHECK(t(0, p) == 1.0);  // T_p(0) = 1
    }
    CHECK(t(1, 0) == 1.0);      // T_0 = 1 everywhere
    CHECK(t(2, 0) == 1.0);
    CHECK(t(1, 1) == 0.0);      // T_1 = 1 - x
    CHECK(t(2, 1) == -1.0);
    CHECK(t(1, 2) == doctest::Approx(-0.5).epsilon(1e-15));   // (x^2 - 4x + 2)/2 at 1
    CHECK(t(2, 2) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(t(2, 3) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(laguerre_eval(0, {1.0}), std::invalid_argument);
}

TEST_CASE("filter_exact: identity, zero, and operator spectra") {
    std::mt19937_64 rng(77);
    const SimplicialComplex c = build_complex(oracle::random_graph(rng, 8, 0.5), 2);
    for (int k = 0; k <= 1; ++k) {
        const HLOperator l = hodge_laplacian(c, k);
        if (l.size() == 0) {
            continue;
        }
        const EigenSystem es = eigensystem(l);
        const Signal x = oracle::random_dense(rng, l.size(), 3);

        CHECK((filter_exact(es, [](double) { return 1.0; }, x) - x).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK(filter_exact(es, [](double) { return 0.0; }, x).cwiseAbs().maxCoeff() == 0.0);
        const Signal lx = spmm(l.matrix, x);
        CHECK((filter_exact(es, [](double v) { return v; }, x) - lx).cwiseAbs().maxCoeff() <= 1e-8);
    }

    const HLOperator l0 = hodge_laplacian(c, 0);
    const EigenSystem partial = eigensystem(l0, 2);
    CHECK_THROWS_AS(filter_exact(partial, [](double) { return 1.0; }, oracle::random_dense(rng, l0.size(), 1)), std::invalid_argument);
}

TEST_CASE("filter_poly base cases and shape checks") {
    const SimplicialComplex c = filled_triangle();
    const HLOperator l1 = hodge_laplacian(c, 1);
    std::mt19937_64 rng(78);
    const Signal x = oracle::random_dense(rng, 3, 1);

    FilterBank identity_bank;
    identity_bank.k = 1;
    identity_bank.theta.push_back(Dense::Identity(1, 1));
    CHECK((filter_poly(l1, identity_bank, x) - x).cwiseAbs().maxCoeff() == 0.0);

    FilterBank wrong_dim = identity_bank;
    wrong_dim.k = 0;
    CHECK_THROWS_AS(filter_poly(l1, wrong_dim, x), std::invalid_argument);
    CHECK_THROWS_AS(filter_poly(l1, identity_bank, oracle::random_dense(rng, 2, 1)), std::invalid_argument);
    CHECK_THROWS_AS(filter_poly(l1, identity_bank, oracle::random_dense(rng, 3, 2)), std::invalid_argument);
}

TEST_CASE("filter_poly on an empty level returns an empty signal") {
    const SimplicialComplex c = build_complex(Graph(3, {{0, 1}, {1, 2}}), 2);
    const HLOperator l2 = hodge_laplacian(c, 2);
    std::mt19937_64 rng(79);
    FilterBank fb = random_bank(rng, 2, 3, 2, 5);
    const Signal out = filter_poly(l2, fb, Signal(0, 2));
    CHECK(out.rows() == 0);
    CHECK(out.cols() == 5);
}

TEST_CASE("polynomial filter agrees with the exact spectral path") {
    std::mt19937_64 rng(80);
    for (int trial = 0; trial < 20; ++trial) {
        const SimplicialComplex c = build_complex(oracle::random_graph(rng, 9, 0.45), 2);
        for (int k = 0; k <= c.max_dim; ++k) {
            const HLOperator l = hodge_laplacian(c, k);
            if (l.size() == 0) {
                continue;
            }
            const int order = 1 + static_cast<int>(rng() % 6);
            const FilterBank fb = random_bank(rng, k, order, 2, 3);
            const Signal x = oracle::random_dense(rng, l.size(), 2);
            const Signal fast = filter_poly(l, fb, x);

            const EigenSystem es = eigensystem(l);
            Signal exact = Signal::Zero(l.size(), 3);
            for (index_t in = 0; in < 2; ++in) {
                for (index_t out = 0; out < 3; ++out) {
                    const Signal channel = filter_exact(es, [&](double lambda) {
                        double h = 0.0;
                        for (int p = 0; p < order; ++p) {
                            h += fb.theta[static_cast<std::size_t>(p)](in, out) * laguerre_scalar(p, lambda);
                        }
                        return h;
                    }, x.col(in));
                    exact.col(out) += channel;
                }
            }
            CHECK((fast - exact).cwiseAbs().maxCoeff() <= 1e-8);
        }
    }
}

TEST_CASE("optional spectrum scaling matches the rescaled exact path") {
    std::mt19937_64 rng(81);
    const SimplicialComplex c = build_complex(oracle::random_graph(rng, 8, 0.5), 2);
    const HLOperator l = hodge_laplacian(c, 0);
    const FilterBank fb = random_bank(rng, 0, 4, 1, 1);
    const Signal x = oracle::random_dense(rng, l.size(), 1);
    const double scale = 4.0;

    const Signal fast = filter_poly(l, fb, x, scale);
    const EigenSystem es = eigensystem(l);
    const Signal exact = filter_exact(es, [&](double lambda) {
        double h = 0.0;
        for (int p = 0; p < fb.order(); ++p) {
            h += fb.theta[static_cast<std::size_t>(p)](0, 0) * laguerre_scalar(p, lambda / scale);
        }
        return h;
    }, x);
    CHECK((fast - exact).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("order-P filtering of a delta stays inside the (P-1)-hop neighborhood") {
    std::mt19937_64 rng(82);
    for (int trial = 0; trial < 10; ++trial) {
        const SimplicialComplex c = build_complex(oracle::random_graph(rng, 9, 0.4), 2);
        for (int k = 0; k <= c.max_dim; ++k) {
            const HLOperator l = hodge_laplacian(c, k);
            if (l.size() == 0) {
                continue;
            }
            const index_t seed = static_cast<index_t>(rng() % static_cast<std::uint64_t>(l.size()));
            for (int order = 1; order <= 4; ++order) {
                const FilterBank fb = random_bank(rng, k, order, 1, 1);
                Signal delta = Signal::Zero(l.size(), 1);
                delta(seed, 0) = 1.0;
                const Signal out = filter_poly(l, fb, delta);
                const auto allowed = hop_neighborhood(c, k, seed, order - 1);
                const std::set<index_t> inside(allowed.begin(), allowed.end());
                for (index_t i = 0; i < out.rows(); ++i) {
                    if (!inside.count(i)) {
                        CHECK(out(i, 0) == 0.0);
                    }
                }
            }
        }
    }
}

TEST_CASE("filter_poly is linear in coefficients and in the signal") {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 10; ++trial) {
        const SimplicialComplex c = build_complex(oracle::random_graph(rng, 8, 0.5), 2);
        const int k = c.max_dim >= 1 ? static_cast<int>(rng() % 2) : 0;
        const HLOperator l = hodge_laplacian(c, k);
        if (l.size() == 0) {
            continue;
        }
        const FilterBank fa = random_bank(rng, k, 4, 2, 2);
        FilterBank fsum = fa;
        const FilterBank fbk = random_bank(rng, k, 4, 2, 2);
        for (int p = 0; p < 4; ++p) {
            fsum.theta[static_cast<std::size_t>(p)] += fbk.theta[static_cast<std::size_t>(p)];
        }
        const Signal xa = oracle::random_dense(rng, l.size(), 2);
        const Signal xb = oracle::random_dense(rng, l.size(), 2);

        const Signal lhs_theta = filter_poly(l, fsum, xa);
        const Signal rhs_theta = filter_poly(l, fa, xa) + filter_poly(l, fbk, xa);
        CHECK((lhs_theta - rhs_theta).cwiseAbs().maxCoeff() <= 1e-10);

        const Signal lhs_signal = filter_poly(l, fa, xa + xb);
        const Signal rhs_signal = filter_poly(l, fa, xa) + filter_poly(l, fa, xb);
        CHECK((lhs_signal - rhs_signal).cwiseAbs().maxCoeff() <= 1e-10);
    }
}
