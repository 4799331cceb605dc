#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fsi/ops.hpp"
#include "fsi/transform.hpp"

#include <cmath>
#include <random>

using namespace fsi;

namespace {

Grid smallGrid(int M = 1, double L = 2 * M_PI, double h = 2, double h_e = 1, int Ns = 4,
               int Nf = 4) {
    DomainConfig c;
    c.L = L;
    c.h = h;
    c.h_s = h_e;
    c.h_e = h_e;
    c.M = M;
    c.Ns = Ns;
    c.Nf = Nf;
    return Grid(c);
}

} // namespace

TEST_CASE("build_grid: mode enumeration and vertical nodes") {
    Grid g = smallGrid();
    CHECK(g.modes().count() == 9);
    // solid vertex nodes {0, 0.25, 0.5, 0.75, 1}
    const auto& vt = g.solid().vertices();
    REQUIRE(vt.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(vt[i] == doctest::Approx(0.25 * i).epsilon(1e-15));
    // lexicographic enumeration
    CHECK(g.modes().mode(0).k1 == -1);
    CHECK(g.modes().mode(0).k2 == -1);
    CHECK(g.modes().mode(8).k1 == 1);
    CHECK(g.modes().mode(8).k2 == 1);

    DomainConfig bad;
    bad.M = 0;
    CHECK_THROWS_AS(Grid{bad}, ConfigError);
}

TEST_CASE("mode eigenvalues") {
    Grid g = smallGrid(2, 1.0);
    int j = g.modes().index_of(1, 0);
    CHECK(g.modes().eigenvalue(j) == doctest::Approx(4 * M_PI * M_PI).epsilon(1e-14));
}

TEST_CASE("transform round trip is exact on band-limited data") {
    Grid g = smallGrid(3, 1.7);
    HorizontalTransform tr(g.modes());
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-1, 1);
    Eigen::MatrixXd coef(5, g.modes().count());
    for (int r = 0; r < coef.rows(); ++r)
        for (int c = 0; c < coef.cols(); ++c) coef(r, c) = uni(rng);
    Eigen::MatrixXd back = tr.toModes(tr.toPhys(coef));
    CHECK((back - coef).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("horizontal_derivative: Fourier differentiation") {
    Grid g = smallGrid(2, 3.0);
    HorizontalTransform tr(g.modes());

    SUBCASE("constant maps to zero") {
        Field f = makeTrace(g, 1);
        f.c[0](0, g.modes().zero_index()) = 4.2;
        CHECK(horizontal_derivative(g, f, 1).coefNorm() == 0.0);
        CHECK(horizontal_derivative(g, f, 2).coefNorm() == 0.0);
    }

    SUBCASE("sin(2 pi x1 / L) -> (2 pi / L) cos(2 pi x1 / L)") {
        Field f = makeTrace(g, 1);
        int jp = g.modes().index_of(1, 0);
        int js = g.modes().conj_index(jp);
        f.c[0](0, js) = 1.0; // sin coefficient
        Field d = horizontal_derivative(g, f, 1);
        const double b = 2 * M_PI / 3.0;
        CHECK(d.c[0](0, jp) == doctest::Approx(b).epsilon(1e-15));
        CHECK(std::abs(d.c[0](0, js)) < 1e-16);
    }

    SUBCASE("annihilates exactly the zero mode and no other") {
        for (int j = 0; j < g.modes().count(); ++j) {
            Field f = makeTrace(g, 1);
            f.c[0](0, j) = 1.0;
            double n1 = horizontal_derivative(g, f, 1).coefNorm();
            double n2 = horizontal_derivative(g, f, 2).coefNorm();
            if (g.modes().is_zero(j))
                CHECK(n1 + n2 == 0.0);
            else
                CHECK(n1 + n2 > 0.0);
        }
    }

    SUBCASE("pointwise agreement with analytic derivative") {
        Field f = makeTrace(g, 1);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> uni(-1, 1);
        for (int j = 0; j < g.modes().count(); ++j) f.c[0](0, j) = uni(rng);
        Field d = horizontal_derivative(g, f, 2);
        // finite-difference oracle on the synthesized function
        auto eval = [&](double x1, double x2) {
            double acc = 0;
            for (int j = 0; j < g.modes().count(); ++j) {
                const auto& m = g.modes().mode(j);
                double ph = 2 * M_PI * (m.k1 * x1 + m.k2 * x2) / 3.0;
                double b =
                    m.kind == HorizontalMode::Kind::Constant
                        ? 1.0
                        : (m.kind == HorizontalMode::Kind::Cos ? std::cos(ph) : -std::sin(ph));
                acc += f.c[0](0, j) * b;
            }
            return acc;
        };
        auto evald = [&](double x1, double x2) {
            double acc = 0;
            for (int j = 0; j < g.modes().count(); ++j) {
                const auto& m = g.modes().mode(j);
                double ph = 2 * M_PI * (m.k1 * x1 + m.k2 * x2) / 3.0;
                double b =
                    m.kind == HorizontalMode::Kind::Constant
                        ? 1.0
                        : (m.kind == HorizontalMode::Kind::Cos ? std::cos(ph) : -std::sin(ph));
                acc += d.c[0](0, j) * b;
            }
            return acc;
        };
        const double h = 1e-6;
        for (double x1 : {0.3, 1.1}) {
            for (double x2 : {0.0, 0.7}) {
                double fd = (eval(x1, x2 + h) - eval(x1, x2 - h)) / (2 * h);
                CHECK(evald(x1, x2) == doctest::Approx(fd).epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("horizontal_average") {
    Grid g = smallGrid(2, 1.0);
    SUBCASE("oscillatory basis functions average to zero") {
        TraceField e1 = basisTrace(g, 1, 0, HorizontalMode::Kind::Cos);
        auto m = horizontal_average(g, e1);
        CHECK(std::abs(m(0, 0)) < 1e-16);
    }
    SUBCASE("linearity: 3 + e_1 -> 3") {
        TraceField f = basisTrace(g, 1, 0, HorizontalMode::Kind::Cos);
        f.c[0](0, g.modes().zero_index()) += 3.0;
        CHECK(horizontal_average(g, f)(0, 0) == doctest::Approx(3.0).epsilon(1e-15));
    }
}

TEST_CASE("fractional_norm") {
    Grid g = smallGrid(2, 1.3);

    SUBCASE("single orthonormal mode: ||e_n||_{H^s} = lambda_n^{s/2}") {
        for (auto kind : {HorizontalMode::Kind::Cos, HorizontalMode::Kind::Sin}) {
            TraceField e = basisTrace(g, 1, 2, kind);
            double lam = g.modes().eigenvalue(g.modes().index_of(1, 2));
            CHECK(fractional_norm(g, e, 1.5) ==
                  doctest::Approx(std::pow(lam, 0.75)).epsilon(1e-14));
            CHECK(fractional_norm(g, e, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
        }
    }

    SUBCASE("constant c has norm |c| for any s") {
        TraceField f = makeTrace(g, 1);
        f.c[0](0, g.modes().zero_index()) = -2.5;
        CHECK(fractional_norm(g, f, 0.0) == doctest::Approx(2.5).epsilon(1e-15));
        CHECK(fractional_norm(g, f, 2.0) == doctest::Approx(2.5).epsilon(1e-15));
    }

    SUBCASE("two equal-eigenvalue modes, s = 1: sqrt(2 lambda)") {
        TraceField f = basisTrace(g, 1, 0, HorizontalMode::Kind::Cos);
        TraceField f2 = basisTrace(g, 0, 1, HorizontalMode::Kind::Cos);
        f += f2;
        double lam = g.modes().eigenvalue(g.modes().index_of(1, 0));
        CHECK(fractional_norm(g, f, 1.0) ==
              doctest::Approx(std::sqrt(2 * lam)).epsilon(1e-14));
    }

    SUBCASE("s = 0 equals the L2(Gamma) norm for zero-average data") {
        TraceField f = basisTrace(g, 2, 1, HorizontalMode::Kind::Sin);
        f *= 0.37;
        HorizontalTransform tr(g.modes());
        Eigen::ArrayXXd phys = tr.toPhys(f.c[0]).array();
        double l2 = std::sqrt(tr.pointWeight() * phys.square().sum());
        CHECK(fractional_norm(g, f, 0.0) == doctest::Approx(l2).epsilon(1e-12));
    }
}

TEST_CASE("sobolev_norm") {
    SUBCASE("zero field and constants") {
        Grid g = smallGrid(2, 1.0, 2.0, 1.0, 6, 6);
        Field f = makeField(g, Slab::Fluid, 1);
        CHECK(sobolev_norm(g, f, 0) == 0.0);
        f.c[0].col(g.modes().zero_index()).setConstant(3.0);
        const double V = 1.0 * 1.0 * 1.0; // L^2 * (h - h_e)
        CHECK(sobolev_norm(g, f, 0) == doctest::Approx(3.0 * std::sqrt(V)).epsilon(1e-14));
    }

    SUBCASE("sin(2 pi x1/L) on the fluid slab, k = 1 (analytic value)") {
        const double L = 2.0;
        Grid g = smallGrid(2, L, 2.0, 1.0, 8, 8);
        Field f = makeField(g, Slab::Fluid, 1);
        int jp = g.modes().index_of(1, 0);
        f.c[0].col(g.modes().conj_index(jp)).setConstant(1.0); // sin coefficient
        const double V = L * L * 1.0;
        const double expect = std::sqrt(V / 2 * (1 + std::pow(2 * M_PI / L, 2)));
        CHECK(sobolev_norm(g, f, 1) == doctest::Approx(expect).epsilon(1e-13));
    }

    SUBCASE("Parseval: H^0 matches high-resolution physical quadrature") {
        Grid g = smallGrid(2, 1.4, 2.0, 1.0, 5, 5);
        HorizontalTransform tr(g.modes());
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> uni(-1, 1);
        Field f = makeField(g, Slab::Fluid, 1);
        for (int r = 0; r < f.nvert(); ++r)
            for (int j = 0; j < f.nmodes(); ++j) f.c[0](r, j) = uni(rng);
        // vertical x horizontal quadrature of |f|^2: Gauss rows are exact for
        // the P2 interpolant, the padded grid is exact in the horizontal
        const auto& vs = g.fluid();
        Eigen::ArrayXXd phys = tr.toPhys(vs.evalQ() * f.c[0]).array();
        double q = tr.pointWeight() * (vs.qweights().transpose() * phys.square().matrix()).sum();
        CHECK(sobolev_norm(g, f, 0) == doctest::Approx(std::sqrt(q)).epsilon(1e-12));
    }
}

TEST_CASE("average commutes with the vertical derivative") {
    Grid g = smallGrid(3, 1.0, 2.0, 1.0, 7, 7);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-1, 1);
    Field f = makeField(g, Slab::Solid, 1);
    for (int r = 0; r < f.nvert(); ++r)
        for (int j = 0; j < f.nmodes(); ++j) f.c[0](r, j) = uni(rng);

    Field df = vertical_derivative(g, f);
    Eigen::VectorXd a1 = horizontal_average(g, df).col(0);
    Eigen::VectorXd prof = horizontal_average(g, f).col(0);
    Field favg = makeField(g, Slab::Solid, 1);
    favg.c[0].col(g.modes().zero_index()) = prof;
    Eigen::VectorXd a2 = horizontal_average(g, vertical_derivative(g, favg)).col(0);
    CHECK((a1 - a2).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("norms are invariant under horizontal translation") {
    Grid g = smallGrid(2, 1.0, 2.0, 1.0, 5, 5);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uni(-1, 1);
    Field f = makeField(g, Slab::Solid, 2);
    for (auto& m : f.c)
        for (int r = 0; r < m.rows(); ++r)
            for (int j = 0; j < m.cols(); ++j) m(r, j) = uni(rng);
    Field sh = horizontal_shift(g, f, 0.271, -0.383);
    for (int k = 0; k <= 2; ++k)
        CHECK(sobolev_norm(g, sh, k) ==
              doctest::Approx(sobolev_norm(g, f, k)).epsilon(1e-12));

    TraceField t = interfaceTrace(g, f);
    TraceField tsh = interfaceTrace(g, sh);
    for (double s : {0.5, 1.5, 2.5})
        CHECK(fractional_norm(g, tsh, s) ==
              doctest::Approx(fractional_norm(g, t, s)).epsilon(1e-12));
}
