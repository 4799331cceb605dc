#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fsi/extension.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <random>

using namespace fsi;

namespace {

Grid mkGrid(int M, int Nf, double L = 2 * M_PI, double h = 2, double h_e = 1, int Ns = 4) {
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

/// Fine-grid oracle for the mode-(k1,0) Stokes extension: the vertical
/// velocity solves the two-point boundary-value problem
///   u'''' - 2 b^2 u'' + b^4 u = 0,  u(z0) = 1, u(z1) = 0, u'(z0) = u'(z1) = 0
/// (the no-horizontal-slip conditions), discretized with second-order
/// finite differences; u1 = (i/b) u' recovers the horizontal component.
struct ModalOracle {
    Eigen::VectorXd z, u3, du3;
    double b;

    ModalOracle(double b_, double z0, double z1, int n) : b(b_) {
        const double h = (z1 - z0) / (n - 1);
        z.resize(n);
        for (int i = 0; i < n; ++i) z[i] = z0 + h * i;

        using T = Eigen::Triplet<double>;
        std::vector<T> trip;
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
        auto add = [&](int r, int c, double v) {
            if (c >= 0 && c < n) trip.emplace_back(r, c, v);
        };
        const double h2 = h * h, h4 = h2 * h2;
        for (int i = 2; i < n - 2; ++i) {
            add(i, i - 2, 1.0 / h4);
            add(i, i - 1, -4.0 / h4 - 2.0 * b * b / h2);
            add(i, i, 6.0 / h4 + 4.0 * b * b / h2 + b * b * b * b);
            add(i, i + 1, -4.0 / h4 - 2.0 * b * b / h2);
            add(i, i + 2, 1.0 / h4);
        }
        add(0, 0, 1.0);
        rhs[0] = 1.0;
        add(n - 1, n - 1, 1.0);
        add(1, 0, -3.0 / (2 * h));
        add(1, 1, 4.0 / (2 * h));
        add(1, 2, -1.0 / (2 * h));
        add(n - 2, n - 1, 3.0 / (2 * h));
        add(n - 2, n - 2, -4.0 / (2 * h));
        add(n - 2, n - 3, 1.0 / (2 * h));

        Eigen::SparseMatrix<double> A(n, n);
        A.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
        REQUIRE(lu.info() == Eigen::Success);
        u3 = lu.solve(rhs);

        du3.resize(n);
        for (int i = 1; i < n - 1; ++i) du3[i] = (u3[i + 1] - u3[i - 1]) / (2 * h);
        du3[0] = 0;
        du3[n - 1] = 0;
    }
};

// relative H1 error of the (u1, u3) modal pair against the oracle, sampled on
// the oracle grid with trapezoid weights
double oracleH1Error(const Grid& g, const ExtensionResult& er, const ModalOracle& orc,
                     double delta, int jp, int js) {
    const auto& vs = g.fluid();
    const int n = int(orc.z.size());
    const double hz = orc.z[1] - orc.z[0];
    auto ddu3 = [&](int i) {
        if (i == 0) return (2 * orc.u3[0] - 5 * orc.u3[1] + 4 * orc.u3[2] - orc.u3[3]) / (hz * hz);
        if (i == n - 1)
            return (2 * orc.u3[n - 1] - 5 * orc.u3[n - 2] + 4 * orc.u3[n - 3] - orc.u3[n - 4]) /
                   (hz * hz);
        return (orc.u3[i + 1] - 2 * orc.u3[i] + orc.u3[i - 1]) / (hz * hz);
    };
    double num = 0, den = 0;
    for (int i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        const double z = orc.z[i];
        const double u3r = delta * orc.u3[i];
        const double du3r = delta * orc.du3[i];
        const double u1r = -delta * orc.du3[i] / orc.b;
        const double du1r = -delta * ddu3(i) / orc.b;
        const double u3h = vs.eval(er.eta.c[2].col(jp), z);
        const double du3h = vs.evalDeriv(er.eta.c[2].col(jp), z);
        const double u1h = vs.eval(er.eta.c[0].col(js), z);
        const double du1h = vs.evalDeriv(er.eta.c[0].col(js), z);
        num += w * (std::pow(u3h - u3r, 2) + std::pow(du3h - du3r, 2) +
                    std::pow(u1h - u1r, 2) + std::pow(du1h - du1r, 2));
        den += w * (u3r * u3r + du3r * du3r + u1r * u1r + du1r * du1r);
    }
    return std::sqrt(num / den);
}

} // namespace

TEST_CASE("zero trace extends to zero") {
    Grid g = mkGrid(2, 8);
    StokesExtension ext(g);
    ExtensionResult er = ext.extend(makeTrace(g, 3));
    CHECK(er.eta.coefNorm() == 0.0);
    CHECK(er.mean_flux == 0.0);
    CHECK(er.multiplier.coefNorm() == 0.0);
}

TEST_CASE("constant vertical trace: closed-form linear profile") {
    Grid g = mkGrid(2, 16, 1.0, 2.0, 1.0);
    StokesExtension ext(g);
    TraceField t = makeTrace(g, 3);
    const double c = 0.37;
    t.c[2](0, g.modes().zero_index()) = c;
    ExtensionResult er = ext.extend(t);

    const auto& vs = g.fluid();
    const int j0 = g.modes().zero_index();
    for (int r = 0; r < vs.np2(); ++r) {
        const double expect = c * (2.0 - vs.nodes()[r]) / 1.0;
        CHECK(er.eta.c[2](r, j0) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(er.mean_flux == doctest::Approx(-c / 1.0).epsilon(1e-12));
    CHECK(er.eta.c[0].col(j0).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("mode-(1,0) extension against the fine-grid oracle") {
    const double L = 2 * M_PI, h = 2, h_e = 1;
    const double b = 2 * M_PI / L;
    ModalOracle orc(b, h_e, h, 4096);

    const double delta = 1e-2;
    double prev_err = 0;
    for (int nf : {16, 32}) {
        Grid g = mkGrid(2, nf, L, h, h_e);
        StokesExtension ext(g);
        TraceField t = makeTrace(g, 3);
        int jp = g.modes().index_of(1, 0);
        int js = g.modes().conj_index(jp);
        t.c[2](0, jp) = delta;
        ExtensionResult er = ext.extend(t);

        CHECK(er.eta.c[2](0, jp) == doctest::Approx(delta).epsilon(1e-15));
        CHECK(std::abs(er.eta.c[2](g.fluid().np2() - 1, jp)) < 1e-16);

        double err = oracleH1Error(g, er, orc, delta, jp, js);
        if (nf == 16) {
            CHECK(err < 1e-3);
            prev_err = err;
        } else {
            CHECK(err < prev_err / 3.0);
        }
    }
}

TEST_CASE("linearity of the extension operator") {
    Grid g = mkGrid(2, 8);
    StokesExtension ext(g);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(-1, 1);
    TraceField t1 = makeTrace(g, 3), t2 = makeTrace(g, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < g.modes().count(); ++j) {
            t1.c[i](0, j) = uni(rng);
            t2.c[i](0, j) = uni(rng);
        }
    const double a = 1.7, b = -0.4;
    TraceField tc = makeTrace(g, 3);
    for (int i = 0; i < 3; ++i) tc.c[i] = a * t1.c[i] + b * t2.c[i];

    ExtensionResult e1 = ext.extend(t1), e2 = ext.extend(t2), ec = ext.extend(tc);
    Field lin = e1.eta;
    for (int i = 0; i < 3; ++i) lin.c[i] = a * e1.eta.c[i] + b * e2.eta.c[i];
    lin -= ec.eta;
    CHECK(lin.coefNorm() < 1e-12 * (e1.eta.coefNorm() + e2.eta.coefNorm() + 1));
    CHECK(ec.mean_flux == doctest::Approx(a * e1.mean_flux + b * e2.mean_flux).epsilon(1e-12));
}

TEST_CASE("horizontal-derivative commutation and divergence-free shifts") {
    Grid g = mkGrid(2, 10, 1.3);
    StokesExtension ext(g);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> uni(-1, 1);
    TraceField t = makeTrace(g, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < g.modes().count(); ++j) t.c[i](0, j) = uni(rng);

    for (int axis : {1, 2}) {
        TraceField dt_ = horizontal_derivative(g, t, axis);
        ExtensionResult ed = ext.extend(dt_);
        Field dext = horizontal_derivative(g, ext.extend(t).eta, axis);
        dext -= ed.eta;
        CHECK(dext.coefNorm() < 1e-11 * (1 + ed.eta.coefNorm()));
        CHECK(ed.mean_flux == 0.0);
    }
}

TEST_CASE("time differentiation commutes with extension (linearity in t)") {
    Grid g = mkGrid(1, 8);
    StokesExtension ext(g);
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> uni(-1, 1);
    TraceField t0 = makeTrace(g, 3), t1 = makeTrace(g, 3), t2 = makeTrace(g, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < g.modes().count(); ++j) {
            t0.c[i](0, j) = uni(rng);
            t1.c[i](0, j) = uni(rng);
            t2.c[i](0, j) = uni(rng);
        }
    auto at = [&](double s) {
        TraceField t = makeTrace(g, 3);
        for (int i = 0; i < 3; ++i) t.c[i] = t0.c[i] + s * t1.c[i] + s * s * t2.c[i];
        return t;
    };
    const double s0 = 0.3, h = 0.05;
    Field fd = ext.extend(at(s0 + h)).eta;
    fd -= ext.extend(at(s0 - h)).eta;
    fd *= 1.0 / (2 * h);
    TraceField dtr = makeTrace(g, 3);
    for (int i = 0; i < 3; ++i) dtr.c[i] = t1.c[i] + 2 * s0 * t2.c[i];
    Field dv = ext.extend_velocity(dtr).eta;
    fd -= dv;
    CHECK(fd.coefNorm() < 1e-11 * (1 + dv.coefNorm()));
}

TEST_CASE("regularity ratio stays bounded under refinement") {
    double prev = 0;
    for (int nf : {8, 16, 32}) {
        Grid g = mkGrid(2, nf);
        StokesExtension ext(g);
        TraceField t = makeTrace(g, 3);
        t.c[2](0, g.modes().index_of(1, 0)) = 1e-2;
        t.c[0](0, g.modes().index_of(1, 1)) = 5e-3;
        double ratio = extensionRegularityRatio(g, ext, t);
        CHECK(ratio > 0);
        CHECK(ratio < 50.0);
        if (prev > 0) CHECK(ratio < 2.0 * prev + 1.0);
        prev = ratio;
    }
}

TEST_CASE("NaN trace is rejected") {
    Grid g = mkGrid(1, 4);
    StokesExtension ext(g);
    TraceField t = makeTrace(g, 3);
    t.c[2](0, 0) = std::nan("");
    CHECK_THROWS_AS(ext.extend(t), SolverError);
}
