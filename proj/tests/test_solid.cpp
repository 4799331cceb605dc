#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fsi/solid.hpp"

#include <cmath>
#include <random>

using namespace fsi;

namespace {

Grid mkGrid(double g_, double lambda, double h_s = 1.0, double h_e = -1.0, int M = 1,
            int Ns = 16) {
    DomainConfig c;
    c.L = 1.0;
    c.h = 2.0;
    c.h_s = h_s;
    c.h_e = h_e;
    c.g = g_;
    c.lambda = lambda;
    c.M = M;
    c.Ns = Ns;
    c.Nf = 4;
    c.lambda_over_g_min = 0.0;
    return Grid(c);
}

} // namespace

TEST_CASE("equilibrium displacement formulas") {
    SUBCASE("g = 0 gives zero displacement") {
        Grid g = mkGrid(0.0, 1.0);
        CHECK(equilibrium_displacement(g).eta.coefNorm() == 0.0);
    }
    SUBCASE("g=2, lambda=1, h_s=h_e=1: eta_e^3(1/2) = -1/4") {
        Grid g = mkGrid(2.0, 1.0);
        SolidState s = equilibrium_displacement(g);
        const auto& vs = g.solid();
        double v = vs.eval(s.eta.c[2].col(g.modes().zero_index()), 0.5);
        CHECK(v == doctest::Approx(-0.25).epsilon(1e-15));
        // vanishes at both ends (factor form)
        CHECK(std::abs(s.eta.c[2](0, g.modes().zero_index())) < 1e-16);
        CHECK(std::abs(s.eta.c[2](vs.np2() - 1, g.modes().zero_index())) < 1e-16);
    }
    SUBCASE("h-shift formula (g/2l)(h_s^2/h_e^2) x3 (x3 - h_e)") {
        Grid g = mkGrid(1.0, 2.0, 1.0, 0.8);
        SolidState s = equilibrium_displacement(g);
        const auto& vs = g.solid();
        const double a = 1.0 / (2 * 2.0) * (1.0 / (0.8 * 0.8));
        for (double z : {0.2, 0.5, 0.7})
            CHECK(vs.eval(s.eta.c[2].col(g.modes().zero_index()), z) ==
                  doctest::Approx(a * z * (z - 0.8)).epsilon(1e-14));
    }
}

TEST_CASE("wave_apply") {
    SUBCASE("equilibrium: interior value is g d3 (so v_t = 0)") {
        Grid g = mkGrid(1.5, 3.0);
        SolidOperatorParams p = SolidOperatorParams::fromConfig(g.config());
        SolidState s = equilibrium_displacement(g);
        Field w = wave_apply(g, s.eta, p);
        const int j0 = g.modes().zero_index();
        // skip rows near both boundaries (natural-flux pollution)
        for (int r = 4; r < g.solid().np2() - 4; ++r) {
            CHECK(w.c[2](r, j0) == doctest::Approx(1.5).epsilon(1e-9));
            CHECK(std::abs(w.c[0](r, j0)) < 1e-12);
        }
    }
    SUBCASE("vertical eigenfunction with scale") {
        Grid g = mkGrid(0.0, 2.0, 1.0, 0.9, 1, 32);
        SolidOperatorParams p = SolidOperatorParams::fromConfig(g.config());
        const auto& vs = g.solid();
        Field eta = makeField(g, Slab::Solid, 3);
        const int j0 = g.modes().zero_index();
        const double he = g.config().h_e;
        for (int r = 0; r < vs.np2(); ++r)
            eta.c[2](r, j0) = std::sin(M_PI * vs.nodes()[r] / he);
        Field w = wave_apply(g, eta, p);
        const double expect = -2.0 * p.scale * std::pow(M_PI / he, 2);
        for (int r = 8; r < vs.np2() - 8; ++r)
            CHECK(w.c[2](r, j0) ==
                  doctest::Approx(expect * std::sin(M_PI * vs.nodes()[r] / he)).epsilon(2e-4));
    }
    SUBCASE("horizontal single mode: -lambda lambda_n e_n") {
        Grid g = mkGrid(0.0, 2.5, 1.0, -1.0, 2, 8);
        SolidOperatorParams p = SolidOperatorParams::fromConfig(g.config());
        Field eta = makeField(g, Slab::Solid, 3);
        int jp = g.modes().index_of(1, 2);
        if (!g.modes().is_positive(jp)) jp = g.modes().conj_index(jp);
        Eigen::VectorXd prof(g.solid().np2());
        for (int r = 0; r < prof.size(); ++r) prof[r] = g.solid().nodes()[r]; // zero at Gamma_B
        eta.c[0].col(jp) = prof;
        Field w = wave_apply(g, eta, p);
        const double lam_n = g.modes().eigenvalue(jp);
        for (int r = 3; r < g.solid().np2() - 3; ++r)
            CHECK(w.c[0](r, jp) ==
                  doctest::Approx(-2.5 * lam_n * prof[r]).epsilon(1e-9));
    }
}

TEST_CASE("solid_traction") {
    SUBCASE("equilibrium, h_e = h_s: traction = (0,0,-g h_s/2) = q_e on Gamma") {
        Grid g = mkGrid(1.3, 4.0);
        SolidOperatorParams p = SolidOperatorParams::fromConfig(g.config());
        SolidState s = equilibrium_displacement(g);
        TraceField t = solid_traction(g, s, p);
        const int j0 = g.modes().zero_index();
        CHECK(t.c[2](0, j0) == doctest::Approx(-1.3 * 1.0 / 2).epsilon(1e-13));
        CHECK(std::abs(t.c[0](0, j0)) < 1e-15);
        CHECK(std::abs(t.c[1](0, j0)) < 1e-15);
    }
    SUBCASE("zero displacement, h_e = h_s: zero traction") {
        Grid g = mkGrid(0.7, 4.0);
        SolidOperatorParams p = SolidOperatorParams::fromConfig(g.config());
        SolidState s;
        s.eta = makeField(g, Slab::Solid, 3);
        s.v = makeField(g, Slab::Solid, 3);
        CHECK(solid_traction(g, s, p).coefNorm() == 0.0);
    }
    SUBCASE("zero displacement, h_e != h_s: constant offset lambda (h_s-h_e)/h_s d3") {
        Grid g = mkGrid(0.0, 4.0, 1.0, 0.95);
        SolidOperatorParams p = SolidOperatorParams::fromConfig(g.config());
        SolidState s;
        s.eta = makeField(g, Slab::Solid, 3);
        s.v = makeField(g, Slab::Solid, 3);
        TraceField t = solid_traction(g, s, p);
        CHECK(t.c[2](0, g.modes().zero_index()) ==
              doctest::Approx(4.0 * 0.05 / 1.0).epsilon(1e-14));
    }
    SUBCASE("h-shift equilibrium: traction matches q_e on Gamma-hat") {
        Grid g = mkGrid(1.1, 5.0, 1.0, 0.9);
        SolidOperatorParams p = SolidOperatorParams::fromConfig(g.config());
        SolidState s = equilibrium_displacement(g);
        TraceField t = solid_traction(g, s, p);
        const double expect = -1.1 * 1.0 / 2 + 5.0 * (1.0 - 0.9) / 1.0;
        CHECK(t.c[2](0, g.modes().zero_index()) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("solid_energy") {
    SUBCASE("equilibrium: zero kinetic, closed-form elastic") {
        Grid g = mkGrid(2.0, 3.0);
        SolidOperatorParams p = SolidOperatorParams::fromConfig(g.config());
        SolidState s = equilibrium_displacement(g);
        SolidEnergy e = solid_energy(g, s, p);
        CHECK(e.kinetic == 0.0);
        // (lambda/2) int |eta_e,3|^2 = g^2 L^2 h_s^3 / (24 lambda)
        const double expect = 2.0 * 2.0 * 1.0 * 1.0 / (24.0 * 3.0);
        CHECK(e.elastic == doctest::Approx(expect).epsilon(1e-13));
    }
    SUBCASE("unit velocity: kinetic = V/2") {
        Grid g = mkGrid(0.0, 1.0);
        SolidOperatorParams p = SolidOperatorParams::fromConfig(g.config());
        SolidState s;
        s.eta = makeField(g, Slab::Solid, 3);
        s.v = makeField(g, Slab::Solid, 3);
        s.v.c[0].col(g.modes().zero_index()).setConstant(1.0);
        CHECK(solid_energy(g, s, p).kinetic == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("elastic is quadratic when g = 0") {
        Grid g = mkGrid(0.0, 2.0);
        SolidOperatorParams p = SolidOperatorParams::fromConfig(g.config());
        SolidState s;
        s.eta = makeField(g, Slab::Solid, 3);
        s.v = makeField(g, Slab::Solid, 3);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> uni(-1, 1);
        for (int i = 0; i < 3; ++i)
            for (int r = 1; r < s.eta.nvert(); ++r)
                for (int j = 0; j < s.eta.nmodes(); ++j) s.eta.c[i](r, j) = uni(rng);
        double e1 = solid_energy(g, s, p).elastic;
        s.eta *= 2.0;
        CHECK(solid_energy(g, s, p).elastic == doctest::Approx(4 * e1).epsilon(1e-13));
    }
}

TEST_CASE("wave operator discrete self-adjointness") {
    Grid g = mkGrid(0.0, 1.7, 1.0, 0.85, 2, 6);
    SolidOperatorParams p = SolidOperatorParams::fromConfig(g.config());
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> uni(-1, 1);
    auto randomField = [&]() {
        Field f = makeField(g, Slab::Solid, 3);
        for (int i = 0; i < 3; ++i)
            for (int r = 1; r < f.nvert(); ++r) // keep Gamma_B row zero
                for (int j = 0; j < f.nmodes(); ++j) f.c[i](r, j) = uni(rng);
        return f;
    };
    Field a = randomField(), b = randomField();
    Field da = wave_dual(g, a, p), db = wave_dual(g, b, p);
    // <Sa, b> against <a, Sb> in the coefficient pairing with mode weights
    auto pair = [&](const Field& dual, const Field& f) {
        const auto& ms = g.modes();
        double acc = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < ms.count(); ++j) {
                double w = ms.is_zero(j) ? 1.0 : 0.5;
                acc += w * dual.c[i].col(j).dot(f.c[i].col(j));
            }
        return acc;
    };
    double x = pair(da, b), y = pair(db, a);
    CHECK(x == doctest::Approx(y).epsilon(1e-12));
}

TEST_CASE("vertical eigenvalue error drops at O(h^{2p})") {
    // Rayleigh quotient of the interpolated first eigenfunction
    double prev = 0;
    for (int ns : {8, 16, 32}) {
        Grid g = mkGrid(0.0, 1.0, 1.0, -1.0, 1, ns);
        const auto& vs = g.solid();
        Eigen::VectorXd prof(vs.np2());
        for (int r = 0; r < vs.np2(); ++r) prof[r] = std::sin(M_PI * vs.nodes()[r]);
        double rq = vs.ip_stiff(prof, prof) / vs.ip_mass(prof, prof);
        double err = rq - M_PI * M_PI;
        CHECK(err > 0); // variational bound from above
        if (prev > 0) CHECK(err < prev / 12.0); // ~16x per doubling
        prev = err;
    }
}
