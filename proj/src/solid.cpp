#include "fsi/solid.hpp"

namespace fsi {

using Eigen::VectorXd;

Field wave_dual(const Grid& g, const Field& eta, const SolidOperatorParams& p) {
    const auto& vs = g.solid();
    const auto& ms = g.modes();
    Field dual = makeField(g, Slab::Solid, eta.ncomp());
    for (int i = 0; i < eta.ncomp(); ++i) {
        Eigen::MatrixXd keta = vs.stiffP2() * eta.c[i];
        Eigen::MatrixXd meta = vs.massP2() * eta.c[i];
        for (int j = 0; j < ms.count(); ++j)
            dual.c[i].col(j) = -p.lambda * (ms.eigenvalue(j) * meta.col(j) + p.scale * keta.col(j));
    }
    return dual;
}

Field wave_apply(const Grid& g, const Field& eta, const SolidOperatorParams& p) {
    const auto& vs = g.solid();
    Field dual = wave_dual(g, eta, p);
    Field out = dual;
    Eigen::LDLT<Eigen::MatrixXd> mass(vs.massP2());
    for (int i = 0; i < eta.ncomp(); ++i) out.c[i] = mass.solve(dual.c[i]);
    return out;
}

SolidState equilibrium_displacement(const Grid& g) {
    const auto& cfg = g.config();
    const auto& vs = g.solid();
    SolidState s;
    s.eta = makeField(g, Slab::Solid, 3);
    s.v = makeField(g, Slab::Solid, 3);
    const double a = cfg.g / (2.0 * cfg.lambda) * (cfg.h_s * cfg.h_s) / (cfg.h_e * cfg.h_e);
    const int j0 = g.modes().zero_index();
    for (int r = 0; r < vs.np2(); ++r) {
        const double z = vs.nodes()[r];
        s.eta.c[2](r, j0) = a * z * (z - cfg.h_e);
    }
    return s;
}

TraceField solid_traction(const Grid& g, const SolidState& s, const SolidOperatorParams& p) {
    const auto& vs = g.solid();
    const auto& cfg = g.config();
    TraceField t = makeTrace(g, 3);
    const double w = std::sqrt(p.scale); // h_e/h_s
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < g.modes().count(); ++j)
            t.c[i](0, j) = -p.lambda * w * vs.evalDeriv(s.eta.c[i].col(j), cfg.h_e);
    t.c[2](0, g.modes().zero_index()) += p.traction_offset;
    return t;
}

SolidEnergy solid_energy(const Grid& g, const SolidState& s, const SolidOperatorParams& p) {
    const auto& vs = g.solid();
    const auto& ms = g.modes();
    const double L2 = ms.L() * ms.L();
    SolidEnergy e;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < ms.count(); ++j) {
            const double w = ms.is_zero(j) ? L2 : 0.5 * L2;
            e.kinetic += 0.5 * w * vs.ip_mass(s.v.c[i].col(j), s.v.c[i].col(j));
            e.elastic += 0.5 * p.lambda * w *
                         (ms.eigenvalue(j) * vs.ip_mass(s.eta.c[i].col(j), s.eta.c[i].col(j)) +
                          p.scale * vs.ip_stiff(s.eta.c[i].col(j), s.eta.c[i].col(j)));
        }
    // g * int eta^3: only the mean mode survives the horizontal integral
    VectorXd prof = s.eta.c[2].col(ms.zero_index());
    e.gravitational = p.g * L2 * vs.qweights().dot(vs.evalQ() * prof);
    return e;
}

} // namespace fsi
