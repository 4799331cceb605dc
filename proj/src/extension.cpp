#include "fsi/extension.hpp"

#include <cmath>

namespace fsi {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cd = std::complex<double>;

StokesExtension::StokesExtension(const Grid& grid) : grid_(&grid) {
    const auto& vs = grid.fluid();
    const auto& ms = grid.modes();
    const int np2 = vs.np2();
    ni_ = np2 - 2; // Dirichlet at both ends
    nq_ = vs.np1();

    const MatrixXd& K = vs.stiffP2();
    const MatrixXd& Mv = vs.massP2();
    const MatrixXd& Mx = vs.mixedMass(); // <q, phi>: np2 x np1
    const MatrixXd& Gx = vs.mixedGrad(); // <q, phi'>: np2 x np1
    const MatrixXd& D = vs.divP2P1();    // <u', r>: np1 x np2

    auto interior = [&](int a) { return 1 + a; }; // interior node -> full node

    const auto& act = ms.active();
    solvers_.resize(act.size()); // [0] unused (zero mode)
    for (size_t s = 1; s < act.size(); ++s) {
        const int j = act[s];
        const double b1 = ms.beta1(j), b2 = ms.beta2(j);
        const double bb = b1 * b1 + b2 * b2;

        const int n = 3 * ni_ + nq_;
        MatrixXcd A = MatrixXcd::Zero(n, n);
        // velocity blocks
        for (int comp = 0; comp < 3; ++comp) {
            const int off = comp * ni_;
            for (int a = 0; a < ni_; ++a)
                for (int b = 0; b < ni_; ++b)
                    A(off + a, off + b) = K(interior(a), interior(b)) + bb * Mv(interior(a), interior(b));
        }
        // pressure coupling and divergence rows
        const int offq = 3 * ni_;
        for (int a = 0; a < ni_; ++a)
            for (int q = 0; q < nq_; ++q) {
                A(0 * ni_ + a, offq + q) = cd(0, b1) * Mx(interior(a), q);
                A(1 * ni_ + a, offq + q) = cd(0, b2) * Mx(interior(a), q);
                A(2 * ni_ + a, offq + q) = -Gx(interior(a), q);
                A(offq + q, 0 * ni_ + a) = cd(0, b1) * Mx(interior(a), q);
                A(offq + q, 1 * ni_ + a) = cd(0, b2) * Mx(interior(a), q);
                A(offq + q, 2 * ni_ + a) = D(q, interior(a));
            }

        ModeSolver& mser = solvers_[s];
        mser.lu.compute(A);
        if (!mser.lu.isInvertible())
            throw SolverError("stokes extension: singular saddle matrix (inf-sup violation?)");

        // lifting: unit Dirichlet value at the bottom (interface) node of one
        // component; top value is zero so only node 0 lifts
        mser.lift = MatrixXcd::Zero(n, 3);
        for (int comp = 0; comp < 3; ++comp) {
            for (int a = 0; a < ni_; ++a)
                mser.lift(comp * ni_ + a, comp) = -(K(interior(a), 0) + bb * Mv(interior(a), 0));
            for (int q = 0; q < nq_; ++q) {
                cd dv = (comp == 2) ? cd(D(q, 0), 0) : cd(0, (comp == 0 ? b1 : b2) * Mx(0, q));
                mser.lift(offq + q, comp) = -dv;
            }
        }
    }
}

ExtensionResult StokesExtension::extend(const TraceField& trace) const {
    const Grid& g = *grid_;
    const auto& vs = g.fluid();
    const auto& ms = g.modes();
    const auto& cfg = g.config();
    if (trace.hasNaN()) throw SolverError("stokes extension: NaN in trace");
    if (trace.ncomp() != 3) throw SolverError("stokes extension: 3-component trace expected");

    ExtensionResult out;
    out.eta = makeField(g, Slab::Fluid, 3);
    out.multiplier = makeField(g, Slab::Fluid, 1, VerticalKind::P1);

    const int np2 = vs.np2();
    const int j0 = ms.zero_index();
    const double depth = cfg.h - cfg.h_e;

    // zero mode: horizontal components are harmonic (linear), the vertical
    // component integrates the constant-divergence constraint
    for (int comp = 0; comp < 3; ++comp) {
        const double c0 = trace.c[comp](0, j0);
        for (int r = 0; r < np2; ++r) {
            const double z = vs.nodes()[r];
            out.eta.c[comp](r, j0) = c0 * (cfg.h - z) / depth;
        }
    }
    out.mean_flux = -trace.c[2](0, j0) / depth;

    // oscillatory modes: one complex solve per cos/sin pair
    const auto& act = ms.active();
    for (size_t s = 1; s < act.size(); ++s) {
        const int j = act[s];
        const int jc = ms.conj_index(j);
        cd bc[3];
        bool nonzero = false;
        for (int comp = 0; comp < 3; ++comp) {
            bc[comp] = 0.5 * cd(trace.c[comp](0, j), -trace.c[comp](0, jc));
            if (bc[comp] != cd(0, 0)) nonzero = true;
        }
        if (!nonzero) continue;

        const ModeSolver& mser = solvers_[s];
        VectorXcd rhs = mser.lift.col(0) * bc[0] + mser.lift.col(1) * bc[1] + mser.lift.col(2) * bc[2];
        VectorXcd sol = mser.lu.solve(rhs);

        for (int comp = 0; comp < 3; ++comp) {
            for (int a = 0; a < ni_; ++a) {
                const cd u = sol[comp * ni_ + a];
                out.eta.c[comp](1 + a, j) = 2.0 * u.real();
                out.eta.c[comp](1 + a, jc) = -2.0 * u.imag();
            }
            out.eta.c[comp](0, j) = trace.c[comp](0, j);
            out.eta.c[comp](0, jc) = trace.c[comp](0, jc);
        }
        for (int q = 0; q < nq_; ++q) {
            const cd f = sol[3 * ni_ + q];
            out.multiplier.c[0](q, j) = 2.0 * f.real();
            out.multiplier.c[0](q, jc) = -2.0 * f.imag();
        }
    }
    return out;
}

double extensionRegularityRatio(const Grid& g, const StokesExtension& ext, const TraceField& trace) {
    double num = 0, den = 0;
    for (int axis = 1; axis <= 2; ++axis) {
        TraceField dt = horizontal_derivative(g, trace, axis);
        ExtensionResult er = ext.extend(dt);
        double n2 = sobolev_norm(g, er.eta, 2);
        double d2 = fractional_norm(g, dt, 1.5);
        num += n2 * n2;
        den += d2 * d2;
    }
    if (den == 0.0) return 0.0;
    return std::sqrt(num / den);
}

} // namespace fsi
