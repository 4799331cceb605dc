#include "fsi/fluid.hpp"

#include <cassert>
#include <cmath>

namespace fsi {

using Eigen::ArrayXXd;
using Eigen::MatrixXd;

namespace {

// physical samples of a fluid modal block at chosen rows
MatrixXd phys(const HorizontalTransform& tr, const MatrixXd& evalRows, const MatrixXd& modal) {
    return tr.toPhys(evalRows * modal);
}

// grad of a fluid field at given (value, derivative) eval operators
PhysTensor gradPhysOf(const Grid& g, const HorizontalTransform& tr, const Field& f,
                      const MatrixXd& evalN, const MatrixXd& evalD) {
    PhysTensor out;
    for (int i = 0; i < 3; ++i) {
        Field d1 = horizontal_derivative(g, component(f, i), 1);
        Field d2 = horizontal_derivative(g, component(f, i), 2);
        at(out, i, 0) = tr.toPhys(evalN * d1.c[0]);
        at(out, i, 1) = tr.toPhys(evalN * d2.c[0]);
        at(out, i, 2) = tr.toPhys(evalD * f.c[i]);
    }
    return out;
}

} // namespace

Field momentum_residual(const Kinematics& kin, const FluidState& st, const Field& v_t,
                        const DomainConfig& cfg) {
    const Grid& g = kin.grid();
    const HorizontalTransform& tr = kin.transform();
    const auto& vs = g.fluid();
    const KinematicPackage& pkg = *st.pkg;
    if (!pkg.valid) throw SolverError("momentum_residual: invalid kinematic package");

    PhysTensor GV = gradPhysOf(g, tr, st.v, vs.evalQ(), vs.evalQd());
    std::array<MatrixXd, 3> V, Vt, At;
    for (int i = 0; i < 3; ++i) {
        V[i] = phys(tr, vs.evalQ(), st.v.c[i]);
        Vt[i] = phys(tr, vs.evalQ(), st.v_tilde.c[i]);
        At[i] = phys(tr, vs.evalQ(), v_t.c[i]);
    }
    MatrixXd Q = phys(tr, vs.evalQP1(), st.q.c[0]);

    Field dual = makeField(g, Slab::Fluid, 3);
    for (int i = 0; i < 3; ++i) {
        // plain part: J v_t + advection + g J delta_3
        ArrayXXd plain = pkg.J_g.array() * At[i].array();
        for (int l = 0; l < 3; ++l) {
            ArrayXXd conv = ArrayXXd::Zero(plain.rows(), plain.cols());
            for (int j = 0; j < 3; ++j) conv += at(pkg.cof_g, l, j).array() * at(GV, i, j).array();
            plain += (V[l].array() - Vt[l].array()) * conv;
        }
        if (i == 2) plain += cfg.g * pkg.J_g.array();

        // flux part: nu (a^T A) grad v - a q
        std::array<MatrixXd, 3> flux;
        for (int l = 0; l < 3; ++l) {
            ArrayXXd f = ArrayXXd::Zero(plain.rows(), plain.cols());
            for (int k = 0; k < 3; ++k) {
                ArrayXXd D = ArrayXXd::Zero(plain.rows(), plain.cols());
                for (int j = 0; j < 3; ++j)
                    D += at(pkg.cof_g, j, l).array() * at(pkg.A_g, j, k).array();
                f += cfg.nu * D * at(GV, i, k).array();
            }
            f -= at(pkg.cof_g, i, l).array() * Q.array();
            flux[l] = f.matrix();
        }

        MatrixXd plainM = tr.toModes(plain.matrix());
        MatrixXd f1 = tr.toModes(flux[0]);
        MatrixXd f2 = tr.toModes(flux[1]);
        MatrixXd f3 = tr.toModes(flux[2]);
        // horizontal flux terms integrate by parts onto the test function
        Field f1f(Slab::Fluid, VerticalKind::P2, 1, f1.rows(), f1.cols());
        f1f.c[0] = f1;
        Field f2f(Slab::Fluid, VerticalKind::P2, 1, f2.rows(), f2.cols());
        f2f.c[0] = f2;
        MatrixXd hor = horizontal_derivative(g, f1f, 1).c[0] + horizontal_derivative(g, f2f, 2).c[0];
        dual.c[i] = vs.loadQ() * (plainM - hor) + vs.fluxQ() * f3;
    }
    return dual;
}

Field ale_divergence(const Kinematics& kin, const FluidState& st) {
    const Grid& g = kin.grid();
    const HorizontalTransform& tr = kin.transform();
    const auto& vs = g.fluid();
    const KinematicPackage& pkg = *st.pkg;
    assert(pkg.has_nodal);

    MatrixXd Dn = vs.massP2().ldlt().solve(vs.gradP2());
    MatrixXd I = MatrixXd::Identity(vs.np2(), vs.np2());
    PhysTensor GV = gradPhysOf(g, tr, st.v, I, Dn);

    ArrayXXd div = ArrayXXd::Zero(pkg.J_n.rows(), pkg.J_n.cols());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) div += at(pkg.A_n, i, j).array() * at(GV, i, j).array();

    Field out = makeField(g, Slab::Fluid, 1);
    out.c[0] = tr.toModes(div.matrix());
    return out;
}

Field pressure_gradient_recovery(const Kinematics& kin, const FluidState& st, const Field& v_t,
                                 const DomainConfig& cfg) {
    const Grid& g = kin.grid();
    const HorizontalTransform& tr = kin.transform();
    const auto& vs = g.fluid();
    const KinematicPackage& pkg = *st.pkg;
    assert(pkg.has_nodal);

    MatrixXd Dn = vs.massP2().ldlt().solve(vs.gradP2());
    MatrixXd I = MatrixXd::Identity(vs.np2(), vs.np2());
    PhysTensor GV = gradPhysOf(g, tr, st.v, I, Dn);

    std::array<MatrixXd, 3> V, Vt, At;
    for (int i = 0; i < 3; ++i) {
        V[i] = phys(tr, I, st.v.c[i]);
        Vt[i] = phys(tr, I, st.v_tilde.c[i]);
        At[i] = phys(tr, I, v_t.c[i]);
    }

    Field out = makeField(g, Slab::Fluid, 3);
    std::array<ArrayXXd, 3> integrand;
    for (int i = 0; i < 3; ++i) {
        // t_j = A_j^k v^i,_k as nodal fields, then nu A_j^l t_j,_l
        Field tj = makeField(g, Slab::Fluid, 3);
        for (int j = 0; j < 3; ++j) {
            ArrayXXd s = ArrayXXd::Zero(pkg.J_n.rows(), pkg.J_n.cols());
            for (int k = 0; k < 3; ++k) s += at(pkg.A_n, j, k).array() * at(GV, i, k).array();
            tj.c[j] = tr.toModes(s.matrix());
        }
        PhysTensor Gt = gradPhysOf(g, tr, tj, I, Dn);
        ArrayXXd visc = ArrayXXd::Zero(pkg.J_n.rows(), pkg.J_n.cols());
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l) visc += at(pkg.A_n, j, l).array() * at(Gt, j, l).array();

        ArrayXXd conv = ArrayXXd::Zero(pkg.J_n.rows(), pkg.J_n.cols());
        for (int l = 0; l < 3; ++l) {
            ArrayXXd alj = ArrayXXd::Zero(pkg.J_n.rows(), pkg.J_n.cols());
            for (int j = 0; j < 3; ++j) alj += at(pkg.A_n, l, j).array() * at(GV, i, j).array();
            conv += (V[l].array() - Vt[l].array()) * alj;
        }
        integrand[i] = At[i].array() + conv - cfg.nu * visc + (i == 2 ? cfg.g : 0.0);
    }
    for (int m = 0; m < 3; ++m) {
        ArrayXXd s = ArrayXXd::Zero(pkg.J_n.rows(), pkg.J_n.cols());
        for (int i = 0; i < 3; ++i) {
            ArrayXXd Fim = at(pkg.G_n, i, m).array() + (i == m ? 1.0 : 0.0);
            s += integrand[i] * Fim;
        }
        out.c[m] = tr.toModes(s.matrix());
    }
    return out;
}

TraceField boundary_pressure(const Kinematics& kin, const FluidState& st,
                             const TraceField& traction) {
    const Grid& g = kin.grid();
    const HorizontalTransform& tr = kin.transform();
    const auto& vs = g.fluid();
    const KinematicPackage& pkg = *st.pkg;
    assert(pkg.has_nodal);

    // one-sided gradient of v at the interface row (fluid node 0)
    const int nm = g.modes().count();
    MatrixXd gv[3][3];
    MatrixXd row0 = MatrixXd::Zero(1, vs.np2());
    row0(0, 0) = 1.0;
    MatrixXd drow = MatrixXd::Zero(1, vs.np2());
    const double hz = vs.hz();
    drow(0, 0) = -3.0 / hz;
    drow(0, 1) = 4.0 / hz;
    drow(0, 2) = -1.0 / hz;
    for (int i = 0; i < 3; ++i) {
        Field fi = component(st.v, i);
        gv[i][0] = tr.toPhys(row0 * horizontal_derivative(g, fi, 1).c[0]);
        gv[i][1] = tr.toPhys(row0 * horizontal_derivative(g, fi, 2).c[0]);
        gv[i][2] = tr.toPhys(drow * st.v.c[i]);
    }
    MatrixXd T[3];
    for (int i = 0; i < 3; ++i) {
        Eigen::MatrixXd tm(1, nm);
        tm = traction.c[i];
        T[i] = tr.toPhys(tm);
    }

    auto rowOf = [&](const MatrixXd& m) { return m.row(0).array(); };
    ArrayXXd num = ArrayXXd::Zero(1, tr.npts());
    const double nu = g.config().nu;
    for (int i = 0; i < 3; ++i) {
        ArrayXXd visc = ArrayXXd::Zero(1, tr.npts());
        for (int j = 0; j < 3; ++j) {
            ArrayXXd ak = ArrayXXd::Zero(1, tr.npts());
            for (int k = 0; k < 3; ++k)
                ak += rowOf(at(pkg.A_n, j, k)) * gv[i][k].row(0).array();
            visc += rowOf(at(pkg.cof_n, j, 2)) * ak;
        }
        ArrayXXd F3i = rowOf(at(pkg.G_n, i, 2)) + (i == 2 ? 1.0 : 0.0);
        num += (T[i].row(0).array() + nu * visc) * F3i;
    }
    ArrayXXd qg = num / rowOf(pkg.J_n);

    TraceField out = makeTrace(g, 1);
    out.c[0] = tr.toModes(qg.matrix());
    return out;
}

} // namespace fsi
