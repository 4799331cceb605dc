#include "fsi/coupler.hpp"

#include <cmath>

namespace fsi {

using Eigen::ArrayXXd;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cd = std::complex<double>;

namespace {

// mode-derivative on a raw (rows x nm) coefficient matrix
MatrixXd modeDeriv(const ModeSet& ms, const MatrixXd& f, int axis) {
    MatrixXd out = MatrixXd::Zero(f.rows(), f.cols());
    for (int j = 0; j < ms.count(); ++j) {
        if (!ms.is_positive(j)) continue;
        const int jc = ms.conj_index(j);
        const double k = (axis == 1) ? ms.beta1(j) : ms.beta2(j);
        out.col(j) = k * f.col(jc);
        out.col(jc) = -k * f.col(j);
    }
    return out;
}

struct GeomBlocks {
    PhysTensor G, cof, A;
    MatrixXd J;
    double J_min = 1, J_max = 1, A_dev = 0;
    bool valid = true;

    void build(const PhysTensor& Gin, const DomainConfig& cfg) {
        G = Gin;
        Kinematics::pointwiseAlgebra(G, cof, A, J);
        J_min = J.minCoeff();
        J_max = J.maxCoeff();
        A_dev = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                A_dev = std::max(A_dev,
                                 (at(A, i, j).array() - (i == j ? 1.0 : 0.0)).abs().maxCoeff());
        const double at_ = cfg.ainv_guard_factor *
                           std::min(1.0, 1.0 / std::sqrt(cfg.fluid_volume()));
        valid = J.allFinite() && J_min >= cfg.jac_lo && J_max <= cfg.jac_hi && A_dev <= at_;
    }
};

} // namespace

struct CoupledStepper::Impl {
    const Grid* g;
    const HorizontalTransform* tr;
    const Kinematics* kin;
    const StokesExtension* ext;

    int nch, ni, nqp, ns2, nf2, nm, foff, ifn;
    double ws, cGamma;

    // channel-embedded slab operators
    MatrixXd Mw, Mf, Kf, Ms, Ks; // nch x nch
    MatrixXd Mx, Gx;             // nch x nqp (fluid pressure couplings)
    MatrixXd Dv;                 // nqp x nch (divergence rows)
    VectorXd load3_0;            // mode-0 loads for component 3 (gravity, interface offset)

    mutable double cached_dt = -1.0;
    mutable std::vector<Eigen::FullPivLU<MatrixXcd>> stepLU;
    mutable std::vector<Eigen::FullPivLU<MatrixXcd>> consLU;
    mutable bool consBuilt = false;

    int sysSize() const { return 3 * ni + nqp; }

    void buildOperators() {
        const auto& cfg = g->config();
        const auto& fs = g->fluid();
        const auto& ss = g->solid();
        nch = g->channelNodes();
        ni = nch - 2;
        nqp = fs.np1();
        ns2 = ss.np2();
        nf2 = fs.np2();
        nm = g->modes().count();
        foff = g->fluidOffset();
        ifn = g->interfaceNode();
        ws = cfg.mass_weight();
        cGamma = cfg.traction_offset();

        auto embed = [&](const MatrixXd& S, int off) {
            MatrixXd B = MatrixXd::Zero(nch, nch);
            B.block(off, off, S.rows(), S.cols()) = S;
            return B;
        };
        Mf = embed(fs.massP2(), foff);
        Kf = embed(fs.stiffP2(), foff);
        Ms = embed(ss.massP2(), 0);
        Ks = embed(ss.stiffP2(), 0);
        Mw = Mf + ws * Ms;

        Mx = MatrixXd::Zero(nch, nqp);
        Gx = MatrixXd::Zero(nch, nqp);
        Mx.block(foff, 0, nf2, nqp) = fs.mixedMass();
        Gx.block(foff, 0, nf2, nqp) = fs.mixedGrad();
        Dv = MatrixXd::Zero(nqp, nch);
        Dv.block(0, foff, nqp, nf2) = fs.divP2P1();

        // mode-0 loads on component 3: g <J,phi3>_f (constant part) +
        // g ws <1,phi3>_s - cGamma <phi3>_Gamma
        load3_0 = VectorXd::Zero(nch);
        VectorXd lf = fs.loadQ() * VectorXd::Ones(fs.nq());
        VectorXd ls = ss.loadQ() * VectorXd::Ones(ss.nq());
        load3_0.segment(foff, nf2) += cfg.g * lf;
        load3_0.segment(0, ns2) += cfg.g * ws * ls;
        load3_0[ifn] -= cGamma;
    }

    // per-mode system matrix of the stepping scheme
    MatrixXcd modeMatrix(double dt, int j) const {
        const auto& ms = g->modes();
        const auto& cfg = g->config();
        const double b1 = ms.beta1(j), b2 = ms.beta2(j);
        const double bb = b1 * b1 + b2 * b2;
        MatrixXd Avel = (1.0 / dt) * Mw + 0.5 * cfg.nu * (Kf + bb * Mf) +
                        0.25 * cfg.lambda * dt * (ws * bb * Ms + (1.0 / ws) * Ks);
        return saddle(Avel, b1, b2);
    }

    MatrixXcd consMatrix(int j) const {
        const auto& ms = g->modes();
        return saddle(Mw, ms.beta1(j), ms.beta2(j));
    }

    MatrixXcd saddle(const MatrixXd& Avel, double b1, double b2) const {
        const int N = sysSize();
        MatrixXcd A = MatrixXcd::Zero(N, N);
        for (int c = 0; c < 3; ++c)
            A.block(c * ni, c * ni, ni, ni) = Avel.block(1, 1, ni, ni).cast<cd>();
        const int oq = 3 * ni;
        for (int a = 0; a < ni; ++a)
            for (int q = 0; q < nqp; ++q) {
                A(0 * ni + a, oq + q) = cd(0, b1) * Mx(1 + a, q);
                A(1 * ni + a, oq + q) = cd(0, b2) * Mx(1 + a, q);
                A(2 * ni + a, oq + q) = -Gx(1 + a, q);
                A(oq + q, 0 * ni + a) = cd(0, b1) * Mx(1 + a, q);
                A(oq + q, 1 * ni + a) = cd(0, b2) * Mx(1 + a, q);
                A(oq + q, 2 * ni + a) = Dv(q, 1 + a);
            }
        return A;
    }

    void ensureStepLU(double dt) const {
        if (cached_dt == dt && !stepLU.empty()) return;
        const auto& act = g->modes().active();
        stepLU.assign(act.size(), {});
        for (size_t s = 0; s < act.size(); ++s) {
            stepLU[s].compute(modeMatrix(dt, act[s]));
            if (!stepLU[s].isInvertible())
                throw SolverError("coupled stepping matrix singular (mode " +
                                  std::to_string(act[s]) + ")");
        }
        cached_dt = dt;
    }

    void ensureConsLU() const {
        if (consBuilt) return;
        const auto& act = g->modes().active();
        consLU.assign(act.size(), {});
        for (size_t s = 0; s < act.size(); ++s) {
            consLU[s].compute(consMatrix(act[s]));
            if (!consLU[s].isInvertible())
                throw SolverError("consistency matrix singular");
        }
        consBuilt = true;
    }

    // complex column pair of a coefficient matrix
    static VectorXcd toComplex(const MatrixXd& m, int j, int jc) {
        if (j == jc) return m.col(j).cast<cd>();
        VectorXcd out(m.rows());
        out.real() = 0.5 * m.col(j);
        out.imag() = -0.5 * m.col(jc);
        return out;
    }
    static void fromComplex(MatrixXd& m, int j, int jc, const VectorXcd& v) {
        if (j == jc) {
            m.col(j) = v.real();
        } else {
            m.col(j) = 2.0 * v.real();
            m.col(jc) = -2.0 * v.imag();
        }
    }

    // ---- physical-space helpers on fluid Gauss rows ----

    std::array<MatrixXd, 3> valuesGauss(const Field& chan) const {
        const auto& fs = g->fluid();
        std::array<MatrixXd, 3> out;
        for (int i = 0; i < 3; ++i)
            out[i] = tr->toPhys(fs.evalQ() * chan.c[i].middleRows(foff, nf2));
        return out;
    }
    std::array<MatrixXd, 3> valuesGaussFluid(const Field& fl) const {
        const auto& fs = g->fluid();
        std::array<MatrixXd, 3> out;
        for (int i = 0; i < 3; ++i) out[i] = tr->toPhys(fs.evalQ() * fl.c[i]);
        return out;
    }
    PhysTensor gradGauss(const Field& chan) const {
        const auto& fs = g->fluid();
        const auto& ms = g->modes();
        PhysTensor out;
        for (int i = 0; i < 3; ++i) {
            MatrixXd blk = chan.c[i].middleRows(foff, nf2);
            at(out, i, 0) = tr->toPhys(fs.evalQ() * modeDeriv(ms, blk, 1));
            at(out, i, 1) = tr->toPhys(fs.evalQ() * modeDeriv(ms, blk, 2));
            at(out, i, 2) = tr->toPhys(fs.evalQd() * blk);
        }
        return out;
    }
    MatrixXd pressGauss(const Field& q) const {
        return tr->toPhys(g->fluid().evalQP1() * q.c[0]);
    }

    double quadSum(const ArrayXXd& integrand) const {
        // integral over the fluid slab of samples at (gauss rows x phys pts)
        const auto& fs = g->fluid();
        return tr->pointWeight() * (fs.qweights().transpose() * integrand.matrix()).sum();
    }

    // deviation loads of one Picard sweep
    struct Loads {
        std::array<MatrixXd, 3> mom; // nf2 x nm
        MatrixXd con;                // nqp x nm
    };

    /// Vm/GVm: velocity driving advection and the viscous deviation;
    /// Vdot: discrete acceleration multiplying (J - 1);
    /// GC: gradient entering the constraint deviation (a^end - I) : GC.
    Loads deviationLoads(const std::array<MatrixXd, 3>& Vm, const PhysTensor& GVm,
                         const std::array<MatrixXd, 3>& Vt, const MatrixXd& Q,
                         const std::array<MatrixXd, 3>& Vdot, const PhysTensor& GC,
                         const GeomBlocks& gm, const GeomBlocks& ge) const {
        const auto& fs = g->fluid();
        const auto& ms = g->modes();
        const auto& cfg = g->config();
        const int rows = int(gm.J.rows());
        Loads L;

        // (a^T A - I)^{lk} at the midpoint geometry
        std::array<ArrayXXd, 9> DmI;
        for (int l = 0; l < 3; ++l)
            for (int k = 0; k < 3; ++k) {
                ArrayXXd s = ArrayXXd::Zero(rows, tr->npts());
                for (int j = 0; j < 3; ++j)
                    s += at(gm.cof, j, l).array() * at(gm.A, j, k).array();
                if (l == k) s -= 1.0;
                DmI[3 * l + k] = s;
            }

        for (int i = 0; i < 3; ++i) {
            // plain integrand: advection + mass deviation (+ gravity deviation)
            ArrayXXd plain = ArrayXXd::Zero(rows, tr->npts());
            for (int l = 0; l < 3; ++l) {
                ArrayXXd conv = ArrayXXd::Zero(rows, tr->npts());
                for (int j = 0; j < 3; ++j)
                    conv += at(gm.cof, l, j).array() * at(GVm, i, j).array();
                plain += (Vm[l].array() - Vt[l].array()) * conv;
            }
            plain += (gm.J.array() - 1.0) * Vdot[i].array();
            if (i == 2 && cfg.g != 0.0) plain += cfg.g * (gm.J.array() - 1.0);

            // flux integrand: nu (a^T A - I) grad v - (a - I) q
            std::array<MatrixXd, 3> flux;
            for (int l = 0; l < 3; ++l) {
                ArrayXXd f = ArrayXXd::Zero(rows, tr->npts());
                for (int k = 0; k < 3; ++k)
                    f += cfg.nu * DmI[3 * l + k] * at(GVm, i, k).array();
                ArrayXXd adev = at(gm.cof, i, l).array();
                if (i == l) adev -= 1.0;
                f -= adev * Q.array();
                flux[l] = f.matrix();
            }

            MatrixXd Pm = tr->toModes(plain.matrix());
            MatrixXd F1 = tr->toModes(flux[0]);
            MatrixXd F2 = tr->toModes(flux[1]);
            MatrixXd F3 = tr->toModes(flux[2]);
            L.mom[i] = fs.loadQ() * (Pm - modeDeriv(ms, F1, 1) - modeDeriv(ms, F2, 2)) +
                       fs.fluxQ() * F3;
        }

        // constraint deviation at the end-of-step geometry
        ArrayXXd cdev = ArrayXXd::Zero(rows, tr->npts());
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                ArrayXXd adev = at(ge.cof, i, j).array();
                if (i == j) adev -= 1.0;
                cdev += adev * at(GC, i, j).array();
            }
        L.con = fs.loadQP1() * tr->toModes(cdev.matrix());
        return L;
    }
};

CoupledStepper::CoupledStepper(const Grid& g, const HorizontalTransform& tr,
                               const Kinematics& kin, const StokesExtension& ext)
    : g_(&g), tr_(&tr), kin_(&kin), ext_(&ext), impl_(new Impl) {
    impl_->g = &g;
    impl_->tr = &tr;
    impl_->kin = &kin;
    impl_->ext = &ext;
    impl_->buildOperators();
}

CoupledStepper::~CoupledStepper() = default;

State CoupledStepper::makeState(double t, const Field& v, const Field& eta,
                                const Field* q_opt) const {
    State s;
    s.t = t;
    s.v = v;
    s.eta = eta;
    s.ext = ext_->extend(interfaceTrace(*g_, eta));
    s.vtilde = ext_->extend_velocity(interfaceTrace(*g_, v)).eta;
    kin_->assembleGauss(s.ext.eta, s.pkg);
    if (!s.pkg.valid)
        throw GuardViolation("initial displacement violates the kinematic guard");
    if (q_opt) {
        s.q = *q_opt;
    } else {
        s.q = makeField(*g_, Slab::Fluid, 1, VerticalKind::P1);
        s.q = consistencySolve(s).q;
    }
    return s;
}

double CoupledStepper::totalEnergy(const State& s) const {
    Impl& im = *impl_;
    const auto& ms = g_->modes();
    const auto& ss = g_->solid();
    const auto& cfg = g_->config();
    const double L2 = ms.L() * ms.L();

    // J-weighted fluid kinetic energy via pointwise quadrature
    auto V = im.valuesGauss(s.v);
    ArrayXXd k2 = V[0].array().square() + V[1].array().square() + V[2].array().square();
    double E = 0.5 * im.quadSum(s.pkg.J_g.array() * k2);

    for (int j = 0; j < ms.count(); ++j) {
        const double w = ms.is_zero(j) ? L2 : 0.5 * L2;
        const double bb = ms.eigenvalue(j);
        for (int i = 0; i < 3; ++i) {
            VectorXd vs = s.v.c[i].col(j).segment(0, im.ns2);
            E += 0.5 * im.ws * w * vs.dot(ss.massP2() * vs);
            const VectorXd& e = s.eta.c[i].col(j);
            E += 0.5 * cfg.lambda * w *
                 (im.ws * bb * e.dot(ss.massP2() * e) +
                  (1.0 / im.ws) * e.dot(ss.stiffP2() * e));
        }
    }
    // solid gravity potential and interface offset potential
    const int j0 = ms.zero_index();
    VectorXd prof = s.eta.c[2].col(j0);
    E += cfg.g * im.ws * L2 * ss.qweights().dot(ss.evalQ() * prof);
    E -= im.cGamma * L2 * s.eta.c[2](im.ifn, j0);
    return E;
}

double CoupledStepper::divergenceResidual(const State& s) const {
    Impl& im = *impl_;
    PhysTensor GV = im.gradGauss(s.v);
    ArrayXXd r = ArrayXXd::Zero(s.pkg.J_g.rows(), s.pkg.J_g.cols());
    ArrayXXd den = ArrayXXd::Zero(s.pkg.J_g.rows(), s.pkg.J_g.cols());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            r += at(s.pkg.cof_g, i, j).array() * at(GV, i, j).array();
            den += at(GV, i, j).array().square();
        }
    const double nr = std::sqrt(im.quadSum(r.square()));
    const double nd = std::sqrt(im.quadSum(den));
    return nr / std::max(nd, 1e-300);
}

void CoupledStepper::step(State& s, double dt, StepStats& stats, bool want_diagnostics) const {
    Impl& im = *impl_;
    const Grid& g = *g_;
    const auto& ms = g.modes();
    const auto& cfg = g.config();
    const auto& act = ms.active();
    im.ensureStepLU(dt);

    stats = StepStats{};
    stats.energy_before = totalEnergy(s);

    // step-start physical caches
    auto Vn = im.valuesGauss(s.v);
    PhysTensor GVn = im.gradGauss(s.v);

    // sweep-independent part of the right-hand sides
    const double b_wave = 0.25 * cfg.lambda * dt;
    std::vector<VectorXcd> rhs_core(act.size());
    Field etaEmb = makeField(g, Slab::Channel, 3);
    embedSlab(g, s.eta, etaEmb);
    for (size_t a = 0; a < act.size(); ++a) {
        const int j = act[a], jc = ms.conj_index(j);
        const double b1 = ms.beta1(j), b2 = ms.beta2(j);
        const double bb = b1 * b1 + b2 * b2;
        VectorXcd r(im.sysSize());
        r.setZero();
        for (int i = 0; i < 3; ++i) {
            VectorXcd vn = Impl::toComplex(s.v.c[i], j, jc);
            VectorXcd et = Impl::toComplex(etaEmb.c[i], j, jc);
            VectorXcd rc = (1.0 / dt) * (im.Mw * vn) -
                           0.5 * cfg.nu * ((im.Kf + bb * im.Mf) * vn) -
                           cfg.lambda * ((im.ws * bb * im.Ms + (1.0 / im.ws) * im.Ks) *
                                         (et + 0.25 * dt * vn));
            if (ms.is_zero(j) && i == 2) rc -= im.load3_0.cast<cd>();
            r.segment(i * im.ni, im.ni) = rc.segment(1, im.ni);
        }
        rhs_core[a] = r;
    }

    Field v_new = s.v, q_new = s.q;
    Field v_guess = s.v, q_guess = s.q;
    Field eta_np1 = s.eta;
    ExtensionResult ext_np1;
    GeomBlocks gm, ge;
    std::array<MatrixXd, 3> Vm, Vt;
    PhysTensor GVm;
    MatrixXd Q;

    double prev_update = -1;
    bool converged = false;
    const double tol = cfg.tol_picard;

    for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
        stats.sweeps = sweep;
        Field v_mid = 0.5 * (s.v + v_guess);

        // geometry from the current iterate
        eta_np1 = s.eta;
        Field v_mid_solid = restrictToSlab(g, v_mid, Slab::Solid);
        for (int i = 0; i < 3; ++i) eta_np1.c[i] += dt * v_mid_solid.c[i];
        ext_np1 = ext_->extend(interfaceTrace(g, eta_np1));
        Field vtilde_mid = ext_->extend_velocity(interfaceTrace(g, v_mid)).eta;

        PhysTensor Ge = kin_->gradPhysGauss(ext_np1.eta);
        PhysTensor Gm;
        for (int e = 0; e < 9; ++e) Gm[e] = 0.5 * (s.pkg.G_g[e] + Ge[e]);
        gm.build(Gm, cfg);
        ge.build(Ge, cfg);
        if (!ge.J.allFinite() || !gm.J.allFinite())
            throw GuardViolation("kinematic breakdown inside Picard sweep");

        Vm = im.valuesGauss(v_mid);
        GVm = im.gradGauss(v_mid);
        Vt = im.valuesGaussFluid(vtilde_mid);
        Q = im.pressGauss(q_guess);

        // discrete acceleration (v^{n+1} - v^n)/dt and end-of-step gradient
        std::array<MatrixXd, 3> Vdot;
        for (int i = 0; i < 3; ++i) Vdot[i] = (2.0 / dt) * (Vm[i] - Vn[i]);
        PhysTensor GVnp1;
        for (int e = 0; e < 9; ++e) GVnp1[e] = 2.0 * GVm[e] - GVn[e];

        Impl::Loads L = im.deviationLoads(Vm, GVm, Vt, Q, Vdot, GVnp1, gm, ge);

        // solve all modes
        for (size_t a = 0; a < act.size(); ++a) {
            const int j = act[a], jc = ms.conj_index(j);
            VectorXcd rhs = rhs_core[a];
            for (int i = 0; i < 3; ++i) {
                VectorXcd dl = Impl::toComplex(L.mom[i], j, jc);
                // fluid-slab rows to channel interior rows
                for (int r0 = 0; r0 < im.nf2; ++r0) {
                    const int row = im.foff + r0;
                    if (row == 0 || row == im.nch - 1) continue;
                    rhs[i * im.ni + (row - 1)] -= dl[r0];
                }
            }
            rhs.segment(3 * im.ni, im.nqp) = -Impl::toComplex(L.con, j, jc);

            VectorXcd sol = im.stepLU[a].solve(rhs);
            for (int i = 0; i < 3; ++i) {
                VectorXcd full = VectorXcd::Zero(im.nch);
                full.segment(1, im.ni) = sol.segment(i * im.ni, im.ni);
                Impl::fromComplex(v_new.c[i], j, jc, full);
            }
            Impl::fromComplex(q_new.c[0], j, jc, sol.segment(3 * im.ni, im.nqp));
        }

        double upd = 0, scl = 0;
        for (int i = 0; i < 3; ++i) {
            upd += (v_new.c[i] - v_guess.c[i]).squaredNorm();
            scl += v_new.c[i].squaredNorm();
        }
        upd += (q_new.c[0] - q_guess.c[0]).squaredNorm();
        scl += q_new.c[0].squaredNorm();
        upd = std::sqrt(upd);
        scl = std::max(std::sqrt(scl), 1e-30);
        v_guess = v_new;
        q_guess = q_new;
        stats.residual = upd / scl;

        if (upd <= tol * scl) {
            converged = true;
        } else if (prev_update > 0 && upd < prev_update) {
            const double kappa = upd / prev_update;
            if (kappa < 1.0 && upd * kappa / (1.0 - kappa) <= tol * scl) converged = true;
        }
        prev_update = upd;
        if (converged) break;
    }
    if (!converged)
        throw SolverError("Picard iteration did not converge in " +
                          std::to_string(cfg.max_sweeps) + " sweeps (dt too large?)");

    // ledger pieces from the final sweep's blocks
    {
        ArrayXXd diss = ArrayXXd::Zero(gm.J.rows(), gm.J.cols());
        for (int i = 0; i < 3; ++i)
            for (int l = 0; l < 3; ++l) {
                ArrayXXd s1 = ArrayXXd::Zero(gm.J.rows(), gm.J.cols());
                for (int j = 0; j < 3; ++j) {
                    ArrayXXd D = ArrayXXd::Zero(gm.J.rows(), gm.J.cols());
                    for (int m = 0; m < 3; ++m)
                        D += at(gm.cof, m, l).array() * at(gm.A, m, j).array();
                    s1 += D * at(GVm, i, j).array();
                }
                diss += s1 * at(GVm, i, l).array();
            }
        stats.dissipation = cfg.nu * im.quadSum(diss);
        stats.grav_work_fluid =
            cfg.g * dt * im.quadSum(gm.J.array() * Vm[2].array());
        ArrayXXd pw = ArrayXXd::Zero(gm.J.rows(), gm.J.cols());
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) pw += at(gm.cof, i, j).array() * at(GVm, i, j).array();
        stats.pressure_work = dt * im.quadSum(Q.array() * pw);
    }

    // finalize the state from the accepted velocity
    Field v_mid = 0.5 * (s.v + v_guess);
    eta_np1 = s.eta;
    Field v_mid_solid = restrictToSlab(g, v_mid, Slab::Solid);
    for (int i = 0; i < 3; ++i) eta_np1.c[i] += dt * v_mid_solid.c[i];
    ext_np1 = ext_->extend(interfaceTrace(g, eta_np1));

    s.v = v_guess;
    s.eta = eta_np1;
    s.q = q_guess;
    s.ext = ext_np1;
    s.vtilde = ext_->extend_velocity(interfaceTrace(g, s.v)).eta;
    kin_->assembleGauss(s.ext.eta, s.pkg);
    s.t += dt;
    if (!s.pkg.valid)
        throw GuardViolation("kinematic guard violated at t = " + std::to_string(s.t) +
                             " (J in [" + std::to_string(s.pkg.J_min) + ", " +
                             std::to_string(s.pkg.J_max) + "], |A - I| = " +
                             std::to_string(s.pkg.A_dev_inf) + ")");

    stats.energy_after = totalEnergy(s);
    stats.energy_defect =
        stats.energy_after - stats.energy_before + dt * stats.dissipation + stats.grav_work_fluid;
    if (want_diagnostics) stats.div_residual = divergenceResidual(s);
}

CoupledStepper::Consistency CoupledStepper::consistencySolve(const State& s) const {
    Impl& im = *impl_;
    const Grid& g = *g_;
    const auto& ms = g.modes();
    const auto& cfg = g.config();
    const auto& act = ms.active();
    im.ensureConsLU();

    GeomBlocks gb;
    gb.build(s.pkg.G_g, cfg);

    auto V0 = im.valuesGauss(s.v);
    PhysTensor GV0 = im.gradGauss(s.v);
    auto Vt0 = im.valuesGaussFluid(s.vtilde);
    PhysTensor Gvt = kin_->gradPhysGauss(s.vtilde);

    // cofactor rate a_dot(i,j) = J [ (A:F_dot) A_ij - sum_mn A_im F_dot(n,m) A_nj ]
    PhysTensor adot;
    {
        ArrayXXd AF = ArrayXXd::Zero(gb.J.rows(), gb.J.cols());
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) AF += at(gb.A, m, n).array() * at(Gvt, m, n).array();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                ArrayXXd sum = ArrayXXd::Zero(gb.J.rows(), gb.J.cols());
                for (int m = 0; m < 3; ++m)
                    for (int n = 0; n < 3; ++n)
                        sum += at(gb.A, i, m).array() * at(Gvt, n, m).array() *
                               at(gb.A, n, j).array();
                at(adot, i, j) = (gb.J.array() * (AF * at(gb.A, i, j).array() - sum)).matrix();
            }
    }
    ArrayXXd crhs = ArrayXXd::Zero(gb.J.rows(), gb.J.cols());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) crhs += at(adot, i, j).array() * at(GV0, i, j).array();
    MatrixXd conRate = g.fluid().loadQP1() * tr_->toModes((-crhs).matrix());

    Field etaEmb = makeField(g, Slab::Channel, 3);
    embedSlab(g, s.eta, etaEmb);

    Field accel = makeField(g, Slab::Channel, 3);
    Field q = makeField(g, Slab::Fluid, 1, VerticalKind::P1);
    std::array<MatrixXd, 3> Va{MatrixXd::Zero(gb.J.rows(), gb.J.cols()),
                               MatrixXd::Zero(gb.J.rows(), gb.J.cols()),
                               MatrixXd::Zero(gb.J.rows(), gb.J.cols())};
    PhysTensor GVa;
    for (auto& m : GVa) m = MatrixXd::Zero(gb.J.rows(), gb.J.cols());

    for (int sweep = 0; sweep < 3; ++sweep) {
        // deviations: advection and viscous flux on v0, (J-1) times the
        // lagged acceleration, pressure flux on the current q, and the
        // constraint deviation on the lagged acceleration gradient
        MatrixXd Q = im.pressGauss(q);
        Impl::Loads L = im.deviationLoads(V0, GV0, Vt0, Q, Va, GVa, gb, gb);

        for (size_t a = 0; a < act.size(); ++a) {
            const int j = act[a], jc = ms.conj_index(j);
            const double b1 = ms.beta1(j), b2 = ms.beta2(j);
            const double bb = b1 * b1 + b2 * b2;
            VectorXcd rhs(im.sysSize());
            rhs.setZero();
            for (int i = 0; i < 3; ++i) {
                VectorXcd v0 = Impl::toComplex(s.v.c[i], j, jc);
                VectorXcd et = Impl::toComplex(etaEmb.c[i], j, jc);
                VectorXcd rc = -cfg.nu * ((im.Kf + bb * im.Mf) * v0) -
                               cfg.lambda *
                                   ((im.ws * bb * im.Ms + (1.0 / im.ws) * im.Ks) * et);
                if (ms.is_zero(j) && i == 2) rc -= im.load3_0.cast<cd>();
                VectorXcd dl = Impl::toComplex(L.mom[i], j, jc);
                for (int r0 = 0; r0 < im.nf2; ++r0) {
                    const int row = im.foff + r0;
                    if (row == 0 || row == im.nch - 1) continue;
                    rc[row] -= dl[r0];
                }
                rhs.segment(i * im.ni, im.ni) = rc.segment(1, im.ni);
            }
            rhs.segment(3 * im.ni, im.nqp) =
                Impl::toComplex(conRate, j, jc) - Impl::toComplex(L.con, j, jc);

            VectorXcd sol = im.consLU[a].solve(rhs);
            for (int i = 0; i < 3; ++i) {
                VectorXcd full = VectorXcd::Zero(im.nch);
                full.segment(1, im.ni) = sol.segment(i * im.ni, im.ni);
                Impl::fromComplex(accel.c[i], j, jc, full);
            }
            Impl::fromComplex(q.c[0], j, jc, sol.segment(3 * im.ni, im.nqp));
        }
        Va = im.valuesGauss(accel);
        GVa = im.gradGauss(accel);
    }

    Consistency out;
    out.q = q;
    out.accel = accel;
    return out;
}

} // namespace fsi
