#include "fsi/diagnostics.hpp"

#include <cmath>
#include <cstdio>

namespace fsi {

void History::push(double t, const Field& v) {
    snaps_.emplace_back(t, v);
    while (snaps_.size() > 3) snaps_.pop_front();
}

double History::dt() const {
    if (snaps_.size() < 2) return 0;
    return snaps_.back().first - snaps_[snaps_.size() - 2].first;
}

Field History::v_t(int* order_out) const {
    int order = 0;
    Field out;
    if (snaps_.size() >= 3) {
        const double h = dt();
        out = snaps_[2].second;
        out *= 1.5 / h;
        Field m1 = snaps_[1].second;
        m1 *= -2.0 / h;
        Field m2 = snaps_[0].second;
        m2 *= 0.5 / h;
        out += m1;
        out += m2;
        order = 2;
    } else if (snaps_.size() == 2) {
        const double h = dt();
        out = snaps_[1].second;
        out -= snaps_[0].second;
        out *= 1.0 / h;
        order = 1;
    } else if (snaps_.size() == 1 && a0_) {
        out = *a0_;
        order = 2; // exact consistency acceleration at t = 0
    }
    if (order_out) *order_out = order;
    return out;
}

Field History::v_tt(int* order_out) const {
    int order = 0;
    Field out;
    if (snaps_.size() >= 3) {
        const double h = dt();
        out = snaps_[2].second;
        Field m1 = snaps_[1].second;
        m1 *= -2.0;
        out += m1;
        out += snaps_[0].second;
        out *= 1.0 / (h * h);
        order = 1;
    }
    if (order_out) *order_out = order;
    return out;
}

namespace {

double sumNorm(const Grid& g, const Field& f, Slab slab, int k) {
    if (f.c.empty()) return 0.0;
    Field r = restrictToSlab(g, f, slab);
    return sobolev_norm(g, r, k);
}

} // namespace

double norm_N(const Grid& g, const State& s, const Field& v_t, const Field& v_tt,
              const Field& eta_e) {
    double n = 0;
    n += sumNorm(g, s.v, Slab::Fluid, 2) + sumNorm(g, s.v, Slab::Solid, 2);
    n += sumNorm(g, v_t, Slab::Fluid, 1) + sumNorm(g, v_t, Slab::Solid, 1);
    n += sumNorm(g, v_tt, Slab::Fluid, 0) + sumNorm(g, v_tt, Slab::Solid, 0);
    Field d = s.eta;
    d -= eta_e;
    n += sobolev_norm(g, d, 3);
    return n;
}

double norm_D(const Grid& g, const State& s, const Field& v_t, const Field& v_tt) {
    double n = sumNorm(g, s.v, Slab::Fluid, 3);
    n += sumNorm(g, v_t, Slab::Fluid, 2);
    n += sumNorm(g, v_tt, Slab::Fluid, 1);
    return n;
}

double solid_volume(const Grid& g, const HorizontalTransform& tr, const Field& eta_solid) {
    const double h_e = g.config().h_e;
    TraceField t = interfaceTrace(g, eta_solid);
    auto phys = [&](const Eigen::MatrixXd& row) -> Eigen::ArrayXXd {
        return tr.toPhys(row).row(0).array();
    };
    auto d = [&](int comp, int axis) -> Eigen::ArrayXXd {
        return phys(horizontal_derivative(g, component(t, comp), axis).c[0]);
    };
    Eigen::ArrayXXd e3 = phys(t.c[2]);
    Eigen::ArrayXXd jac = (1.0 + d(0, 1)) * (1.0 + d(1, 2)) - d(1, 1) * d(0, 2);
    return tr.pointWeight() * ((h_e + e3) * jac).sum();
}

double flatness(const Grid& g, const Field& eta_solid) {
    return fractional_norm(g, interfaceTrace(g, eta_solid), 2.5);
}

DiagnosticsEngine::DiagnosticsEngine(const CoupledStepper& stepper, const HorizontalTransform& tr)
    : stepper_(&stepper), tr_(&tr) {
    const Grid& g = stepper.grid();
    eta_e_ = equilibrium_displacement(g).eta;
    const auto& cfg = g.config();
    q_gamma_ref_ = -0.5 * cfg.g * cfg.h_s + cfg.traction_offset();
}

double DiagnosticsEngine::crucialIntegrand(const State& s) const {
    const Grid& g = stepper_->grid();
    const double lambda = g.config().lambda;
    TraceField t = interfaceTrace(g, s.eta);
    double acc = 0;
    for (int axis = 1; axis <= 2; ++axis) {
        double nrm = fractional_norm(g, horizontal_derivative(g, t, axis), 1.5);
        acc += nrm * nrm;
    }
    return lambda * acc;
}

DiagnosticsRecord DiagnosticsEngine::makeRecord(const State& s, const StepStats* stats) {
    const Grid& g = stepper_->grid();
    DiagnosticsRecord r;
    r.t = s.t;

    int o1 = 0, o2 = 0;
    Field vt = hist_.v_t(&o1);
    Field vtt = hist_.v_tt(&o2);
    r.deriv_order = std::min(o1, hist_.size() >= 3 ? o2 : o1);

    r.N = norm_N(g, s, vt, vtt, eta_e_);
    r.D = norm_D(g, s, vt, vtt);
    N_sup_ = std::max(N_sup_, r.N);
    r.N_sup = N_sup_;

    const double d2 = r.D * r.D;
    const double lhs_now = crucialIntegrand(s);
    if (s.t > prev_t_) {
        const double h = s.t - prev_t_;
        intD2_ += 0.5 * h * (prevD2_ + d2);
        intLhs_ += 0.5 * h * (prevLhs_ + lhs_now);
    }
    prevD2_ = d2;
    prevLhs_ = lhs_now;
    prev_t_ = s.t;

    r.E_cum = N_sup_ * N_sup_ + intD2_;
    r.crucial_lhs = intLhs_;
    r.crucial_rhs = intD2_ + E0_;
    r.crucial_ratio = (r.crucial_rhs > 0) ? r.crucial_lhs / r.crucial_rhs : 0.0;
    ratio_sup_ = std::max(ratio_sup_, r.crucial_ratio);

    r.flatness = flatness(g, s.eta);
    const double vol = solid_volume(g, *tr_, s.eta);
    r.volume_err = (vol0_ != 0) ? (vol - vol0_) / vol0_ : 0.0;

    const int j0 = g.modes().zero_index();
    r.q_gamma_mean = s.q.c[0](0, j0) - q_gamma_ref_;

    if (stats) {
        r.energy_residual = stats->energy_defect;
        r.picard_iters = stats->sweeps;
        r.div_residual = stats->div_residual;
    }

    r.v_H2_fluid = sumNorm(g, s.v, Slab::Fluid, 2);
    r.vt_H1_fluid = sumNorm(g, vt, Slab::Fluid, 1);
    {
        Field vs = restrictToSlab(g, s.v, Slab::Solid);
        Field vh(Slab::Solid, VerticalKind::P2, 2, vs.nvert(), vs.nmodes());
        vh.c[0] = vs.c[0];
        vh.c[1] = vs.c[1];
        r.vh_H1_solid = sobolev_norm(g, vh, 1);
        Field eh(Slab::Solid, VerticalKind::P2, 2, s.eta.nvert(), s.eta.nmodes());
        eh.c[0] = s.eta.c[0];
        eh.c[1] = s.eta.c[1];
        r.etah_H2_solid = sobolev_norm(g, eh, 2);
    }
    return r;
}

DiagnosticsRecord DiagnosticsEngine::start(const State& s0, const Field& accel0) {
    hist_ = History();
    hist_.setInitialAccel(accel0);
    hist_.push(s0.t, s0.v);
    N_sup_ = 0;
    intD2_ = intLhs_ = 0;
    prev_t_ = s0.t;
    vol0_ = solid_volume(stepper_->grid(), *tr_, s0.eta);
    prevD2_ = 0;
    prevLhs_ = crucialIntegrand(s0);

    DiagnosticsRecord r = makeRecord(s0, nullptr);
    E0_ = r.N * r.N;
    r.crucial_rhs = intD2_ + E0_;
    r.crucial_ratio = 0;
    prevD2_ = r.D * r.D;
    return r;
}

DiagnosticsRecord DiagnosticsEngine::record(const State& s, const StepStats& stats) {
    hist_.push(s.t, s.v);
    return makeRecord(s, &stats);
}

std::string timeseriesHeader() {
    return "t,N,D,E_cum,flatness,volume_err,energy_residual,q_gamma_mean,picard_iters";
}

namespace {
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace

std::string timeseriesRow(const DiagnosticsRecord& r) {
    std::string s = fmt(r.t);
    for (double v : {r.N, r.D, r.E_cum, r.flatness, r.volume_err, r.energy_residual,
                     r.q_gamma_mean})
        s += "," + fmt(v);
    s += "," + std::to_string(r.picard_iters);
    return s;
}

std::string theorem2Header() {
    return "t,v_H2_fluid,vt_H1_fluid,flatness,vh_H1_solid,etah_H2_solid,crucial_lhs,crucial_rhs,"
           "crucial_ratio,N_sup,div_residual,deriv_order";
}

std::string theorem2Row(const DiagnosticsRecord& r) {
    std::string s = fmt(r.t);
    for (double v : {r.v_H2_fluid, r.vt_H1_fluid, r.flatness, r.vh_H1_solid, r.etah_H2_solid,
                     r.crucial_lhs, r.crucial_rhs, r.crucial_ratio, r.N_sup, r.div_residual})
        s += "," + fmt(v);
    s += "," + std::to_string(r.deriv_order);
    return s;
}

} // namespace fsi
