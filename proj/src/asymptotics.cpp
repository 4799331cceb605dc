#include "fsi/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsi {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Wave1D {
    const VerticalSpace& vs;
    double lam_s; // lambda * scale
    double g;
    int ni;
    MatrixXd Mi, Ki;
    VectorXd bi;   // gravity load, interior
    VectorXd bful; // gravity load, all nodes

    explicit Wave1D(const Grid& grid, const SolidOperatorParams& p)
        : vs(grid.solid()), lam_s(p.lambda * p.scale), g(p.g), ni(vs.np2() - 2) {
        Mi = vs.massP2().block(1, 1, ni, ni);
        Ki = vs.stiffP2().block(1, 1, ni, ni);
        bful = vs.loadQ() * VectorXd::Ones(vs.nq());
        bi = bful.segment(1, ni);
    }

    double energy(const VectorXd& a, const VectorXd& v) const {
        return 0.5 * v.dot(vs.massP2() * v) + 0.5 * lam_s * a.dot(vs.stiffP2() * a) +
               g * bful.dot(a);
    }
};

} // namespace

FlatSolution solve_wave_1d(const Grid& g, const VectorXd& alpha0, const VectorXd& alpha1,
                           const SolidOperatorParams& p, double t_start,
                           const std::vector<double>& t_eval, double dt) {
    const auto& vs = g.solid();
    const int n = vs.np2();
    if (alpha0.size() != n || alpha1.size() != n)
        throw std::invalid_argument("solve_wave_1d: profile size mismatch");
    const double scale0 = std::max({1.0, alpha0.cwiseAbs().maxCoeff(), alpha1.cwiseAbs().maxCoeff()});
    if (std::abs(alpha0[0]) + std::abs(alpha0[n - 1]) + std::abs(alpha1[0]) +
            std::abs(alpha1[n - 1]) >
        1e-12 * scale0)
        throw std::invalid_argument("solve_wave_1d: data must vanish on both endpoints");

    Wave1D w(g, p);
    FlatSolution out;
    out.induced_q.g = p.g;
    out.induced_q.coeff = p.lambda * std::sqrt(p.scale);
    out.induced_q.offset = p.traction_offset;
    out.induced_q.h_e = g.config().h_e;

    std::vector<double> evals = t_eval;
    std::sort(evals.begin(), evals.end());
    const bool backward = !evals.empty() && evals.front() < t_start;
    if (backward && evals.back() > t_start)
        throw std::invalid_argument("solve_wave_1d: eval times straddle the data time; split the call");
    if (backward) std::reverse(evals.begin(), evals.end());

    VectorXd a = alpha0, v = alpha1;
    double t = t_start;
    const double e0 = w.energy(a, v);
    out.energy_drift = 0;

    auto record = [&](double tt) {
        out.times.push_back(tt);
        out.alpha.push_back(a);
        out.alpha_t.push_back(v);
        out.induced_q.alpha3_gamma.push_back(vs.evalDeriv(a, vs.z1()));
        out.energy_drift = std::max(out.energy_drift, std::abs(w.energy(a, v) - e0));
    };

    Eigen::PartialPivLU<MatrixXd> lu;
    double dt_cached = 0;
    for (double te : evals) {
        const double gap = te - t;
        if (std::abs(gap) < 1e-14) {
            record(te);
            continue;
        }
        const int nsteps = std::max(1, int(std::lround(std::abs(gap) / dt)));
        const double dts = gap / nsteps;
        if (dts != dt_cached) {
            lu.compute(w.Mi / dts + (w.lam_s * dts / 4.0) * w.Ki);
            dt_cached = dts;
        }
        for (int s = 0; s < nsteps; ++s) {
            VectorXd ai = a.segment(1, w.ni), vi = v.segment(1, w.ni);
            VectorXd rhs = w.Mi * vi / dts - w.lam_s * (w.Ki * (ai + (dts / 4.0) * vi)) - w.g * w.bi;
            VectorXd vnew = lu.solve(rhs);
            a.segment(1, w.ni) += (dts / 2.0) * (vi + vnew);
            v.segment(1, w.ni) = vnew;
            t += dts;
        }
        t = te;
        record(te);
    }
    return out;
}

LambdaLift::LambdaLift(const Grid& g) : g_(&g) {
    const auto& vs = g.solid();
    const auto& ms = g.modes();
    const int ni = vs.np2() - 2;
    solvers_.resize(ms.active().size());
    for (size_t s = 0; s < ms.active().size(); ++s) {
        const double lam = ms.eigenvalue(ms.active()[s]);
        MatrixXd A = vs.stiffP2().block(1, 1, ni, ni) + lam * vs.massP2().block(1, 1, ni, ni);
        solvers_[s].compute(A);
    }
}

Field LambdaLift::apply(const Field& f) const {
    const Grid& g = *g_;
    const auto& vs = g.solid();
    const auto& ms = g.modes();
    const int ni = vs.np2() - 2;
    Field out = f;
    out.setZero();
    for (size_t s = 0; s < ms.active().size(); ++s) {
        const int j = ms.active()[s];
        const int jc = ms.conj_index(j);
        const double lam = ms.eigenvalue(j);
        for (int i = 0; i < f.ncomp(); ++i) {
            for (int col : {j, jc}) {
                VectorXd rhs = (vs.stiffP2() * f.c[i].col(col) + lam * (vs.massP2() * f.c[i].col(col)))
                                   .segment(1, ni);
                out.c[i].col(col).segment(1, ni) = solvers_[s].solve(rhs);
                if (jc == j) break; // zero mode
            }
        }
    }
    return out;
}

double LambdaLift::stability_ratio(const Field& f) const {
    const double den = sobolev_norm(*g_, f, 1);
    if (den == 0) return 0;
    return sobolev_norm(*g_, apply(f), 1) / den;
}

double mismatch_l2(const Grid& g, const Field& f3, const VectorXd& prof) {
    Field d = f3;
    d.c[0].col(g.modes().zero_index()) -= prof;
    return l2_norm(g, d);
}

double mismatch_h1(const Grid& g, const Field& f3, const VectorXd& prof) {
    Field d = f3;
    d.c[0].col(g.modes().zero_index()) -= prof;
    return sobolev_norm(g, d, 1);
}

FlatSolution alpha_n_problem(const Grid& g, const TrajectorySnapshot& at_n,
                             const SolidOperatorParams& p, const std::vector<double>& t_eval,
                             double dt) {
    LambdaLift lift(g);
    const int j0 = g.modes().zero_index();
    VectorXd a0 = lift.apply(component(at_n.eta_solid, 2)).c[0].col(j0);
    VectorXd a1 = lift.apply(component(at_n.v_solid, 2)).c[0].col(j0);
    std::vector<double> fw, bw;
    for (double te : t_eval) (te >= at_n.t ? fw : bw).push_back(te);
    FlatSolution sol_f = fw.empty() ? FlatSolution{}
                                    : solve_wave_1d(g, a0, a1, p, at_n.t, fw, dt);
    if (!bw.empty()) {
        FlatSolution sol_b = solve_wave_1d(g, a0, a1, p, at_n.t, bw, dt);
        // prepend backward results in ascending time order
        FlatSolution merged;
        merged.induced_q = sol_f.induced_q;
        for (int i = int(sol_b.times.size()) - 1; i >= 0; --i) {
            merged.times.push_back(sol_b.times[i]);
            merged.alpha.push_back(sol_b.alpha[i]);
            merged.alpha_t.push_back(sol_b.alpha_t[i]);
        }
        for (size_t i = 0; i < sol_f.times.size(); ++i) {
            merged.times.push_back(sol_f.times[i]);
            merged.alpha.push_back(sol_f.alpha[i]);
            merged.alpha_t.push_back(sol_f.alpha_t[i]);
        }
        merged.energy_drift = std::max(sol_f.energy_drift, sol_b.energy_drift);
        return merged;
    }
    return sol_f;
}

ConvergenceReport convergence_report(const Grid& g, const std::vector<TrajectorySnapshot>& traj,
                                     const SolidOperatorParams& p,
                                     const std::vector<double>& checkpoints, double dt) {
    ConvergenceReport rep;
    const auto& vs = g.solid();

    for (double n : checkpoints) {
        // nearest stored snapshot
        size_t best = 0;
        for (size_t i = 1; i < traj.size(); ++i)
            if (std::abs(traj[i].t - n) < std::abs(traj[best].t - n)) best = i;
        const TrajectorySnapshot& sn = traj[best];

        CheckpointReport cr;
        cr.n = sn.t;
        std::vector<double> evals{0.0};
        for (const auto& s : traj)
            if (s.t >= sn.t - 1e-12) evals.push_back(s.t);
        FlatSolution alpha = alpha_n_problem(g, sn, p, evals, dt);

        for (const auto& s : traj) {
            if (s.t < sn.t - 1e-12) continue;
            // locate the profile at this time
            size_t k = 0;
            for (size_t i = 0; i < alpha.times.size(); ++i)
                if (std::abs(alpha.times[i] - s.t) < 1e-9) k = i;
            cr.times.push_back(s.t);
            cr.v3_mismatch.push_back(mismatch_l2(g, component(s.v_solid, 2), alpha.alpha_t[k]));
            cr.eta3_mismatch.push_back(mismatch_h1(g, component(s.eta_solid, 2), alpha.alpha[k]));
        }
        size_t k0 = 0;
        for (size_t i = 0; i < alpha.times.size(); ++i)
            if (std::abs(alpha.times[i]) < 1e-9) k0 = i;
        cr.alpha_at_0 = alpha.alpha[k0];
        cr.alpha_t_at_0 = alpha.alpha_t[k0];
        cr.tail_mean_v3 = 0;
        for (double m : cr.v3_mismatch) cr.tail_mean_v3 += m;
        if (!cr.v3_mismatch.empty()) cr.tail_mean_v3 /= double(cr.v3_mismatch.size());
        rep.checkpoints.push_back(std::move(cr));
    }

    for (size_t i = 0; i + 1 < rep.checkpoints.size(); ++i) {
        VectorXd d = rep.checkpoints[i + 1].alpha_at_0 - rep.checkpoints[i].alpha_at_0;
        rep.cauchy_distances.push_back(
            std::sqrt(d.dot(vs.stiffP2() * d) + d.dot(vs.massP2() * d)));
    }
    rep.mismatch_decreasing = rep.checkpoints.size() >= 2;
    for (size_t i = 0; i + 1 < rep.checkpoints.size(); ++i)
        if (!(rep.checkpoints[i + 1].tail_mean_v3 < rep.checkpoints[i].tail_mean_v3))
            rep.mismatch_decreasing = false;
    rep.cauchy_trend = rep.cauchy_distances.size() >= 2;
    for (size_t i = 0; i + 1 < rep.cauchy_distances.size(); ++i)
        if (!(rep.cauchy_distances[i + 1] < rep.cauchy_distances[i])) rep.cauchy_trend = false;
    if (rep.cauchy_distances.size() == 1) rep.cauchy_trend = true;

    return rep;
}

} // namespace fsi
