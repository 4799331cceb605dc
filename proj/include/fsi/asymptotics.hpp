#pragma once

#include "fsi/field.hpp"
#include "fsi/ops.hpp"
#include "fsi/solid.hpp"

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

namespace fsi {

/// A flat-interface solution: purely vertical solid motion alpha(x3,t) with
/// alpha = 0 at both ends, zero fluid velocity, and the induced hydrostatic
/// fluid pressure. Profiles are P2 on the solid vertical grid.
struct FlatSolution {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> alpha;   ///< displacement profiles at times
    std::vector<Eigen::VectorXd> alpha_t; ///< velocity profiles at times
    double energy_drift = 0.0;            ///< max |E(t)-E(0)| over the solve

    /// q(x3,t) = -g (x3 - h_e) - lambda (h_e/h_s) alpha,3(h_e,t) + offset
    struct InducedPressure {
        double g = 0, coeff = 0, offset = 0, h_e = 0;
        std::vector<double> alpha3_gamma; ///< alpha,3 at the interface per time
    } induced_q;
};

/// Implicit-midpoint solve of alpha_tt = lambda (h_e/h_s)^2 alpha,33 - g with
/// zero Dirichlet data, from t_start with data (alpha0, alpha1), recording
/// profiles at |t_eval| (monotone, forward if t_eval ahead of t_start,
/// backward otherwise -- the wave equation is time revertible). Throws if the
/// endpoint compatibility alpha0 = alpha1 = 0 on {0, h_e} fails.
FlatSolution solve_wave_1d(const Grid& g, const Eigen::VectorXd& alpha0,
                           const Eigen::VectorXd& alpha1, const SolidOperatorParams& p,
                           double t_start, const std::vector<double>& t_eval, double dt);

/// The elliptic lift: Lap(Lf) = Lap(f) in the solid slab, Lf = 0 on Gamma and
/// Gamma_B, horizontally periodic; a projection annihilating constants (and
/// anything harmonic-affine per mode).
class LambdaLift {
  public:
    explicit LambdaLift(const Grid& g);
    Field apply(const Field& f) const;
    /// Measured stability ratio ||Lf||_H1 / ||f||_H1 (0 for f = 0).
    double stability_ratio(const Field& f) const;

  private:
    const Grid* g_;
    std::vector<Eigen::LDLT<Eigen::MatrixXd>> solvers_; // per active mode
};

/// Snapshot of the coupled trajectory that the asymptotics layer consumes.
struct TrajectorySnapshot {
    double t = 0;
    Field v_solid;   ///< 3-comp solid velocity
    Field eta_solid; ///< 3-comp solid displacement
};

/// The time-n wave problem: alpha^n solves the 1D wave equation with data
/// m(L eta^3), m(L v^3) prescribed at time n, evaluated at t_eval (forward
/// and/or backward of n).
FlatSolution alpha_n_problem(const Grid& g, const TrajectorySnapshot& at_n,
                             const SolidOperatorParams& p, const std::vector<double>& t_eval,
                             double dt);

/// Theorem-2 metrics at one checkpoint n over subsequent snapshot times:
/// the alpha^n mismatch series and the backward-evolved initial profile.
struct CheckpointReport {
    double n = 0;
    std::vector<double> times;        ///< snapshot times >= n
    std::vector<double> v3_mismatch;  ///< ||v^3 - alpha^n_t||_{L2(solid)}
    std::vector<double> eta3_mismatch; ///< ||eta^3 - alpha^n||_{H1(solid)}
    Eigen::VectorXd alpha_at_0, alpha_t_at_0; ///< backward-evolved data at t=0
    double tail_mean_v3 = 0;
};

struct ConvergenceReport {
    std::vector<CheckpointReport> checkpoints;
    /// pairwise H1 distances of successive alpha^n(.,0) backward profiles
    std::vector<double> cauchy_distances;
    bool mismatch_decreasing = false; ///< tail means strictly decreasing in n
    bool cauchy_trend = false;        ///< pairwise distances decreasing
};

ConvergenceReport convergence_report(const Grid& g,
                                     const std::vector<TrajectorySnapshot>& traj,
                                     const SolidOperatorParams& p,
                                     const std::vector<double>& checkpoints, double dt);

/// ||f - alpha||-type mismatches treating a 1D profile as a constant-in-x_h
/// field on the solid slab.
double mismatch_l2(const Grid& g, const Field& f3, const Eigen::VectorXd& prof);
double mismatch_h1(const Grid& g, const Field& f3, const Eigen::VectorXd& prof);

} // namespace fsi
