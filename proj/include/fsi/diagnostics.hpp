#pragma once

#include "fsi/coupler.hpp"
#include "fsi/fluid.hpp"

#include <deque>
#include <optional>
#include <string>

namespace fsi {

/// Rolling velocity history for the backward time differences that feed the
/// norm machinery (v_t second order from three points, v_tt first order; the
/// first steps fall back to lower order and are flagged).
class History {
  public:
    void setInitialAccel(const Field& a) { a0_ = a; }
    void push(double t, const Field& v);
    int size() const { return int(snaps_.size()); }
    double dt() const;

    /// k-th backward time derivative of v at the newest time; order_out
    /// reports the difference order actually used (0 when unavailable).
    Field v_t(int* order_out = nullptr) const;
    Field v_tt(int* order_out = nullptr) const;

  private:
    std::deque<std::pair<double, Field>> snaps_; // newest at back, depth 3
    std::optional<Field> a0_;
};

/// One row of the diagnostics time series.
struct DiagnosticsRecord {
    double t = 0;
    double N = 0, D = 0, E_cum = 0;
    double flatness = 0;
    double volume_err = 0;
    double energy_residual = 0;
    double q_gamma_mean = 0;
    int picard_iters = 0;
    double crucial_lhs = 0, crucial_rhs = 0, crucial_ratio = 0;
    double N_sup = 0;
    double div_residual = 0;
    int deriv_order = 2; ///< order of the time-difference stencils used
    // Theorem-2 norm series
    double v_H2_fluid = 0, vt_H1_fluid = 0, vh_H1_solid = 0, etah_H2_solid = 0;
};

/// Norms of the functional framework. v_t/v_tt may be empty fields (treated
/// as zero and the record flagged).
double norm_N(const Grid& g, const State& s, const Field& v_t, const Field& v_tt,
              const Field& eta_e);
double norm_D(const Grid& g, const State& s, const Field& v_t, const Field& v_tt);

/// Solid volume from the interface integral
///   int_Gamma (h_e + eta^3)((1 + eta,1^1)(1 + eta,2^2) - eta,1^2 eta,2^1).
double solid_volume(const Grid& g, const HorizontalTransform& tr, const Field& eta_solid);

/// || eta ||_{H^{5/2}(Gamma)} of the interface trace.
double flatness(const Grid& g, const Field& eta_solid);

/// Accumulates the running functionals (E, the crucial-estimate integrals,
/// the N sup) and produces one record per step.
class DiagnosticsEngine {
  public:
    DiagnosticsEngine(const CoupledStepper& stepper, const HorizontalTransform& tr);

    /// Prime with the initial state; the consistency acceleration seeds the
    /// time-difference history.
    DiagnosticsRecord start(const State& s0, const Field& accel0);

    /// Record after one accepted step.
    DiagnosticsRecord record(const State& s, const StepStats& stats);

    double E0() const { return E0_; }
    const Field& eta_e() const { return eta_e_; }

  private:
    const CoupledStepper* stepper_;
    const HorizontalTransform* tr_;
    Field eta_e_;
    History hist_;
    double E0_ = 0;
    double N_sup_ = 0;
    double intD2_ = 0, intLhs_ = 0;
    double prevD2_ = 0, prevLhs_ = 0, prev_t_ = 0;
    double vol0_ = 0;
    double q_gamma_ref_ = 0;
    double ratio_sup_ = 0;

    DiagnosticsRecord makeRecord(const State& s, const StepStats* stats);
    double crucialIntegrand(const State& s) const;
};

/// CSV writers: the main time series and the Theorem-2 series.
std::string timeseriesHeader();
std::string timeseriesRow(const DiagnosticsRecord& r);
std::string theorem2Header();
std::string theorem2Row(const DiagnosticsRecord& r);

} // namespace fsi
