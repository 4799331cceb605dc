#pragma once

#include "fsi/extension.hpp"
#include "fsi/kinematics.hpp"
#include "fsi/solid.hpp"

#include <complex>
#include <memory>
#include <vector>

namespace fsi {

struct GuardViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Full simulation state. The velocity is a single field on the whole
/// channel (continuity across Gamma holds by construction; v = 0 on the
/// walls exactly). q is the midpoint pressure of the step that produced the
/// state (the consistency pressure at t = 0).
struct State {
    double t = 0;
    Field v;   ///< channel, 3 components
    Field eta; ///< solid displacement, 3 components
    Field q;   ///< fluid pressure, P1
    ExtensionResult ext; ///< Stokes extension of eta's interface trace
    Field vtilde;        ///< extension of v's interface trace
    KinematicPackage pkg; ///< geometry of ext.eta (Gauss rows + guards)
};

struct StepStats {
    int sweeps = 0;
    double residual = 0;      ///< final Picard update, relative
    double div_residual = 0;  ///< || a:grad v ||_{L2} / max(||grad v||, eps)
    double energy_before = 0; ///< conserved ledger total at t^n
    double energy_after = 0;  ///< and at t^{n+1}
    double dissipation = 0;   ///< int nu (a^T A)^mid grad v^mid : grad v^mid
    double grav_work_fluid = 0; ///< g dt int J^mid (v^mid)^3
    double pressure_work = 0;   ///< diagnostic; zero up to quadrature pairing
    double energy_defect = 0;   ///< r = dE + dt*dissipation + grav work
};

/// Monolithic implicit-midpoint integrator of the coupled variational form:
/// one constant-coefficient saddle solve per mode per Picard sweep, with all
/// geometric deviations (the ALE terms) lagged on the right-hand side.
class CoupledStepper {
  public:
    CoupledStepper(const Grid& g, const HorizontalTransform& tr, const Kinematics& kin,
                   const StokesExtension& ext);
    ~CoupledStepper();

    /// Build a full state from primitive fields (q from a consistency solve
    /// if q_opt is null).
    State makeState(double t, const Field& v, const Field& eta, const Field* q_opt = nullptr) const;

    /// Advance in place by one implicit-midpoint step.
    void step(State& s, double dt, StepStats& stats, bool want_diagnostics = false) const;

    struct Consistency {
        Field q;     ///< pressure consistent with the state
        Field accel; ///< v_t consistent with the state (channel field)
    };
    /// Solve the coupled system for (v_t, q) holding (v, eta) fixed; the
    /// initial-pressure substitution for the moving-domain Dirichlet-Neumann
    /// problem, and the source of v_t(0) for the norm machinery.
    Consistency consistencySolve(const State& s) const;

    /// Conserved ledger total: J-weighted fluid kinetic + weighted solid
    /// kinetic/elastic + solid gravity potential - interface offset potential.
    double totalEnergy(const State& s) const;

    /// || a^end : grad v ||_{L2(fluid)} relative to ||grad v||.
    double divergenceResidual(const State& s) const;

    const Grid& grid() const { return *g_; }
    const StokesExtension& extension() const { return *ext_; }
    const Kinematics& kinematics() const { return *kin_; }

  private:
    const Grid* g_;
    const HorizontalTransform* tr_;
    const Kinematics* kin_;
    const StokesExtension* ext_;

    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace fsi
