#pragma once

#include <stdexcept>
#include <string>

namespace fsi {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Geometry, physics and run parameters for the periodic channel
/// (0,L)^2 x (0,h), partitioned at x3 = h_e into solid and fluid slabs.
/// The solid's natural reference height is h_s; h_e != h_s selects the
/// compressed/extended configuration with rescaled vertical stiffness.
struct DomainConfig {
    double L = 1.0;   ///< horizontal period
    double h = 2.0;   ///< channel height
    double h_s = 1.0; ///< natural solid height, 0 < h_s < h
    double h_e = -1.0; ///< initial solid height; negative means "use h_s"

    double nu = 1.0;     ///< fluid viscosity, > 0
    double lambda = 4.0; ///< elastic coefficient, > 0
    double g = 0.0;      ///< gravity, >= 0

    int M = 4;   ///< horizontal modes per direction, >= 1
    int Ns = 16; ///< vertical cells in the solid slab
    int Nf = 16; ///< vertical cells in the fluid slab

    double dt = -1.0;   ///< time step; negative means default 0.01*h_e/sqrt(lambda)
    double T_end = 10.0;

    // kinematic guard window (discrete counterpart of the near-identity
    // a-priori bounds the analysis assumes)
    double jac_lo = 0.99;
    double jac_hi = 1.01;
    double ainv_guard_factor = 0.01;

    // coupled solver controls
    int max_sweeps = 5;
    double tol_picard = 1e-10;
    double tol_div = 1e-10;

    // when g > 0, warn unless lambda/g exceeds this ratio
    double lambda_over_g_min = 5.0;

    /// Fill defaulted entries (h_e, dt). Idempotent.
    void finalize();

    /// Throw ConfigError on invariant violations; returns a warning string
    /// (possibly empty) for soft conditions such as the lambda/g ratio.
    std::string validate() const;

    double effective_dt() const;

    double fluid_volume() const { return L * L * (h - h_e); }
    double solid_volume() const { return L * L * h_e; }

    /// Solid mass/horizontal-stiffness weight h_s/h_e (1 when h_e == h_s).
    double mass_weight() const { return h_s / h_e; }
    /// Vertical stiffness scale (h_e/h_s)^2 of the modified wave equation.
    double stiff_scale() const { return (h_e / h_s) * (h_e / h_s); }
    /// Constant vertical traction offset lambda*(h_s-h_e)/h_s on the interface.
    double traction_offset() const { return lambda * (h_s - h_e) / h_s; }

    bool h_shifted() const { return h_e != h_s; }
};

} // namespace fsi
