#pragma once

#include "fsi/field.hpp"
#include "fsi/ops.hpp"

namespace fsi {

/// Elastic phase state on the solid reference slab [0, h_e].
struct SolidState {
    Field eta; ///< displacement, 3 components, zero at Gamma_B
    Field v;   ///< velocity, 3 components, zero at Gamma_B
};

/// Coefficients of the (possibly h-shifted) wave operator
///   v_t = lambda Lap0 eta + lambda (h_e/h_s)^2 eta,33 - g d3,
/// plus the constant traction offset the fluid side sees.
struct SolidOperatorParams {
    double lambda = 1.0;
    double scale = 1.0; ///< (h_e/h_s)^2, 1 when h_e == h_s
    double g = 0.0;
    double traction_offset = 0.0; ///< lambda (h_s - h_e)/h_s

    static SolidOperatorParams fromConfig(const DomainConfig& c) {
        return {c.lambda, c.stiff_scale(), c.g, c.traction_offset()};
    }
};

/// Galerkin application of lambda*Lap0 + lambda*scale*d33: mass-solve of the
/// weak form with the interface flux left natural, so the rows touching
/// Gamma are only meaningful once the coupler supplies the traction; interior
/// values are the operator.
Field wave_apply(const Grid& g, const Field& eta, const SolidOperatorParams& p);

/// eta_e = (0,0, (g/2 lambda)(h_s^2/h_e^2) x3 (x3 - h_e)), v = 0.
SolidState equilibrium_displacement(const Grid& g);

/// The solid's contribution to the fluid Neumann data on Gamma:
///   -lambda (h_e/h_s) eta,3 + lambda (h_s - h_e)/h_s d3,
/// with eta,3 the exact one-sided P2 derivative at the interface.
TraceField solid_traction(const Grid& g, const SolidState& s, const SolidOperatorParams& p);

struct SolidEnergy {
    double kinetic = 0, elastic = 0, gravitational = 0;
};

/// kinetic = 1/2 ||v||^2, elastic = (lambda/2) int (|grad0 eta|^2 +
/// scale |eta,3|^2), gravitational = g int eta^3. (Unweighted forms; the
/// coupler's conserved ledger carries the h_s/h_e mass weight separately.)
SolidEnergy solid_energy(const Grid& g, const SolidState& s, const SolidOperatorParams& p);

/// Dual (load-vector) form of the wave operator: d_i = -lambda (lambda_n M +
/// scale K) eta_i per mode, the exact stiffness pairing used by tests and the
/// coupler. Returned as a Field holding dual coefficients.
Field wave_dual(const Grid& g, const Field& eta, const SolidOperatorParams& p);

} // namespace fsi
