#pragma once

#include "fsi/extension.hpp"
#include "fsi/kinematics.hpp"
#include "fsi/solid.hpp"

namespace fsi {

/// Fluid phase in ALE variables on the reference slab.
struct FluidState {
    Field v;       ///< 3-comp P2 on the fluid slab, zero on Gamma_top
    Field q;       ///< 1-comp P1 pressure
    Field v_tilde; ///< extension velocity
    const KinematicPackage* pkg = nullptr;
};

/// Weak-form residual of the ALE momentum equation against fluid test
/// functions (all P2 rows returned; rows at Gamma carry the natural boundary
/// term and are the coupler's business):
///   <J v_t, phi> + <(v - v~)_l a_l^j v,_j, phi> + nu <a_j^l A_j^k v,_k, phi,_l>
///   - <a_i^j q, phi^i,_j> + g <J, phi^3>
/// Returned as dual coefficients per mode (a Field-shaped container).
Field momentum_residual(const Kinematics& kin, const FluidState& st, const Field& v_t,
                        const DomainConfig& cfg);

/// A_i^j v,_j^i as a nodal field (and equivalently a_i^j v,_j^i / J).
Field ale_divergence(const Kinematics& kin, const FluidState& st);

/// Recovered pressure gradient -q,_m from the momentum equation contracted
/// with X~,_m (cross-check against the stored q's gradient):
///   -q,_m = (v_t^i + (v-v~)_l A_l^j v,_j^i - nu A_j^l (A_j^k v,_k),_l
///            + g delta_3^i) (eta~,_m^i + delta_m^i)
Field pressure_gradient_recovery(const Kinematics& kin, const FluidState& st, const Field& v_t,
                                 const DomainConfig& cfg);

/// Interface pressure from the stress-continuity contraction
///   q det(grad X~) = (T^i + nu a_j^3 A_j^k v^i,_k)(eta~,_3^i + delta_3^i)
/// with T the solid traction; a consistency diagnostic for q on Gamma.
TraceField boundary_pressure(const Kinematics& kin, const FluidState& st,
                             const TraceField& traction);

} // namespace fsi
