#pragma once

#include "fsi/field.hpp"
#include "fsi/ops.hpp"

#include <Eigen/Dense>
#include <memory>

namespace fsi {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Output of the Stokes extension problem: the fluid-slab extension of an
/// interface trace, the pressure-like multiplier, and the constant divergence
/// the compatibility condition imposes.
struct ExtensionResult {
    Field eta;        ///< 3-component P2 field on the fluid slab
    Field multiplier; ///< 1-component P1 field on the fluid slab
    double mean_flux = 0.0; ///< - (1/|Omega0f|) * int_Gamma trace^3
};

/// Mode-by-mode solver of the linear Stokes extension problem
///   -Lap(eta~) + grad f = 0,  div eta~ = mean_flux,
///   eta~ = trace on Gamma,    eta~ = 0 on Gamma_top.
/// For every oscillatory mode the saddle systems are factorized once at
/// construction; the zero mode decouples into Laplace-Dirichlet horizontal
/// components and a directly integrated vertical profile carrying the whole
/// divergence constant. The same operator extends interface velocities
/// (including the time-differentiated traces), with the divergence constant
/// taken from the velocity trace mean.
class StokesExtension {
  public:
    StokesExtension(const Grid& grid);

    /// Solve for a 3-component interface trace. Throws SolverError on NaN
    /// input; a singular saddle factorization is reported at construction.
    ExtensionResult extend(const TraceField& trace) const;
    /// Identical operator; named view for velocity-type data.
    ExtensionResult extend_velocity(const TraceField& trace_v) const {
        return extend(trace_v);
    }

    const Grid& grid() const { return *grid_; }

  private:
    const Grid* grid_;
    // per active oscillatory mode: factorized complex saddle matrix and the
    // boundary-lifting columns
    struct ModeSolver {
        Eigen::FullPivLU<Eigen::MatrixXcd> lu;
        Eigen::MatrixXcd lift; // rhs contribution per unit boundary value, 3 columns
    };
    std::vector<ModeSolver> solvers_; // indexed like modes().active()[1..]
    int ni_ = 0;                      // interior P2 nodes per component
    int nq_ = 0;                      // P1 nodes
};

/// Discrete counterpart of the elliptic-regularity bound for the extension:
/// ratio ||dbar eta~||_{H^2(fluid)} / ||dbar trace||_{H^{3/2}(Gamma)} summed
/// over both horizontal derivatives (0/0 -> 0).
double extensionRegularityRatio(const Grid& g, const StokesExtension& ext, const TraceField& trace);

} // namespace fsi
