#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fsi {

/// Continuous piecewise-quadratic (P2) / piecewise-linear (P1) spaces on a
/// uniform 1D grid, with exact Gauss quadrature. Velocity and displacement
/// profiles live in P2, pressure-like multipliers in P1.
///
/// P2 node ordering: vertex, midside, vertex, midside, ... (2*ncells+1 nodes,
/// node 2*e is the left vertex of cell e). P1 nodes are the vertices.
class VerticalSpace {
  public:
    static constexpr int NQ = 3; // Gauss points per cell; exact through degree 5

    VerticalSpace() = default;
    VerticalSpace(double z0, double z1, int ncells);

    double z0() const { return z0_; }
    double z1() const { return z1_; }
    int ncells() const { return nc_; }
    double hz() const { return hz_; }
    int np2() const { return 2 * nc_ + 1; }
    int np1() const { return nc_ + 1; }
    int nq() const { return NQ * nc_; }

    /// P2 node coordinates (size np2).
    const Eigen::VectorXd& nodes() const { return nodes_; }
    /// P1 (vertex) node coordinates (size np1).
    const Eigen::VectorXd& vertices() const { return verts_; }
    /// Quadrature point coordinates (size nq).
    const Eigen::VectorXd& qpoints() const { return qpts_; }
    /// Quadrature weights including the cell Jacobian (size nq).
    const Eigen::VectorXd& qweights() const { return qwts_; }

    // Assembled operators (dense; the profiles are tiny).
    const Eigen::MatrixXd& massP2() const { return massP2_; }   ///< <u, v>
    const Eigen::MatrixXd& stiffP2() const { return stiffP2_; } ///< <u', v'>
    const Eigen::MatrixXd& gradP2() const { return gradP2_; }   ///< G_ab = <phi_a, phi_b'>
    const Eigen::MatrixXd& massP1() const { return massP1_; }   ///< <q, r> on P1
    const Eigen::MatrixXd& mixedMass() const { return mixedMass_; } ///< <q_P1, phi_P2>: np2 x np1
    const Eigen::MatrixXd& mixedGrad() const { return mixedGrad_; } ///< <q_P1, phi_P2'>: np2 x np1
    const Eigen::MatrixXd& divP2P1() const { return divP2P1_; }     ///< <u_P2', r_P1>: np1 x np2

    /// Evaluation of P2 basis at quadrature points: (nq x np2); and of its
    /// derivative. evalQ()*u gives point values of the profile u.
    const Eigen::MatrixXd& evalQ() const { return evalQ_; }
    const Eigen::MatrixXd& evalQd() const { return evalQd_; }
    /// P1 basis values at quadrature points (nq x np1).
    const Eigen::MatrixXd& evalQP1() const { return evalQP1_; }

    /// Load assembler: loadQ() * r, with r integrand values at quadrature
    /// points, yields the P2 load vector <r, phi>. (np2 x nq), equals
    /// evalQ()^T * diag(qweights).
    const Eigen::MatrixXd& loadQ() const { return loadQ_; }
    /// Flux assembler: fluxQ() * r yields <r, phi'>. (np2 x nq)
    const Eigen::MatrixXd& fluxQ() const { return fluxQ_; }
    /// P1 load assembler: (np1 x nq).
    const Eigen::MatrixXd& loadQP1() const { return loadQP1_; }

    /// L2-projected derivative: d = massP2^{-1} * gradP2 * u. Applies the
    /// factorization column-wise to a matrix of profiles.
    Eigen::MatrixXd projectedDerivative(const Eigen::MatrixXd& u) const;

    /// Nodal interpolation of a scalar function.
    template <class F> Eigen::VectorXd interpolate(F&& f) const {
        Eigen::VectorXd v(np2());
        for (int i = 0; i < np2(); ++i) v[i] = f(nodes_[i]);
        return v;
    }

    /// Evaluate a P2 profile at an arbitrary point.
    double eval(const Eigen::VectorXd& u, double z) const;
    double evalDeriv(const Eigen::VectorXd& u, double z) const;

    /// <u, v> and <u', v'> inner products of P2 profiles.
    double ip_mass(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
        return u.dot(massP2_ * v);
    }
    double ip_stiff(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
        return u.dot(stiffP2_ * v);
    }

  private:
    double z0_ = 0, z1_ = 1, hz_ = 1;
    int nc_ = 0;
    Eigen::VectorXd nodes_, verts_, qpts_, qwts_;
    Eigen::MatrixXd massP2_, stiffP2_, gradP2_, massP1_, mixedMass_, mixedGrad_, divP2P1_;
    Eigen::MatrixXd evalQ_, evalQd_, evalQP1_, loadQ_, fluxQ_, loadQP1_;
    Eigen::LDLT<Eigen::MatrixXd> massP2Solver_;
};

} // namespace fsi
