#pragma once

#include "fsi/field.hpp"
#include "fsi/ops.hpp"
#include "fsi/transform.hpp"

#include <array>

namespace fsi {

/// 3x3 tensor sampled on (vertical rows x collocation points); entry (i,j)
/// is component i differentiated by / paired with direction j.
using PhysTensor = std::array<Eigen::MatrixXd, 9>;

inline Eigen::MatrixXd& at(PhysTensor& t, int i, int j) { return t[3 * i + j]; }
inline const Eigen::MatrixXd& at(const PhysTensor& t, int i, int j) { return t[3 * i + j]; }

/// Geometric package of the ALE map X~ = Id + eta~ evaluated pointwise on the
/// padded collocation grid. G = grad(eta~), so F = Id + G; J = det F; the
/// cofactor a_i^j is the signed minor of F_ij (Piola holds row-wise, the
/// third column is X,1 x X,2); A = a/J carries the paper's A~, i.e. the
/// inverse-transpose entries (F^-T)_ij. A J = a holds exactly by
/// construction; A^T F = Id is the independent check.
struct KinematicPackage {
    // at the fluid Gauss rows (assembly)
    PhysTensor G_g, cof_g, A_g;
    Eigen::MatrixXd J_g;
    // at the fluid P2 node rows (export, guards); vertical derivatives here
    // are the L2-projected ones
    PhysTensor G_n, cof_n, A_n;
    Eigen::MatrixXd J_n;
    bool has_nodal = false;

    bool valid = true;
    double J_min = 1.0, J_max = 1.0, A_dev_inf = 0.0;

    /// Nodal mode-coefficient views (analysis of the node-row samples);
    /// gradX_field holds grad X~ = Id + grad eta~.
    Field J_field, cof_field, A_field, gradX_field;
};

/// Assembler bound to a grid/transform pair; precomputes evaluation tables.
class Kinematics {
  public:
    Kinematics(const Grid& g, const HorizontalTransform& tr);

    /// Full package including guards and nodal views. Throws on NaN input.
    KinematicPackage assemble(const Field& eta_tilde) const;

    /// Gauss-row part only (the stepping hot path); guards still evaluated.
    void assembleGauss(const Field& eta_tilde, KinematicPackage& pkg) const;

    /// max_i || a_i^j,_j ||_{L2(fluid)} of the nodal cofactor view; zero for
    /// affine maps, O(h^p) otherwise.
    double piola_residual(const KinematicPackage& pkg) const;

    /// || J - (1 + div eta~ + B + C) ||_inf with the bilinear/trilinear det
    /// expansion assembled independently from the same samples.
    double jacobian_identity_check(const Field& eta_tilde) const;

    /// || A^T F - Id ||_inf at the Gauss rows.
    double inverse_identity_check(const KinematicPackage& pkg) const;

    /// || (a_i^3)_i - X,1 x X,2 ||_inf at the Gauss rows (normal formula).
    double normal_identity_check(const KinematicPackage& pkg) const;

    const Grid& grid() const { return *g_; }
    const HorizontalTransform& transform() const { return *tr_; }

    /// Physical samples of grad(eta~) at the Gauss rows (i row-major over j).
    PhysTensor gradPhysGauss(const Field& eta_tilde) const;
    PhysTensor gradPhysNodes(const Field& eta_tilde) const;

    /// Cofactor/Jacobian/inverse algebra of F = Id + G, pointwise.
    static void pointwiseAlgebra(const PhysTensor& G, PhysTensor& cof, PhysTensor& A,
                                 Eigen::MatrixXd& J);

  private:
    const Grid* g_;
    const HorizontalTransform* tr_;
    Eigen::MatrixXd Dn_; // projected nodal derivative matrix (np2 x np2)

    PhysTensor gradPhys(const Field& eta, const Eigen::MatrixXd& evalN,
                        const Eigen::MatrixXd& evalD) const;
};

} // namespace fsi
