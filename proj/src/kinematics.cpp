#include "fsi/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace fsi {

using Eigen::ArrayXXd;
using Eigen::MatrixXd;

Kinematics::Kinematics(const Grid& g, const HorizontalTransform& tr) : g_(&g), tr_(&tr) {
    const auto& vs = g.fluid();
    Dn_ = vs.massP2().ldlt().solve(vs.gradP2());
}

PhysTensor Kinematics::gradPhys(const Field& eta, const MatrixXd& evalN,
                                const MatrixXd& evalD) const {
    PhysTensor out;
    for (int i = 0; i < 3; ++i) {
        Field d1 = horizontal_derivative(*g_, component(eta, i), 1);
        Field d2 = horizontal_derivative(*g_, component(eta, i), 2);
        at(out, i, 0) = tr_->toPhys(evalN * d1.c[0]);
        at(out, i, 1) = tr_->toPhys(evalN * d2.c[0]);
        at(out, i, 2) = tr_->toPhys(evalD * eta.c[i]);
    }
    return out;
}

PhysTensor Kinematics::gradPhysGauss(const Field& eta) const {
    return gradPhys(eta, g_->fluid().evalQ(), g_->fluid().evalQd());
}

PhysTensor Kinematics::gradPhysNodes(const Field& eta) const {
    const int n = g_->fluid().np2();
    return gradPhys(eta, MatrixXd::Identity(n, n), Dn_);
}

void Kinematics::pointwiseAlgebra(const PhysTensor& G, PhysTensor& cof, PhysTensor& A,
                                  MatrixXd& J) {
    auto F = [&](int i, int j) { return (at(G, i, j).array() + (i == j ? 1.0 : 0.0)); };

    // signed 2x2 minors via cyclic index pairs
    for (int i = 0; i < 3; ++i) {
        const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
        for (int j = 0; j < 3; ++j) {
            const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
            at(cof, i, j) = (F(i1, j1) * F(i2, j2) - F(i1, j2) * F(i2, j1)).matrix();
        }
    }
    J = (F(0, 0) * at(cof, 0, 0).array() + F(0, 1) * at(cof, 0, 1).array() +
         F(0, 2) * at(cof, 0, 2).array())
            .matrix();
    for (int e = 0; e < 9; ++e) A[e] = (cof[e].array() / J.array()).matrix();
}

void Kinematics::assembleGauss(const Field& eta_tilde, KinematicPackage& pkg) const {
    if (eta_tilde.hasNaN()) throw std::runtime_error("kinematics: NaN in eta_tilde");
    pkg.G_g = gradPhysGauss(eta_tilde);
    pointwiseAlgebra(pkg.G_g, pkg.cof_g, pkg.A_g, pkg.J_g);

    const auto& cfg = g_->config();
    pkg.J_min = pkg.J_g.minCoeff();
    pkg.J_max = pkg.J_g.maxCoeff();
    double adev = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double d = (at(pkg.A_g, i, j).array() - (i == j ? 1.0 : 0.0)).abs().maxCoeff();
            adev = std::max(adev, d);
        }
    pkg.A_dev_inf = adev;
    const double athresh =
        cfg.ainv_guard_factor * std::min(1.0, 1.0 / std::sqrt(cfg.fluid_volume()));
    pkg.valid = pkg.J_g.allFinite() && pkg.J_min >= cfg.jac_lo && pkg.J_max <= cfg.jac_hi &&
                adev <= athresh;
}

KinematicPackage Kinematics::assemble(const Field& eta_tilde) const {
    KinematicPackage pkg;
    assembleGauss(eta_tilde, pkg);
    pkg.G_n = gradPhysNodes(eta_tilde);
    pointwiseAlgebra(pkg.G_n, pkg.cof_n, pkg.A_n, pkg.J_n);
    pkg.has_nodal = true;

    const Grid& g = *g_;
    pkg.J_field = makeField(g, Slab::Fluid, 1);
    pkg.J_field.c[0] = tr_->toModes(pkg.J_n);
    pkg.cof_field = makeField(g, Slab::Fluid, 9);
    pkg.A_field = makeField(g, Slab::Fluid, 9);
    pkg.gradX_field = makeField(g, Slab::Fluid, 9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const int e = 3 * i + j;
            pkg.cof_field.c[e] = tr_->toModes(pkg.cof_n[e]);
            pkg.A_field.c[e] = tr_->toModes(pkg.A_n[e]);
            MatrixXd Fn = pkg.G_n[e];
            if (i == j) Fn.array() += 1.0;
            pkg.gradX_field.c[e] = tr_->toModes(Fn);
        }
    return pkg;
}

double Kinematics::piola_residual(const KinematicPackage& pkg) const {
    const Grid& g = *g_;
    double worst = 0;
    for (int i = 0; i < 3; ++i) {
        Field div = makeField(g, Slab::Fluid, 1);
        for (int j = 0; j < 2; ++j) {
            Field cij = component(pkg.cof_field, 3 * i + j);
            div += horizontal_derivative(g, cij, j + 1);
        }
        Field ci3 = component(pkg.cof_field, 3 * i + 2);
        div += vertical_derivative(g, ci3);
        worst = std::max(worst, l2_norm(g, div));
    }
    return worst;
}

double Kinematics::jacobian_identity_check(const Field& eta_tilde) const {
    PhysTensor G = gradPhysGauss(eta_tilde);
    PhysTensor cof, A;
    MatrixXd J;
    pointwiseAlgebra(G, cof, A, J);

    auto gi = [&](int i, int j) { return at(G, i, j).array(); };
    // det(I+G) = 1 + tr G + B(G) + C(G): B the sum of principal 2x2 minors,
    // C = det G; each product carries at least one horizontal derivative for
    // a Stokes-extended eta~ (constant divergence), which is what makes the
    // expansion useful, but the identity itself is unconditional
    auto trG = gi(0, 0) + gi(1, 1) + gi(2, 2);
    auto B = gi(0, 0) * gi(1, 1) - gi(0, 1) * gi(1, 0) + gi(0, 0) * gi(2, 2) -
             gi(0, 2) * gi(2, 0) + gi(1, 1) * gi(2, 2) - gi(1, 2) * gi(2, 1);
    auto C = gi(0, 0) * (gi(1, 1) * gi(2, 2) - gi(1, 2) * gi(2, 1)) -
             gi(0, 1) * (gi(1, 0) * gi(2, 2) - gi(1, 2) * gi(2, 0)) +
             gi(0, 2) * (gi(1, 0) * gi(2, 1) - gi(1, 1) * gi(2, 0));
    MatrixXd rhs = (1.0 + trG + B + C).matrix();
    return (J - rhs).cwiseAbs().maxCoeff();
}

double Kinematics::inverse_identity_check(const KinematicPackage& pkg) const {
    const auto& G = pkg.G_g;
    double worst = 0;
    for (int l = 0; l < 3; ++l)
        for (int k = 0; k < 3; ++k) {
            ArrayXXd s = ArrayXXd::Zero(pkg.J_g.rows(), pkg.J_g.cols());
            for (int i = 0; i < 3; ++i) {
                ArrayXXd Fik = at(G, i, k).array() + (i == k ? 1.0 : 0.0);
                s += at(pkg.A_g, i, l).array() * Fik;
            }
            s -= (l == k ? 1.0 : 0.0);
            worst = std::max(worst, s.abs().maxCoeff());
        }
    return worst;
}

double Kinematics::normal_identity_check(const KinematicPackage& pkg) const {
    const auto& G = pkg.G_g;
    auto F = [&](int i, int j) { return at(G, i, j).array() + (i == j ? 1.0 : 0.0); };
    double worst = 0;
    for (int i = 0; i < 3; ++i) {
        const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
        ArrayXXd cross = F(i1, 0) * F(i2, 1) - F(i2, 0) * F(i1, 1);
        worst = std::max(worst, (at(pkg.cof_g, i, 2).array() - cross).abs().maxCoeff());
    }
    return worst;
}

} // namespace fsi
