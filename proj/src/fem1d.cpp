#include "fsi/fem1d.hpp"

#include <cmath>
#include <stdexcept>

namespace fsi {

namespace {

// reference P2 shapes on [0,1]: nodes at 0, 1/2, 1
inline void shapeP2(double x, double N[3], double dN[3]) {
    N[0] = (1 - x) * (1 - 2 * x);
    N[1] = 4 * x * (1 - x);
    N[2] = x * (2 * x - 1);
    dN[0] = 4 * x - 3;
    dN[1] = 4 - 8 * x;
    dN[2] = 4 * x - 1;
}

inline void shapeP1(double x, double N[2]) {
    N[0] = 1 - x;
    N[1] = x;
}

} // namespace

VerticalSpace::VerticalSpace(double z0, double z1, int ncells)
    : z0_(z0), z1_(z1), nc_(ncells) {
    if (!(z1 > z0) || ncells < 1) throw std::invalid_argument("bad vertical grid");
    hz_ = (z1 - z0) / nc_;

    nodes_.resize(np2());
    for (int i = 0; i < np2(); ++i) nodes_[i] = z0_ + 0.5 * hz_ * i;
    verts_.resize(np1());
    for (int i = 0; i < np1(); ++i) verts_[i] = z0_ + hz_ * i;

    // 3-point Gauss rule on [0,1]
    const double s = std::sqrt(3.0 / 5.0);
    const double gx[NQ] = {0.5 * (1 - s), 0.5, 0.5 * (1 + s)};
    const double gw[NQ] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

    qpts_.resize(nq());
    qwts_.resize(nq());
    evalQ_ = Eigen::MatrixXd::Zero(nq(), np2());
    evalQd_ = Eigen::MatrixXd::Zero(nq(), np2());
    evalQP1_ = Eigen::MatrixXd::Zero(nq(), np1());

    for (int e = 0; e < nc_; ++e) {
        for (int q = 0; q < NQ; ++q) {
            const int r = e * NQ + q;
            qpts_[r] = z0_ + hz_ * (e + gx[q]);
            qwts_[r] = gw[q] * hz_;
            double N[3], dN[3], N1[2];
            shapeP2(gx[q], N, dN);
            shapeP1(gx[q], N1);
            for (int a = 0; a < 3; ++a) {
                evalQ_(r, 2 * e + a) += N[a];
                evalQd_(r, 2 * e + a) += dN[a] / hz_;
            }
            evalQP1_(r, e) += N1[0];
            evalQP1_(r, e + 1) += N1[1];
        }
    }

    loadQ_ = evalQ_.transpose() * qwts_.asDiagonal();
    fluxQ_ = evalQd_.transpose() * qwts_.asDiagonal();
    loadQP1_ = evalQP1_.transpose() * qwts_.asDiagonal();

    massP2_ = loadQ_ * evalQ_;
    stiffP2_ = fluxQ_ * evalQd_;
    gradP2_ = loadQ_ * evalQd_;
    massP1_ = loadQP1_ * evalQP1_;
    mixedMass_ = loadQ_ * evalQP1_;
    mixedGrad_ = fluxQ_ * evalQP1_;
    divP2P1_ = loadQP1_ * evalQd_;

    massP2Solver_.compute(massP2_);
}

Eigen::MatrixXd VerticalSpace::projectedDerivative(const Eigen::MatrixXd& u) const {
    return massP2Solver_.solve(gradP2_ * u);
}

double VerticalSpace::eval(const Eigen::VectorXd& u, double z) const {
    double t = (z - z0_) / hz_;
    int e = std::min(std::max(int(std::floor(t)), 0), nc_ - 1);
    double x = t - e;
    double N[3], dN[3];
    shapeP2(x, N, dN);
    return N[0] * u[2 * e] + N[1] * u[2 * e + 1] + N[2] * u[2 * e + 2];
}

double VerticalSpace::evalDeriv(const Eigen::VectorXd& u, double z) const {
    double t = (z - z0_) / hz_;
    int e = std::min(std::max(int(std::floor(t)), 0), nc_ - 1);
    double x = t - e;
    double N[3], dN[3];
    shapeP2(x, N, dN);
    return (dN[0] * u[2 * e] + dN[1] * u[2 * e + 1] + dN[2] * u[2 * e + 2]) / hz_;
}

} // namespace fsi
