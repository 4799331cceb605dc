#pragma once

#include "fsi/grid.hpp"

#include <Eigen/Dense>

namespace fsi {

/// Synthesis/analysis between the real mode basis and a padded uniform
/// collocation grid of Ng x Ng points, Ng = 4M+1. With that padding,
/// pointwise products of up to three band-limited fields analyze back to the
/// retained modes without aliasing, and horizontal integrals of quartic
/// products are exact; analysis truncation to |k| <= M is the dealiasing
/// step. Layouts are plain GEMMs so batches of profiles transform in one
/// matrix product; rows of a physical block are collocation points
/// (p1*Ng+p2), columns are whatever vertical samples the caller stacked.
class HorizontalTransform {
  public:
    HorizontalTransform() = default;
    explicit HorizontalTransform(const ModeSet& modes);

    int Ng() const { return Ng_; }
    int npts() const { return Ng_ * Ng_; }
    int nmodes() const { return nm_; }

    /// (npts x nmodes) synthesis matrix.
    const Eigen::MatrixXd& syn() const { return syn_; }
    /// (nmodes x npts) analysis matrix; exact on band-limited data.
    const Eigen::MatrixXd& ana() const { return ana_; }

    /// Convenience single-block transforms: coefficient block (nrows x nm)
    /// <-> physical block (nrows x npts).
    Eigen::MatrixXd toPhys(const Eigen::MatrixXd& coef) const {
        return coef * syn_.transpose();
    }
    Eigen::MatrixXd toModes(const Eigen::MatrixXd& phys) const {
        return phys * ana_.transpose();
    }

    /// Dealiased pointwise product of two coefficient blocks.
    Eigen::MatrixXd product(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) const {
        return toModes(toPhys(a).cwiseProduct(toPhys(b)));
    }

    /// Horizontal quadrature weight of one collocation point: L^2 / Ng^2.
    double pointWeight() const { return w_; }

    /// Collocation coordinates (x1, x2) of point p.
    double x1(int p) const { return dx_ * (p / Ng_); }
    double x2(int p) const { return dx_ * (p % Ng_); }

  private:
    int Ng_ = 0, nm_ = 0;
    double w_ = 0, dx_ = 0;
    Eigen::MatrixXd syn_, ana_;
};

} // namespace fsi
