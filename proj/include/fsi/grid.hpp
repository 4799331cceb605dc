#pragma once

#include "fsi/config.hpp"
#include "fsi/fem1d.hpp"

#include <array>
#include <vector>

namespace fsi {

/// One horizontal Fourier mode of the L-periodic plane.
struct HorizontalMode {
    int k1 = 0, k2 = 0;
    double eigenvalue = 0.0; ///< lambda_n = (2*pi*k1/L)^2 + (2*pi*k2/L)^2
    /// Which real basis function this storage column carries: the constant,
    /// cos(2*pi*k.x/L) for lexicographically positive k, or sin for the
    /// mirrored column.
    enum class Kind { Constant, Cos, Sin } kind = Kind::Constant;
};

/// Deterministic enumeration of the modes |k1|,|k2| <= M, lexicographic in
/// (k1,k2). Real storage convention: column(k) for k > 0 (lexicographic)
/// holds the cos coefficient a_k, column(-k) holds the sin coefficient b_k,
/// column(0,0) the mean. A real field f is
///   f = c0 + sum_{k>0} [ a_k cos(2pi k.x/L) + b_k sin(2pi k.x/L) ].
class ModeSet {
  public:
    ModeSet() = default;
    ModeSet(int M, double L);

    int M() const { return M_; }
    double L() const { return L_; }
    int count() const { return n_; }

    const HorizontalMode& mode(int j) const { return modes_[j]; }
    const std::vector<HorizontalMode>& modes() const { return modes_; }

    int index_of(int k1, int k2) const { return (k1 + M_) * (2 * M_ + 1) + (k2 + M_); }
    int conj_index(int j) const { return n_ - 1 - j; } ///< column of -k
    bool is_zero(int j) const { return j == zero_; }
    int zero_index() const { return zero_; }
    /// k lexicographically positive: these columns carry cos coefficients and
    /// drive one complex solve each (the sin partner comes along).
    bool is_positive(int j) const { return j > zero_; }

    double beta1(int j) const { return b1_[j]; }
    double beta2(int j) const { return b2_[j]; }
    double eigenvalue(int j) const { return modes_[j].eigenvalue; }

    /// Solve list: the zero mode followed by all lexicographically positive
    /// modes; one per cos/sin pair.
    const std::vector<int>& active() const { return active_; }

  private:
    int M_ = 0, n_ = 0, zero_ = 0;
    double L_ = 1.0;
    std::vector<HorizontalMode> modes_;
    std::vector<double> b1_, b2_;
    std::vector<int> active_;
};

/// Channel discretization: mode list plus the vertical P2/P1 spaces of the
/// solid slab [0,h_e] and the fluid slab [h_e,h]. A whole-channel profile is
/// the two slab profiles glued at the shared interface node, so its node
/// count is solid.np2() + fluid.np2() - 1 and all integrals split slab-wise.
class Grid {
  public:
    Grid() = default;
    explicit Grid(const DomainConfig& cfg);

    const DomainConfig& config() const { return cfg_; }
    const ModeSet& modes() const { return modes_; }
    const VerticalSpace& solid() const { return solid_; }
    const VerticalSpace& fluid() const { return fluid_; }

    int channelNodes() const { return solid_.np2() + fluid_.np2() - 1; }
    int interfaceNode() const { return 2 * cfg_.Ns; } ///< channel P2 index of Gamma
    int solidOffset() const { return 0; }
    int fluidOffset() const { return 2 * cfg_.Ns; }

  private:
    DomainConfig cfg_;
    ModeSet modes_;
    VerticalSpace solid_, fluid_;
};

} // namespace fsi
