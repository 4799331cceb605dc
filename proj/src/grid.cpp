#include "fsi/grid.hpp"

#include <cmath>

namespace fsi {

ModeSet::ModeSet(int M, double L) : M_(M), L_(L) {
    const int w = 2 * M + 1;
    n_ = w * w;
    zero_ = index_of(0, 0);
    modes_.resize(n_);
    b1_.resize(n_);
    b2_.resize(n_);
    const double f = 2.0 * M_PI / L;
    for (int k1 = -M; k1 <= M; ++k1) {
        for (int k2 = -M; k2 <= M; ++k2) {
            int j = index_of(k1, k2);
            HorizontalMode m;
            m.k1 = k1;
            m.k2 = k2;
            m.eigenvalue = f * f * (double(k1) * k1 + double(k2) * k2);
            m.kind = (j == zero_) ? HorizontalMode::Kind::Constant
                     : (j > zero_) ? HorizontalMode::Kind::Cos
                                   : HorizontalMode::Kind::Sin;
            modes_[j] = m;
            b1_[j] = f * k1;
            b2_[j] = f * k2;
        }
    }
    active_.push_back(zero_);
    for (int j = zero_ + 1; j < n_; ++j) active_.push_back(j);
}

Grid::Grid(const DomainConfig& cfg) : cfg_(cfg) {
    cfg_.finalize();
    cfg_.validate();
    modes_ = ModeSet(cfg_.M, cfg_.L);
    solid_ = VerticalSpace(0.0, cfg_.h_e, cfg_.Ns);
    fluid_ = VerticalSpace(cfg_.h_e, cfg_.h, cfg_.Nf);
}

} // namespace fsi
