#include "fsi/transform.hpp"

#include <cmath>

namespace fsi {

HorizontalTransform::HorizontalTransform(const ModeSet& modes) {
    const int M = modes.M();
    const double L = modes.L();
    nm_ = modes.count();
    Ng_ = 4 * M + 1;
    dx_ = L / Ng_;
    w_ = (L * L) / (double(Ng_) * Ng_);

    syn_.resize(npts(), nm_);
    ana_.resize(nm_, npts());

    for (int j = 0; j < nm_; ++j) {
        const auto& m = modes.mode(j);
        for (int p = 0; p < npts(); ++p) {
            const double phase = 2.0 * M_PI * (double(m.k1) * (p / Ng_) + double(m.k2) * (p % Ng_)) / Ng_;
            double s = 0, a = 0;
            switch (m.kind) {
            case HorizontalMode::Kind::Constant:
                s = 1.0;
                a = 1.0 / npts();
                break;
            case HorizontalMode::Kind::Cos:
                s = std::cos(phase);
                a = 2.0 * std::cos(phase) / npts();
                break;
            case HorizontalMode::Kind::Sin:
                // the storage column of a negative-lexicographic k carries the
                // sin coefficient of its positive partner -k; sin(-k.x) = -sin(k.x)
                s = -std::sin(phase);
                a = -2.0 * std::sin(phase) / npts();
                break;
            }
            syn_(p, j) = s;
            ana_(j, p) = a;
        }
    }
}

} // namespace fsi
