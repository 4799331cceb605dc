#include "fsi/ops.hpp"

#include <cmath>
#include <stdexcept>

namespace fsi {

const VerticalSpace& spaceOf(const Grid& g, Slab s) {
    if (s == Slab::Solid) return g.solid();
    if (s == Slab::Fluid) return g.fluid();
    throw std::invalid_argument("spaceOf: slab has no single vertical space");
}

Field horizontal_derivative(const Grid& g, const Field& f, int axis) {
    const auto& ms = g.modes();
    Field out = f;
    out.setZero();
    for (int j = 0; j < ms.count(); ++j) {
        if (!ms.is_positive(j)) continue;
        const int jc = ms.conj_index(j);
        const double k = (axis == 1) ? ms.beta1(j) : ms.beta2(j);
        for (int i = 0; i < f.ncomp(); ++i) {
            out.c[i].col(j) = k * f.c[i].col(jc);  // cos coeff <- k * b
            out.c[i].col(jc) = -k * f.c[i].col(j); // sin coeff <- -k * a
        }
    }
    return out;
}

Field horizontal_gradient(const Grid& g, const Field& f) {
    Field out(f.slab, f.vk, 2 * f.ncomp(), f.nvert(), f.nmodes());
    for (int i = 0; i < f.ncomp(); ++i) {
        Field fi = component(f, i);
        out.c[2 * i] = horizontal_derivative(g, fi, 1).c[0];
        out.c[2 * i + 1] = horizontal_derivative(g, fi, 2).c[0];
    }
    return out;
}

Eigen::MatrixXd horizontal_average(const Grid& g, const Field& f) {
    const int j0 = g.modes().zero_index();
    Eigen::MatrixXd m(f.nvert(), f.ncomp());
    for (int i = 0; i < f.ncomp(); ++i) m.col(i) = f.c[i].col(j0);
    return m;
}

Field horizontal_shift(const Grid& g, const Field& f, double s1, double s2) {
    const auto& ms = g.modes();
    Field out = f;
    for (int j = 0; j < ms.count(); ++j) {
        if (!ms.is_positive(j)) continue;
        const int jc = ms.conj_index(j);
        const double ph = ms.beta1(j) * s1 + ms.beta2(j) * s2;
        const double cs = std::cos(ph), sn = std::sin(ph);
        for (int i = 0; i < f.ncomp(); ++i) {
            Eigen::VectorXd a = f.c[i].col(j), b = f.c[i].col(jc);
            out.c[i].col(j) = cs * a + sn * b;
            out.c[i].col(jc) = -sn * a + cs * b;
        }
    }
    return out;
}

double fractional_norm(const Grid& g, const TraceField& f, double s) {
    const auto& ms = g.modes();
    const double L2 = ms.L() * ms.L();
    double acc = 0;
    for (int i = 0; i < f.ncomp(); ++i) {
        const auto& row = f.c[i];
        for (int j = 0; j < ms.count(); ++j) {
            const double cj = row(0, j);
            if (ms.is_zero(j)) {
                acc += cj * cj; // |Gamma|-normalized mean enters unweighted
            } else {
                const double lam = ms.eigenvalue(j);
                acc += std::pow(lam, s) * 0.5 * L2 * cj * cj;
            }
        }
    }
    return std::sqrt(acc);
}

namespace {

double slab_sobolev_sq(const Grid& g, const Field& f, int k) {
    const auto& vs = spaceOf(g, f.slab);
    const auto& ms = g.modes();
    const double L2 = ms.L() * ms.L();

    double acc = 0;
    for (int i = 0; i < f.ncomp(); ++i) {
        // vertical derivative stack: exact first derivative through the
        // stiffness form, projected derivatives beyond
        std::vector<Eigen::MatrixXd> dz;
        dz.push_back(f.c[i]);
        for (int m = 1; m < k; ++m) dz.push_back(vs.projectedDerivative(dz.back()));

        for (int j = 0; j < ms.count(); ++j) {
            const double w = ms.is_zero(j) ? L2 : 0.5 * L2;
            const double b1 = ms.beta1(j), b2 = ms.beta2(j);
            for (int a1 = 0; a1 <= k; ++a1)
                for (int a2 = 0; a1 + a2 <= k; ++a2)
                    for (int a3 = 0; a1 + a2 + a3 <= k; ++a3) {
                        const double hfac = std::pow(b1 * b1, a1) * std::pow(b2 * b2, a2);
                        if (hfac == 0.0 && (a1 > 0 || a2 > 0)) continue;
                        double vsq;
                        if (a3 == 0)
                            vsq = dz[0].col(j).dot(vs.massP2() * dz[0].col(j));
                        else
                            vsq = dz[a3 - 1].col(j).dot(vs.stiffP2() * dz[a3 - 1].col(j));
                        acc += w * hfac * vsq;
                    }
        }
    }
    return acc;
}

} // namespace

double sobolev_norm(const Grid& g, const Field& f, int k) {
    if (k < 0 || k > 3) throw std::invalid_argument("sobolev_norm: k in 0..3");
    if (f.slab == Slab::Channel) {
        Field fs = restrictToSlab(g, f, Slab::Solid);
        Field ff = restrictToSlab(g, f, Slab::Fluid);
        return std::sqrt(slab_sobolev_sq(g, fs, k) + slab_sobolev_sq(g, ff, k));
    }
    return std::sqrt(slab_sobolev_sq(g, f, k));
}

double l2_norm(const Grid& g, const Field& f) { return sobolev_norm(g, f, 0); }

double l2_inner(const Grid& g, const Field& f, const Field& h) {
    if (f.slab == Slab::Channel) {
        return l2_inner(g, restrictToSlab(g, f, Slab::Solid), restrictToSlab(g, h, Slab::Solid)) +
               l2_inner(g, restrictToSlab(g, f, Slab::Fluid), restrictToSlab(g, h, Slab::Fluid));
    }
    const auto& vs = spaceOf(g, f.slab);
    const auto& ms = g.modes();
    const double L2 = ms.L() * ms.L();
    double acc = 0;
    for (int i = 0; i < f.ncomp(); ++i)
        for (int j = 0; j < ms.count(); ++j) {
            const double w = ms.is_zero(j) ? L2 : 0.5 * L2;
            acc += w * f.c[i].col(j).dot(vs.massP2() * h.c[i].col(j));
        }
    return acc;
}

Field vertical_derivative(const Grid& g, const Field& f) {
    const auto& vs = spaceOf(g, f.slab);
    Field out = f;
    for (int i = 0; i < f.ncomp(); ++i) out.c[i] = vs.projectedDerivative(f.c[i]);
    return out;
}

Field component(const Field& f, int i) {
    Field out(f.slab, f.vk, 1, f.nvert(), f.nmodes());
    out.c[0] = f.c[i];
    return out;
}

} // namespace fsi
