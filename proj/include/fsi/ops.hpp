#pragma once

#include "fsi/field.hpp"

namespace fsi {

/// d/dx_axis of a field, spectral in the horizontal: the (k1,k2) pair is
/// rotated and scaled by 2*pi*k_axis/L. Annihilates exactly the zero mode.
Field horizontal_derivative(const Grid& g, const Field& f, int axis);

/// Horizontal gradient applied to every component: returns a field with
/// components ordered [d1 f^1, d2 f^1, d1 f^2, ...].
Field horizontal_gradient(const Grid& g, const Field& f);

/// The (0,0)-mode vertical profile of each component, equal to the average
/// (1/L^2) int f dx_h at each x3.
Eigen::MatrixXd horizontal_average(const Grid& g, const Field& f); // (nvert x ncomp)

/// Phase shift f(x_h) -> f(x_h + (s1,s2)); norm-preserving relabeling.
Field horizontal_shift(const Grid& g, const Field& f, double s1, double s2);

/// Fractional Sobolev norm on Gamma (or any horizontal plane):
///   ||f||_{H^s}^2 = |mean|^2 + sum_n lambda_n^s (f^n)^2
/// with f^n the coefficients in the L2-orthonormal oscillatory basis.
/// Vector fields contribute component-wise sums.
double fractional_norm(const Grid& g, const TraceField& f, double s);

/// Integer Sobolev norm H^k on the field's slab, k in 0..3: spectral
/// horizontal derivatives, exact vertical first derivatives, L2-projected
/// higher vertical derivatives. Channel fields sum both slabs.
double sobolev_norm(const Grid& g, const Field& f, int k);

/// Plain L2 norm on the slab (== sobolev_norm(f, 0)).
double l2_norm(const Grid& g, const Field& f);

/// L2(slab) inner product.
double l2_inner(const Grid& g, const Field& f, const Field& h);

/// Vertical derivative of a slab field, L2-projected back onto P2.
Field vertical_derivative(const Grid& g, const Field& f);

/// Restrict to selected components (copy).
Field component(const Field& f, int i);

const VerticalSpace& spaceOf(const Grid& g, Slab s);

} // namespace fsi
