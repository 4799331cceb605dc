#pragma once

#include "fsi/grid.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace fsi {

enum class Slab : int { Solid = 0, Fluid = 1, Channel = 2, Trace = 3 };
enum class VerticalKind : int { P2 = 0, P1 = 1, None = 2 };

/// A scalar or vector function on one of the reference slabs (or on a
/// horizontal plane, Slab::Trace), stored as real mode coefficients times
/// vertical nodal values: component c is a (nvert x nmodes) matrix whose
/// column j is the vertical profile of mode j in the ModeSet ordering.
struct Field {
    Slab slab = Slab::Trace;
    VerticalKind vk = VerticalKind::None;
    std::vector<Eigen::MatrixXd> c; ///< one (nvert x nm) block per component

    Field() = default;
    Field(Slab s, VerticalKind k, int ncomp, int nvert, int nmodes) : slab(s), vk(k) {
        c.assign(ncomp, Eigen::MatrixXd::Zero(nvert, nmodes));
    }

    int ncomp() const { return int(c.size()); }
    int nvert() const { return c.empty() ? 0 : int(c[0].rows()); }
    int nmodes() const { return c.empty() ? 0 : int(c[0].cols()); }

    void setZero() {
        for (auto& m : c) m.setZero();
    }
    bool isZero() const {
        for (const auto& m : c)
            if ((m.array() != 0.0).any()) return false;
        return true;
    }
    bool hasNaN() const {
        for (const auto& m : c)
            if (!m.allFinite()) return true;
        return false;
    }

    Field& operator+=(const Field& o) {
        for (int i = 0; i < ncomp(); ++i) c[i] += o.c[i];
        return *this;
    }
    Field& operator-=(const Field& o) {
        for (int i = 0; i < ncomp(); ++i) c[i] -= o.c[i];
        return *this;
    }
    Field& operator*=(double a) {
        for (auto& m : c) m *= a;
        return *this;
    }
    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(double a, Field f) { return f *= a; }

    /// Frobenius-type coefficient norm (not a physical norm; used for
    /// convergence checks and exact-zero tests).
    double coefNorm() const {
        double s = 0;
        for (const auto& m : c) s += m.squaredNorm();
        return std::sqrt(s);
    }
};

/// A function on Gamma (or any horizontal plane): a Field with one vertical row.
using TraceField = Field;

/// Factory helpers tied to a Grid.
Field makeField(const Grid& g, Slab s, int ncomp, VerticalKind vk = VerticalKind::P2);
TraceField makeTrace(const Grid& g, int ncomp);

/// Number of P2 (or P1) vertical nodes of a slab on this grid.
int slabNodes(const Grid& g, Slab s, VerticalKind vk = VerticalKind::P2);

/// Whole-channel <-> slab views of the glued vertical grid. The interface
/// node is shared; embed writes the slab block, restrict reads it.
Field restrictToSlab(const Grid& g, const Field& channel, Slab s);
void embedSlab(const Grid& g, const Field& slabField, Field& channel);

/// Trace of a field on a horizontal node plane. For Channel/Solid fields the
/// default plane is the interface; for Fluid fields it is the interface
/// (their bottom node).
TraceField interfaceTrace(const Grid& g, const Field& f);
TraceField traceAtNode(const Grid& g, const Field& f, int node);

/// Normalized basis functions for tests/diagnostics: the L2(Gamma)
/// orthonormal e_n of the paper: sqrt(2)/L cos(...), sqrt(2)/L sin(...).
TraceField basisTrace(const Grid& g, int k1, int k2, HorizontalMode::Kind kind);

} // namespace fsi
