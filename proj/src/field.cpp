#include "fsi/field.hpp"

#include <cmath>
#include <stdexcept>

namespace fsi {

int slabNodes(const Grid& g, Slab s, VerticalKind vk) {
    switch (s) {
    case Slab::Solid: return vk == VerticalKind::P1 ? g.solid().np1() : g.solid().np2();
    case Slab::Fluid: return vk == VerticalKind::P1 ? g.fluid().np1() : g.fluid().np2();
    case Slab::Channel:
        if (vk == VerticalKind::P1) throw std::invalid_argument("no P1 channel space");
        return g.channelNodes();
    case Slab::Trace: return 1;
    }
    return 0;
}

Field makeField(const Grid& g, Slab s, int ncomp, VerticalKind vk) {
    if (s == Slab::Trace) vk = VerticalKind::None;
    return Field(s, vk, ncomp, slabNodes(g, s, vk), g.modes().count());
}

TraceField makeTrace(const Grid& g, int ncomp) {
    return Field(Slab::Trace, VerticalKind::None, ncomp, 1, g.modes().count());
}

Field restrictToSlab(const Grid& g, const Field& channel, Slab s) {
    if (channel.slab != Slab::Channel) throw std::invalid_argument("restrictToSlab: channel field expected");
    Field out = makeField(g, s, channel.ncomp());
    const int off = (s == Slab::Solid) ? g.solidOffset() : g.fluidOffset();
    const int n = slabNodes(g, s);
    for (int i = 0; i < channel.ncomp(); ++i) out.c[i] = channel.c[i].middleRows(off, n);
    return out;
}

void embedSlab(const Grid& g, const Field& slabField, Field& channel) {
    const int off = (slabField.slab == Slab::Solid) ? g.solidOffset() : g.fluidOffset();
    const int n = slabField.nvert();
    for (int i = 0; i < slabField.ncomp(); ++i) channel.c[i].middleRows(off, n) = slabField.c[i];
}

TraceField traceAtNode(const Grid& g, const Field& f, int node) {
    TraceField t = makeTrace(g, f.ncomp());
    for (int i = 0; i < f.ncomp(); ++i) t.c[i] = f.c[i].row(node);
    return t;
}

TraceField interfaceTrace(const Grid& g, const Field& f) {
    switch (f.slab) {
    case Slab::Channel: return traceAtNode(g, f, g.interfaceNode());
    case Slab::Solid: return traceAtNode(g, f, g.solid().np2() - 1);
    case Slab::Fluid: return traceAtNode(g, f, 0);
    case Slab::Trace: return f;
    }
    throw std::logic_error("interfaceTrace");
}

TraceField basisTrace(const Grid& g, int k1, int k2, HorizontalMode::Kind kind) {
    const auto& ms = g.modes();
    TraceField t = makeTrace(g, 1);
    const double amp = std::sqrt(2.0) / ms.L();
    if (kind == HorizontalMode::Kind::Constant) {
        t.c[0](0, ms.zero_index()) = 1.0 / ms.L(); // unit L2(Gamma) norm constant
        return t;
    }
    int jp = ms.index_of(k1, k2);
    if (!ms.is_positive(jp)) jp = ms.conj_index(jp);
    if (kind == HorizontalMode::Kind::Cos)
        t.c[0](0, jp) = amp;
    else
        t.c[0](0, ms.conj_index(jp)) = amp;
    return t;
}

} // namespace fsi
