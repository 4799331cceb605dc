#include "fsi/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace fsi {

namespace {
constexpr char kMagic[8] = {'F', 'S', 'I', 'F', 'L', 'D', '1', '\0'};

void put_i32(std::ostream& os, int32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void put_f64(std::ostream& os, double v) { os.write(reinterpret_cast<const char*>(&v), 8); }
int32_t get_i32(std::istream& is) {
    int32_t v;
    is.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
double get_f64(std::istream& is) {
    double v;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
}
} // namespace

void writeFieldSnapshot(const std::string& path, const Field& f, int M, double L) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for write: " + path);
    os.write(kMagic, 8);
    put_i32(os, int32_t(f.slab));
    put_i32(os, int32_t(f.vk));
    put_i32(os, f.ncomp());
    put_i32(os, f.nvert());
    put_i32(os, f.nmodes());
    put_i32(os, M);
    put_f64(os, L);
    for (const auto& m : f.c)
        for (int j = 0; j < m.cols(); ++j)
            for (int r = 0; r < m.rows(); ++r) put_f64(os, m(r, j));
    if (!os) throw std::runtime_error("write failed: " + path);
}

Field readFieldSnapshot(const std::string& path, int* M_out, double* L_out) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for read: " + path);
    char magic[8];
    is.read(magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error("bad snapshot magic: " + path);
    Field f;
    f.slab = Slab(get_i32(is));
    f.vk = VerticalKind(get_i32(is));
    int ncomp = get_i32(is);
    int nvert = get_i32(is);
    int nmodes = get_i32(is);
    int M = get_i32(is);
    double L = get_f64(is);
    if (ncomp < 1 || nvert < 1 || nmodes < 1 || !is) throw std::runtime_error("bad snapshot header: " + path);
    f.c.assign(ncomp, Eigen::MatrixXd(nvert, nmodes));
    for (auto& m : f.c)
        for (int j = 0; j < nmodes; ++j)
            for (int r = 0; r < nvert; ++r) m(r, j) = get_f64(is);
    if (!is) throw std::runtime_error("truncated snapshot: " + path);
    if (M_out) *M_out = M;
    if (L_out) *L_out = L;
    return f;
}

} // namespace fsi
