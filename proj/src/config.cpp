#include "fsi/config.hpp"

#include <cmath>
#include <sstream>

namespace fsi {

void DomainConfig::finalize() {
    if (h_e <= 0.0) h_e = h_s;
    if (dt <= 0.0) dt = effective_dt();
}

double DomainConfig::effective_dt() const {
    if (dt > 0.0) return dt;
    double he = (h_e > 0.0) ? h_e : h_s;
    return 0.01 * he / std::sqrt(lambda);
}

std::string DomainConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (!(L > 0.0)) fail("L must be positive");
    if (!(h > 0.0)) fail("h must be positive");
    if (!(h_s > 0.0 && h_s < h)) fail("require 0 < h_s < h");
    double he = (h_e > 0.0) ? h_e : h_s;
    if (!(he > 0.0 && he < h)) fail("require 0 < h_e < h");
    if (!(nu > 0.0)) fail("nu must be positive");
    if (!(lambda > 0.0)) fail("lambda must be positive");
    if (g < 0.0) fail("g must be nonnegative");
    if (M < 1) fail("M must be >= 1");
    if (Ns < 1 || Nf < 1) fail("Ns, Nf must be >= 1");
    if (dt > 0.0 && !(dt > 0.0)) fail("dt must be positive");
    if (!(T_end >= 0.0)) fail("T_end must be nonnegative");
    if (!(jac_lo > 0.0 && jac_lo < 1.0 && jac_hi > 1.0)) fail("bad jacobian guard window");
    if (max_sweeps < 1) fail("max_sweeps must be >= 1");

    if (g > 0.0 && lambda / g < lambda_over_g_min) {
        std::ostringstream os;
        os << "lambda/g = " << lambda / g << " below configured threshold "
           << lambda_over_g_min << "; the near-equilibrium theory wants the "
           << "elastic coefficient large relative to gravity";
        return os.str();
    }
    return {};
}

} // namespace fsi
