#include "fsi/scenario.hpp"

#include "fsi/diagnostics.hpp"
#include "fsi/snapshot.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace fsi {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    return s.substr(b, e - b + 1);
}

Scenario::Kind kindFrom(const std::string& v) {
    if (v == "equilibrium") return Scenario::Kind::Equilibrium;
    if (v == "perturbed" || v == "perturbed-equilibrium") return Scenario::Kind::Perturbed;
    if (v == "flat" || v == "flat-interface") return Scenario::Kind::Flat;
    if (v == "custom" || v == "custom-file") return Scenario::Kind::Custom;
    throw ConfigError("unknown scenario kind: " + v);
}

std::string kindName(Scenario::Kind k) {
    switch (k) {
    case Scenario::Kind::Equilibrium: return "equilibrium";
    case Scenario::Kind::Perturbed: return "perturbed";
    case Scenario::Kind::Flat: return "flat";
    case Scenario::Kind::Custom: return "custom";
    }
    return "?";
}

} // namespace

Scenario parseScenarioFile(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open scenario file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("bad scenario line: " + line);
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    Scenario sc;
    auto getd = [&](const char* k, double& dst) {
        if (kv.count(k)) dst = std::stod(kv[k]);
    };
    auto geti = [&](const char* k, int& dst) {
        if (kv.count(k)) dst = std::stoi(kv[k]);
    };
    if (kv.count("name")) sc.name = kv["name"];
    if (kv.count("scenario")) sc.kind = kindFrom(kv["scenario"]);
    getd("L", sc.cfg.L);
    getd("h", sc.cfg.h);
    getd("h_s", sc.cfg.h_s);
    getd("h_e", sc.cfg.h_e);
    getd("nu", sc.cfg.nu);
    getd("lambda", sc.cfg.lambda);
    getd("g", sc.cfg.g);
    geti("M", sc.cfg.M);
    geti("Ns", sc.cfg.Ns);
    geti("Nf", sc.cfg.Nf);
    getd("dt", sc.cfg.dt);
    getd("T_end", sc.cfg.T_end);
    geti("max_sweeps", sc.cfg.max_sweeps);
    getd("tol_picard", sc.cfg.tol_picard);
    getd("tol_div", sc.cfg.tol_div);
    geti("mode_k1", sc.mode_k1);
    geti("mode_k2", sc.mode_k2);
    getd("amplitude", sc.amplitude);
    getd("profile_power", sc.profile_power);
    geti("random_modes", sc.random_modes);
    if (kv.count("seed")) sc.seed = unsigned(std::stoul(kv["seed"]));
    geti("flat_mode", sc.flat_mode);
    getd("flat_amplitude", sc.flat_amplitude);
    if (kv.count("custom_v")) sc.custom_v = kv["custom_v"];
    if (kv.count("custom_eta")) sc.custom_eta = kv["custom_eta"];
    if (kv.count("custom_q")) sc.custom_q = kv["custom_q"];
    if (kv.count("output_dir")) sc.output_dir = kv["output_dir"];
    getd("snapshot_every", sc.snapshot_every);
    geti("diag_every", sc.diag_every);
    getd("memory_snapshot_every", sc.memory_snapshot_every);
    if (kv.count("checkpoints")) {
        std::istringstream cs(kv["checkpoints"]);
        double v;
        while (cs >> v) sc.checkpoints.push_back(v);
    }
    sc.cfg.finalize();
    return sc;
}

void writeScenarioFile(const Scenario& s, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write scenario file: " + path);
    os << "name = " << s.name << "\n";
    os << "scenario = " << kindName(s.kind) << "\n\n";
    os << "L = " << s.cfg.L << "\nh = " << s.cfg.h << "\nh_s = " << s.cfg.h_s
       << "\nh_e = " << s.cfg.h_e << "\n";
    os << "nu = " << s.cfg.nu << "\nlambda = " << s.cfg.lambda << "\ng = " << s.cfg.g << "\n\n";
    os << "M = " << s.cfg.M << "\nNs = " << s.cfg.Ns << "\nNf = " << s.cfg.Nf << "\n";
    os << "dt = " << s.cfg.dt << "\nT_end = " << s.cfg.T_end << "\n\n";
    if (s.kind == Scenario::Kind::Perturbed) {
        os << "mode_k1 = " << s.mode_k1 << "\nmode_k2 = " << s.mode_k2
           << "\namplitude = " << s.amplitude << "\nprofile_power = " << s.profile_power << "\n";
        if (s.random_modes) os << "random_modes = " << s.random_modes << "\nseed = " << s.seed << "\n";
    }
    if (s.kind == Scenario::Kind::Flat)
        os << "flat_mode = " << s.flat_mode << "\nflat_amplitude = " << s.flat_amplitude << "\n";
    os << "\noutput_dir = " << s.output_dir << "\nsnapshot_every = " << s.snapshot_every
       << "\ndiag_every = " << s.diag_every << "\n";
    if (!s.checkpoints.empty()) {
        os << "checkpoints =";
        for (double c : s.checkpoints) os << " " << c;
        os << "\n";
    }
}

std::vector<std::string> presetNames() {
    return {"equilibrium", "perturbed", "flat_wave", "hshift_equilibrium", "hshift_perturbed"};
}

Scenario makePreset(const std::string& name) {
    Scenario sc;
    sc.name = name;
    // common geometry: unit-period channel, unit solid depth, thin fluid layer
    sc.cfg.L = 1.0;
    sc.cfg.h = 1.5;
    sc.cfg.h_s = 1.0;
    sc.cfg.h_e = -1.0;
    if (name == "equilibrium") {
        sc.kind = Scenario::Kind::Equilibrium;
        sc.cfg.g = 1.0;
        sc.cfg.lambda = 10.0;
        sc.cfg.nu = 1.0;
        sc.cfg.M = 4;
        sc.cfg.Ns = sc.cfg.Nf = 16;
        sc.cfg.dt = 0.01;
        sc.cfg.T_end = 10.0;
    } else if (name == "perturbed") {
        sc.kind = Scenario::Kind::Perturbed;
        sc.cfg.g = 0.0;
        sc.cfg.lambda = 4.0;
        sc.cfg.nu = 1.0;
        sc.cfg.M = 2;
        sc.cfg.Ns = sc.cfg.Nf = 16;
        sc.cfg.T_end = 40.0;
        sc.amplitude = 1e-3;
        sc.mode_k1 = 1;
        sc.mode_k2 = 0;
        sc.checkpoints = {10, 20, 30};
    } else if (name == "flat_wave") {
        sc.kind = Scenario::Kind::Flat;
        sc.cfg.g = 0.0;
        sc.cfg.lambda = 1.0;
        sc.cfg.nu = 1.0;
        sc.cfg.M = 2;
        sc.cfg.Ns = 32;
        sc.cfg.Nf = 16;
        sc.cfg.dt = 1e-3;
        sc.cfg.T_end = 10.0;
        sc.flat_mode = 1;
        sc.flat_amplitude = 1e-3;
    } else if (name == "hshift_equilibrium") {
        sc.kind = Scenario::Kind::Equilibrium;
        sc.cfg.g = 1.0;
        sc.cfg.lambda = 10.0;
        sc.cfg.nu = 1.0;
        sc.cfg.h_e = 0.95;
        sc.cfg.M = 4;
        sc.cfg.Ns = sc.cfg.Nf = 16;
        sc.cfg.dt = 0.01;
        sc.cfg.T_end = 10.0;
    } else if (name == "hshift_perturbed") {
        sc.kind = Scenario::Kind::Perturbed;
        sc.cfg.g = 0.0;
        sc.cfg.lambda = 4.0;
        sc.cfg.nu = 1.0;
        sc.cfg.h_e = 0.95;
        sc.cfg.M = 2;
        sc.cfg.Ns = sc.cfg.Nf = 16;
        sc.cfg.T_end = 40.0;
        sc.amplitude = 1e-3;
        sc.mode_k1 = 1;
        sc.mode_k2 = 0;
        sc.checkpoints = {10, 20, 30};
    } else {
        throw ConfigError("unknown preset: " + name);
    }
    sc.cfg.finalize();
    sc.output_dir = "out_" + name;
    return sc;
}

namespace {

// Newton adjustment of the interface mean so the solid volume matches the
// reference volume L^2 h_e (Theorem 1 hypothesis 2); the shift enters
// through a (x3/h_e) profile to keep the Gamma_B trace zero.
void matchVolume(const Grid& g, const HorizontalTransform& tr, Field& eta) {
    const auto& cfg = g.config();
    const double target = cfg.L * cfg.L * cfg.h_e;
    const auto& vs = g.solid();
    const int j0 = g.modes().zero_index();
    for (int iter = 0; iter < 4; ++iter) {
        double vol = solid_volume(g, tr, eta);
        double err = vol - target;
        if (std::abs(err) < 1e-14 * target) return;
        // d vol / dc of eta^3 += c * x3/h_e is approximately L^2 at small slopes
        double c = -err / (cfg.L * cfg.L);
        for (int r = 0; r < vs.np2(); ++r)
            eta.c[2](r, j0) += c * vs.nodes()[r] / cfg.h_e;
    }
}

} // namespace

State initial_data(const Scenario& sc, const CoupledStepper& stepper,
                   const HorizontalTransform& tr) {
    const Grid& g = stepper.grid();
    const auto& cfg = g.config();
    const auto& vs = g.solid();
    const auto& ms = g.modes();

    Field v = makeField(g, Slab::Channel, 3);
    Field eta = equilibrium_displacement(g).eta;

    switch (sc.kind) {
    case Scenario::Kind::Equilibrium:
        break;
    case Scenario::Kind::Perturbed: {
        int jp = ms.index_of(sc.mode_k1, sc.mode_k2);
        if (!ms.is_positive(jp)) jp = ms.conj_index(jp);
        Eigen::VectorXd prof(vs.np2());
        for (int r = 0; r < vs.np2(); ++r)
            prof[r] = std::pow(vs.nodes()[r] / cfg.h_e, sc.profile_power);
        eta.c[2].col(jp) += sc.amplitude * prof;
        if (sc.random_modes > 0) {
            std::mt19937_64 rng(sc.seed);
            std::uniform_real_distribution<double> uni(-1.0, 1.0);
            for (int m = 0; m < sc.random_modes; ++m)
                for (int j = 0; j < ms.count(); ++j) {
                    if (ms.is_zero(j)) continue;
                    eta.c[2].col(j) += (sc.amplitude / (4.0 * sc.random_modes)) * uni(rng) * prof;
                }
        }
        matchVolume(g, tr, eta);
        break;
    }
    case Scenario::Kind::Flat: {
        const int j0 = ms.zero_index();
        for (int r = 0; r < vs.np2(); ++r)
            eta.c[2](r, j0) += sc.flat_amplitude * std::sin(sc.flat_mode * M_PI * vs.nodes()[r] / cfg.h_e);
        break;
    }
    case Scenario::Kind::Custom: {
        if (!sc.custom_eta.empty()) eta = readFieldSnapshot(sc.custom_eta);
        if (!sc.custom_v.empty()) v = readFieldSnapshot(sc.custom_v);
        matchVolume(g, tr, eta);
        break;
    }
    }

    Field q;
    const Field* qp = nullptr;
    if (sc.kind == Scenario::Kind::Custom && !sc.custom_q.empty()) {
        q = readFieldSnapshot(sc.custom_q);
        qp = &q;
    }
    return stepper.makeState(0.0, v, eta, qp);
}

} // namespace fsi
