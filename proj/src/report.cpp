#include "fsi/driver.hpp"

#include "fsi/snapshot.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fsi {

namespace fs = std::filesystem;
using nlohmann::json;

RunResult run_scenario(const Scenario& sc, bool write_outputs, bool quiet) {
    const auto t_wall0 = std::chrono::steady_clock::now();

    Grid grid(sc.cfg);
    const DomainConfig& cfg = grid.config();
    std::string warn = cfg.validate();
    if (!warn.empty() && !quiet) std::cerr << "warning: " << warn << "\n";

    HorizontalTransform tr(grid.modes());
    Kinematics kin(grid, tr);
    StokesExtension ext(grid);
    CoupledStepper stepper(grid, tr, kin, ext);

    RunResult rr;
    std::ofstream ts, t2;
    if (write_outputs) {
        fs::create_directories(sc.output_dir);
        ts.open(sc.output_dir + "/timeseries.csv");
        t2.open(sc.output_dir + "/theorem2.csv");
        ts << timeseriesHeader() << "\n";
        t2 << theorem2Header() << "\n";
        rr.output_files.push_back(sc.output_dir + "/timeseries.csv");
        rr.output_files.push_back(sc.output_dir + "/theorem2.csv");
    }

    State s = initial_data(sc, stepper, tr);
    CoupledStepper::Consistency c0 = stepper.consistencySolve(s);
    s.q = c0.q;

    DiagnosticsEngine diag(stepper, tr);
    DiagnosticsRecord r0 = diag.start(s, c0.accel);
    rr.records.push_back(r0);
    if (write_outputs) {
        ts << timeseriesRow(r0) << "\n";
        t2 << theorem2Row(r0) << "\n";
    }

    auto snapState = [&](const State& st) {
        TrajectorySnapshot snap;
        snap.t = st.t;
        snap.v_solid = restrictToSlab(grid, st.v, Slab::Solid);
        snap.eta_solid = st.eta;
        return snap;
    };
    rr.snapshots.push_back(snapState(s));
    double next_mem_snap = sc.memory_snapshot_every > 0 ? sc.memory_snapshot_every : -1;
    double next_bin_snap = sc.snapshot_every > 0 ? sc.snapshot_every : -1;

    auto writeBin = [&](const State& st) {
        char tag[32];
        std::snprintf(tag, sizeof tag, "t%010.4f", st.t);
        std::string base = sc.output_dir + "/snap_" + tag;
        writeFieldSnapshot(base + "_v.bin", st.v, cfg.M, cfg.L);
        writeFieldSnapshot(base + "_eta.bin", st.eta, cfg.M, cfg.L);
        writeFieldSnapshot(base + "_q.bin", st.q, cfg.M, cfg.L);
        rr.output_files.push_back(base + "_v.bin");
        rr.output_files.push_back(base + "_eta.bin");
        rr.output_files.push_back(base + "_q.bin");
    };

    const double dt = cfg.dt;
    const long nsteps = std::lround(cfg.T_end / dt);
    StepStats stats;
    try {
        for (long n = 0; n < nsteps; ++n) {
            const bool diag_step = ((n + 1) % std::max(1, sc.diag_every) == 0) || n + 1 == nsteps;
            stepper.step(s, dt, stats, diag_step);
            ++rr.steps;
            if (diag_step) {
                DiagnosticsRecord r = diag.record(s, stats);
                rr.records.push_back(r);
                rr.crucial_ratio_sup = std::max(rr.crucial_ratio_sup, r.crucial_ratio);
                if (write_outputs) {
                    ts << timeseriesRow(r) << "\n";
                    t2 << theorem2Row(r) << "\n";
                }
            }
            if (next_mem_snap > 0 && s.t >= next_mem_snap - 1e-12) {
                rr.snapshots.push_back(snapState(s));
                next_mem_snap += sc.memory_snapshot_every;
            }
            if (write_outputs && next_bin_snap > 0 && s.t >= next_bin_snap - 1e-12) {
                writeBin(s);
                next_bin_snap += sc.snapshot_every;
            }
        }
    } catch (const std::exception& e) {
        rr.aborted = true;
        rr.abort_reason = e.what();
        if (!quiet) std::cerr << "run aborted: " << e.what() << "\n";
    }

    rr.final_state = s;
    rr.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_wall0).count();

    if (write_outputs) {
        json rep;
        rep["scenario"] = sc.name;
        rep["aborted"] = rr.aborted;
        if (rr.aborted) rep["abort_reason"] = rr.abort_reason;
        rep["steps"] = rr.steps;
        rep["wall_seconds"] = rr.wall_seconds;
        rep["t_final"] = s.t;
        double maxN = 0, maxFlat = 0, maxVol = 0;
        for (const auto& r : rr.records) {
            maxN = std::max(maxN, r.N);
            maxFlat = std::max(maxFlat, r.flatness);
            maxVol = std::max(maxVol, std::abs(r.volume_err));
        }
        rep["max_N"] = maxN;
        rep["final_N"] = rr.records.back().N;
        rep["final_D"] = rr.records.back().D;
        rep["max_flatness"] = maxFlat;
        rep["final_flatness"] = rr.records.back().flatness;
        rep["crucial_ratio_sup"] = rr.crucial_ratio_sup;
        rep["max_volume_drift"] = maxVol;
        rep["config"] = {{"L", cfg.L},   {"h", cfg.h},         {"h_s", cfg.h_s},
                         {"h_e", cfg.h_e}, {"nu", cfg.nu},     {"lambda", cfg.lambda},
                         {"g", cfg.g},   {"M", cfg.M},         {"Ns", cfg.Ns},
                         {"Nf", cfg.Nf}, {"dt", cfg.dt},       {"T_end", cfg.T_end}};
        rep["output_files"] = rr.output_files;
        std::ofstream os(sc.output_dir + "/report.json");
        os << rep.dump(2) << "\n";
        rr.output_files.push_back(sc.output_dir + "/report.json");
    }
    return rr;
}

ConvergenceReport make_convergence_report(const Scenario& sc, const RunResult& rr,
                                          const std::string& out_dir) {
    Grid grid(sc.cfg);
    SolidOperatorParams p = SolidOperatorParams::fromConfig(grid.config());
    std::vector<double> cps = sc.checkpoints;
    if (cps.empty()) {
        const double T = grid.config().T_end;
        cps = {0.25 * T, 0.5 * T, 0.75 * T};
    }
    ConvergenceReport rep =
        convergence_report(grid, rr.snapshots, p, cps, grid.config().dt);

    if (!out_dir.empty()) {
        json j;
        j["scenario"] = sc.name;
        j["mismatch_decreasing"] = rep.mismatch_decreasing;
        j["cauchy_trend"] = rep.cauchy_trend;
        j["cauchy_distances"] = rep.cauchy_distances;
        for (const auto& cp : rep.checkpoints) {
            json c;
            c["n"] = cp.n;
            c["times"] = cp.times;
            c["v3_mismatch"] = cp.v3_mismatch;
            c["eta3_mismatch"] = cp.eta3_mismatch;
            c["tail_mean_v3"] = cp.tail_mean_v3;
            j["checkpoints"].push_back(c);

            char name[64];
            std::snprintf(name, sizeof name, "/alpha_n%06.2f.csv", cp.n);
            std::ofstream cs(out_dir + name);
            cs << "x3,alpha,alpha_t\n";
            const auto& vs = grid.solid();
            for (int r = 0; r < vs.np2(); ++r)
                cs << vs.nodes()[r] << "," << cp.alpha_at_0[r] << "," << cp.alpha_t_at_0[r]
                   << "\n";
        }
        std::ofstream os(out_dir + "/convergence_report.json");
        os << j.dump(2) << "\n";
    }
    return rep;
}

} // namespace fsi
