// Command-line surface over the library: simulation runs, mild-solution
// iteration, regime classification, experiments, checkpoint inspection, and
// checkpoint resume. Exit codes: 0 success, 1 configuration error, 2 numeric
// failure, 3 I/O error.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "smag/errors.hpp"
#include "smag/evolve.hpp"
#include "smag/experiments.hpp"
#include "smag/fields.hpp"
#include "smag/io.hpp"
#include "smag/mild.hpp"
#include "smag/regimes.hpp"

namespace {

using namespace smag;

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string num_or_null(double v) { return std::isfinite(v) ? fmt17(v) : "null"; }

// Empty path writes to stdout.
void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw IoError("stdout: write failed");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.close();
    if (!out) throw IoError("write failed for '" + path + "'");
}

std::string render_trajectory(const RunConfig& cfg, const Trajectory& traj) {
    const RegimeReport reg = classify(cfg.sim.d, cfg.sim.alpha, cfg.sim.beta, cfg.sim.s,
                                      cfg.sim.eta, cfg.sim.lp_exponent);
    std::string out = header_line(cfg, reg);
    for (const auto& r : traj.records) out += diagnostics_line(r, cfg.sim.d);
    return out;
}

int exit_for(const Trajectory& traj) {
    if (traj.status == RunStatus::Completed) return 0;
    std::cerr << "run ended early at t = " << fmt12(traj.final_time)
              << (traj.status == RunStatus::BlowupSuspected ? ": blow-up suspected"
                                                            : ": field diverged")
              << "\n";
    return 2;
}

int do_run(const std::string& config_path) {
    const RunConfig cfg = load_config(config_path);
    validate(cfg.sim);
    const SpectralVectorField b0 = make_initial(cfg.sim.ic, Grid(cfg.sim.d, cfg.sim.n));

    const long cut = cfg.checkpoint_at_step > 0 ? cfg.checkpoint_at_step
                                                : std::numeric_limits<long>::max();
    ResumePoint rp;
    const Trajectory traj = run_partial(b0, cfg.sim, cut, rp);

    write_output(cfg.out_path, render_trajectory(cfg, traj));
    if (!cfg.checkpoint_path.empty())
        save_checkpoint(cfg.checkpoint_path, Checkpoint{cfg.sim, rp, traj.final_state});
    return exit_for(traj);
}

int do_resume(const std::string& ck_path, const std::string& out_path,
              const std::string& ck_out_path) {
    const Checkpoint ck = load_checkpoint(ck_path);

    RunConfig echo;
    echo.sim = ck.sim;
    echo.out_path = out_path;
    echo.checkpoint_path = ck_out_path;

    ResumePoint rp_end;
    const Trajectory traj = run_resumed(ck.field, ck.rp, ck.sim, rp_end);

    write_output(out_path, render_trajectory(echo, traj));
    if (!ck_out_path.empty())
        save_checkpoint(ck_out_path, Checkpoint{ck.sim, rp_end, traj.final_state});
    return exit_for(traj);
}

int do_picard(const std::string& config_path) {
    const RunConfig cfg = load_config(config_path);
    const RegimeReport reg =
        classify(cfg.sim.d, cfg.sim.alpha, cfg.sim.beta, cfg.sim.s, cfg.sim.eta);
    if (!std::isfinite(reg.p) || !std::isfinite(reg.q) || !std::isfinite(reg.r) ||
        !std::isfinite(reg.sigma))
        throw ConfigError("picard: no critical Lebesgue family for these exponents");

    PicardConfig pc;
    pc.t_grid = picard_time_grid(cfg.sim.t_end, cfg.picard_points);
    pc.max_iters = cfg.picard_max_iters;
    pc.tol_rel = cfg.picard_tol_rel;
    pc.p = reg.p;
    pc.q = reg.q;
    pc.r = reg.r;
    pc.sigma = reg.sigma;

    const SpectralVectorField b0 = make_initial(cfg.sim.ic, Grid(cfg.sim.d, cfg.sim.n));
    const PicardResult pr = picard_solve(b0, pc, cfg.sim);

    std::string out = "{\"kind\":\"picard\"";
    out += ",\"converged\":" + std::string(pr.converged ? "true" : "false");
    out += ",\"iterations\":" + std::to_string(pr.iterations);
    out += ",\"contraction_ratio\":" + num_or_null(pr.contraction_ratio);
    out += ",\"points\":" + std::to_string(pc.t_grid.size());
    out += ",\"t_end\":" + fmt17(cfg.sim.t_end);
    out += ",\"ft_norm\":" + num_or_null(ft_norm(pr.trajectory, pc.sigma, pc.q));
    out += ",\"p\":" + fmt17(pc.p) + ",\"q\":" + fmt17(pc.q);
    out += ",\"r\":" + fmt17(pc.r) + ",\"sigma\":" + fmt17(pc.sigma);
    out += "}\n";
    write_output(cfg.out_path, out);

    if (!pr.converged) {
        std::cerr << "picard iteration did not converge in " << pr.iterations << " sweeps\n";
        return 2;
    }
    return 0;
}

int do_check_regime(int d, double alpha, double beta, double s, double eta,
                    std::optional<double> p_opt) {
    const RegimeReport reg = classify(d, alpha, beta, s, eta, p_opt);
    std::string out;
    out += "lwp_case = " + std::string(lwp_case_name(reg.lwp_case)) + "\n";
    out += "alpha_star = " + fmt12(reg.alpha_star) + "\n";
    out += "low_regularity_velocity = " + std::string(reg.low_regularity_velocity ? "true" : "false") + "\n";
    out += "global_nonresistive = " + std::string(reg.global_nonresistive ? "true" : "false") + "\n";
    out += "mild_admissible = " + std::string(reg.mild_admissible ? "true" : "false") + "\n";
    out += "p = " + fmt12(reg.p) + "\n";
    out += "q = " + fmt12(reg.q) + "\n";
    out += "r = " + fmt12(reg.r) + "\n";
    out += "sigma = " + fmt12(reg.sigma) + "\n";
    out += "theta_window_lo = " + fmt12(reg.theta_window_lo) + "\n";
    out += "theta_window_hi = " + fmt12(reg.theta_window_hi) + "\n";
    out += "scaling_class = " + std::string(scaling_class_name(reg.scaling_class)) + "\n";
    for (const auto& r : reg.reasons) out += "reason = " + r + "\n";
    write_output("", out);
    return 0;
}

int do_experiment(const std::string& config_path) {
    const RunConfig cfg = load_config(config_path);
    const ExperimentReport rep = run_experiment(make_experiment(cfg));

    std::string out = "{\"kind\":\"" + rep.kind + "\"";
    out += ",\"abscissae\":[";
    for (std::size_t i = 0; i < rep.abscissae.size(); ++i)
        out += (i ? "," : "") + fmt17(rep.abscissae[i]);
    out += "],\"series\":[";
    for (std::size_t i = 0; i < rep.series.size(); ++i)
        out += (i ? "," : "") + fmt17(rep.series[i]);
    out += "],\"max_value\":" + num_or_null(rep.max_value);
    out += ",\"fitted_exponent\":" + num_or_null(rep.fitted_exponent);
    out += ",\"theta\":" + num_or_null(rep.theta);
    out += "}\n";
    write_output(cfg.out_path, out);
    return 0;
}

int do_norms(const std::string& ck_path, const std::vector<double>& lps,
             const std::vector<double>& sobs, const std::vector<double>& homs, bool linf) {
    const Checkpoint ck = load_checkpoint(ck_path);
    std::string out;
    out += "t = " + fmt17(ck.rp.t) + "\n";
    out += "step = " + std::to_string(ck.rp.step) + "\n";

    const bool defaults = lps.empty() && sobs.empty() && homs.empty() && !linf;
    if (defaults) {
        out += "l2 = " + fmt17(norm(ck.field, NormRequest::sobolev(0.0))) + "\n";
        out += "h1 = " + fmt17(norm(ck.field, NormRequest::sobolev(1.0))) + "\n";
        out += "hs(" + fmt12(ck.sim.s) + ") = " +
               fmt17(norm(ck.field, NormRequest::sobolev(ck.sim.s))) + "\n";
        out += "lp(" + fmt12(ck.sim.lp_exponent) + ") = " +
               fmt17(norm(ck.field, NormRequest::lp(ck.sim.lp_exponent))) + "\n";
    }
    for (double p : lps)
        out += "lp(" + fmt12(p) + ") = " + fmt17(norm(ck.field, NormRequest::lp(p))) + "\n";
    for (double s : sobs)
        out += "sobolev(" + fmt12(s) + ") = " + fmt17(norm(ck.field, NormRequest::sobolev(s))) + "\n";
    for (double s : homs)
        out += "hom_sobolev(" + fmt12(s) + ") = " +
               fmt17(norm(ck.field, NormRequest::hom_sobolev(s))) + "\n";
    if (linf) out += "linf = " + fmt17(norm(ck.field, NormRequest::linf())) + "\n";
    write_output("", out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional Stokes-Magneto pseudo-spectral simulator"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "advance a configured simulation, stream NDJSON");
    run_cmd->add_option("--config", config_path, "run configuration file")->required();

    auto* picard_cmd =
        app.add_subcommand("picard", "mild-solution fixed-point sweep on a configured problem");
    picard_cmd->add_option("--config", config_path, "run configuration file")->required();

    int d = 2;
    double alpha = 1.0, beta = 1.0, s = 1.0, eta = 1.0;
    double p_flag = 0.0;
    auto* regime_cmd = app.add_subcommand("check-regime", "classify exponents, print the report");
    regime_cmd->add_option("--d", d, "spatial dimension")->required();
    regime_cmd->add_option("--alpha", alpha, "velocity dissipation exponent")->required();
    regime_cmd->add_option("--beta", beta, "magnetic dissipation exponent")->required();
    regime_cmd->add_option("--s", s, "Sobolev regularity of the data");
    regime_cmd->add_option("--eta", eta, "resistivity");
    auto* p_opt_flag = regime_cmd->add_option("--p", p_flag, "Lebesgue exponent for the scaling class");

    auto* exp_cmd = app.add_subcommand("experiment", "run the experiment named by exp.kind");
    exp_cmd->add_option("--config", config_path, "run configuration file")->required();

    std::string ck_path;
    std::vector<double> lps, sobs, homs;
    bool linf = false;
    auto* norms_cmd = app.add_subcommand("norms", "print norms of a checkpointed field");
    norms_cmd->add_option("--checkpoint", ck_path, "checkpoint file")->required();
    norms_cmd->add_option("--lp", lps, "Lebesgue exponent (repeatable)");
    norms_cmd->add_option("--sobolev", sobs, "inhomogeneous Sobolev order (repeatable)");
    norms_cmd->add_option("--hom-sobolev", homs, "homogeneous Sobolev order (repeatable)");
    norms_cmd->add_flag("--linf", linf, "grid maximum of the pointwise magnitude");

    std::string out_path, ck_out_path;
    auto* resume_cmd = app.add_subcommand("resume", "continue a run from a checkpoint");
    resume_cmd->add_option("--checkpoint", ck_path, "checkpoint file")->required();
    resume_cmd->add_option("--out", out_path, "NDJSON output path (default stdout)");
    resume_cmd->add_option("--checkpoint-out", ck_out_path, "write a final checkpoint here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*run_cmd) return do_run(config_path);
        if (*picard_cmd) return do_picard(config_path);
        if (*regime_cmd)
            return do_check_regime(d, alpha, beta, s, eta,
                                   p_opt_flag->count() ? std::optional<double>(p_flag)
                                                       : std::nullopt);
        if (*exp_cmd) return do_experiment(config_path);
        if (*norms_cmd) return do_norms(ck_path, lps, sobs, homs, linf);
        if (*resume_cmd) return do_resume(ck_path, out_path, ck_out_path);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
