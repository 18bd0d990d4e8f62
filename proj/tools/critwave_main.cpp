#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "critwave/artifacts.hpp"
#include "critwave/blowup.hpp"
#include "critwave/config.hpp"
#include "critwave/core.hpp"
#include "critwave/energy.hpp"
#include "critwave/inequalities.hpp"
#include "critwave/solver.hpp"
#include "critwave/weight.hpp"

namespace cw = critwave;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cw::ConfigError(cw::ConfigErrorKind::ConstraintViolation, "config",
                                   "cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct LoadedConfig {
    cw::RunConfig config;
    std::string manifest;
    std::string hash;
};

LoadedConfig load_config(const std::string& path, const std::string& output_override,
                         bool needs_output) {
    LoadedConfig lc;
    lc.config = cw::parse_config(read_file(path));
    if (!output_override.empty()) lc.config.output_dir = output_override;
    if (needs_output && lc.config.output_dir.empty())
        throw cw::ConfigError(cw::ConfigErrorKind::ConstraintViolation, "output.dir",
                              "output.dir: required for this subcommand");
    lc.manifest = cw::emit_manifest(lc.config);
    lc.hash = cw::content_hash(lc.manifest);
    return lc;
}

double resolved_delta0(const cw::RunConfig& c) {
    if (c.delta0 > 0.0) return c.delta0;
    return cw::default_delta0(c.problem.dim, c.damping.alpha, c.problem.p);
}

cw::CalibrationGrid calibration_grid(const cw::RunConfig& c) {
    const double r_needed = c.problem.support_radius + c.t_max + 1.0;
    return cw::CalibrationGrid::standard(std::max(100.0, r_needed), std::max(100.0, c.t_max));
}

cw::RunControls controls_from(const cw::RunConfig& c) {
    cw::RunControls rc;
    rc.t_max = c.t_max;
    rc.cfl = c.cfl;
    rc.blowup_threshold = c.blowup_threshold;
    rc.record_dt = c.record_dt;
    rc.snapshot_dt = c.snapshot_dt;
    rc.snapshot_t_max = c.snapshot_t_max;
    rc.support_tol = c.support_tol;
    return rc;
}

ordered_json sweep_json(const cw::SweepResult& res) {
    ordered_json points = ordered_json::array();
    for (const cw::SweepPoint& pt : res.points) {
        points.push_back(ordered_json{{"eps", pt.eps},
                                      {"T_lo", pt.t_lo},
                                      {"T_hi", pt.t_hi},
                                      {"status", cw::to_string(pt.status)},
                                      {"used_in_fit", pt.used_in_fit}});
    }
    return ordered_json{{"points", points},
                        {"kind", res.kind == cw::LifespanClass::Subcritical ? "subcritical" : "critical"},
                        {"fitted_slope", res.fitted_slope},
                        {"target_slope", res.target_slope},
                        {"rel_err", res.rel_err},
                        {"used_points", res.used_points}};
}

int cmd_pc(int dim, double alpha, double beta, double p) {
    const double pc = cw::critical_exponent(dim, alpha);
    std::cout << "p_c = " << cw::format_double(pc) << "\n";
    if (p > 1.0) {
        cw::DampingSpec spec;
        spec.alpha = alpha;
        spec.beta = beta;
        cw::ProblemSpec prob;
        prob.dim = dim;
        prob.p = p;
        if (p > pc) {
            std::cout << "p = " << cw::format_double(p) << " exceeds p_c: no lifespan bound asserted\n";
        } else {
            const cw::LifespanExponent le = cw::lifespan_exponent(spec, prob);
            if (le.kind == cw::LifespanClass::Subcritical) {
                std::cout << "kind = subcritical\n";
                std::cout << "lifespan: T(eps) <= C eps^-" << cw::format_double(le.value) << "\n";
            } else {
                std::cout << "kind = critical\n";
                std::cout << "lifespan: T(eps) <= exp(C eps^-" << cw::format_double(le.value) << ")\n";
            }
        }
    }
    return 0;
}

int cmd_simulate(const LoadedConfig& lc) {
    const cw::RunConfig& c = lc.config;
    const cw::CalibrationResult cal =
        cw::calibrate_weight(c.damping, c.problem.dim, resolved_delta0(c), calibration_grid(c));
    const cw::RadialGrid grid = cw::RadialGrid::for_horizon(
        c.problem.dim, c.grid_dr, c.problem.support_radius, c.t_max, c.grid_pad);
    cw::RunControls rc = controls_from(c);
    rc.weight = &cal.weight;
    const cw::SimOutcome out = cw::run(c.damping, c.problem, grid, rc);

    cw::EnergyTracker tracker = cw::EnergyTracker::from_outcome(out, cal.weight);
    const cw::DecayConvention conv =
        (c.m_convention == "time_scaled" || c.damping.beta != 0.0) ? cw::DecayConvention::TimeScaled
                                                                   : cw::DecayConvention::Effective;
    const auto m_series = cw::decay_weighted_supremum(tracker, c.problem.dim, c.damping.alpha,
                                                      c.damping.beta, conv, 1.0);
    const auto m_series_shifted = cw::decay_weighted_supremum(
        tracker, c.problem.dim, c.damping.alpha, c.damping.beta, conv, cal.weight.params().t0);

    cw::CsvWriter csv({"t", "sup_u", "l2_u", "energy", "weighted_energy", "support_radius", "E_w",
                       "V_w", "M_beta"});
    for (std::size_t i = 0; i < out.time_series.size(); ++i) {
        const cw::TimeRecord& r = out.time_series[i];
        csv.add_row({r.t, r.sup_u, r.l2_u, r.energy, r.weighted_energy, r.support_radius, r.e_w,
                     r.v_w, m_series[i].second});
    }

    ordered_json j;
    j["status"] = cw::to_string(out.status);
    j["final_time"] = out.final_time;
    if (out.lifespan) {
        j["lifespan"] = ordered_json{{"estimate", out.lifespan->estimate},
                                     {"T_lo", out.lifespan->lo},
                                     {"T_hi", out.lifespan->hi},
                                     {"crossing", out.lifespan->crossing}};
    }
    j["records"] = out.time_series.size();
    j["weight"] = ordered_json{{"R_delta", cal.weight.params().R_delta},
                               {"A0", cal.weight.params().A0},
                               {"mu", cal.weight.params().mu},
                               {"t0", cal.weight.params().t0},
                               {"delta0", cal.weight.params().delta0}};
    j["M_final"] = m_series.back().second;
    j["M_final_t0_shift"] = m_series_shifted.back().second;
    j["config_hash"] = lc.hash;
    j["config_ini"] = lc.manifest;

    const std::filesystem::path dir(c.output_dir);
    cw::atomic_write_file((dir / "manifest.ini").string(), lc.manifest);
    cw::atomic_write_file((dir / "run.csv").string(), csv.str());
    cw::atomic_write_file((dir / "run.json").string(), j.dump(2) + "\n");
    std::cout << "status = " << cw::to_string(out.status) << "\n";
    return 0;
}

int cmd_sweep(const LoadedConfig& lc) {
    const cw::RunConfig& c = lc.config;
    cw::validate_sweep_request(c);
    std::vector<double> eps;
    for (int j = 0; j < c.sweep_count; ++j)
        eps.push_back(c.sweep_eps0 * std::pow(c.sweep_ratio, j));
    const cw::RadialGrid grid = cw::RadialGrid::for_horizon(
        c.problem.dim, c.grid_dr, c.problem.support_radius, c.t_max, c.grid_pad);
    cw::RunControls rc = controls_from(c);
    const cw::SweepResult res =
        cw::lifespan_sweep(c.damping, c.problem, eps, grid, rc, c.threads);

    ordered_json j = sweep_json(res);
    j["config_hash"] = lc.hash;
    const std::filesystem::path dir(c.output_dir);
    cw::atomic_write_file((dir / "manifest.ini").string(), lc.manifest);
    cw::atomic_write_file((dir / "sweep.json").string(), j.dump(2) + "\n");
    std::cout << "fitted_slope = " << cw::format_double(res.fitted_slope) << "\n";
    return 0;
}

int cmd_verify_weight(const LoadedConfig& lc) {
    const cw::RunConfig& c = lc.config;
    const cw::CalibrationGrid grid = cw::CalibrationGrid::standard();
    const cw::CalibrationResult cal =
        cw::calibrate_weight(c.damping, c.problem.dim, resolved_delta0(c), grid);
    const cw::WeightParams& p = cal.weight.params();

    cw::CsvWriter csv({"t", "r", "margin_24", "margin_25"});
    const double rate = (p.dim - p.alpha) / (2.0 * (2.0 - p.alpha));
    for (double t : grid.times) {
        for (double r : grid.radii) {
            const double a = cal.weight.damping().spatial_factor(r);
            const double m24 = -cal.weight.dt(t, r) * a -
                               (2.0 + p.delta1) * cal.weight.dr(t, r) * cal.weight.dr(t, r);
            const double m25 = cal.weight.laplacian(t, r) - (rate - p.delta2) * a / (1.0 + t);
            csv.add_row({t, r, m24, m25});
        }
    }
    ordered_json j{{"R_delta", p.R_delta},
                   {"A0", p.A0},
                   {"mu", p.mu},
                   {"min_margin_24", cal.margins.min_margin_damping},
                   {"min_margin_25", cal.margins.min_margin_laplacian}};
    const std::filesystem::path dir(c.output_dir);
    cw::atomic_write_file((dir / "manifest.ini").string(), lc.manifest);
    cw::atomic_write_file((dir / "margins.csv").string(), csv.str());
    cw::atomic_write_file((dir / "weight.json").string(), j.dump(2) + "\n");
    std::cout << "min_margin_24 = " << cw::format_double(cal.margins.min_margin_damping) << "\n";
    std::cout << "min_margin_25 = " << cw::format_double(cal.margins.min_margin_laplacian) << "\n";
    return 0;
}

int cmd_verify_ineq(const LoadedConfig& lc) {
    const cw::RunConfig& c = lc.config;
    const int dim = c.problem.dim;
    const cw::TestFunctionCorpus corpus =
        cw::make_corpus(dim, 100, static_cast<std::uint64_t>(c.seed));

    cw::CsvWriter csv({"entry", "ckn_k1", "ckn_k2", "ckn_k3", "gn", "ibp_residual"});
    double sup_k[4] = {0.0, 0.0, 0.0, 0.0};
    double sup_gn = 0.0, worst_resid = 0.0;
    for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
        const cw::CorpusEntry& e = corpus.entries[i];
        double k_ratio[4] = {0.0, 0.0, 0.0, 0.0};
        for (int k = 1; k <= 3; ++k) {
            k_ratio[k] = cw::ckn_ratio(e, k);
            sup_k[k] = std::max(sup_k[k], k_ratio[k]);
        }
        const double gn = cw::gn_ratio(e, c.problem.p);
        sup_gn = std::max(sup_gn, gn);
        double resid = 0.0;
        for (double gamma : {0.0, 2.0, 6.0})
            resid = std::max(resid, cw::gamma_step_identity_residual(e, gamma));
        worst_resid = std::max(worst_resid, resid);
        csv.add_row({static_cast<double>(i), k_ratio[1], k_ratio[2], k_ratio[3], gn, resid});
    }
    ordered_json j{{"dim", dim},
                   {"p", c.problem.p},
                   {"entries", corpus.entries.size()},
                   {"sup_ckn_k1", sup_k[1]},
                   {"sup_ckn_k2", sup_k[2]},
                   {"sup_ckn_k3", sup_k[3]},
                   {"sup_gn", sup_gn},
                   {"max_ibp_residual", worst_resid}};
    const std::filesystem::path dir(c.output_dir);
    cw::atomic_write_file((dir / "manifest.ini").string(), lc.manifest);
    cw::atomic_write_file((dir / "ineq.csv").string(), csv.str());
    cw::atomic_write_file((dir / "ineq.json").string(), j.dump(2) + "\n");
    std::cout << "max_ibp_residual = " << cw::format_double(worst_resid) << "\n";
    return 0;
}

int cmd_testfn(const LoadedConfig& lc) {
    const cw::RunConfig& c = lc.config;
    if (!(c.damping.beta == 0.0 || c.damping.beta == 1.0))
        throw cw::ConfigError(cw::ConfigErrorKind::ConstraintViolation, "damping.beta",
                              "damping.beta: probes require beta = 0 or beta = 1");
    const double r0 = c.problem.support_radius;
    const cw::RadialGrid grid = cw::RadialGrid::for_horizon(
        c.problem.dim, c.grid_dr, r0, c.t_max, c.grid_pad);
    cw::RunControls rc = controls_from(c);
    if (rc.snapshot_dt <= 0.0) rc.snapshot_dt = 1.0 / 32.0;
    if (rc.snapshot_t_max <= 0.0) rc.snapshot_t_max = std::min(c.t_max, 8.0 * r0 + 1.0);
    const cw::SimOutcome out = cw::run(c.damping, c.problem, grid, rc);

    cw::CsvWriter csv({"R", "lhs", "rhs_shape", "ratio", "sup_dt", "sup_dtt", "sup_laplacian"});
    ordered_json probes = ordered_json::array();
    for (double mult : {1.0, 2.0, 4.0, 8.0}) {
        const cw::TestFunctionProbe probe = cw::make_probe(c.damping, c.problem, mult * r0);
        const cw::ProbeEvaluation ev = cw::probe_inequality(out, probe, c.damping, c.problem, grid);
        const cw::ProbeDerivativeBounds b = cw::probe_derivative_bounds(probe);
        csv.add_row({probe.R, ev.lhs, ev.rhs_shape, ev.ratio(), b.sup_dt, b.sup_dtt,
                     b.sup_laplacian});
        probes.push_back(ordered_json{{"R", probe.R},
                                      {"lhs", ev.lhs},
                                      {"rhs_shape", ev.rhs_shape},
                                      {"ratio", ev.ratio()}});
    }
    ordered_json j{{"status", cw::to_string(out.status)}, {"probes", probes}};
    if (out.lifespan) j["lifespan_estimate"] = out.lifespan->estimate;
    const std::filesystem::path dir(c.output_dir);
    cw::atomic_write_file((dir / "manifest.ini").string(), lc.manifest);
    cw::atomic_write_file((dir / "probes.csv").string(), csv.str());
    cw::atomic_write_file((dir / "testfn.json").string(), j.dump(2) + "\n");
    std::cout << "status = " << cw::to_string(out.status) << "\n";
    return 0;
}

ordered_json error_json(const std::string& kind, const std::string& what) {
    return ordered_json{{"error", kind}, {"what", what}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the damped semilinear wave equation"};
    app.require_subcommand(1);

    int pc_dim = 1;
    double pc_alpha = -1.0, pc_beta = 0.0, pc_p = 0.0;
    CLI::App* pc = app.add_subcommand("pc", "print the critical exponent and lifespan scalings");
    pc->add_option("--dim", pc_dim, "space dimension")->required();
    pc->add_option("--alpha", pc_alpha, "spatial damping power")->required();
    pc->add_option("--beta", pc_beta, "temporal damping power");
    pc->add_option("--p", pc_p, "nonlinearity exponent to classify");

    std::string config_path, output_override;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "INI configuration file")->required();
        sub->add_option("--output", output_override, "override [output] dir");
    };
    CLI::App* simulate = app.add_subcommand("simulate", "integrate one run and emit its records");
    add_config(simulate);
    CLI::App* sweep = app.add_subcommand("sweep", "lifespan sweep over a geometric epsilon ladder");
    add_config(sweep);
    CLI::App* vweight = app.add_subcommand("verify-weight", "calibrate the weight and emit margins");
    add_config(vweight);
    CLI::App* vineq = app.add_subcommand("verify-ineq", "interpolation-inequality corpus report");
    add_config(vineq);
    CLI::App* testfn = app.add_subcommand("testfn", "scaled test-function probe tables");
    add_config(testfn);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (pc->parsed()) return cmd_pc(pc_dim, pc_alpha, pc_beta, pc_p);
        if (simulate->parsed()) return cmd_simulate(load_config(config_path, output_override, true));
        if (sweep->parsed()) return cmd_sweep(load_config(config_path, output_override, true));
        if (vweight->parsed()) return cmd_verify_weight(load_config(config_path, output_override, true));
        if (vineq->parsed()) return cmd_verify_ineq(load_config(config_path, output_override, true));
        if (testfn->parsed()) return cmd_testfn(load_config(config_path, output_override, true));
    } catch (const cw::ConfigError& e) {
        std::cout << error_json("validation", e.what()).dump(2) << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cout << error_json("validation", e.what()).dump(2) << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cout << error_json("numerical", e.what()).dump(2) << "\n";
        return kExitNumerical;
    }
    return kExitValidation;
}
