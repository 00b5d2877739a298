#include <algorithm>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "tumordelay/equilibria.hpp"
#include "tumordelay/error.hpp"
#include "tumordelay/experiments.hpp"
#include "tumordelay/plot.hpp"

namespace tumordelay {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::string plot_title(const ExperimentConfig& c, const DelayPair& d) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "\xCE\x93=%g, \xCE\xBC=%g, \xCF\x83\xCC\x83=%g, \xCF\x83\xE2\x88\x9E=%g, "
                  "\xCE\xB1=%s, \xCF\x84\xE2\x82\x81=%.4g, \xCF\x84\xE2\x82\x82=%.4g",
                  c.params.gamma, c.params.mu, c.params.sigma_tilde, c.params.sigma_inf,
                  format_alpha(c.params.alpha).c_str(), d.tau1, d.tau2);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
}

struct RunOutcome {
    SimulationRecord record;
    std::optional<Trajectory> trajectory;
    std::optional<DelayPair> delays;
};

RunOutcome run(const ExperimentConfig& config) {
    RunOutcome out;
    SimulationRecord& rec = out.record;
    try {
        const auto state = find_positive_stationary(config.params);
        if (state) rec.omega_s = state->omega_s;
        const DelayPair delays = config.delays();
        out.delays = delays;
        if (state) {
            try {
                const LinearCoeffs c = linearize_positive(config.params, *state);
                rec.tau2_star_reference = critical_delay(c, delays.tau1).tau2_star;
            } catch (const Error&) {
                // Hypotheses of the Hopf threshold fail (e.g. tau1 beyond the bound).
            }
        }
        const Trajectory& traj = out.trajectory.emplace(integrate(
            config.params, delays, config.history(), config.t_end, config.steps_per_delay));
        rec.status = traj.status();
        rec.t_fail = traj.t_fail();
        if (traj.status() == TrajectoryStatus::PositivityLoss) {
            rec.classification = OscillationClass{OscillationKind::PositivityLoss, std::nullopt, 0};
        } else if (state) {
            rec.classification = classify_trajectory(traj, state->omega_s);
        }
    } catch (const Error& e) {
        rec.error = e.what();
    }
    return out;
}

}  // namespace

std::string SimulationRecord::to_json() const {
    json j;
    j["class"] = classification ? json(oscillation_kind_name(classification->kind)) : json(nullptr);
    j["envelope_rate"] =
        classification ? optional_number(classification->envelope_rate) : json(nullptr);
    j["peak_count"] = classification ? json(classification->peak_count) : json(nullptr);
    j["omega_s"] = optional_number(omega_s);
    j["tau2_star_reference"] = optional_number(tau2_star_reference);
    j["status"] = status ? json(*status == TrajectoryStatus::Completed ? "Completed"
                                                                       : "PositivityLoss")
                         : json(nullptr);
    j["t_fail"] = optional_number(t_fail);
    j["error"] = error ? json(*error) : json(nullptr);
    return j.dump(2) + "\n";
}

SimulationRecord simulate_and_classify(const ExperimentConfig& config) {
    return run(config).record;
}

SimulationReport run_simulation(const ExperimentConfig& config,
                                const std::filesystem::path& out_dir, const std::string& stem) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string());

    RunOutcome outcome = run(config);
    SimulationReport report{outcome.record, {}};
    auto wants = [&](OutputKind k) {
        return std::find(config.outputs.begin(), config.outputs.end(), k) != config.outputs.end();
    };

    if (outcome.trajectory && wants(OutputKind::TrajectoryCsv)) {
        const auto path = out_dir / (stem + ".csv");
        std::ofstream csv(path, std::ios::binary);
        if (!csv) throw Error(ErrorCode::IoError, "cannot write " + path.string());
        outcome.trajectory->write_csv(csv);
        report.files.push_back(path);
    }
    if (outcome.trajectory && wants(OutputKind::PlotSvg)) {
        PlotAnnotations ann;
        ann.title = plot_title(config, *outcome.delays);
        ann.omega_s = outcome.record.omega_s;
        ann.show_radius = config.plot_radius;
        const auto path = out_dir / (stem + ".svg");
        write_text(path, emit_plot(*outcome.trajectory, ann));
        report.files.push_back(path);
    }
    if (wants(OutputKind::ClassificationJson) || outcome.record.numerical_failure()) {
        const auto path = out_dir / (stem + ".json");
        write_text(path, outcome.record.to_json());
        report.files.push_back(path);
    }
    return report;
}

}  // namespace tumordelay

namespace tumordelay {

std::string hopf_report_json(const ExperimentConfig& config, SweepMethod method,
                             const SimulationSettings& simulation) {
    const ModelParams& p = config.params;
    p.validate();
    json j;
    j["model"] = {{"gamma", p.gamma},
                  {"mu", p.mu},
                  {"sigma_tilde", p.sigma_tilde},
                  {"sigma_inf", p.sigma_inf},
                  {"alpha", p.alpha.is_dirichlet() ? json("inf") : json(p.alpha.rate())}};
    const DerivedParams d = derive_params(p);
    j["derived"] = {{"a1", d.a1}, {"lambda", d.lambda}, {"a", d.a}};
    j["method"] = sweep_method_name(method);

    std::optional<double> tau1;
    try {
        tau1 = config.delays().tau1;
    } catch (const Error& e) {
        j["tau1_error"] = e.what();
    }
    j["tau1"] = optional_number(tau1);

    json positive = nullptr;
    if (const auto state = find_positive_stationary(p)) {
        const LinearCoeffs c = linearize_positive(p, *state);
        const double bound = tau1_admissible_bound(c);
        positive = {{"omega_s", state->omega_s},
                    {"radius_s", state->radius_s},
                    {"residual", state->residual},
                    {"b1", c.b1},
                    {"b2", c.b2},
                    {"tau1_bound", bound}};
        if (tau1) {
            if (method != SweepMethod::Simulation) {
                try {
                    const HopfResult h = critical_delay(c, *tau1);
                    positive["tau2_star"] = h.tau2_star;
                    positive["omega_c"] = h.omega_c;
                    positive["characteristic_residual"] = h.residual;
                    positive["branch"] = h.branch;
                } catch (const Error& e) {
                    positive["tau2_star_error"] = e.what();
                }
            }
            if (method != SweepMethod::Characteristic) {
                try {
                    std::pair<double, double> bracket{0.2, 3.0};
                    if (positive.contains("tau2_star")) {
                        const double t = positive["tau2_star"].get<double>();
                        bracket = {0.5 * t, 1.5 * t};
                    }
                    positive["tau2_star_simulation"] =
                        critical_delay_by_simulation(p, *tau1, bracket, simulation);
                } catch (const Error& e) {
                    positive["tau2_star_simulation_error"] = e.what();
                }
            }
        }
    }
    j["positive_equilibrium"] = positive;

    const TrivialRegime regime = classify_trivial(p);
    const LinearCoeffs tc = linearize_trivial(p);
    json trivial = {{"b1", tc.b1}, {"b2", tc.b2}};
    switch (regime.kind) {
        case TrivialRegimeKind::UnstableNoHopf: trivial["regime"] = "UnstableNoHopf"; break;
        case TrivialRegimeKind::Degenerate: trivial["regime"] = "Degenerate"; break;
        case TrivialRegimeKind::StableWithHopfThreshold:
            trivial["regime"] = "StableWithHopfThreshold";
            trivial["tau1_bound"] = *regime.tau1_bound;
            if (tau1) {
                try {
                    const HopfResult h = critical_delay(tc, *tau1);
                    trivial["tau2_star"] = h.tau2_star;
                    trivial["omega_c"] = h.omega_c;
                    trivial["characteristic_residual"] = h.residual;
                } catch (const Error& e) {
                    trivial["tau2_star_error"] = e.what();
                }
            }
            break;
    }
    j["trivial_equilibrium"] = trivial;
    return j.dump(2) + "\n";
}

}  // namespace tumordelay
