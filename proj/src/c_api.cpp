#include "tumordelay/tumordelay.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "tumordelay/equilibria.hpp"
#include "tumordelay/error.hpp"
#include "tumordelay/experiments.hpp"
#include "tumordelay/plot.hpp"

namespace td = tumordelay;

struct td_trajectory {
    td::Trajectory traj;
};

struct td_config {
    td::ExperimentConfig config;
};

struct td_sweep_spec {
    td::SweepSpec spec;
};

namespace {

thread_local std::string last_error;

template <class F>
td_status guarded(F&& body) {
    try {
        last_error.clear();
        body();
        return TD_OK;
    } catch (const td::Error& e) {
        last_error = e.what();
        return static_cast<td_status>(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return TD_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return TD_ERR_INTERNAL;
    }
}

void require(const void* p, const char* name) {
    if (!p) throw td::Error(td::ErrorCode::InvalidArgument, std::string(name) + " is null");
}

td::ModelParams to_cpp(const td_model_params* p) {
    require(p, "params");
    td::ModelParams m;
    m.gamma = p->gamma;
    m.mu = p->mu;
    m.sigma_tilde = p->sigma_tilde;
    m.sigma_inf = p->sigma_inf;
    m.alpha = p->alpha_dirichlet ? td::Angiogenesis::dirichlet()
                                 : td::Angiogenesis::finite(p->alpha);
    m.validate();
    return m;
}

td_model_params to_c(const td::ModelParams& m) {
    return {m.gamma, m.mu, m.sigma_tilde, m.sigma_inf, m.alpha.rate(), m.alpha.is_dirichlet()};
}

td::LinearCoeffs to_cpp(const td_linear_coeffs* c) {
    require(c, "coeffs");
    return {c->b1, c->b2,
            c->about == TD_EQ_POSITIVE ? td::Equilibrium::Positive : td::Equilibrium::Trivial};
}

void to_c(const td::LinearCoeffs& c, td_linear_coeffs* out) {
    out->b1 = c.b1;
    out->b2 = c.b2;
    out->about = c.about == td::Equilibrium::Positive ? TD_EQ_POSITIVE : TD_EQ_TRIVIAL;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

td_status make_trajectory(const td_model_params* params, double tau1, double tau2,
                          const td::HistoryFunction& history, double t_end, int steps,
                          td_trajectory** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        td::Trajectory traj = td::integrate(to_cpp(params), {tau1, tau2}, history, t_end, steps);
        *out = new td_trajectory{std::move(traj)};
    });
}

}  // namespace

extern "C" {

const char* td_version(void) { return "0.1.0"; }

const char* td_status_name(td_status status) {
    if (status == TD_ERR_INTERNAL) return "Internal";
    return td::error_code_name(static_cast<td::ErrorCode>(status)).data();
}

const char* td_last_error(void) { return last_error.c_str(); }

void td_string_free(char* s) { std::free(s); }

td_model_params td_default_params(void) { return to_c(td::ModelParams{}); }

td_classification_settings td_default_classification(void) {
    const td::ClassificationSettings s;
    return {s.amplitude_floor, s.rate_tol, s.transient_fraction, s.min_delay_spans};
}

td_status td_eval_basis(double x, double* f, double* g, double* p) {
    return guarded([&] {
        const td::BasisValues b = td::eval_basis(x);
        if (f) *f = b.f;
        if (g) *g = b.g;
        if (p) *p = b.p;
    });
}

td_status td_eval_l(double x, const td_model_params* params, double* l, double* l_prime) {
    return guarded([&] {
        const td::ModelParams m = to_cpp(params);
        if (l) *l = td::eval_l(x, m);
        if (l_prime) *l_prime = td::eval_l_prime(x, m);
    });
}

td_status td_nutrient_profile(double r, double radius, const td_model_params* params,
                              double* sigma) {
    return guarded([&] {
        require(sigma, "sigma");
        *sigma = td::nutrient_profile(r, radius, to_cpp(params));
    });
}

td_status td_dde_rhs(double omega_tau1, double omega_tau2, const td_model_params* params,
                     double* rate) {
    return guarded([&] {
        require(rate, "rate");
        const td::ModelParams m = to_cpp(params);
        *rate = td::dde_rhs(omega_tau1, omega_tau2, td::derive_params(m), m);
    });
}

td_status td_find_positive_stationary(const td_model_params* params, td_stationary_state* state,
                                      int* exists) {
    return guarded([&] {
        require(state, "state");
        require(exists, "exists");
        const auto s = td::find_positive_stationary(to_cpp(params));
        *exists = s.has_value();
        if (s) *state = {s->omega_s, s->radius_s, s->residual};
    });
}

td_status td_linearize_positive(const td_model_params* params, const td_stationary_state* state,
                                td_linear_coeffs* coeffs) {
    return guarded([&] {
        require(state, "state");
        require(coeffs, "coeffs");
        to_c(td::linearize_positive(to_cpp(params),
                                    {state->omega_s, state->radius_s, state->residual}),
             coeffs);
    });
}

td_status td_linearize_trivial(const td_model_params* params, td_linear_coeffs* coeffs) {
    return guarded([&] {
        require(coeffs, "coeffs");
        to_c(td::linearize_trivial(to_cpp(params)), coeffs);
    });
}

td_status td_classify_trivial(const td_model_params* params, td_trivial_regime* regime,
                              double* tau1_bound) {
    return guarded([&] {
        require(regime, "regime");
        const td::TrivialRegime r = td::classify_trivial(to_cpp(params));
        switch (r.kind) {
            case td::TrivialRegimeKind::UnstableNoHopf: *regime = TD_TRIVIAL_UNSTABLE_NO_HOPF; break;
            case td::TrivialRegimeKind::StableWithHopfThreshold:
                *regime = TD_TRIVIAL_STABLE_WITH_HOPF;
                break;
            case td::TrivialRegimeKind::Degenerate: *regime = TD_TRIVIAL_DEGENERATE; break;
        }
        if (tau1_bound) *tau1_bound = r.tau1_bound.value_or(NAN);
    });
}

td_status td_tau1_admissible_bound(const td_linear_coeffs* coeffs, double* bound) {
    return guarded([&] {
        require(bound, "bound");
        *bound = td::tau1_admissible_bound(to_cpp(coeffs));
    });
}

td_status td_critical_delay(const td_linear_coeffs* coeffs, double tau1, td_hopf_result* result) {
    return guarded([&] {
        require(result, "result");
        const td::HopfResult h = td::critical_delay(to_cpp(coeffs), tau1);
        *result = {h.tau2_star, h.omega_c, h.residual, h.branch};
    });
}

td_status td_critical_delay_by_simulation(const td_model_params* params, double tau1,
                                          double tau2_lo, double tau2_hi, double t_end,
                                          int steps_per_delay, double* tau2_star) {
    return guarded([&] {
        require(tau2_star, "tau2_star");
        td::SimulationSettings s;
        s.t_end = t_end;
        s.steps_per_delay = steps_per_delay;
        *tau2_star = td::critical_delay_by_simulation(to_cpp(params), tau1, {tau2_lo, tau2_hi}, s);
    });
}

td_status td_integrate_constant(const td_model_params* params, double tau1, double tau2,
                                double omega0, double t_end, int steps_per_delay,
                                td_trajectory** out) {
    return make_trajectory(params, tau1, tau2, td::HistoryFunction::constant(omega0), t_end,
                           steps_per_delay, out);
}

td_status td_integrate_sampled(const td_model_params* params, double tau1, double tau2,
                               const double* t, const double* omega, size_t n, double t_end,
                               int steps_per_delay, td_trajectory** out) {
    if (n > 0 && (!t || !omega)) {
        last_error = "InvalidArgument: sample arrays are null";
        return TD_ERR_INVALID_ARGUMENT;
    }
    std::vector<std::pair<double, double>> points(n);
    for (size_t i = 0; i < n; ++i) points[i] = {t[i], omega[i]};
    return make_trajectory(params, tau1, tau2, td::HistoryFunction::sampled(std::move(points)),
                           t_end, steps_per_delay, out);
}

void td_trajectory_free(td_trajectory* traj) { delete traj; }

size_t td_trajectory_node_count(const td_trajectory* traj) {
    return traj ? traj->traj.nodes().size() : 0;
}

td_status td_trajectory_node(const td_trajectory* traj, size_t index, double* t, double* omega,
                             double* domega) {
    return guarded([&] {
        require(traj, "traj");
        const auto& nodes = traj->traj.nodes();
        if (index >= nodes.size()) {
            throw td::Error(td::ErrorCode::InvalidArgument, "node index out of range");
        }
        if (t) *t = nodes[index].t;
        if (omega) *omega = nodes[index].omega;
        if (domega) *domega = nodes[index].domega;
    });
}

td_status td_trajectory_sample(const td_trajectory* traj, double t, double* omega,
                               double* radius) {
    return guarded([&] {
        require(traj, "traj");
        const td::SamplePoint s = td::sample(traj->traj, t);
        if (omega) *omega = s.omega;
        if (radius) *radius = s.radius;
    });
}

td_status td_trajectory_status(const td_trajectory* traj, int* positivity_lost, double* t_fail) {
    return guarded([&] {
        require(traj, "traj");
        const bool lost = traj->traj.status() == td::TrajectoryStatus::PositivityLoss;
        if (positivity_lost) *positivity_lost = lost;
        if (t_fail) *t_fail = traj->traj.t_fail().value_or(NAN);
    });
}

td_status td_trajectory_write_csv(const td_trajectory* traj, const char* path) {
    return guarded([&] {
        require(traj, "traj");
        require(path, "path");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw td::Error(td::ErrorCode::IoError, std::string("cannot write ") + path);
        traj->traj.write_csv(out);
    });
}

td_status td_trajectory_plot_svg(const td_trajectory* traj, const char* title, double omega_s,
                                 int show_radius, char** svg) {
    return guarded([&] {
        require(traj, "traj");
        require(svg, "svg");
        td::PlotAnnotations a;
        if (title) a.title = title;
        if (!std::isnan(omega_s)) a.omega_s = omega_s;
        a.show_radius = show_radius != 0;
        *svg = dup_string(td::emit_plot(traj->traj, a));
    });
}

td_status td_classify_trajectory(const td_trajectory* traj, double omega_s,
                                 const td_classification_settings* settings,
                                 td_oscillation* result) {
    return guarded([&] {
        require(traj, "traj");
        require(result, "result");
        td::ClassificationSettings s;
        if (settings) {
            s = {settings->amplitude_floor, settings->rate_tol, settings->transient_fraction,
                 settings->min_delay_spans};
        }
        const td::OscillationClass c = td::classify_trajectory(traj->traj, omega_s, s);
        result->kind = static_cast<td_oscillation_kind>(c.kind);
        result->has_envelope_rate = c.envelope_rate.has_value();
        result->envelope_rate = c.envelope_rate.value_or(NAN);
        result->peak_count = c.peak_count;
    });
}

const char* td_oscillation_kind_name(td_oscillation_kind kind) {
    if (kind < TD_CONVERGENT_MONOTONE || kind > TD_POSITIVITY_LOSS) return "Unknown";
    return td::oscillation_kind_name(static_cast<td::OscillationKind>(kind));
}

td_status td_config_default(td_config** out) {
    return guarded([&] {
        require(out, "out");
        *out = new td_config{};
    });
}

td_status td_config_load(const char* path, td_config** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = nullptr;
        *out = new td_config{td::load_config(path)};
    });
}

td_status td_config_parse(const char* json, td_config** out) {
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        *out = nullptr;
        *out = new td_config{td::parse_config(json)};
    });
}

td_status td_config_to_json(const td_config* config, char** json) {
    return guarded([&] {
        require(config, "config");
        require(json, "json");
        *json = dup_string(td::serialize_config(config->config));
    });
}

td_status td_config_set_t_end(td_config* config, double t_end) {
    return guarded([&] {
        require(config, "config");
        if (!(t_end > 0.0) || !std::isfinite(t_end)) {
            throw td::Error(td::ErrorCode::InvalidArgument, "t_end must be positive and finite");
        }
        config->config.t_end = t_end;
    });
}

td_status td_config_set_steps_per_delay(td_config* config, int steps_per_delay) {
    return guarded([&] {
        require(config, "config");
        if (steps_per_delay < 4) {
            throw td::Error(td::ErrorCode::InvalidStepCount, "steps_per_delay must be >= 4");
        }
        config->config.steps_per_delay = steps_per_delay;
    });
}

td_status td_config_params(const td_config* config, td_model_params* params) {
    return guarded([&] {
        require(config, "config");
        require(params, "params");
        *params = to_c(config->config.params);
    });
}

td_status td_config_delays(const td_config* config, double* tau1, double* tau2) {
    return guarded([&] {
        require(config, "config");
        const td::DelayPair d = config->config.delays();
        if (tau1) *tau1 = d.tau1;
        if (tau2) *tau2 = d.tau2;
    });
}

void td_config_free(td_config* config) { delete config; }

td_status td_run_simulation(const td_config* config, const char* out_dir, const char* stem,
                            char** record_json, int* numerical_failure) {
    return guarded([&] {
        require(config, "config");
        require(out_dir, "out_dir");
        const td::SimulationReport r =
            td::run_simulation(config->config, out_dir, stem ? stem : "simulation");
        if (numerical_failure) *numerical_failure = r.record.numerical_failure();
        if (record_json) *record_json = dup_string(r.record.to_json());
    });
}

td_status td_simulate_classify(const td_config* config, char** record_json,
                               int* numerical_failure) {
    return guarded([&] {
        require(config, "config");
        const td::SimulationRecord r = td::simulate_and_classify(config->config);
        if (numerical_failure) *numerical_failure = r.numerical_failure();
        if (record_json) *record_json = dup_string(r.to_json());
    });
}

td_status td_hopf_report(const td_config* config, const char* method, char** json,
                         int* numerical_failure) {
    return guarded([&] {
        require(config, "config");
        require(json, "json");
        const td::SweepMethod m = td::parse_sweep_method(method ? method : "char");
        td::SimulationSettings s;
        s.t_end = config->config.t_end;
        s.steps_per_delay = config->config.steps_per_delay;
        const std::string report = td::hopf_report_json(config->config, m, s);
        if (numerical_failure) *numerical_failure = report.find("_error\"") != std::string::npos;
        *json = dup_string(report);
    });
}

td_status td_sweep_default(td_sweep_spec** out) {
    return guarded([&] {
        require(out, "out");
        *out = new td_sweep_spec{td::default_grid_spec()};
    });
}

td_status td_sweep_load(const char* path, td_sweep_spec** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = nullptr;
        *out = new td_sweep_spec{td::load_sweep_spec(path)};
    });
}

td_status td_sweep_parse(const char* json, td_sweep_spec** out) {
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        *out = nullptr;
        *out = new td_sweep_spec{td::parse_sweep_spec(json)};
    });
}

td_status td_sweep_set_method(td_sweep_spec* spec, const char* method) {
    return guarded([&] {
        require(spec, "spec");
        require(method, "method");
        spec->spec.method = td::parse_sweep_method(method);
    });
}

td_status td_sweep_set_simulation(td_sweep_spec* spec, double t_end, int steps_per_delay) {
    return guarded([&] {
        require(spec, "spec");
        if (!(t_end > 0.0) || !std::isfinite(t_end)) {
            throw td::Error(td::ErrorCode::InvalidArgument, "t_end must be positive and finite");
        }
        if (steps_per_delay < 4) {
            throw td::Error(td::ErrorCode::InvalidStepCount, "steps_per_delay must be >= 4");
        }
        spec->spec.simulation.t_end = t_end;
        spec->spec.simulation.steps_per_delay = steps_per_delay;
    });
}

td_status td_sweep_set_threads(td_sweep_spec* spec, unsigned threads) {
    return guarded([&] {
        require(spec, "spec");
        spec->spec.threads = threads;
    });
}

td_status td_run_sweep(const td_sweep_spec* spec, const char* out_dir, const char* name,
                       size_t* na_cells, size_t* failed_cells) {
    return guarded([&] {
        require(spec, "spec");
        require(out_dir, "out_dir");
        const td::SweepResult r = td::run_sweep(spec->spec);
        td::write_sweep(r, out_dir, name ? name : "sweep");
        const std::string gated[] = {
            std::string(td::error_code_name(td::ErrorCode::NoPositiveEquilibrium)),
            std::string(td::error_code_name(td::ErrorCode::Tau1OutOfRange))};
        size_t na = 0;
        size_t failed = 0;
        for (const auto& row : r.cells) {
            for (const auto& c : row) {
                if (c.value()) continue;
                ++na;
                failed += c.na_reason != gated[0] && c.na_reason != gated[1];
            }
        }
        if (na_cells) *na_cells = na;
        if (failed_cells) *failed_cells = failed;
    });
}

void td_sweep_free(td_sweep_spec* spec) { delete spec; }

}  // extern "C"
