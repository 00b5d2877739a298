#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tumordelay/equilibria.hpp"
#include "tumordelay/error.hpp"
#include "tumordelay/experiments.hpp"

namespace tumordelay {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) {
    throw Error(ErrorCode::ConfigParseError, what);
}

json parse_json_text(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // Translate the byte offset into line:column for the user.
        const std::size_t byte = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i < byte; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        config_error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                     e.what());
    }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::none_of(known.begin(), known.end(),
                         [&](const char* k) { return it.key() == k; })) {
            config_error("field '" + it.key() + "': unknown key");
        }
    }
}

double number_field(const json& j, const char* key) {
    if (!j.contains(key)) config_error(std::string("field '") + key + "': missing");
    const json& v = j.at(key);
    if (!v.is_number()) config_error(std::string("field '") + key + "': expected a number");
    return v.get<double>();
}

double optional_number(const json& j, const char* key, double fallback) {
    return j.contains(key) ? number_field(j, key) : fallback;
}

Angiogenesis parse_alpha(const json& v, const std::string& where) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return Angiogenesis::dirichlet();
        config_error("field '" + where + "': expected a number or \"inf\"");
    }
    if (!v.is_number()) config_error("field '" + where + "': expected a number or \"inf\"");
    const double a = v.get<double>();
    if (!(a >= 0.0)) config_error("field '" + where + "': must be >= 0");
    return Angiogenesis::finite(a);
}

json alpha_json(const Angiogenesis& a) {
    if (a.is_dirichlet()) return "inf";
    return a.rate();
}

void check_params(const ModelParams& params) {
    try {
        params.validate();
    } catch (const Error& e) {
        config_error(std::string("invalid model parameters: ") + e.what());
    }
}

ModelParams parse_model(const json& j) {
    ModelParams p;
    p.gamma = number_field(j, "gamma");
    p.mu = number_field(j, "mu");
    p.sigma_tilde = number_field(j, "sigma_tilde");
    p.sigma_inf = number_field(j, "sigma_inf");
    return p;
}

const char* output_name(OutputKind k) {
    switch (k) {
        case OutputKind::TrajectoryCsv: return "trajectory_csv";
        case OutputKind::PlotSvg: return "plot_svg";
        case OutputKind::ClassificationJson: return "classification_json";
    }
    return "";
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string format_alpha(const Angiogenesis& alpha) {
    if (alpha.is_dirichlet()) return "inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, alpha.rate());
    return std::string(buf, res.ptr);
}

DelayPair ExperimentConfig::delays() const {
    if (const auto* t = std::get_if<double>(&tau1)) return DelayPair{*t, tau2};
    const double fraction = std::get<Tau1FractionOfBound>(tau1).fraction;
    const auto state = find_positive_stationary(params);
    if (!state) {
        throw Error(ErrorCode::NoPositiveEquilibrium,
                    "tau1 as a fraction of the bound needs a positive stationary state");
    }
    const double bound = tau1_admissible_bound(linearize_positive(params, *state));
    return DelayPair{fraction * bound, tau2};
}

HistoryFunction ExperimentConfig::history() const {
    if (const auto* v = std::get_if<double>(&omega0)) return HistoryFunction::constant(*v);
    return HistoryFunction::sampled(std::get<std::vector<std::pair<double, double>>>(omega0));
}

ExperimentConfig parse_config(std::string_view json_text) {
    const json j = parse_json_text(json_text);
    if (!j.is_object()) config_error("top level must be a JSON object");
    reject_unknown(j, {"gamma", "mu", "sigma_tilde", "sigma_inf", "alpha", "tau1", "tau2",
                       "omega0", "t_end", "steps_per_delay", "outputs", "plot_radius"});

    ExperimentConfig c;
    c.params = parse_model(j);
    if (!j.contains("alpha")) config_error("field 'alpha': missing");
    c.params.alpha = parse_alpha(j.at("alpha"), "alpha");
    check_params(c.params);

    if (!j.contains("tau1")) config_error("field 'tau1': missing");
    const json& t1 = j.at("tau1");
    if (t1.is_number()) {
        const double v = t1.get<double>();
        if (!(v >= 0.0)) config_error("field 'tau1': must be >= 0");
        c.tau1 = v;
    } else if (t1.is_object() && t1.size() == 1 && t1.contains("fraction_of_bound") &&
               t1.at("fraction_of_bound").is_number()) {
        const double f = t1.at("fraction_of_bound").get<double>();
        if (!(f > 0.0)) config_error("field 'tau1.fraction_of_bound': must be > 0");
        c.tau1 = Tau1FractionOfBound{f};
    } else {
        config_error("field 'tau1': expected a number or {\"fraction_of_bound\": number}");
    }

    c.tau2 = number_field(j, "tau2");
    if (!(c.tau2 >= 0.0)) config_error("field 'tau2': must be >= 0");

    if (!j.contains("omega0")) config_error("field 'omega0': missing");
    const json& w0 = j.at("omega0");
    if (w0.is_number()) {
        const double v = w0.get<double>();
        if (!(v > 0.0)) config_error("field 'omega0': must be > 0");
        c.omega0 = v;
    } else if (w0.is_object() && w0.size() == 1 && w0.contains("samples") &&
               w0.at("samples").is_array()) {
        std::vector<std::pair<double, double>> samples;
        std::size_t k = 0;
        for (const json& s : w0.at("samples")) {
            if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
                config_error("field 'omega0.samples[" + std::to_string(k) +
                             "]': expected [t, value]");
            }
            samples.emplace_back(s[0].get<double>(), s[1].get<double>());
            ++k;
        }
        if (samples.empty()) config_error("field 'omega0.samples': empty");
        c.omega0 = std::move(samples);
    } else {
        config_error("field 'omega0': expected a number or {\"samples\": [[t, v], ...]}");
    }

    c.t_end = optional_number(j, "t_end", c.t_end);
    if (!(c.t_end > 0.0)) config_error("field 't_end': must be > 0");
    if (j.contains("steps_per_delay")) {
        const json& s = j.at("steps_per_delay");
        if (!s.is_number_integer()) config_error("field 'steps_per_delay': expected an integer");
        c.steps_per_delay = s.get<int>();
        if (c.steps_per_delay < 4) config_error("field 'steps_per_delay': must be >= 4");
    }
    if (j.contains("outputs")) {
        const json& outs = j.at("outputs");
        if (!outs.is_array()) config_error("field 'outputs': expected an array");
        c.outputs.clear();
        for (const json& o : outs) {
            const std::string name = o.is_string() ? o.get<std::string>() : "";
            const OutputKind all[] = {OutputKind::TrajectoryCsv, OutputKind::PlotSvg,
                                      OutputKind::ClassificationJson};
            auto it = std::find_if(std::begin(all), std::end(all),
                                   [&](OutputKind k) { return name == output_name(k); });
            if (it == std::end(all)) {
                config_error("field 'outputs': unknown output '" + name + "'");
            }
            c.outputs.push_back(*it);
        }
    }
    if (j.contains("plot_radius")) {
        if (!j.at("plot_radius").is_boolean()) config_error("field 'plot_radius': expected bool");
        c.plot_radius = j.at("plot_radius").get<bool>();
    }
    return c;
}

std::string serialize_config(const ExperimentConfig& c) {
    json j;
    j["gamma"] = c.params.gamma;
    j["mu"] = c.params.mu;
    j["sigma_tilde"] = c.params.sigma_tilde;
    j["sigma_inf"] = c.params.sigma_inf;
    j["alpha"] = alpha_json(c.params.alpha);
    if (const auto* t = std::get_if<double>(&c.tau1)) {
        j["tau1"] = *t;
    } else {
        j["tau1"] = {{"fraction_of_bound", std::get<Tau1FractionOfBound>(c.tau1).fraction}};
    }
    j["tau2"] = c.tau2;
    if (const auto* v = std::get_if<double>(&c.omega0)) {
        j["omega0"] = *v;
    } else {
        json samples = json::array();
        for (const auto& [t, v] : std::get<std::vector<std::pair<double, double>>>(c.omega0)) {
            samples.push_back({t, v});
        }
        j["omega0"] = {{"samples", samples}};
    }
    j["t_end"] = c.t_end;
    j["steps_per_delay"] = c.steps_per_delay;
    json outs = json::array();
    for (OutputKind k : c.outputs) outs.push_back(output_name(k));
    j["outputs"] = outs;
    j["plot_radius"] = c.plot_radius;
    return j.dump(2) + "\n";
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& e) {
        config_error(e.what());
    }
    return parse_config(text);
}

const char* sweep_method_name(SweepMethod method) {
    switch (method) {
        case SweepMethod::Characteristic: return "char";
        case SweepMethod::Simulation: return "sim";
        case SweepMethod::Both: return "both";
    }
    return "";
}

SweepMethod parse_sweep_method(std::string_view name) {
    if (name == "char") return SweepMethod::Characteristic;
    if (name == "sim") return SweepMethod::Simulation;
    if (name == "both") return SweepMethod::Both;
    config_error("method must be one of char|sim|both, got '" + std::string(name) + "'");
}

void SweepSpec::validate() const {
    ModelParams p = base;
    p.alpha = Angiogenesis::finite(1.0);
    check_params(p);
    if (alpha_list.empty()) config_error("field 'alpha_list': must not be empty");
    if (tau1_list.empty()) config_error("field 'tau1_list': must not be empty");
    for (double t : tau1_list) {
        if (!(t > 0.0)) config_error("field 'tau1_list': entries must be > 0");
    }
    if (!(tolerance > 0.0)) config_error("field 'tolerance': must be > 0");
    if (!(simulation_bracket.first < simulation_bracket.second) ||
        !(simulation_bracket.first > 0.0)) {
        config_error("field 'simulation_bracket': need 0 < lo < hi");
    }
}

SweepSpec default_grid_spec() {
    SweepSpec s;
    s.base = ModelParams{1.0, 1.0, 2.0, 3.3, Angiogenesis::finite(0.2)};
    s.alpha_list = {Angiogenesis::finite(0.2)};
    for (int a = 1; a <= 10; ++a) s.alpha_list.push_back(Angiogenesis::finite(a));
    for (int a = 20; a <= 100; a += 10) s.alpha_list.push_back(Angiogenesis::finite(a));
    s.alpha_list.push_back(Angiogenesis::finite(1000.0));
    s.alpha_list.push_back(Angiogenesis::dirichlet());
    s.tau1_list = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4,
                   0.5,  0.6, 0.7,  0.8, 0.9,  1.0, 1.1,  1.2};
    return s;
}

SweepSpec parse_sweep_spec(std::string_view json_text) {
    const json j = parse_json_text(json_text);
    if (!j.is_object()) config_error("top level must be a JSON object");
    reject_unknown(j, {"gamma", "mu", "sigma_tilde", "sigma_inf", "alpha_list", "tau1_list",
                       "method", "tolerance", "t_end", "steps_per_delay", "simulation_bracket",
                       "threads"});
    SweepSpec s;
    s.base = parse_model(j);
    if (!j.contains("alpha_list") || !j.at("alpha_list").is_array()) {
        config_error("field 'alpha_list': expected an array");
    }
    std::size_t k = 0;
    for (const json& a : j.at("alpha_list")) {
        s.alpha_list.push_back(parse_alpha(a, "alpha_list[" + std::to_string(k++) + "]"));
    }
    if (!j.contains("tau1_list") || !j.at("tau1_list").is_array()) {
        config_error("field 'tau1_list': expected an array");
    }
    for (const json& t : j.at("tau1_list")) {
        if (!t.is_number()) config_error("field 'tau1_list': entries must be numbers");
        s.tau1_list.push_back(t.get<double>());
    }
    if (j.contains("method")) {
        if (!j.at("method").is_string()) config_error("field 'method': expected a string");
        s.method = parse_sweep_method(j.at("method").get<std::string>());
    }
    s.tolerance = optional_number(j, "tolerance", s.tolerance);
    s.simulation.t_end = optional_number(j, "t_end", s.simulation.t_end);
    if (j.contains("steps_per_delay")) {
        if (!j.at("steps_per_delay").is_number_integer()) {
            config_error("field 'steps_per_delay': expected an integer");
        }
        s.simulation.steps_per_delay = j.at("steps_per_delay").get<int>();
    }
    if (j.contains("simulation_bracket")) {
        const json& b = j.at("simulation_bracket");
        if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number()) {
            config_error("field 'simulation_bracket': expected [lo, hi]");
        }
        s.simulation_bracket = {b[0].get<double>(), b[1].get<double>()};
    }
    if (j.contains("threads")) {
        if (!j.at("threads").is_number_unsigned()) config_error("field 'threads': expected >= 0");
        s.threads = j.at("threads").get<unsigned>();
    }
    s.validate();
    return s;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& e) {
        config_error(e.what());
    }
    return parse_sweep_spec(text);
}

}  // namespace tumordelay
