// tdelay: command-line front end over the C API.
//
// Exit codes: 0 success, 1 config or usage error, 2 numerical failure
// recorded in the outputs.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tumordelay/tumordelay.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct Options {
    std::string config;
    std::string out;
    std::string method = "char";
    std::optional<int> steps_per_delay;
    std::optional<double> t_end;
};

int report(td_status status, const char* what) {
    std::fprintf(stderr, "tdelay: %s: %s\n", what, td_last_error());
    // Anything that goes wrong before a computation starts is a config error.
    return status == TD_OK ? kExitOk : kExitConfig;
}

void print_and_free(char* text) {
    if (text) std::fputs(text, stdout);
    td_string_free(text);
}

struct ConfigHandle {
    td_config* ptr = nullptr;
    ~ConfigHandle() { td_config_free(ptr); }
};

struct SweepHandle {
    td_sweep_spec* ptr = nullptr;
    ~SweepHandle() { td_sweep_free(ptr); }
};

int open_config(const Options& o, ConfigHandle& h) {
    const td_status s =
        o.config.empty() ? td_config_default(&h.ptr) : td_config_load(o.config.c_str(), &h.ptr);
    if (s != TD_OK) return report(s, "config");
    if (o.t_end) {
        if (td_status e = td_config_set_t_end(h.ptr, *o.t_end); e != TD_OK) {
            return report(e, "--t-end");
        }
    }
    if (o.steps_per_delay) {
        if (td_status e = td_config_set_steps_per_delay(h.ptr, *o.steps_per_delay); e != TD_OK) {
            return report(e, "--steps-per-delay");
        }
    }
    return kExitOk;
}

std::string stem_of(const std::string& path, const char* fallback) {
    return path.empty() ? fallback : std::filesystem::path(path).stem().string();
}

int write_file(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f) {
        std::fprintf(stderr, "tdelay: cannot write %s\n", path.string().c_str());
        return kExitConfig;
    }
    std::fputs(text.c_str(), f);
    std::fclose(f);
    return kExitOk;
}

int cmd_simulate(const Options& o) {
    ConfigHandle cfg;
    if (int rc = open_config(o, cfg)) return rc;
    const std::string out = o.out.empty() ? "." : o.out;
    char* record = nullptr;
    int failed = 0;
    const td_status s = td_run_simulation(cfg.ptr, out.c_str(),
                                          stem_of(o.config, "simulation").c_str(), &record, &failed);
    if (s != TD_OK) {
        std::fprintf(stderr, "tdelay: simulate: %s\n", td_last_error());
        return s == TD_ERR_IO ? kExitConfig : kExitNumerical;
    }
    print_and_free(record);
    return failed ? kExitNumerical : kExitOk;
}

int cmd_classify(const Options& o) {
    ConfigHandle cfg;
    if (int rc = open_config(o, cfg)) return rc;
    char* record = nullptr;
    int failed = 0;
    const td_status s = td_simulate_classify(cfg.ptr, &record, &failed);
    if (s != TD_OK) {
        std::fprintf(stderr, "tdelay: classify: %s\n", td_last_error());
        return kExitNumerical;
    }
    const std::string text = record ? record : "";
    print_and_free(record);
    if (!o.out.empty()) {
        const auto path =
            std::filesystem::path(o.out) / (stem_of(o.config, "classification") + ".json");
        if (int rc = write_file(path, text)) return rc;
    }
    return failed ? kExitNumerical : kExitOk;
}

int cmd_hopf(const Options& o) {
    ConfigHandle cfg;
    if (int rc = open_config(o, cfg)) return rc;
    char* json = nullptr;
    int failed = 0;
    const td_status s = td_hopf_report(cfg.ptr, o.method.c_str(), &json, &failed);
    if (s != TD_OK) {
        std::fprintf(stderr, "tdelay: hopf: %s\n", td_last_error());
        return s == TD_ERR_INVALID_PARAMS || s == TD_ERR_CONFIG_PARSE ? kExitConfig
                                                                       : kExitNumerical;
    }
    const std::string text = json ? json : "";
    print_and_free(json);
    if (!o.out.empty()) {
        const auto path = std::filesystem::path(o.out) / (stem_of(o.config, "hopf") + ".hopf.json");
        if (int rc = write_file(path, text)) return rc;
    }
    return failed ? kExitNumerical : kExitOk;
}

int cmd_sweep(const Options& o, bool method_given) {
    SweepHandle spec;
    td_status s = o.config.empty() ? td_sweep_default(&spec.ptr)
                                   : td_sweep_load(o.config.c_str(), &spec.ptr);
    if (s != TD_OK) return report(s, "sweep config");
    if (method_given) {
        if (td_status e = td_sweep_set_method(spec.ptr, o.method.c_str()); e != TD_OK) {
            return report(e, "--method");
        }
    }
    if (o.t_end || o.steps_per_delay) {
        if (td_status e = td_sweep_set_simulation(spec.ptr, o.t_end.value_or(400.0),
                                                  o.steps_per_delay.value_or(64));
            e != TD_OK) {
            return report(e, "simulation settings");
        }
    }
    const std::string out = o.out.empty() ? "." : o.out;
    const std::string name = stem_of(o.config, "sweep");
    size_t na = 0;
    size_t failed = 0;
    s = td_run_sweep(spec.ptr, out.c_str(), name.c_str(), &na, &failed);
    if (s != TD_OK) return report(s, "sweep");
    std::printf("wrote %s/%s.csv (%zu NA cells, %zu numerical failures)\n", out.c_str(),
                name.c_str(), na, failed);
    return failed ? kExitNumerical : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delayed tumor-growth model: simulation, Hopf thresholds and sweeps"};
    app.set_version_flag("--version", std::string(td_version()));
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* sub, bool with_method) -> CLI::Option* {
        sub->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--steps-per-delay", o.steps_per_delay, "RK4 steps per shortest delay")
            ->check(CLI::Range(4, 1 << 20));
        sub->add_option("--t-end", o.t_end, "integration horizon")
            ->check(CLI::PositiveNumber);
        if (!with_method) return nullptr;
        return sub->add_option("--method", o.method, "critical-delay method")
            ->check(CLI::IsMember({"char", "sim", "both"}));
    };

    auto* simulate = app.add_subcommand("simulate", "integrate one config and write CSV/SVG/JSON");
    add_common(simulate, false);
    auto* hopf = app.add_subcommand("hopf", "equilibria and critical delay for one config");
    add_common(hopf, true);
    auto* sweep = app.add_subcommand("sweep", "critical-delay table over (tau1, alpha)");
    CLI::Option* sweep_method = add_common(sweep, true);
    auto* classify = app.add_subcommand("classify", "simulate and print the classification only");
    add_common(classify, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    if (*simulate) return cmd_simulate(o);
    if (*hopf) return cmd_hopf(o);
    if (*sweep) return cmd_sweep(o, sweep_method->count() > 0);
    return cmd_classify(o);
}
