#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "json.hpp"
#include "tumordelay/equilibria.hpp"
#include "tumordelay/error.hpp"
#include "tumordelay/experiments.hpp"

namespace tumordelay {

using nlohmann::json;

namespace {

constexpr double kBoundSlack = 1e-12;

std::string shortest(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fixed(double v, const char* spec) {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string na(ErrorCode code) { return std::string(error_code_name(code)); }

std::string matrix_csv(const SweepResult& r, const char* spec) {
    std::string out = "tau1\\alpha";
    for (const auto& a : r.spec.alpha_list) out += "," + format_alpha(a);
    out += "\n";
    for (std::size_t i = 0; i < r.spec.tau1_list.size(); ++i) {
        out += shortest(r.spec.tau1_list[i]);
        for (const SweepCell& cell : r.cells[i]) {
            const auto v = cell.value();
            out += ",";
            out += v ? fixed(*v, spec) : "NA(" + cell.na_reason + ")";
        }
        out += "\n";
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
}

}  // namespace

SweepCell compute_sweep_cell(const SweepSpec& spec, std::size_t row, std::size_t column) {
    SweepCell cell;
    ModelParams params = spec.base;
    params.alpha = spec.alpha_list.at(column);
    const double tau1 = spec.tau1_list.at(row);
    try {
        const auto state = find_positive_stationary(params);
        if (!state) {
            cell.na_reason = na(ErrorCode::NoPositiveEquilibrium);
            return cell;
        }
        const LinearCoeffs coeffs = linearize_positive(params, *state);
        cell.tau1_bound = tau1_admissible_bound(coeffs);
        if (tau1 > cell.tau1_bound * (1.0 + kBoundSlack)) {
            cell.na_reason = na(ErrorCode::Tau1OutOfRange);
            return cell;
        }
        std::optional<HopfResult> hopf;
        if (spec.method != SweepMethod::Simulation) {
            hopf = critical_delay(coeffs, tau1);
            cell.tau2_char = hopf->tau2_star;
            cell.omega_c = hopf->omega_c;
            cell.residual = hopf->residual;
        }
        if (spec.method != SweepMethod::Characteristic) {
            const auto bracket = hopf ? std::pair{0.5 * hopf->tau2_star, 1.5 * hopf->tau2_star}
                                      : spec.simulation_bracket;
            try {
                cell.tau2_sim =
                    critical_delay_by_simulation(params, tau1, bracket, spec.simulation);
            } catch (const Error& e) {
                if (!cell.tau2_char) throw;
                cell.na_reason = "sim:" + na(e.code());
            }
        }
    } catch (const Error& e) {
        cell.tau2_char.reset();
        cell.tau2_sim.reset();
        cell.na_reason = na(e.code());
    }
    return cell;
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    const std::size_t rows = spec.tau1_list.size();
    const std::size_t cols = spec.alpha_list.size();
    SweepResult result{spec, std::vector<std::vector<SweepCell>>(rows, std::vector<SweepCell>(cols))};

    // Each worker claims cells by index and writes only its own slot.
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < rows * cols; k = next++) {
            result.cells[k / cols][k % cols] = compute_sweep_cell(spec, k / cols, k % cols);
        }
    };
    unsigned n_threads = spec.threads ? spec.threads : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(rows * cols)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return result;
}

std::string sweep_table_csv(const SweepResult& result) { return matrix_csv(result, "%.4f"); }

std::string sweep_full_csv(const SweepResult& result) { return matrix_csv(result, "%.17g"); }

std::string sweep_meta_json(const SweepResult& result) {
    const SweepSpec& s = result.spec;
    json j;
    j["method"] = sweep_method_name(s.method);
    j["tolerance"] = s.tolerance;
    j["model"] = {{"gamma", s.base.gamma},
                  {"mu", s.base.mu},
                  {"sigma_tilde", s.base.sigma_tilde},
                  {"sigma_inf", s.base.sigma_inf}};
    json alphas = json::array();
    for (const auto& a : s.alpha_list) {
        alphas.push_back(a.is_dirichlet() ? json("inf") : json(a.rate()));
    }
    j["alpha_list"] = alphas;
    j["tau1_list"] = s.tau1_list;
    j["tolerances"] = {{"frequency_bisection", 1e-13},
                       {"characteristic_residual_max", kCharacteristicResidualTol},
                       {"stationary_residual_max", kStationaryResidualTol}};
    if (s.method != SweepMethod::Characteristic) {
        j["simulation"] = {{"t_end", s.simulation.t_end},
                           {"steps_per_delay", s.simulation.steps_per_delay},
                           {"bracket_width", s.simulation.width},
                           {"rate_tol", s.simulation.classification.rate_tol},
                           {"amplitude_floor", s.simulation.classification.amplitude_floor}};
    }
    double max_residual = 0.0;
    json cells = json::array();
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        for (std::size_t k = 0; k < result.cells[i].size(); ++k) {
            const SweepCell& c = result.cells[i][k];
            json cj;
            cj["tau1"] = s.tau1_list[i];
            cj["alpha"] = format_alpha(s.alpha_list[k]);
            cj["tau2_char"] = c.tau2_char ? json(*c.tau2_char) : json(nullptr);
            cj["tau2_sim"] = c.tau2_sim ? json(*c.tau2_sim) : json(nullptr);
            cj["omega_c"] = c.tau2_char ? json(c.omega_c) : json(nullptr);
            cj["residual"] = c.tau2_char ? json(c.residual) : json(nullptr);
            cj["tau1_bound"] = c.tau1_bound > 0.0 ? json(c.tau1_bound) : json(nullptr);
            cj["na_reason"] = c.na_reason.empty() ? json(nullptr) : json(c.na_reason);
            if (c.tau2_char && c.tau2_sim) {
                cj["agree"] = std::abs(*c.tau2_char - *c.tau2_sim) <= s.tolerance;
            }
            if (c.tau2_char) max_residual = std::max(max_residual, c.residual);
            cells.push_back(cj);
        }
    }
    j["max_residual"] = max_residual;
    j["cells"] = cells;
    return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_sweep(const SweepResult& result,
                                               const std::filesystem::path& out_dir,
                                               const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string());
    const std::vector<std::filesystem::path> paths = {
        out_dir / (name + ".csv"), out_dir / (name + ".full.csv"), out_dir / (name + ".meta.json")};
    write_text(paths[0], sweep_table_csv(result));
    write_text(paths[1], sweep_full_csv(result));
    write_text(paths[2], sweep_meta_json(result));
    return paths;
}

}  // namespace tumordelay
