#ifndef TUMORDELAY_EXPERIMENTS_HPP
#define TUMORDELAY_EXPERIMENTS_HPP

// Experiment configs, single-run driver and the (alpha, tau1) critical-delay sweep.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tumordelay/dde.hpp"
#include "tumordelay/hopf.hpp"
#include "tumordelay/model.hpp"

namespace tumordelay {

/// tau1 given as a multiple of the admissible bound pi / (2 sqrt(b2^2 - b1^2)).
struct Tau1FractionOfBound {
    double fraction;
    friend bool operator==(const Tau1FractionOfBound&, const Tau1FractionOfBound&) = default;
};

using Tau1Spec = std::variant<double, Tau1FractionOfBound>;
using HistorySpec = std::variant<double, std::vector<std::pair<double, double>>>;

enum class OutputKind { TrajectoryCsv, PlotSvg, ClassificationJson };

struct ExperimentConfig {
    ModelParams params{};
    Tau1Spec tau1 = Tau1FractionOfBound{0.025};
    double tau2 = 0.0394;
    HistorySpec omega0 = 0.01;
    double t_end = 400.0;
    int steps_per_delay = kDefaultStepsPerDelay;
    std::vector<OutputKind> outputs{OutputKind::TrajectoryCsv, OutputKind::PlotSvg,
                                    OutputKind::ClassificationJson};
    bool plot_radius = false;

    /// Resolves a fractional tau1 against the positive-equilibrium bound.
    DelayPair delays() const;
    HistoryFunction history() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws Error(ConfigParseError) with line/column or field diagnostics.
ExperimentConfig parse_config(std::string_view json_text);
std::string serialize_config(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

struct SimulationRecord {
    std::optional<OscillationClass> classification;
    std::optional<double> omega_s;
    std::optional<double> tau2_star_reference;
    std::optional<TrajectoryStatus> status;
    std::optional<double> t_fail;
    std::optional<std::string> error;

    bool numerical_failure() const { return error.has_value(); }
    std::string to_json() const;
};

struct SimulationReport {
    SimulationRecord record;
    std::vector<std::filesystem::path> files;
};

/// Integrates, classifies and writes the requested outputs as
/// <out_dir>/<stem>.{csv,svg,json}. Numerical errors land in the record.
SimulationReport run_simulation(const ExperimentConfig& config,
                                const std::filesystem::path& out_dir,
                                const std::string& stem = "simulation");

/// Classification record without touching the filesystem.
SimulationRecord simulate_and_classify(const ExperimentConfig& config);

enum class SweepMethod : int;

/// Equilibria, linear coefficients and critical delays for the config's
/// parameters and tau1 (tau2 is ignored), as a JSON document.
std::string hopf_report_json(const ExperimentConfig& config, SweepMethod method,
                             const SimulationSettings& simulation = {});

enum class SweepMethod : int { Characteristic, Simulation, Both };

const char* sweep_method_name(SweepMethod method);
SweepMethod parse_sweep_method(std::string_view name);

struct SweepSpec {
    ModelParams base{};  // alpha is overridden per column
    std::vector<Angiogenesis> alpha_list;
    std::vector<double> tau1_list;
    SweepMethod method = SweepMethod::Characteristic;
    double tolerance = 5e-3;  // char/sim agreement for SweepMethod::Both
    SimulationSettings simulation{};
    /// tau2 bracket for simulation-only sweeps; Both brackets around the
    /// characteristic value instead.
    std::pair<double, double> simulation_bracket{0.2, 3.0};
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const;
};

/// Default grid: tau1 in {0.05, ..., 1.2}, alpha in {0.2, 1..10, 20..100, 1000, inf}.
SweepSpec default_grid_spec();

SweepSpec parse_sweep_spec(std::string_view json_text);
SweepSpec load_sweep_spec(const std::filesystem::path& path);

struct SweepCell {
    std::optional<double> tau2_char;
    std::optional<double> tau2_sim;
    double omega_c = 0.0;
    double residual = 0.0;
    double tau1_bound = 0.0;
    std::string na_reason;  // empty when the cell has a value

    std::optional<double> value() const { return tau2_char ? tau2_char : tau2_sim; }
};

struct SweepResult {
    SweepSpec spec;
    std::vector<std::vector<SweepCell>> cells;  // [tau1 row][alpha column]
};

SweepCell compute_sweep_cell(const SweepSpec& spec, std::size_t row, std::size_t column);
SweepResult run_sweep(const SweepSpec& spec);

/// 4-decimal matrix (round-half-to-even), NA(reason) for failed cells.
std::string sweep_table_csv(const SweepResult& result);
/// Same matrix at 17 significant digits.
std::string sweep_full_csv(const SweepResult& result);
std::string sweep_meta_json(const SweepResult& result);

/// Writes <name>.csv, <name>.full.csv and <name>.meta.json; returns the paths.
std::vector<std::filesystem::path> write_sweep(const SweepResult& result,
                                               const std::filesystem::path& out_dir,
                                               const std::string& name);

/// Shortest round-trip decimal; "inf" for the Dirichlet case.
std::string format_alpha(const Angiogenesis& alpha);

}  // namespace tumordelay

#endif  // TUMORDELAY_EXPERIMENTS_HPP
