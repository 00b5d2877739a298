#ifndef TUMORDELAY_HOPF_HPP
#define TUMORDELAY_HOPF_HPP

// Critical delay of dv/dt = -b1 v(t - tau1) - b2 v(t - tau2) at fixed tau1,
// from purely imaginary roots of lambda + b1 e^{-lambda tau1} + b2 e^{-lambda tau2},
// plus a simulation-side classifier used as an independent check.

#include <optional>
#include <utility>
#include <vector>

#include "tumordelay/dde.hpp"
#include "tumordelay/equilibria.hpp"

namespace tumordelay {

struct HopfResult {
    double tau2_star;
    double omega_c;   // crossing frequency
    double residual;  // |i w + b1 e^{-i w tau1} + b2 e^{-i w tau2*}|
    int branch;       // 0 = smallest positive tau2
};

inline constexpr double kCharacteristicResidualTol = 1e-10;

/// F(w) = (b1 cos w tau1)^2 + (w - b1 sin w tau1)^2 - b2^2; zero exactly when
/// some tau2 puts i w on the characteristic spectrum.
double crossing_compatibility(const LinearCoeffs& coeffs, double tau1, double w);

/// Every root of F on (0, |b1| + b2], ascending.
std::vector<double> crossing_frequencies(const LinearCoeffs& coeffs, double tau1);

/// Smallest root of F. Throws HypothesisViolated unless b1 < 0 < |b1| < b2 and
/// 0 < tau1 <= pi / (2 sqrt(b2^2 - b1^2)); NoCrossing if F never changes sign.
double crossing_frequency(const LinearCoeffs& coeffs, double tau1);

/// Smallest positive tau2 over all crossing frequencies.
HopfResult critical_delay(const LinearCoeffs& coeffs, double tau1);

/// Modulus of the characteristic function at lambda = i w.
double characteristic_residual(const LinearCoeffs& coeffs, double tau1, double tau2, double w);

enum class OscillationKind {
    ConvergentMonotone,
    ConvergentOscillatory,
    Sustained,
    Growing,
    PositivityLoss,
};

const char* oscillation_kind_name(OscillationKind kind);

struct OscillationClass {
    OscillationKind kind;
    std::optional<double> envelope_rate;  // absent for Monotone / PositivityLoss
    std::size_t peak_count = 0;
};

inline bool is_convergent(OscillationKind k) {
    return k == OscillationKind::ConvergentMonotone || k == OscillationKind::ConvergentOscillatory;
}

struct ClassificationSettings {
    double amplitude_floor = 1e-6;      // relative to omega_s
    double rate_tol = 1e-3;             // per unit time
    double transient_fraction = 0.25;   // of the horizon, discarded
    double min_delay_spans = 20.0;      // horizon >= this * max(tau1, tau2)
};

/// Envelope classification of |omega - omega_s| on the node grid.
OscillationClass classify_trajectory(const Trajectory& traj, double omega_s,
                                     const ClassificationSettings& settings = {});

struct SimulationSettings {
    ClassificationSettings classification{};
    double t_end = 400.0;
    int steps_per_delay = kDefaultStepsPerDelay;
    /// Constant history omega_s * (1 + history_offset); nullopt uses history_value.
    std::optional<double> history_offset = 0.02;
    double history_value = 0.01;
    double width = 1e-3;  // final bracket width
};

/// Bisects tau2 on the Convergent / non-Convergent classification boundary.
/// Throws BracketInvalid unless lo classifies Convergent* and hi does not.
double critical_delay_by_simulation(const ModelParams& params, double tau1,
                                    std::pair<double, double> bracket,
                                    const SimulationSettings& settings = {});

}  // namespace tumordelay

#endif  // TUMORDELAY_HOPF_HPP
