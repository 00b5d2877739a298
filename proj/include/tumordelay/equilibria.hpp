#ifndef TUMORDELAY_EQUILIBRIA_HPP
#define TUMORDELAY_EQUILIBRIA_HPP

#include <optional>

#include "tumordelay/model.hpp"

namespace tumordelay {

enum class Equilibrium { Trivial, Positive };

/// Coefficients of the linearisation dv/dt = -b1 v(t - tau1) - b2 v(t - tau2)
/// around one of the two stationary solutions.
struct LinearCoeffs {
    double b1;
    double b2;
    Equilibrium about;
};

struct StationaryState {
    double omega_s;   // scaled volume at rest
    double radius_s;  // omega_s^{1/3} / sqrt(Gamma)
    double residual;  // |l(omega_s^{1/3}) - Lambda|
};

enum class TrivialRegimeKind { UnstableNoHopf, StableWithHopfThreshold, Degenerate };

struct TrivialRegime {
    TrivialRegimeKind kind;
    std::optional<double> tau1_bound;  // only for StableWithHopfThreshold
};

inline constexpr double kStationaryResidualTol = 1e-12;

/// Unique positive root of l(omega^{1/3}) = Lambda, or nullopt when
/// sigma_inf <= sigma_tilde (or alpha == 0, where l vanishes identically).
/// Throws BracketNotFound if the root lies beyond y = 1e6.
std::optional<StationaryState> find_positive_stationary(const ModelParams& params);

/// Bisection for y in [lo, hi] with l(lo) > Lambda > l(hi); exposed so the
/// bracket independence of the root can be checked.
double solve_stationary_cube_root(const ModelParams& params, double lo, double hi);

LinearCoeffs linearize_positive(const ModelParams& params, const StationaryState& state);
LinearCoeffs linearize_trivial(const ModelParams& params);
TrivialRegime classify_trivial(const ModelParams& params);

/// pi / (2 sqrt(b2^2 - b1^2)); throws CoefficientOrderViolated unless |b1| < b2.
double tau1_admissible_bound(const LinearCoeffs& coeffs);

}  // namespace tumordelay

#endif  // TUMORDELAY_EQUILIBRIA_HPP
