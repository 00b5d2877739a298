#include "tumordelay/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tumordelay/error.hpp"

namespace tumordelay {

namespace {

constexpr double kBracketStart = 1e-8;
constexpr double kBracketCap = 1e6;
constexpr double kRootTol = 1e-14;

}  // namespace

double solve_stationary_cube_root(const ModelParams& params, double lo, double hi) {
    const double lambda = derive_params(params).lambda;
    if (!(lo > 0.0) || !(hi > lo) || !(eval_l(lo, params) > lambda) ||
        !(eval_l(hi, params) < lambda)) {
        throw Error(ErrorCode::BracketNotFound, "[" + std::to_string(lo) + ", " +
                                                    std::to_string(hi) +
                                                    "] does not bracket l(y) = Lambda");
    }
    // l is strictly decreasing, so l(y) > Lambda means the root is to the right.
    while (hi - lo > kRootTol * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (eval_l(mid, params) > lambda) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::optional<StationaryState> find_positive_stationary(const ModelParams& params) {
    const DerivedParams derived = derive_params(params);
    if (params.sigma_inf <= params.sigma_tilde) return std::nullopt;
    if (!params.alpha.is_dirichlet() && params.alpha.rate() == 0.0) return std::nullopt;

    double hi = 1.0;
    while (eval_l(hi, params) >= derived.lambda) {
        hi *= 2.0;
        if (hi > kBracketCap) {
            throw Error(ErrorCode::BracketNotFound,
                        "l(y) stays above Lambda up to y = 1e6; parameters are pathological");
        }
    }
    const double lo = kBracketStart;
    const double y = solve_stationary_cube_root(params, lo, hi);
    const double residual = std::abs(eval_l(y, params) - derived.lambda);
    if (residual > kStationaryResidualTol) {
        throw Error(ErrorCode::InconsistentState,
                    "stationary residual " + std::to_string(residual) + " exceeds 1e-12");
    }
    return StationaryState{y * y * y, y / std::sqrt(params.gamma), residual};
}

LinearCoeffs linearize_positive(const ModelParams& params, const StationaryState& state) {
    const DerivedParams derived = derive_params(params);
    if (!(state.omega_s > 0.0)) {
        throw Error(ErrorCode::InconsistentState, "omega_s must be positive");
    }
    const double y = std::cbrt(state.omega_s);
    const double l = eval_l(y, params);
    if (std::abs(l - derived.lambda) > kStationaryResidualTol) {
        throw Error(ErrorCode::InconsistentState,
                    "state does not satisfy l(omega_s^{1/3}) = Lambda for these parameters");
    }
    const double b1 = -(derived.a / 3.0) * (y * eval_l_prime(y, params) + 3.0 * l);
    const double b2 = derived.a * derived.lambda;
    // H(y) = y^3 l(y) is increasing, which forces both inequalities.
    if (!(b1 < 0.0) || !(std::abs(b1) < b2)) {
        throw Error(ErrorCode::ContractViolation, "positive-equilibrium coefficients b1 = " +
                                                      std::to_string(b1) +
                                                      ", b2 = " + std::to_string(b2) +
                                                      " violate b1 < 0 < |b1| < b2");
    }
    return LinearCoeffs{b1, b2, Equilibrium::Positive};
}

LinearCoeffs linearize_trivial(const ModelParams& params) {
    const DerivedParams derived = derive_params(params);
    return LinearCoeffs{-derived.a / 3.0, derived.a * derived.lambda, Equilibrium::Trivial};
}

TrivialRegime classify_trivial(const ModelParams& params) {
    params.validate();
    if (params.sigma_inf > params.sigma_tilde) {
        return {TrivialRegimeKind::UnstableNoHopf, std::nullopt};
    }
    if (params.sigma_inf == params.sigma_tilde) return {TrivialRegimeKind::Degenerate, std::nullopt};
    const double gap = params.sigma_tilde * params.sigma_tilde - params.sigma_inf * params.sigma_inf;
    return {TrivialRegimeKind::StableWithHopfThreshold,
            std::numbers::pi / (2.0 * params.mu * std::sqrt(gap))};
}

double tau1_admissible_bound(const LinearCoeffs& coeffs) {
    if (!(std::abs(coeffs.b1) < coeffs.b2)) {
        throw Error(ErrorCode::CoefficientOrderViolated,
                    "|b1| = " + std::to_string(std::abs(coeffs.b1)) +
                        " is not below b2 = " + std::to_string(coeffs.b2));
    }
    return std::numbers::pi / (2.0 * std::sqrt(coeffs.b2 * coeffs.b2 - coeffs.b1 * coeffs.b1));
}

}  // namespace tumordelay
