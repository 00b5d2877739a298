#include "tumordelay/model.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "tumordelay/error.hpp"

namespace tumordelay {

namespace {

// x coth(x) - 1 = sum_{n>=1} kCothSeries[n-1] x^{2n}, coefficients 2^{2n} B_{2n} / (2n)!.
// Ratio of successive terms is about (x/pi)^2, so 20 terms give full double
// precision for x < 1.
constexpr std::array<double, 20> kCothSeries = {
    3.3333333333333333333e-1,   -2.2222222222222222222e-2,  2.1164021164021164021e-3,
    -2.1164021164021164021e-4,  2.1377799155576933355e-5,   -2.1644042808063972085e-6,
    2.19259478518737778e-7,     -2.2214608789979679076e-8,  2.2507846516808992854e-9,
    -2.2805151204592182866e-10, 2.3106432599002624097e-11,  -2.3411706819824883959e-12,
    2.3721017400233654295e-13,  -2.4034415333307706179e-14, 2.4351954029183368731e-15,
    -2.4673688045172074706e-16, 2.499967277122080898e-17,   -2.5329964357406348315e-18,
    2.5664619702826286611e-19,  -2.6003696460137273589e-20,
};

constexpr double kSeriesCutoff = 1.0;
// Beyond this the stabilised log form is used for f-ratios.
constexpr double kLogRatioCutoff = 350.0;

void require_positive(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw Error(ErrorCode::NonPositiveArgument, "argument must be finite and > 0, got " +
                                                        std::to_string(x));
    }
}

// sum_n c_n u^{n-1}, i.e. p(x) with u = x^2.
double p_series(double u) {
    double s = 0.0;
    for (auto it = kCothSeries.rbegin(); it != kCothSeries.rend(); ++it) s = s * u + *it;
    return s;
}

// sum_n (2n-1) c_n u^{n-1}, i.e. g'(x).
double g_prime_series(double u) {
    double s = 0.0;
    for (std::size_t k = kCothSeries.size(); k-- > 0;) {
        const double n = static_cast<double>(k + 1);
        s = s * u + (2.0 * n - 1.0) * kCothSeries[k];
    }
    return s;
}

// sum_{n>=2} (2n-2) c_n u^{n-2}; p'(x) = x * this.
double p_prime_series(double u) {
    double s = 0.0;
    for (std::size_t k = kCothSeries.size(); k-- > 1;) {
        const double n = static_cast<double>(k + 1);
        s = s * u + (2.0 * n - 2.0) * kCothSeries[k];
    }
    return s;
}

// f(u) / f(U) for 0 <= u <= U, U > 0.
double basis_f_ratio(double u, double U) {
    if (u == 0.0) return std::exp(-log_basis_f(U));
    if (U > kLogRatioCutoff) return std::exp(log_basis_f(u) - log_basis_f(U));
    return (std::sinh(u) / std::sinh(U)) * (U / u);
}

}  // namespace

void ModelParams::validate() const {
    auto check = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::InvalidParams,
                        std::string(name) + " must be finite and > 0, got " + std::to_string(v));
        }
    };
    check(gamma, "gamma");
    check(mu, "mu");
    check(sigma_tilde, "sigma_tilde");
    check(sigma_inf, "sigma_inf");
    if (!alpha.is_dirichlet() && (!(alpha.rate() >= 0.0) || !std::isfinite(alpha.rate()))) {
        throw Error(ErrorCode::InvalidParams,
                    "alpha must be finite and >= 0 (use the Dirichlet case for infinity), got " +
                        std::to_string(alpha.rate()));
    }
}

DerivedParams derive_params(const ModelParams& params) {
    params.validate();
    const double a1 = params.mu * params.sigma_inf;
    return DerivedParams{a1, params.sigma_tilde / (3.0 * params.sigma_inf), 3.0 * a1};
}

double scaled_radius(double radius, const ModelParams& params) {
    return std::sqrt(params.gamma) * radius;
}

double radius_from_omega(double omega, double gamma) { return std::cbrt(omega) / std::sqrt(gamma); }

double basis_g(double x) {
    require_positive(x);
    if (x < kSeriesCutoff) return x * p_series(x * x);
    // coth(x) = 1 + 2 / expm1(2x); the last term underflows harmlessly for large x.
    return 1.0 - 1.0 / x + 2.0 / std::expm1(2.0 * x);
}

double basis_p(double x) {
    require_positive(x);
    if (x < kSeriesCutoff) return p_series(x * x);
    return basis_g(x) / x;
}

double basis_g_prime(double x) {
    require_positive(x);
    if (x < kSeriesCutoff) return g_prime_series(x * x);
    const double s = std::sinh(x);
    return 1.0 / (x * x) - 1.0 / (s * s);
}

double basis_p_prime(double x) {
    require_positive(x);
    if (x < kSeriesCutoff) return x * p_prime_series(x * x);
    return (basis_g_prime(x) * x - basis_g(x)) / (x * x);
}

double log_basis_f(double x) {
    require_positive(x);
    if (x < kSeriesCutoff) return std::log(std::sinh(x) / x);
    return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2 - std::log(x);
}

BasisValues eval_basis(double x) {
    require_positive(x);
    const double f = std::sinh(x) / x;
    if (!std::isfinite(f)) {
        throw Error(ErrorCode::ArgumentOverflow,
                    "sinh(x)/x overflows at x = " + std::to_string(x) + "; use log_basis_f");
    }
    return BasisValues{f, basis_g(x), basis_p(x)};
}

double eval_l(double x, const ModelParams& params) {
    const double p = basis_p(x);
    if (params.alpha.is_dirichlet()) return p;
    const double alpha = params.alpha.rate();
    return alpha * p / (alpha + std::sqrt(params.gamma) * basis_g(x));
}

double eval_l_prime(double x, const ModelParams& params) {
    const double dp = basis_p_prime(x);
    if (params.alpha.is_dirichlet()) return dp;
    const double alpha = params.alpha.rate();
    const double root_gamma = std::sqrt(params.gamma);
    const double p = basis_p(x);
    const double denom = alpha + root_gamma * basis_g(x);
    return (alpha * alpha * dp - alpha * root_gamma * p * p) / (denom * denom);
}

double nutrient_profile(double r, double tumor_radius, const ModelParams& params) {
    if (!(tumor_radius > 0.0) || !std::isfinite(tumor_radius)) {
        throw Error(ErrorCode::RadiusOutOfRange,
                    "tumour radius must be > 0, got " + std::to_string(tumor_radius));
    }
    if (!(r >= 0.0) || r > tumor_radius) {
        throw Error(ErrorCode::RadiusOutOfRange, "r = " + std::to_string(r) +
                                                     " outside [0, " +
                                                     std::to_string(tumor_radius) + "]");
    }
    const double root_gamma = std::sqrt(params.gamma);
    const double U = root_gamma * tumor_radius;
    const double ratio = basis_f_ratio(root_gamma * r, U);
    if (params.alpha.is_dirichlet()) return params.sigma_inf * ratio;
    const double alpha = params.alpha.rate();
    return alpha * params.sigma_inf / (alpha + root_gamma * basis_g(U)) * ratio;
}

double dde_rhs(double omega_tau1, double omega_tau2, const DerivedParams& derived,
               const ModelParams& params) {
    if (!(omega_tau1 > 0.0) || !(omega_tau2 > 0.0) || !std::isfinite(omega_tau1) ||
        !std::isfinite(omega_tau2)) {
        throw Error(ErrorCode::NonPositiveState,
                    "delayed states must be positive, got " + std::to_string(omega_tau1) + ", " +
                        std::to_string(omega_tau2));
    }
    return derived.a *
           (eval_l(std::cbrt(omega_tau1), params) * omega_tau1 - derived.lambda * omega_tau2);
}

}  // namespace tumordelay
