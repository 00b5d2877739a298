#ifndef TUMORDELAY_MODEL_HPP
#define TUMORDELAY_MODEL_HPP

// Model constants, the special functions f, g, p, l of the radially symmetric
// nutrient problem, the closed-form nutrient profile and the right-hand side
// of the reduced scalar delay equation for omega = (sqrt(Gamma) R)^3.

#include <compare>

namespace tumordelay {

/// Angiogenesis rate: a finite Robin coefficient or the Dirichlet limit.
class Angiogenesis {
public:
    static constexpr Angiogenesis finite(double rate) { return Angiogenesis(false, rate); }
    static constexpr Angiogenesis dirichlet() { return Angiogenesis(true, 0.0); }

    constexpr bool is_dirichlet() const { return dirichlet_; }
    /// Only meaningful when !is_dirichlet().
    constexpr double rate() const { return rate_; }

    friend constexpr bool operator==(const Angiogenesis&, const Angiogenesis&) = default;

private:
    constexpr Angiogenesis(bool dirichlet, double rate) : dirichlet_(dirichlet), rate_(rate) {}

    bool dirichlet_;
    double rate_;
};

struct ModelParams {
    double gamma = 1.0;        // nutrient consumption rate
    double mu = 1.0;           // proliferation coefficient
    double sigma_tilde = 2.0;  // apoptosis threshold concentration
    double sigma_inf = 3.3;    // host nutrient concentration
    Angiogenesis alpha = Angiogenesis::finite(0.2);

    /// Throws Error(InvalidParams) unless every finite field is positive and alpha >= 0.
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct DerivedParams {
    double a1;      // mu * sigma_inf
    double lambda;  // sigma_tilde / (3 sigma_inf)
    double a;       // 3 a1
};

DerivedParams derive_params(const ModelParams& params);

/// Scaled radius eta = sqrt(Gamma) R and its inverse.
double scaled_radius(double radius, const ModelParams& params);
double radius_from_omega(double omega, double gamma);

struct BasisValues {
    double f;  // sinh(x) / x
    double g;  // coth(x) - 1/x
    double p;  // g(x) / x
};

/// Evaluates f, g, p at x > 0. Throws NonPositiveArgument for x <= 0 and
/// ArgumentOverflow once sinh(x) is no longer representable (x > ~710).
BasisValues eval_basis(double x);

// Overflow-free pieces; valid for every finite x > 0.
double basis_g(double x);
double basis_p(double x);
double basis_g_prime(double x);
double basis_p_prime(double x);
/// log(sinh(x)/x), finite for all x > 0.
double log_basis_f(double x);

/// l(x) = alpha p(x) / (alpha + sqrt(Gamma) g(x)); equals p(x) in the Dirichlet limit.
double eval_l(double x, const ModelParams& params);
double eval_l_prime(double x, const ModelParams& params);

/// Nutrient concentration sigma(r) inside a tumour of radius R (0 <= r <= R).
double nutrient_profile(double r, double tumor_radius, const ModelParams& params);

/// a [ l(w1^{1/3}) w1 - Lambda w2 ] for delayed states w1 = omega(t - tau1), w2 = omega(t - tau2).
double dde_rhs(double omega_tau1, double omega_tau2, const DerivedParams& derived,
               const ModelParams& params);

}  // namespace tumordelay

#endif  // TUMORDELAY_MODEL_HPP
