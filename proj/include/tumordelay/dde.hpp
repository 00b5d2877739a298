#ifndef TUMORDELAY_DDE_HPP
#define TUMORDELAY_DDE_HPP

// Method-of-steps integration of
//   omega'(t) = a [ l(omega^{1/3}(t - tau1)) omega(t - tau1) - Lambda omega(t - tau2) ]
// with fixed-step classical RK4 and cubic Hermite dense output.

#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "tumordelay/model.hpp"

namespace tumordelay {

struct DelayPair {
    double tau1 = 0.0;  // mitosis
    double tau2 = 0.0;  // apoptosis modification

    double max_delay() const { return tau1 > tau2 ? tau1 : tau2; }
    double min_delay() const { return tau1 < tau2 ? tau1 : tau2; }
    /// Smallest strictly positive delay, 0 if both vanish.
    double min_positive_delay() const;

    friend bool operator==(const DelayPair&, const DelayPair&) = default;
};

/// Initial datum omega^0 on [-tau, 0].
class HistoryFunction {
public:
    struct Constant {
        double value;
    };
    /// (t, omega) pairs, strictly increasing in t, linearly interpolated.
    struct Sampled {
        std::vector<std::pair<double, double>> points;
    };
    struct Formula {
        std::function<double(double)> eval;
    };

    static HistoryFunction constant(double omega) { return HistoryFunction(Constant{omega}); }
    static HistoryFunction sampled(std::vector<std::pair<double, double>> points) {
        return HistoryFunction(Sampled{std::move(points)});
    }
    static HistoryFunction formula(std::function<double(double)> eval) {
        return HistoryFunction(Formula{std::move(eval)});
    }
    /// Builds omega^0 = (sqrt(Gamma) phi)^3 from a radius history phi.
    static HistoryFunction from_radius(std::function<double(double)> phi, double gamma);

    /// Checks coverage of [-tau, 0] and positivity (on a grid for formulas).
    void validate(double tau) const;
    double operator()(double t) const;

    const std::variant<Constant, Sampled, Formula>& representation() const { return repr_; }

private:
    explicit HistoryFunction(std::variant<Constant, Sampled, Formula> repr)
        : repr_(std::move(repr)) {}

    std::variant<Constant, Sampled, Formula> repr_;
};

struct TrajectoryNode {
    double t;
    double omega;
    double domega;
};

enum class TrajectoryStatus { Completed, PositivityLoss };

/// Dense solution on [0, t_last]. Immutable once returned by integrate().
class Trajectory {
public:
    Trajectory(std::vector<TrajectoryNode> nodes, double step, double gamma, DelayPair delays,
               TrajectoryStatus status, std::optional<double> t_fail);

    const std::vector<TrajectoryNode>& nodes() const { return nodes_; }
    double step() const { return step_; }
    double gamma() const { return gamma_; }
    const DelayPair& delays() const { return delays_; }
    TrajectoryStatus status() const { return status_; }
    /// First step boundary at which positivity failed.
    std::optional<double> t_fail() const { return t_fail_; }
    double t_end() const { return nodes_.back().t; }

    /// Cubic Hermite interpolant of omega; throws TimeOutOfRange outside [0, t_end].
    double omega(double t) const;
    double radius(double t) const;

    /// Header `t,omega,radius`, one row per node, 17 significant digits, LF endings.
    void write_csv(std::ostream& out) const;

private:
    std::size_t interval_index(double t) const;

    std::vector<TrajectoryNode> nodes_;
    double step_;
    double gamma_;
    DelayPair delays_;
    TrajectoryStatus status_;
    std::optional<double> t_fail_;
};

struct SamplePoint {
    double omega;
    double radius;
};

inline constexpr int kDefaultStepsPerDelay = 64;

Trajectory integrate(const ModelParams& params, const DelayPair& delays,
                     const HistoryFunction& history, double t_end,
                     int steps_per_delay = kDefaultStepsPerDelay);

SamplePoint sample(const Trajectory& traj, double t);

/// Observed order from steps_per_delay in {32, 64, 128} at t_probe, or
/// nullopt when the coarse/fine differences vanish (e.g. equilibrium data).
std::optional<double> convergence_order(const ModelParams& params, const DelayPair& delays,
                                        const HistoryFunction& history, double t_probe);

}  // namespace tumordelay

#endif  // TUMORDELAY_DDE_HPP
