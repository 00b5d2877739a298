#include "tumordelay/dde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "tumordelay/error.hpp"

namespace tumordelay {

namespace {

constexpr int kMinStepsPerDelay = 4;
constexpr int kOdeStepsPerHorizon = 1000;
constexpr int kFormulaCheckPoints = 257;

double hermite(const TrajectoryNode& a, const TrajectoryNode& b, double t) {
    const double h = b.t - a.t;
    const double s = (t - a.t) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2.0 * s3 - 3.0 * s2 + 1.0) * a.omega + (s3 - 2.0 * s2 + s) * h * a.domega +
           (-2.0 * s3 + 3.0 * s2) * b.omega + (s3 - s2) * h * b.domega;
}

// Index i of the interval [nodes[i].t, nodes[i+1].t] holding t; nodes are
// spaced by `step` except possibly the last interval.
std::size_t locate(const std::vector<TrajectoryNode>& nodes, double step, double t) {
    const std::size_t last = nodes.size() - 2;
    auto i = static_cast<std::size_t>(std::max(0.0, std::floor(t / step)));
    i = std::min(i, last);
    while (i > 0 && t < nodes[i].t) --i;
    while (i < last && t > nodes[i + 1].t) ++i;
    return i;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Signals a nonpositive state inside a step without unwinding through Error.
struct PositivityFailure {};

}  // namespace

double DelayPair::min_positive_delay() const {
    if (tau1 > 0.0 && tau2 > 0.0) return min_delay();
    return max_delay();
}

HistoryFunction HistoryFunction::from_radius(std::function<double(double)> phi, double gamma) {
    const double root_gamma = std::sqrt(gamma);
    return formula([phi = std::move(phi), root_gamma](double t) {
        const double eta = root_gamma * phi(t);
        return eta * eta * eta;
    });
}

void HistoryFunction::validate(double tau) const {
    const double slack = 1e-12 * std::max(1.0, tau);
    if (const auto* c = std::get_if<Constant>(&repr_)) {
        if (!(c->value > 0.0) || !std::isfinite(c->value)) {
            throw Error(ErrorCode::NonPositiveHistory,
                        "constant history must be > 0, got " + std::to_string(c->value));
        }
        return;
    }
    if (const auto* s = std::get_if<Sampled>(&repr_)) {
        const auto& pts = s->points;
        if (pts.empty()) throw Error(ErrorCode::HistoryDomainViolation, "no history samples");
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (!(pts[i].first > pts[i - 1].first)) {
                throw Error(ErrorCode::HistoryDomainViolation,
                            "history sample times must be strictly increasing");
            }
        }
        if (pts.front().first > -tau + slack || pts.back().first < -slack) {
            throw Error(ErrorCode::HistoryDomainViolation,
                        "samples cover [" + std::to_string(pts.front().first) + ", " +
                            std::to_string(pts.back().first) + "], need [" +
                            std::to_string(-tau) + ", 0]");
        }
        for (const auto& [t, v] : pts) {
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw Error(ErrorCode::NonPositiveHistory,
                            "history sample at t = " + std::to_string(t) + " is not positive");
            }
        }
        return;
    }
    const auto& fn = std::get<Formula>(repr_).eval;
    if (!fn) throw Error(ErrorCode::HistoryDomainViolation, "empty history formula");
    for (int k = 0; k < kFormulaCheckPoints; ++k) {
        const double t = -tau + tau * k / (kFormulaCheckPoints - 1);
        double v = 0.0;
        try {
            v = fn(t);
        } catch (const std::exception& e) {
            throw Error(ErrorCode::HistoryDomainViolation,
                        "history formula failed at t = " + std::to_string(t) + ": " + e.what());
        }
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::NonPositiveHistory,
                        "history formula is not positive at t = " + std::to_string(t));
        }
    }
}

double HistoryFunction::operator()(double t) const {
    if (const auto* c = std::get_if<Constant>(&repr_)) return c->value;
    if (const auto* s = std::get_if<Sampled>(&repr_)) {
        const auto& pts = s->points;
        if (pts.size() == 1 || t <= pts.front().first) {
            if (t < pts.front().first - 1e-12 * std::max(1.0, std::abs(t))) {
                throw Error(ErrorCode::HistoryDomainViolation,
                            "t = " + std::to_string(t) + " precedes the history samples");
            }
            return pts.front().second;
        }
        if (t >= pts.back().first) return pts.back().second;
        auto hi = std::upper_bound(pts.begin(), pts.end(), t,
                                   [](double x, const auto& p) { return x < p.first; });
        auto lo = hi - 1;
        const double w = (t - lo->first) / (hi->first - lo->first);
        return lo->second + w * (hi->second - lo->second);
    }
    return std::get<Formula>(repr_).eval(t);
}

Trajectory::Trajectory(std::vector<TrajectoryNode> nodes, double step, double gamma,
                       DelayPair delays, TrajectoryStatus status, std::optional<double> t_fail)
    : nodes_(std::move(nodes)),
      step_(step),
      gamma_(gamma),
      delays_(delays),
      status_(status),
      t_fail_(t_fail) {
    if (nodes_.empty()) throw Error(ErrorCode::EmptyTrajectory, "trajectory has no nodes");
}

std::size_t Trajectory::interval_index(double t) const { return locate(nodes_, step_, t); }

double Trajectory::omega(double t) const {
    if (!(t >= 0.0) || t > t_end()) {
        throw Error(ErrorCode::TimeOutOfRange, "t = " + std::to_string(t) + " outside [0, " +
                                                   std::to_string(t_end()) + "]");
    }
    if (nodes_.size() == 1) return nodes_.front().omega;
    const std::size_t i = interval_index(t);
    return hermite(nodes_[i], nodes_[i + 1], t);
}

double Trajectory::radius(double t) const { return radius_from_omega(omega(t), gamma_); }

void Trajectory::write_csv(std::ostream& out) const {
    out << "t,omega,radius\n";
    for (const auto& n : nodes_) {
        out << fmt17(n.t) << ',' << fmt17(n.omega) << ','
            << fmt17(radius_from_omega(n.omega, gamma_)) << '\n';
    }
}

SamplePoint sample(const Trajectory& traj, double t) {
    const double w = traj.omega(t);
    return SamplePoint{w, radius_from_omega(w, traj.gamma())};
}

Trajectory integrate(const ModelParams& params, const DelayPair& delays,
                     const HistoryFunction& history, double t_end, int steps_per_delay) {
    const DerivedParams derived = derive_params(params);
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw Error(ErrorCode::InvalidArgument, "t_end must be > 0");
    }
    if (steps_per_delay < kMinStepsPerDelay) {
        throw Error(ErrorCode::InvalidStepCount,
                    "steps_per_delay must be >= 4, got " + std::to_string(steps_per_delay));
    }
    if (!(delays.tau1 >= 0.0) || !(delays.tau2 >= 0.0) || !std::isfinite(delays.tau1) ||
        !std::isfinite(delays.tau2)) {
        throw Error(ErrorCode::InvalidArgument, "delays must be finite and >= 0");
    }
    history.validate(delays.max_delay());

    const double base_delay = delays.min_positive_delay();
    const double h = base_delay > 0.0 ? base_delay / steps_per_delay : t_end / kOdeStepsPerHorizon;
    const auto n_steps = static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / h - 1e-9)));

    std::vector<TrajectoryNode> nodes;
    nodes.reserve(n_steps + 1);
    nodes.push_back({0.0, history(0.0), 0.0});

    // Delayed values at stage time s. A zero delay reads the current stage state.
    auto delayed = [&](double s, double tau, double stage_state) {
        if (tau == 0.0) return stage_state;
        const double u = s - tau;
        if (u <= 0.0) return history(u);
        if (nodes.size() == 1) return nodes.front().omega;
        const std::size_t i = locate(nodes, h, u);
        return hermite(nodes[i], nodes[i + 1], u);
    };
    auto rhs = [&](double s, double y) {
        const double w1 = delayed(s, delays.tau1, y);
        const double w2 = delayed(s, delays.tau2, y);
        if (!(w1 > 0.0) || !(w2 > 0.0)) throw PositivityFailure{};
        return derived.a * (eval_l(std::cbrt(w1), params) * w1 - derived.lambda * w2);
    };

    TrajectoryStatus status = TrajectoryStatus::Completed;
    std::optional<double> t_fail;
    for (std::size_t n = 0; n < n_steps; ++n) {
        TrajectoryNode& cur = nodes.back();
        const double t0 = cur.t;
        const double t1 = (n + 1 == n_steps) ? t_end : static_cast<double>(n + 1) * h;
        const double dt = t1 - t0;
        const double y = cur.omega;
        try {
            const double k1 = rhs(t0, y);
            cur.domega = k1;
            const double k2 = rhs(t0 + 0.5 * dt, y + 0.5 * dt * k1);
            const double k3 = rhs(t0 + 0.5 * dt, y + 0.5 * dt * k2);
            const double k4 = rhs(t1, y + dt * k3);
            const double next = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!(next > 0.0) || !std::isfinite(next)) throw PositivityFailure{};
            nodes.push_back({t1, next, 0.0});
        } catch (const PositivityFailure&) {
            status = TrajectoryStatus::PositivityLoss;
            t_fail = t1;
            break;
        }
    }

    // The final node's slope is only known once the loop has stopped; k1 of a
    // failed step has already filled it in when it could be evaluated.
    TrajectoryNode& last = nodes.back();
    if (status == TrajectoryStatus::Completed || (last.domega == 0.0 && nodes.size() > 1)) {
        try {
            last.domega = rhs(last.t, last.omega);
        } catch (const PositivityFailure&) {
            if (nodes.size() > 1) {
                const TrajectoryNode& prev = nodes[nodes.size() - 2];
                last.domega = (last.omega - prev.omega) / (last.t - prev.t);
            }
            if (status == TrajectoryStatus::Completed) {
                status = TrajectoryStatus::PositivityLoss;
                t_fail = last.t;
            }
        }
    }
    return Trajectory(std::move(nodes), h, params.gamma, delays, status, t_fail);
}

std::optional<double> convergence_order(const ModelParams& params, const DelayPair& delays,
                                        const HistoryFunction& history, double t_probe) {
    double values[3];
    const int steps[3] = {32, 64, 128};
    for (int k = 0; k < 3; ++k) {
        const Trajectory traj = integrate(params, delays, history, t_probe, steps[k]);
        if (traj.status() != TrajectoryStatus::Completed) {
            throw Error(ErrorCode::NonPositiveState,
                        "positivity lost before t_probe; order undefined");
        }
        values[k] = traj.nodes().back().omega;
    }
    const double coarse = std::abs(values[0] - values[1]);
    const double fine = std::abs(values[1] - values[2]);
    const double floor = 1e-14 * std::max(1.0, std::abs(values[2]));
    if (coarse <= floor || fine <= floor) return std::nullopt;
    return std::log2(coarse / fine);
}

}  // namespace tumordelay
