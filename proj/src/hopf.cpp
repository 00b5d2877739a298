#include "tumordelay/hopf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tumordelay/error.hpp"

namespace tumordelay {

namespace {

constexpr int kScanIntervals = 1000;  // scan resolution 1e-3 (|b1| + b2)
constexpr double kFrequencyTol = 1e-13;
// Relative slack accepting tau1 at the closed end of the admissible interval.
constexpr double kBoundSlack = 1e-12;

void check_hypotheses(const LinearCoeffs& c, double tau1) {
    if (!(c.b1 < 0.0) || !(c.b2 > std::abs(c.b1))) {
        throw Error(ErrorCode::HypothesisViolated,
                    "need b1 < 0 and b2 > |b1|, got b1 = " + std::to_string(c.b1) +
                        ", b2 = " + std::to_string(c.b2));
    }
    const double bound = tau1_admissible_bound(c);
    if (!(tau1 > 0.0) || tau1 > bound * (1.0 + kBoundSlack)) {
        throw Error(ErrorCode::HypothesisViolated, "tau1 = " + std::to_string(tau1) +
                                                       " outside (0, " + std::to_string(bound) +
                                                       "]");
    }
}

double bisect_root(const LinearCoeffs& c, double tau1, double lo, double hi) {
    double f_lo = crossing_compatibility(c, tau1, lo);
    while (hi - lo > kFrequencyTol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = crossing_compatibility(c, tau1, mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double delay_for_frequency(const LinearCoeffs& c, double tau1, double w) {
    const double cos_part = -(c.b1 / c.b2) * std::cos(w * tau1);
    const double sin_part = (w - c.b1 * std::sin(w * tau1)) / c.b2;
    double angle = std::atan2(sin_part, cos_part);
    if (angle <= 0.0) angle += 2.0 * std::numbers::pi;
    return angle / w;
}

}  // namespace

double crossing_compatibility(const LinearCoeffs& c, double tau1, double w) {
    const double re = c.b1 * std::cos(w * tau1);
    const double im = w - c.b1 * std::sin(w * tau1);
    return re * re + im * im - c.b2 * c.b2;
}

double characteristic_residual(const LinearCoeffs& c, double tau1, double tau2, double w) {
    const double re = c.b1 * std::cos(w * tau1) + c.b2 * std::cos(w * tau2);
    const double im = w - c.b1 * std::sin(w * tau1) - c.b2 * std::sin(w * tau2);
    return std::hypot(re, im);
}

std::vector<double> crossing_frequencies(const LinearCoeffs& coeffs, double tau1) {
    check_hypotheses(coeffs, tau1);
    const double top = std::abs(coeffs.b1) + coeffs.b2;
    const double dw = top / kScanIntervals;
    std::vector<double> roots;
    double w_prev = 0.0;
    double f_prev = crossing_compatibility(coeffs, tau1, w_prev);  // b1^2 - b2^2 < 0
    for (int k = 1; k <= kScanIntervals; ++k) {
        const double w = (k == kScanIntervals) ? top : k * dw;
        const double f = crossing_compatibility(coeffs, tau1, w);
        if (f == 0.0) {
            roots.push_back(w);
        } else if ((f < 0.0) != (f_prev < 0.0) && f_prev != 0.0) {
            roots.push_back(bisect_root(coeffs, tau1, w_prev, w));
        }
        w_prev = w;
        f_prev = f;
    }
    if (roots.empty()) {
        throw Error(ErrorCode::NoCrossing, "F(w) has no sign change on (0, |b1| + b2]");
    }
    return roots;
}

double crossing_frequency(const LinearCoeffs& coeffs, double tau1) {
    return crossing_frequencies(coeffs, tau1).front();
}

HopfResult critical_delay(const LinearCoeffs& coeffs, double tau1) {
    const std::vector<double> roots = crossing_frequencies(coeffs, tau1);
    HopfResult best{0.0, 0.0, 0.0, 0};
    bool found = false;
    for (double w : roots) {
        const double tau2 = delay_for_frequency(coeffs, tau1, w);
        if (!found || tau2 < best.tau2_star) {
            best = HopfResult{tau2, w, characteristic_residual(coeffs, tau1, tau2, w), 0};
            found = true;
        }
    }
    if (!(best.residual <= kCharacteristicResidualTol)) {
        throw Error(ErrorCode::ResidualTooLarge,
                    "characteristic residual " + std::to_string(best.residual) +
                        " at tau2* = " + std::to_string(best.tau2_star));
    }
    return best;
}

const char* oscillation_kind_name(OscillationKind kind) {
    switch (kind) {
        case OscillationKind::ConvergentMonotone: return "ConvergentMonotone";
        case OscillationKind::ConvergentOscillatory: return "ConvergentOscillatory";
        case OscillationKind::Sustained: return "Sustained";
        case OscillationKind::Growing: return "Growing";
        case OscillationKind::PositivityLoss: return "PositivityLoss";
    }
    return "Unknown";
}

OscillationClass classify_trajectory(const Trajectory& traj, double omega_s,
                                     const ClassificationSettings& settings) {
    if (traj.status() == TrajectoryStatus::PositivityLoss) {
        return {OscillationKind::PositivityLoss, std::nullopt, 0};
    }
    const double horizon = traj.t_end();
    const double needed = settings.min_delay_spans * traj.delays().max_delay();
    if (horizon < needed) {
        throw Error(ErrorCode::HorizonTooShort, "horizon " + std::to_string(horizon) +
                                                    " shorter than " + std::to_string(needed));
    }
    const double t_start = settings.transient_fraction * horizon;
    const double floor = settings.amplitude_floor * omega_s;

    const auto& nodes = traj.nodes();
    auto collect_peaks = [&](double from) {
        std::vector<std::pair<double, double>> found;  // (t, log amplitude)
        for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
            if (nodes[i].t < from) continue;
            const double prev = std::abs(nodes[i - 1].omega - omega_s);
            const double here = std::abs(nodes[i].omega - omega_s);
            const double next = std::abs(nodes[i + 1].omega - omega_s);
            if (prev < here && here >= next && here > floor) {
                found.emplace_back(nodes[i].t, std::log(here));
            }
        }
        return found;
    };
    auto peaks = collect_peaks(t_start);
    // Strongly damped oscillations can fall below the floor inside the
    // discarded transient; their envelope is then fitted over the whole run.
    if (peaks.size() < 3) peaks = collect_peaks(0.0);
    if (peaks.size() < 3) return {OscillationKind::ConvergentMonotone, std::nullopt, peaks.size()};

    double mean_t = 0.0;
    double mean_y = 0.0;
    for (const auto& [t, y] : peaks) {
        mean_t += t;
        mean_y += y;
    }
    mean_t /= static_cast<double>(peaks.size());
    mean_y /= static_cast<double>(peaks.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto& [t, y] : peaks) {
        sxy += (t - mean_t) * (y - mean_y);
        sxx += (t - mean_t) * (t - mean_t);
    }
    const double rate = sxx > 0.0 ? sxy / sxx : 0.0;

    OscillationKind kind = OscillationKind::Sustained;
    if (rate < -settings.rate_tol) {
        kind = OscillationKind::ConvergentOscillatory;
    } else if (rate > settings.rate_tol) {
        kind = OscillationKind::Growing;
    }
    return {kind, rate, peaks.size()};
}

double critical_delay_by_simulation(const ModelParams& params, double tau1,
                                    std::pair<double, double> bracket,
                                    const SimulationSettings& settings) {
    const auto state = find_positive_stationary(params);
    if (!state) {
        throw Error(ErrorCode::NoPositiveEquilibrium,
                    "simulation threshold needs a positive stationary state");
    }
    const HistoryFunction history =
        settings.history_offset
            ? HistoryFunction::constant(state->omega_s * (1.0 + *settings.history_offset))
            : HistoryFunction::constant(settings.history_value);

    auto converges = [&](double tau2) {
        const Trajectory traj = integrate(params, DelayPair{tau1, tau2}, history,
                                          settings.t_end, settings.steps_per_delay);
        return is_convergent(
            classify_trajectory(traj, state->omega_s, settings.classification).kind);
    };

    auto [lo, hi] = bracket;
    if (!(lo < hi) || !converges(lo) || converges(hi)) {
        throw Error(ErrorCode::BracketInvalid,
                    "classifications at tau2 = " + std::to_string(lo) + " and " +
                        std::to_string(hi) + " do not straddle the stability boundary");
    }
    while (hi - lo > settings.width) {
        const double mid = 0.5 * (lo + hi);
        if (converges(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace tumordelay
