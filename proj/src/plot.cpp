#include "tumordelay/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "tumordelay/error.hpp"

namespace tumordelay {

namespace {

constexpr std::size_t kMaxPlainPoints = 4000;
constexpr std::size_t kBuckets = 2000;
constexpr int kTicks = 6;

std::string num(double v, const char* spec = "%.2f") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Node indices to draw: everything for short runs, otherwise the min and max
// of each bucket so oscillation envelopes survive the decimation.
std::vector<std::size_t> plotted_indices(const std::vector<TrajectoryNode>& nodes) {
    std::vector<std::size_t> idx;
    const std::size_t n = nodes.size();
    if (n <= kMaxPlainPoints) {
        idx.resize(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        return idx;
    }
    idx.reserve(2 * kBuckets + 2);
    for (std::size_t b = 0; b < kBuckets; ++b) {
        const std::size_t lo = b * n / kBuckets;
        const std::size_t hi = (b + 1) * n / kBuckets;
        std::size_t imin = lo;
        std::size_t imax = lo;
        for (std::size_t i = lo; i < hi; ++i) {
            if (nodes[i].omega < nodes[imin].omega) imin = i;
            if (nodes[i].omega > nodes[imax].omega) imax = i;
        }
        idx.push_back(std::min(imin, imax));
        if (imin != imax) idx.push_back(std::max(imin, imax));
    }
    if (idx.back() != n - 1) idx.push_back(n - 1);
    return idx;
}

struct Range {
    double lo;
    double hi;

    void pad() {
        const double span = hi - lo;
        if (span <= 1e-12 * std::max(1.0, std::abs(hi))) {
            const double d = std::max(0.05 * std::abs(hi), 1e-6);
            lo -= d;
            hi += d;
        } else {
            lo -= 0.05 * span;
            hi += 0.05 * span;
        }
    }
};

}  // namespace

std::string emit_plot(const Trajectory& traj, const PlotAnnotations& a) {
    const auto& nodes = traj.nodes();
    if (nodes.empty()) throw Error(ErrorCode::EmptyTrajectory, "nothing to plot");

    const double left = 80.0;
    const double right = a.show_radius ? 80.0 : 40.0;
    const double top = 50.0;
    const double bottom = 60.0;
    const double plot_w = a.width - left - right;
    const double plot_h = a.height - top - bottom;

    const double t_last = nodes.back().t > 0.0 ? nodes.back().t : 1.0;
    Range y{nodes.front().omega, nodes.front().omega};
    for (const auto& n : nodes) {
        y.lo = std::min(y.lo, n.omega);
        y.hi = std::max(y.hi, n.omega);
    }
    if (a.omega_s) {
        y.lo = std::min(y.lo, *a.omega_s);
        y.hi = std::max(y.hi, *a.omega_s);
    }
    y.pad();

    auto map_x = [&](double t) { return left + plot_w * t / t_last; };
    auto map_y = [&](double w) { return top + plot_h * (y.hi - w) / (y.hi - y.lo); };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << a.width << "\" height=\""
        << a.height << "\" viewBox=\"0 0 " << a.width << ' ' << a.height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << num(a.width / 2.0) << "\" y=\"28\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << xml_escape(a.title) << "</text>\n";

    // Axes and ticks.
    svg << "<g stroke=\"black\" stroke-width=\"1\">\n"
        << "<line x1=\"" << num(left) << "\" y1=\"" << num(top + plot_h) << "\" x2=\""
        << num(left + plot_w) << "\" y2=\"" << num(top + plot_h) << "\"/>\n"
        << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left)
        << "\" y2=\"" << num(top + plot_h) << "\"/>\n";
    for (int k = 0; k <= kTicks; ++k) {
        const double tx = map_x(t_last * k / kTicks);
        const double wy = top + plot_h * k / kTicks;
        svg << "<line x1=\"" << num(tx) << "\" y1=\"" << num(top + plot_h) << "\" x2=\""
            << num(tx) << "\" y2=\"" << num(top + plot_h + 5) << "\"/>\n"
            << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(wy) << "\" x2=\"" << num(left)
            << "\" y2=\"" << num(wy) << "\"/>\n";
    }
    svg << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int k = 0; k <= kTicks; ++k) {
        const double t = t_last * k / kTicks;
        const double w = y.hi - (y.hi - y.lo) * k / kTicks;
        svg << "<text x=\"" << num(map_x(t)) << "\" y=\"" << num(top + plot_h + 18)
            << "\" text-anchor=\"middle\">" << num(t, "%.4g") << "</text>\n"
            << "<text x=\"" << num(left - 8) << "\" y=\"" << num(top + plot_h * k / kTicks + 4)
            << "\" text-anchor=\"end\">" << num(w, "%.4g") << "</text>\n";
    }
    svg << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << num(a.height - 15.0)
        << "\" text-anchor=\"middle\" font-size=\"13\">t</text>\n"
        << "<text x=\"18\" y=\"" << num(top + plot_h / 2) << "\" text-anchor=\"middle\" "
        << "font-size=\"13\" transform=\"rotate(-90 18 " << num(top + plot_h / 2)
        << ")\">\xCF\x89(t)</text>\n</g>\n";

    if (a.omega_s) {
        const double ry = map_y(*a.omega_s);
        svg << "<line id=\"omega-s\" x1=\"" << num(left) << "\" y1=\"" << num(ry) << "\" x2=\""
            << num(left + plot_w) << "\" y2=\"" << num(ry)
            << "\" stroke=\"gray\" stroke-dasharray=\"6 4\" stroke-width=\"1\"/>\n";
    }

    const std::vector<std::size_t> idx = plotted_indices(nodes);
    svg << "<polyline id=\"omega\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const auto& n = nodes[idx[i]];
        svg << (i ? " " : "") << num(map_x(n.t)) << ',' << num(map_y(n.omega));
    }
    svg << "\"/>\n";

    if (a.show_radius) {
        Range r{traj.radius(0.0), traj.radius(0.0)};
        for (const auto& n : nodes) {
            const double rad = radius_from_omega(n.omega, traj.gamma());
            r.lo = std::min(r.lo, rad);
            r.hi = std::max(r.hi, rad);
        }
        r.pad();
        auto map_r = [&](double v) { return top + plot_h * (r.hi - v) / (r.hi - r.lo); };
        svg << "<line x1=\"" << num(left + plot_w) << "\" y1=\"" << num(top) << "\" x2=\""
            << num(left + plot_w) << "\" y2=\"" << num(top + plot_h) << "\" stroke=\"#d62728\"/>\n"
            << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#d62728\">\n";
        for (int k = 0; k <= kTicks; ++k) {
            const double v = r.hi - (r.hi - r.lo) * k / kTicks;
            svg << "<text x=\"" << num(left + plot_w + 8) << "\" y=\""
                << num(top + plot_h * k / kTicks + 4) << "\">" << num(v, "%.4g") << "</text>\n";
        }
        svg << "<text x=\"" << num(a.width - 12.0) << "\" y=\"" << num(top - 10)
            << "\" text-anchor=\"end\" font-size=\"13\">R(t)</text>\n</g>\n"
            << "<polyline id=\"radius\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1\" "
            << "points=\"";
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const auto& n = nodes[idx[i]];
            svg << (i ? " " : "") << num(map_x(n.t)) << ','
                << num(map_r(radius_from_omega(n.omega, traj.gamma())));
        }
        svg << "\"/>\n";
    }

    if (traj.status() == TrajectoryStatus::PositivityLoss) {
        const auto& n = nodes.back();
        const double cx = map_x(n.t);
        const double cy = map_y(n.omega);
        svg << "<circle id=\"positivity-loss\" cx=\"" << num(cx) << "\" cy=\"" << num(cy)
            << "\" r=\"5\" fill=\"#d62728\"/>\n"
            << "<text x=\"" << num(std::min(cx + 8, left + plot_w - 150)) << "\" y=\""
            << num(std::max(cy - 8, top + 12)) << "\" font-family=\"sans-serif\" "
            << "font-size=\"12\" fill=\"#d62728\">positivity lost at t = "
            << num(traj.t_fail().value_or(n.t), "%.6g") << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace tumordelay
