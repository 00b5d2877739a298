#ifndef TUMORDELAY_PLOT_HPP
#define TUMORDELAY_PLOT_HPP

#include <optional>
#include <string>

#include "tumordelay/dde.hpp"

namespace tumordelay {

struct PlotAnnotations {
    std::string title;
    std::optional<double> omega_s;  // dashed reference line
    bool show_radius = false;       // R(t) on a secondary axis
    int width = 900;
    int height = 520;
};

/// Self-contained SVG line plot of omega(t). A trajectory that lost
/// positivity is drawn up to its last node with a marked endpoint.
std::string emit_plot(const Trajectory& traj, const PlotAnnotations& annotations);

}  // namespace tumordelay

#endif  // TUMORDELAY_PLOT_HPP
