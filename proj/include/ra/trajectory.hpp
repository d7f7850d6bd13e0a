#ifndef RA_TRAJECTORY_HPP
#define RA_TRAJECTORY_HPP

#include <optional>
#include <string>
#include <vector>

#include "ra/instance.hpp"

namespace ra {

struct TrajectoryEntry {
    double t = 0.0;     // seconds since solver start
    double cost = 0.0;  // incumbent cost at t
    std::optional<Solution> solution;
};

// Time-ordered incumbent stream of one solver run. Times are strictly
// increasing within [0, budget], costs strictly decreasing (incumbents only).
// `normalized` marks trajectories whose times are on the reference-machine
// scale.
struct Trajectory {
    std::vector<TrajectoryEntry> entries;
    double budget = 0.0;  // seconds
    std::string produced_by;
    bool normalized = false;

    bool empty() const { return entries.empty(); }
    double final_cost() const { return entries.back().cost; }
};

// Throws std::invalid_argument on monotonicity violations or out-of-budget
// entries. When an instance is given, attached solutions are also checked for
// feasibility and cost agreement.
void validate_trajectory(const Trajectory& trajectory, const Instance* instance = nullptr);

}  // namespace ra

#endif
