#include "ra/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace ra {

void validate_trajectory(const Trajectory& trajectory, const Instance* instance) {
    if (trajectory.budget < 0.0) {
        throw std::invalid_argument("trajectory: negative budget");
    }
    double prev_t = -1.0;
    double prev_cost = std::numeric_limits<double>::infinity();
    for (const auto& entry : trajectory.entries) {
        if (entry.t <= prev_t) {
            throw std::invalid_argument("trajectory: times must be strictly increasing");
        }
        if (entry.t < 0.0 || entry.t > trajectory.budget) {
            throw std::invalid_argument("trajectory: entry time outside [0, budget]");
        }
        if (entry.cost >= prev_cost) {
            throw std::invalid_argument("trajectory: costs must be strictly decreasing");
        }
        if (instance != nullptr && entry.solution) {
            if (!check_feasibility(*instance, *entry.solution).ok) {
                throw std::invalid_argument("trajectory: infeasible incumbent solution");
            }
            const double cost = evaluate_cost(*instance, entry.solution->routes);
            if (std::abs(cost - entry.cost) > 1e-6 * std::max(1.0, std::abs(cost))) {
                throw std::invalid_argument("trajectory: incumbent cost does not match its routes");
            }
        }
        prev_t = entry.t;
        prev_cost = entry.cost;
    }
}

}  // namespace ra
