#include "ra/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ra {

namespace {

// Demand sums are floating point; genuine violations are at least one demand
// unit (1 on integer grids, 1/precision normalized), so a 1e-9 slack only
// absorbs summation-order noise.
bool exceeds_capacity(double load, double capacity) {
    return load > capacity + 1e-9 * std::max(1.0, capacity);
}

}  // namespace

void validate_instance(const Instance& instance) {
    if (instance.coords.size() != instance.demands.size()) {
        throw std::invalid_argument("instance '" + instance.id + "': coords and demands lengths differ");
    }
    if (instance.coords.size() < 2) {
        throw std::invalid_argument("instance '" + instance.id + "': needs a depot and at least one customer");
    }
    if (instance.capacity <= 0.0) {
        throw std::invalid_argument("instance '" + instance.id + "': capacity must be positive");
    }
    if (instance.demands[0] != 0.0) {
        throw std::invalid_argument("instance '" + instance.id + "': depot demand must be 0");
    }
    for (std::size_t i = 1; i < instance.demands.size(); ++i) {
        const double q = instance.demands[i];
        if (q <= 0.0 || exceeds_capacity(q, instance.capacity)) {
            throw std::invalid_argument("instance '" + instance.id + "': demand of customer " + std::to_string(i) +
                                        " outside (0, capacity]");
        }
    }
    if (instance.grid_scale.kind == GridScale::Kind::IntegerGrid && instance.grid_scale.precision <= 0.0) {
        throw std::invalid_argument("instance '" + instance.id + "': integer-grid precision must be positive");
    }
    if (instance.bks_cost && *instance.bks_cost <= 0.0) {
        throw std::invalid_argument("instance '" + instance.id + "': bks cost must be positive");
    }
}

double leg_distance(const Instance& instance, int from, int to) {
    const Point& a = instance.coords[static_cast<std::size_t>(from)];
    const Point& b = instance.coords[static_cast<std::size_t>(to)];
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double d = std::sqrt(dx * dx + dy * dy);
    return instance.rounding == Rounding::RoundToNearestInt ? std::round(d) : d;
}

double evaluate_cost(const Instance& instance, const std::vector<std::vector<int>>& routes) {
    const int n = instance.num_customers();
    double total = 0.0;
    for (const auto& route : routes) {
        if (route.empty()) {
            continue;
        }
        int prev = 0;
        for (const int customer : route) {
            if (customer < 1 || customer > n) {
                throw std::out_of_range("route index " + std::to_string(customer) + " outside 1.." + std::to_string(n));
            }
            total += leg_distance(instance, prev, customer);
            prev = customer;
        }
        total += leg_distance(instance, prev, 0);
    }
    return total;
}

Solution make_solution(const Instance& instance, std::vector<std::vector<int>> routes) {
    Solution solution;
    solution.cost = evaluate_cost(instance, routes);
    solution.num_vehicles = static_cast<int>(std::count_if(routes.begin(), routes.end(),
                                                           [](const auto& r) { return !r.empty(); }));
    solution.routes = std::move(routes);
    return solution;
}

FeasibilityReport check_feasibility(const Instance& instance, const Solution& solution) {
    const int n = instance.num_customers();
    FeasibilityReport report;
    std::vector<int> visits(static_cast<std::size_t>(n) + 1, 0);
    std::set<int> invalid;

    for (std::size_t r = 0; r < solution.routes.size(); ++r) {
        double load = 0.0;
        for (const int customer : solution.routes[r]) {
            if (customer < 1 || customer > n) {
                invalid.insert(customer);
                continue;
            }
            visits[static_cast<std::size_t>(customer)] += 1;
            load += instance.demands[static_cast<std::size_t>(customer)];
        }
        if (exceeds_capacity(load, instance.capacity)) {
            report.overloaded.push_back({static_cast<int>(r), load});
        }
    }

    for (int c = 1; c <= n; ++c) {
        if (visits[static_cast<std::size_t>(c)] == 0) {
            report.missing.push_back(c);
        } else if (visits[static_cast<std::size_t>(c)] > 1) {
            report.duplicated.push_back(c);
        }
    }
    report.invalid_indices.assign(invalid.begin(), invalid.end());
    report.ok = report.duplicated.empty() && report.missing.empty() && report.invalid_indices.empty() &&
                report.overloaded.empty();
    return report;
}

Instance rescale_instance(const Instance& instance, const GridScale& target) {
    if (instance.grid_scale == target) {
        throw std::invalid_argument("rescale: source and target scales must differ");
    }
    if (target.kind == GridScale::Kind::IntegerGrid && target.precision <= 0.0) {
        throw std::invalid_argument("rescale: precision must be positive");
    }

    // Integer-to-integer changes go through the unit square.
    if (instance.grid_scale.kind == GridScale::Kind::IntegerGrid && target.kind == GridScale::Kind::IntegerGrid) {
        return rescale_instance(rescale_instance(instance, GridScale::unit_square()), target);
    }

    Instance out = instance;
    if (target.kind == GridScale::Kind::IntegerGrid) {
        const double p = target.precision;
        for (auto& c : out.coords) {
            c.x = std::round(c.x * p);
            c.y = std::round(c.y * p);
        }
        for (std::size_t i = 0; i < out.demands.size(); ++i) {
            out.demands[i] = std::round(out.demands[i] * p);
        }
        out.capacity = std::round(out.capacity * p);
    } else {
        const double p = instance.grid_scale.precision;
        for (auto& c : out.coords) {
            c.x /= p;
            c.y /= p;
        }
        for (auto& q : out.demands) {
            q /= p;
        }
        out.capacity /= p;
    }
    out.grid_scale = target;
    return out;
}

}  // namespace ra
