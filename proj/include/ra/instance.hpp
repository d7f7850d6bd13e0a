#ifndef RA_INSTANCE_HPP
#define RA_INSTANCE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ra {

struct Point {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point&) const = default;
};

// Coordinate/quantity scale of an instance. UnitSquare holds coordinates in
// [0,1]^2 with capacity-normalized demands; IntegerGrid holds everything
// multiplied by `precision` and rounded to integers.
struct GridScale {
    enum class Kind { UnitSquare, IntegerGrid };
    Kind kind = Kind::UnitSquare;
    double precision = 0.0;  // > 0 iff kind == IntegerGrid

    static GridScale unit_square() { return {Kind::UnitSquare, 0.0}; }
    static GridScale integer_grid(double precision) { return {Kind::IntegerGrid, precision}; }
    bool operator==(const GridScale&) const = default;
};

// Per-leg distance convention. RoundToNearestInt is the CVRPLib/DIMACS
// convention for integer-grid instances; Exact is the ML unit-square one.
enum class Rounding { Exact, RoundToNearestInt };

// One CVRP problem. Index 0 is the depot; customers are 1..N. Instances are
// immutable after construction and safe to share across threads.
struct Instance {
    std::string id;
    std::vector<Point> coords;    // length N+1, coords[0] = depot
    std::vector<double> demands;  // length N+1, demands[0] = 0
    double capacity = 0.0;
    std::optional<double> time_limit;  // seconds, pre-normalization
    std::optional<double> bks_cost;
    std::string coords_dist;   // optional tags, "" = unset
    std::string depot_type;
    std::string demands_dist;
    std::map<std::string, std::string> tags;  // unrecognized file keys, preserved
    GridScale grid_scale = GridScale::unit_square();
    Rounding rounding = Rounding::Exact;

    int num_customers() const { return static_cast<int>(coords.size()) - 1; }
};

// Depot-anchored routes; the depot index 0 is implicit at both ends of every
// route. `cost` is evaluate_cost of the routes under the instance's rounding.
struct Solution {
    std::vector<std::vector<int>> routes;
    double cost = 0.0;
    int num_vehicles = 0;
};

struct RouteOverload {
    int route_index = 0;
    double load = 0.0;
};

// Violations are data, not errors: a malformed solution yields a report.
struct FeasibilityReport {
    bool ok = true;
    std::vector<int> duplicated;          // customers visited more than once
    std::vector<int> missing;             // customers never visited
    std::vector<int> invalid_indices;     // indices outside 1..N (incl. depot 0)
    std::vector<RouteOverload> overloaded;
};

// Throws std::invalid_argument when the structural invariants are violated
// (length mismatch, nonzero depot demand, demand outside (0, Q], ...).
void validate_instance(const Instance& instance);

// Distance of one leg under the instance's rounding mode.
double leg_distance(const Instance& instance, int from, int to);

// Total distance of a route set: depot -> r1 -> ... -> rk -> depot per route.
// Throws std::out_of_range when a route index is outside 1..N.
double evaluate_cost(const Instance& instance, const std::vector<std::vector<int>>& routes);

// Builds a Solution with cost and vehicle count filled in from the instance.
Solution make_solution(const Instance& instance, std::vector<std::vector<int>> routes);

FeasibilityReport check_feasibility(const Instance& instance, const Solution& solution);

// Converts between UnitSquare and IntegerGrid representations. Coordinates,
// demands and capacity scale by the precision; id and tags are preserved.
// Throws std::invalid_argument when source and target scales are equal or the
// target precision is not positive.
Instance rescale_instance(const Instance& instance, const GridScale& target);

}  // namespace ra

#endif
