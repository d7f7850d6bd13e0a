#ifndef RA_VRPLIB_HPP
#define RA_VRPLIB_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ra/instance.hpp"
#include "ra/trajectory.hpp"

namespace ra {

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses a VRPLIB text (EUC_2D only). File node 1 maps to model index 0; the
// depot is relocated to index 0 when DEPOT_SECTION names another node.
// Unrecognized header keys are preserved in Instance::tags.
Instance parse_vrplib(const std::string& text);

// Canonical, deterministic VRPLIB serialization. Requires an integer-grid
// instance; structurally equal instances produce byte-identical text.
std::string write_vrplib(const Instance& instance);

// Best-known-solution record for one instance (routes may be empty when only
// the cost is known).
struct BksRecord {
    std::string instance_id;
    double cost = 0.0;
    std::vector<std::vector<int>> routes;
    std::string algorithm;
    bool optimal = false;
};

using BksRegistry = std::map<std::string, BksRecord>;

// Line format: `<id> <cost> <algorithm> <opt|not_opt> [routes]` where routes
// are ;-separated comma lists of customer indices. store/load are inverses.
BksRegistry load_bks_registry(const std::string& text);
std::string store_bks_registry(const BksRegistry& registry);

// Checks that non-empty routes are feasible and reproduce the declared cost
// within 1e-6 relative. Throws std::invalid_argument otherwise.
void validate_bks_record(const BksRecord& record, const Instance& instance);

// One evaluation run of one solver on one instance. running_times are on the
// reference-machine scale; running_costs strictly decreasing.
struct ResultRecord {
    std::string instance_id;
    std::string solver_id;
    int run_index = 0;
    std::optional<double> cost;         // final cost, absent for an empty trajectory
    std::optional<double> gap_percent;  // absent when no incumbent or no BKS
    double pi_score = 10.0;
    double wrap_score = 1.0;
    int num_vehicles = 0;
    double normalized_budget = 0.0;
    std::optional<double> bks_cost;
    std::vector<double> running_costs;
    std::vector<double> running_times;
    std::string machine;  // fingerprint of the executing machine
    std::string set;      // benchmark set id
};

// One JSON record per line; append-safe and lossless (shortest round-trip
// number encoding). Readers and writers reject records whose running_*
// sequences violate the trajectory monotonicity invariants.
std::string write_results(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> read_results(const std::string& text);

// JSON trajectory persistence (base-trajectory cache, debugging dumps).
// write(read(x)) is byte-identical to x's original serialization.
std::string write_trajectory(const Trajectory& trajectory);
Trajectory read_trajectory(const std::string& text);

// Whole-file atomic replace (write temp, rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// Shortest decimal text that parses back to exactly the same double.
std::string format_number(double value);

// Route-set text form shared by the BKS registry and the adapter protocol:
// ;-separated routes, each a comma list of customer indices ("1,2;3,4").
std::string format_routes(const std::vector<std::vector<int>>& routes);
std::vector<std::vector<int>> parse_routes(const std::string& text, const std::string& context);

}  // namespace ra

#endif
