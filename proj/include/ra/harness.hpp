#ifndef RA_HARNESS_HPP
#define RA_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ra/machine.hpp"
#include "ra/metrics.hpp"
#include "ra/solver.hpp"
#include "ra/vrplib.hpp"

namespace ra {

struct protocol_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-instance budget before hardware normalization: a fixed number of
// seconds, or the implicit size rule 2.4 * N.
struct BudgetRule {
    bool implicit = false;
    double fixed_seconds = 0.0;

    double seconds_for(int num_customers) const {
        return implicit ? 2.4 * num_customers : fixed_seconds;
    }
};

struct RunPlan {
    std::vector<std::filesystem::path> instance_files;
    std::string solver_cmd;  // adapter command prefix; --instance/--time-limit/--seed get appended
    std::string solver_id;
    int runs = 3;
    BudgetRule budget;
    MachineSpec machine;
    std::optional<double> base_score_override;
    std::filesystem::path out_dir;
    std::filesystem::path bks_path;  // optional registry file
    std::string set_id = "default";
    std::uint64_t seed = 1;  // run k uses seed + k
    int workers = 1;
    SaSchedule base_schedule;
    std::uint64_t base_seed = 20240001;
    std::filesystem::path base_cache_dir;  // empty = $RA_BASE_CACHE or <out>/base_cache
};

// One parsed line of the adapter wire protocol.
struct AdapterEvent {
    enum class Kind { Incumbent, Done, Error };
    Kind kind = Kind::Error;
    double elapsed = 0.0;  // solver-reported seconds
    double cost = 0.0;
    std::optional<std::vector<std::vector<int>>> routes;
    double wall_time = 0.0;  // harness clock at receipt
};

// Parses `INCUMBENT <elapsed> <cost> [routes]` / `DONE`. Throws
// protocol_error, quoting the offending line.
AdapterEvent parse_adapter_line(const std::string& line);

// Runs `<solver_cmd> --instance <path> --time-limit <sec> --seed <seed>` in
// its own process group, parses the incumbent stream, and terminates the
// child once the wall clock exceeds budget + 1 s grace. Non-improving,
// out-of-budget, infeasible, or cost-mismatched incumbents are dropped with a
// warning; a nonzero exit before any incumbent yields an empty trajectory.
Trajectory run_adapter(const std::string& solver_cmd, const std::filesystem::path& instance_file,
                       double normalized_budget, std::uint64_t seed, const Instance& instance,
                       std::vector<std::string>* warnings = nullptr);
Trajectory run_adapter(const std::string& solver_cmd, const std::filesystem::path& instance_file,
                       double normalized_budget, std::uint64_t seed, std::vector<std::string>* warnings = nullptr);

// A validated candidate for a best-known-solution update.
struct BksCandidate {
    std::string instance_id;
    double cost = 0.0;
    std::vector<std::vector<int>> routes;  // empty claims are rejected
    std::string solver_id;
    const Instance* instance = nullptr;
};

struct BksDelta {
    std::vector<BksRecord> accepted;
    std::vector<std::string> rejected;  // human-readable reasons
};

// Applies improvements below stored cost - 1e-6; never downgrades a record
// flagged optimal; claims without routes are rejected and logged.
BksDelta update_bks(BksRegistry& registry, const std::vector<BksCandidate>& candidates);

struct InstanceSummary {
    std::string instance_id;
    std::optional<double> mean_gap;
    double mean_pi = 10.0;
    double mean_wrap = 1.0;
    double bks_used = 0.0;
    double normalized_budget = 0.0;  // reference seconds
};

struct RunOutcome {
    std::vector<ResultRecord> records;  // runs * instances, in plan order
    std::vector<InstanceSummary> summaries;
    SetReport report;
    BksDelta bks_delta;
    std::vector<std::string> skipped;   // "<instance>: <reason>"
    std::vector<std::string> warnings;
};

// Full protocol: per instance, normalize the budget, obtain the cached base
// trajectory, run the candidate `runs` times with distinct seeds, renormalize
// times, score every run, and aggregate. When the candidate is the base
// solver itself, each run is scored against its own trajectory. Results,
// report and registry updates are written under plan.out_dir.
RunOutcome orchestrate(const RunPlan& plan);

struct ReportBundle {
    std::string table_text;
    std::string curve_csv;
};

// Set-level tables (Gap, PI, WRAP as mean +- std), AVG row across sets, and
// the gap-vs-budget-fraction curve data. Deterministic bytes for equal input.
ReportBundle emit_report(const std::vector<ResultRecord>& records);

}  // namespace ra

#endif
