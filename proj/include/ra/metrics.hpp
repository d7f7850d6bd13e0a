#ifndef RA_METRICS_HPP
#define RA_METRICS_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ra/trajectory.hpp"

namespace ra {

// Budget fractions at which gap-vs-budget curves are sampled.
inline constexpr std::array<double, 7> kCurveFractions = {0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0};

// Relative percentage gap to the best known solution; negative means a new
// best was found. Throws when bks is not positive.
double gap_percent(double cost, double bks);

// Gap of the best incumbent found up to time tau, or nullopt when the
// trajectory has no incumbent by then. Throws when tau is outside
// (0, trajectory.budget].
std::optional<double> gap_at_budget(const Trajectory& trajectory, double tau, double bks);

// Bounded [0,1] primal gap: 0 when both costs are 0, 1 on opposite signs,
// |z_opt - z| / max(|z_opt|, |z|) otherwise.
double primal_gap(double cost, double opt_cost);

// Time-average of the capped percentage gap of the best-so-far step function:
// 10 before the first incumbent, min(10, gap) afterwards. Empty trajectories
// score 10.
double primal_integral(const Trajectory& trajectory, double bks);

// Candidate and base best-so-far step functions on the merged event grid.
// Values are absent before a solver's first incumbent.
struct SyncedPair {
    std::vector<double> grid;  // strictly increasing, first 0, last = budget
    std::vector<std::optional<double>> base_cost;
    std::vector<std::optional<double>> cand_cost;
    double bks = 0.0;
    double budget = 0.0;
};

// Merges the two event streams onto one grid. Throws on mismatched budgets.
SyncedPair synchronize(const Trajectory& base, const Trajectory& cand, double bks);

// Relative performance improvement at one point in time. 1 while either
// solver has no incumbent or the candidate is not better than the base;
// (min(z, z_base) - bks) / (z_base - bks) otherwise, clamped to [0,1].
// Throws when the base cost lies below the BKS (stale registry).
double rpi(std::optional<double> cand_cost, std::optional<double> base_cost, double bks);

// Time-average of RPI over [0, budget] (left-endpoint step integration over
// the merged grid, including the segment after the last event).
double wrap(const SyncedPair& pair);
double wrap(const Trajectory& cand, const Trajectory& base, double bks);

// Scores of one evaluation run, as consumed by aggregation and reporting.
struct RunMetrics {
    std::string instance_id;
    int run_index = 0;
    std::optional<double> gap_percent;
    double pi = 10.0;
    double wrap = 1.0;
    std::array<std::optional<double>, kCurveFractions.size()> curve;
};

struct MetricStats {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation over runs (n-1)
};

// Set-level aggregate: per-instance mean over runs, then unweighted mean over
// instances; the deviation is taken over the per-run set means.
struct SetReport {
    std::string set_id;
    std::string solver_id;
    std::optional<MetricStats> gap;
    MetricStats pi;
    MetricStats wrap;
    std::array<std::optional<double>, kCurveFractions.size()> curve;
    int num_instances = 0;
    int num_runs = 0;
};

SetReport aggregate(const std::string& set_id, const std::string& solver_id, const std::vector<RunMetrics>& runs);

// Unweighted mean of per-set means (the AVG row). Deviations are averaged.
SetReport aggregate_sets(const std::vector<SetReport>& sets);

// One metric evaluation job: candidate vs base under a shared BKS. All inputs
// must be on the same (reference) time scale with equal budgets.
struct EvalTask {
    const Trajectory* cand = nullptr;
    const Trajectory* base = nullptr;
    double bks = 0.0;
};

struct EvalScores {
    std::optional<double> gap;
    double pi = 10.0;
    double wrap = 1.0;
    std::array<std::optional<double>, kCurveFractions.size()> curve;
};

EvalScores evaluate_one(const EvalTask& task);

// Batch evaluation across runs and instances; the parallel variant fans tasks
// out over OpenMP threads and produces output identical to the serial one.
std::vector<EvalScores> evaluate_batch(const std::vector<EvalTask>& tasks);
std::vector<EvalScores> evaluate_batch_serial(const std::vector<EvalTask>& tasks);

}  // namespace ra

#endif
