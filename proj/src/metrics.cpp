#include "ra/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ra {

namespace {

constexpr double kPiCap = 10.0;

double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    for (const double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

double sample_stddev(const std::vector<double>& values) {
    if (values.size() < 2) {
        return 0.0;
    }
    const double mean = mean_of(values);
    double ss = 0.0;
    for (const double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace

double gap_percent(double cost, double bks) {
    if (bks <= 0.0) {
        throw std::invalid_argument("gap: bks must be positive");
    }
    return 100.0 * (cost - bks) / bks;
}

std::optional<double> gap_at_budget(const Trajectory& trajectory, double tau, double bks) {
    if (tau <= 0.0 || tau > trajectory.budget) {
        throw std::invalid_argument("gap_at_budget: tau outside (0, budget]");
    }
    // Costs decrease over time, so the best incumbent by tau is the last one.
    const TrajectoryEntry* best = nullptr;
    for (const auto& entry : trajectory.entries) {
        if (entry.t > tau) {
            break;
        }
        best = &entry;
    }
    if (best == nullptr) {
        return std::nullopt;
    }
    return gap_percent(best->cost, bks);
}

double primal_gap(double cost, double opt_cost) {
    if (cost == 0.0 && opt_cost == 0.0) {
        return 0.0;
    }
    if (cost * opt_cost < 0.0) {
        return 1.0;
    }
    return std::abs(opt_cost - cost) / std::max(std::abs(opt_cost), std::abs(cost));
}

double primal_integral(const Trajectory& trajectory, double bks) {
    if (bks <= 0.0) {
        throw std::invalid_argument("primal_integral: bks must be positive");
    }
    if (trajectory.budget <= 0.0) {
        throw std::invalid_argument("primal_integral: budget must be positive");
    }
    double integral = 0.0;
    double prev_t = 0.0;
    double g = kPiCap;  // no incumbent yet
    for (const auto& entry : trajectory.entries) {
        integral += g * (entry.t - prev_t);
        prev_t = entry.t;
        g = std::clamp(gap_percent(entry.cost, bks), 0.0, kPiCap);
    }
    integral += g * (trajectory.budget - prev_t);
    return integral / trajectory.budget;
}

SyncedPair synchronize(const Trajectory& base, const Trajectory& cand, double bks) {
    if (base.budget != cand.budget) {
        throw std::invalid_argument("synchronize: trajectories have mismatched budgets");
    }
    SyncedPair pair;
    pair.bks = bks;
    pair.budget = base.budget;

    pair.grid.push_back(0.0);
    for (const auto& e : base.entries) {
        pair.grid.push_back(e.t);
    }
    for (const auto& e : cand.entries) {
        pair.grid.push_back(e.t);
    }
    pair.grid.push_back(pair.budget);
    std::sort(pair.grid.begin(), pair.grid.end());
    pair.grid.erase(std::unique(pair.grid.begin(), pair.grid.end()), pair.grid.end());

    auto fill = [&](const Trajectory& traj, std::vector<std::optional<double>>& out) {
        out.resize(pair.grid.size());
        std::size_t next = 0;
        std::optional<double> best;
        for (std::size_t i = 0; i < pair.grid.size(); ++i) {
            while (next < traj.entries.size() && traj.entries[next].t <= pair.grid[i]) {
                best = traj.entries[next].cost;
                ++next;
            }
            out[i] = best;
        }
    };
    fill(base, pair.base_cost);
    fill(cand, pair.cand_cost);
    return pair;
}

double rpi(std::optional<double> cand_cost, std::optional<double> base_cost, double bks) {
    if (!cand_cost || !base_cost) {
        return 1.0;  // no incumbent solution so far
    }
    if (*base_cost < bks - 1e-9 * std::max(1.0, std::abs(bks))) {
        throw std::invalid_argument("rpi: base cost below BKS; the registry is stale and needs an update");
    }
    // A candidate matching the base scores 1: the metric only rewards strict
    // improvement over the base trajectory.
    if (*cand_cost >= *base_cost) {
        return 1.0;
    }
    const double denom = *base_cost - bks;
    if (denom <= 0.0) {
        return *cand_cost <= bks ? 0.0 : 1.0;
    }
    return std::clamp((*cand_cost - bks) / denom, 0.0, 1.0);
}

double wrap(const SyncedPair& pair) {
    if (pair.budget <= 0.0) {
        throw std::invalid_argument("wrap: budget must be positive");
    }
    double weighted = 0.0;
    for (std::size_t i = 1; i < pair.grid.size(); ++i) {
        weighted += rpi(pair.cand_cost[i - 1], pair.base_cost[i - 1], pair.bks) * (pair.grid[i] - pair.grid[i - 1]);
    }
    return weighted / pair.budget;
}

double wrap(const Trajectory& cand, const Trajectory& base, double bks) {
    return wrap(synchronize(base, cand, bks));
}

SetReport aggregate(const std::string& set_id, const std::string& solver_id, const std::vector<RunMetrics>& runs) {
    if (runs.empty()) {
        throw std::invalid_argument("aggregate: empty run group");
    }
    SetReport report;
    report.set_id = set_id;
    report.solver_id = solver_id;

    // Per-instance means over runs, then an unweighted mean over instances.
    struct PerInstance {
        std::vector<double> gaps;
        std::vector<double> pis;
        std::vector<double> wraps;
        std::array<std::vector<double>, kCurveFractions.size()> curves;
    };
    std::map<std::string, PerInstance> instances;
    std::map<int, std::vector<const RunMetrics*>> by_run;
    for (const auto& run : runs) {
        auto& slot = instances[run.instance_id];
        if (run.gap_percent) {
            slot.gaps.push_back(*run.gap_percent);
        }
        slot.pis.push_back(run.pi);
        slot.wraps.push_back(run.wrap);
        for (std::size_t f = 0; f < kCurveFractions.size(); ++f) {
            if (run.curve[f]) {
                slot.curves[f].push_back(*run.curve[f]);
            }
        }
        by_run[run.run_index].push_back(&run);
    }

    std::vector<double> gap_means;
    std::vector<double> pi_means;
    std::vector<double> wrap_means;
    std::array<std::vector<double>, kCurveFractions.size()> curve_means;
    for (const auto& [id, slot] : instances) {
        if (!slot.gaps.empty()) {
            gap_means.push_back(mean_of(slot.gaps));
        }
        pi_means.push_back(mean_of(slot.pis));
        wrap_means.push_back(mean_of(slot.wraps));
        for (std::size_t f = 0; f < kCurveFractions.size(); ++f) {
            if (!slot.curves[f].empty()) {
                curve_means[f].push_back(mean_of(slot.curves[f]));
            }
        }
    }
    report.num_instances = static_cast<int>(instances.size());
    report.num_runs = static_cast<int>(by_run.size());
    report.pi.mean = mean_of(pi_means);
    report.wrap.mean = mean_of(wrap_means);
    if (!gap_means.empty()) {
        report.gap = MetricStats{mean_of(gap_means), 0.0};
    }
    for (std::size_t f = 0; f < kCurveFractions.size(); ++f) {
        if (!curve_means[f].empty()) {
            report.curve[f] = mean_of(curve_means[f]);
        }
    }

    // Deviation over runs: set-level mean per run index, sample stddev across runs.
    std::vector<double> run_gap;
    std::vector<double> run_pi;
    std::vector<double> run_wrap;
    for (const auto& [index, members] : by_run) {
        std::vector<double> gaps;
        std::vector<double> pis;
        std::vector<double> wraps;
        for (const RunMetrics* run : members) {
            if (run->gap_percent) {
                gaps.push_back(*run->gap_percent);
            }
            pis.push_back(run->pi);
            wraps.push_back(run->wrap);
        }
        if (!gaps.empty()) {
            run_gap.push_back(mean_of(gaps));
        }
        run_pi.push_back(mean_of(pis));
        run_wrap.push_back(mean_of(wraps));
    }
    if (report.gap) {
        report.gap->stddev = sample_stddev(run_gap);
    }
    report.pi.stddev = sample_stddev(run_pi);
    report.wrap.stddev = sample_stddev(run_wrap);
    return report;
}

SetReport aggregate_sets(const std::vector<SetReport>& sets) {
    if (sets.empty()) {
        throw std::invalid_argument("aggregate_sets: empty set group");
    }
    SetReport avg;
    avg.set_id = "AVG";
    avg.solver_id = sets.front().solver_id;

    std::vector<double> gap_means;
    std::vector<double> gap_devs;
    std::vector<double> pi_means;
    std::vector<double> pi_devs;
    std::vector<double> wrap_means;
    std::vector<double> wrap_devs;
    std::array<std::vector<double>, kCurveFractions.size()> curves;
    for (const auto& set : sets) {
        if (set.gap) {
            gap_means.push_back(set.gap->mean);
            gap_devs.push_back(set.gap->stddev);
        }
        pi_means.push_back(set.pi.mean);
        pi_devs.push_back(set.pi.stddev);
        wrap_means.push_back(set.wrap.mean);
        wrap_devs.push_back(set.wrap.stddev);
        for (std::size_t f = 0; f < kCurveFractions.size(); ++f) {
            if (set.curve[f]) {
                curves[f].push_back(*set.curve[f]);
            }
        }
        avg.num_instances += set.num_instances;
        avg.num_runs = std::max(avg.num_runs, set.num_runs);
    }
    if (!gap_means.empty()) {
        avg.gap = MetricStats{mean_of(gap_means), mean_of(gap_devs)};
    }
    avg.pi = MetricStats{mean_of(pi_means), mean_of(pi_devs)};
    avg.wrap = MetricStats{mean_of(wrap_means), mean_of(wrap_devs)};
    for (std::size_t f = 0; f < kCurveFractions.size(); ++f) {
        if (!curves[f].empty()) {
            avg.curve[f] = mean_of(curves[f]);
        }
    }
    return avg;
}

EvalScores evaluate_one(const EvalTask& task) {
    EvalScores scores;
    const Trajectory& cand = *task.cand;
    scores.pi = primal_integral(cand, task.bks);
    scores.wrap = wrap(cand, *task.base, task.bks);
    if (!cand.empty()) {
        scores.gap = gap_percent(cand.final_cost(), task.bks);
    }
    for (std::size_t f = 0; f < kCurveFractions.size(); ++f) {
        scores.curve[f] = gap_at_budget(cand, kCurveFractions[f] * cand.budget, task.bks);
    }
    return scores;
}

std::vector<EvalScores> evaluate_batch_serial(const std::vector<EvalTask>& tasks) {
    std::vector<EvalScores> scores(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        scores[i] = evaluate_one(tasks[i]);
    }
    return scores;
}

std::vector<EvalScores> evaluate_batch(const std::vector<EvalTask>& tasks) {
    std::vector<EvalScores> scores(tasks.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        try {
            scores[i] = evaluate_one(tasks[i]);
        } catch (...) {
#pragma omp critical
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return scores;
}

}  // namespace ra
