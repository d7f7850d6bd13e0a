// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ra/generator.hpp"
#include "ra/harness.hpp"
#include "ra/machine.hpp"
#include "ra/metrics.hpp"
#include "ra/rng.hpp"
#include "ra/solver.hpp"
#include "ra/vrplib.hpp"

using namespace ra;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("%s  criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!ok) {
        ++failures;
    }
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Trajectory make_traj(double budget, std::vector<std::pair<double, double>> events) {
    Trajectory trajectory;
    trajectory.budget = budget;
    trajectory.normalized = true;
    for (const auto& [t, cost] : events) {
        trajectory.entries.push_back({t, cost, std::nullopt});
    }
    return trajectory;
}

void criterion_1_normalization_anchor() {
    const auto start = Clock::now();
    const double normalized = normalize_budget(240.0, 2714.0, 2000.0);
    const double elapsed = seconds_since(start);
    const bool value_ok = std::abs(normalized - 176.86) <= 0.01;
    const bool time_ok = elapsed < 1e-3;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "normalize_budget(240, 2714, 2000) = %.4f s (target 176.86 +- 0.01), runtime %.2e s", normalized,
                  elapsed);
    report(1, value_ok && time_ok, detail);
}

void criterion_2_round_trip_identity() {
    Rng rng(20240002);
    int violations = 0;
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double budget = 1e-3 + 1e4 * rng.next_double();
        const double score = 50.0 + 30000.0 * rng.next_double();
        const double round_trip = renormalize_time(normalize_budget(budget, score, 2000.0), score, 2000.0);
        const double relative = std::abs(round_trip - budget) / budget;
        worst = std::max(worst, relative);
        if (relative > 1e-9) {
            ++violations;
        }
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "budget->time round trip over 10^4 random (T, s): worst relative error %.2e (limit 1e-9)", worst);
    report(2, violations == 0, detail);
}

void criterion_3_metric_oracle_suite() {
    const auto start = Clock::now();
    Rng rng(20240003);
    oracles::SyntheticOptions options;  // events snapped to the 10^6-cell grid
    int violations = 0;
    double worst = 0.0;
    for (int pair = 0; pair < 200; ++pair) {
        const double budget = 50.0 + 150.0 * rng.next_double();
        const double bks = 100.0;
        const Trajectory cand = oracles::random_snapped_trajectory(rng, budget, bks, options);
        const Trajectory base = oracles::random_snapped_trajectory(rng, budget, bks, options);
        const auto oracle = oracles::fine_grid_integrate(cand, base, bks, options.samples);
        const double pi_err = std::abs(primal_integral(cand, bks) - oracle.pi);
        const double wrap_err = std::abs(wrap(cand, base, bks) - oracle.wrap);
        worst = std::max({worst, pi_err, wrap_err});
        if (pi_err > 1e-5 || wrap_err > 1e-5) {
            ++violations;
        }
    }
    const double elapsed = seconds_since(start);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "PI/WRAP vs fine-grid integrator on 200 pairs: worst |err| %.2e (limit 1e-5), runtime %.1f s (< 10)",
                  worst, elapsed);
    report(3, violations == 0 && elapsed < 10.0, detail);
}

void criterion_4_wrap_closed_cases() {
    // (a) candidate identical to the base, including a BKS touch.
    const Trajectory shared = make_traj(100.0, {{5.0, 110.0}, {20.0, 100.0}});
    const bool identical_ok = wrap(shared, shared, 100.0) == 1.0;

    // (b) candidate jumps to the BKS at its first event t1.
    const Trajectory base_b = make_traj(100.0, {{0.0, 110.0}});
    const Trajectory cand_b = make_traj(100.0, {{30.0, 100.0}});
    const bool first_hit_ok = wrap(cand_b, base_b, 100.0) == 30.0 / 100.0;

    // (c) candidate never beats the base.
    const Trajectory base_c = make_traj(100.0, {{0.0, 110.0}, {50.0, 105.0}});
    const Trajectory cand_c = make_traj(100.0, {{10.0, 120.0}, {60.0, 107.0}});
    const bool ceiling_ok = wrap(cand_c, base_c, 100.0) == 1.0;

    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "WRAP closed cases: identical=1 %s, bks-at-t1 = t1/T %s, never-better=1 %s",
                  identical_ok ? "ok" : "BAD", first_hit_ok ? "ok" : "BAD", ceiling_ok ? "ok" : "BAD");
    report(4, identical_ok && first_hit_ok && ceiling_ok, detail);
}

void criterion_5_pi_closed_cases() {
    const bool zero_ok = primal_integral(make_traj(80.0, {{0.0, 100.0}}), 100.0) == 0.0;
    const bool empty_ok = primal_integral(make_traj(80.0, {}), 100.0) == 10.0;
    const double hand = primal_integral(make_traj(100.0, {{10.0, 110.0}, {50.0, 105.0}}), 100.0);
    const bool hand_ok = std::abs(hand - 7.5) <= 1e-9;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "PI closed cases: bks-at-0 -> 0 %s, empty -> 10 %s, hand integration -> %.12f (7.5 +- 1e-9)",
                  zero_ok ? "ok" : "BAD", empty_ok ? "ok" : "BAD", hand);
    report(5, zero_ok && empty_ok && hand_ok, detail);
}

void criterion_6_aggregation_check() {
    const std::vector<double> hgs_gaps = {0.0058, 0.0258, 0.0007, 0.0013, 0.0045, 0.0016, 0.0034,
                                          0.0051, 0.0002, 0.0005, 0.0092, 0.0005, 0.0005, 0.0094,
                                          0.0000, 0.0053, 0.0001, 0.0008, 0.0019};
    std::vector<SetReport> sets;
    for (std::size_t s = 0; s < hgs_gaps.size(); ++s) {
        SetReport set;
        set.set_id = "set" + std::to_string(s);
        set.solver_id = "hgs";
        set.gap = MetricStats{hgs_gaps[s], 0.0};
        set.num_instances = 1;
        set.num_runs = 3;
        sets.push_back(set);
    }
    const SetReport avg = aggregate_sets(sets);
    const double value = avg.gap ? avg.gap->mean : -1.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail), "AVG of the 19 per-set gaps = %.6f (target 0.0040 +- 0.00005)", value);
    report(6, std::abs(value - 0.0040) <= 0.00005, detail);
}

void criterion_7_solver_correctness() {
    const auto start = Clock::now();
    int optimum_hits = 0;
    int savings_ok = 0;
    const int trials = 50;
    for (int trial = 0; trial < trials; ++trial) {
        GeneratorConfig config;
        config.n = 5 + trial % 4;  // 5..8 customers
        config.seed = 50000 + static_cast<std::uint64_t>(trial);
        config.demand_dist = DemandDist::UniformInt;
        config.demand_lo = 1;
        config.demand_hi = 10;
        config.fixed_capacity = 15;
        const Instance instance = generate(config);

        const double optimum = oracles::brute_force_optimum(instance);
        const Solution constructed = savings_construct(instance);
        if (check_feasibility(instance, constructed).ok && constructed.cost >= optimum - 1e-9) {
            ++savings_ok;
        }
        const Trajectory trajectory = solve_base(instance, 2.0, static_cast<std::uint64_t>(trial));
        if (trajectory.final_cost() <= optimum + 1e-6 && trajectory.final_cost() >= optimum - 1e-9) {
            ++optimum_hits;
        }
    }
    const double elapsed = seconds_since(start);
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "savings feasible & >= optimum on %d/%d, solve_base(2s) hits the optimum on %d/%d (need >= 40), "
                  "runtime %.0f s (< 300)",
                  savings_ok, trials, optimum_hits, trials, elapsed);
    report(7, savings_ok == trials && optimum_hits >= 40 && elapsed < 300.0, detail);
}

void criterion_8_parser_fidelity() {
    int round_trips_ok = 0;
    const int count = 100;
    for (int i = 0; i < count; ++i) {
        GeneratorConfig config;
        config.n = 4 + i % 40;
        config.seed = 80000 + static_cast<std::uint64_t>(i);
        config.coord_dist = i % 3 == 0 ? CoordDist::Uniform : (i % 3 == 1 ? CoordDist::XType : CoordDist::GaussianMixture);
        config.customer_pos = i % 2 == 0 ? CustomerPosition::Random : CustomerPosition::RandomClustered;
        config.demand_dist = i % 4 == 0 ? DemandDist::Gamma : DemandDist::UniformInt;
        config.fixed_capacity = 60.0;
        Instance instance = generate(config);
        if (instance.grid_scale.kind != GridScale::Kind::IntegerGrid) {
            instance = rescale_instance(instance, GridScale::integer_grid(10000));
        }
        const Instance first = parse_vrplib(write_vrplib(instance));
        const Instance second = parse_vrplib(write_vrplib(first));
        const bool equal = first.id == second.id && first.coords == second.coords &&
                           first.demands == second.demands && first.capacity == second.capacity &&
                           first.tags == second.tags && first.grid_scale == second.grid_scale &&
                           first.coords_dist == second.coords_dist && first.demands_dist == second.demands_dist;
        if (equal) {
            ++round_trips_ok;
        }
    }

    const char* minimal =
        "NAME : accept\nTYPE : CVRP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\nCAPACITY : 30\n"
        "NODE_COORD_SECTION\n1 0 0\n2 10 0\n3 0 10\nDEMAND_SECTION\n1 0\n2 7\n3 5\nDEPOT_SECTION\n1\n-1\nEOF\n";
    const Instance toy = parse_vrplib(minimal);
    const bool minimal_ok = toy.id == "accept" && toy.num_customers() == 2 && toy.capacity == 30.0 &&
                            toy.coords[1].x == 10.0 && toy.coords[2].y == 10.0 && toy.demands[1] == 7.0 &&
                            toy.demands[2] == 5.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail), "parse-write-parse identical on %d/%d instances, minimal file fields %s",
                  round_trips_ok, count, minimal_ok ? "ok" : "BAD");
    report(8, round_trips_ok == count && minimal_ok, detail);
}

void criterion_9_adapter_equivalence() {
    const fs::path dir = fs::temp_directory_path() / "ra_acceptance_adapter";
    fs::remove_all(dir);
    fs::create_directories(dir);

    GeneratorConfig config;
    config.n = 25;
    config.seed = 90001;
    config.demand_dist = DemandDist::UniformInt;
    config.demand_lo = 1;
    config.demand_hi = 10;
    config.fixed_capacity = 30;
    Instance instance = rescale_instance(generate(config), GridScale::integer_grid(10000));
    const fs::path file = dir / (instance.id + ".vrp");
    write_file_atomic(file, write_vrplib(instance));
    const Instance parsed = parse_vrplib(read_file(file));

    SaSchedule schedule;
    schedule.max_moves = 150000;
    const Trajectory in_process = solve_base(parsed, 30.0, 7, schedule);

    const std::string cmd = std::string(RA_CLI_PATH) + " solve-base --adapter --max-moves 150000";
    std::vector<std::string> warnings;
    const Trajectory wired = run_adapter(cmd, file, 30.0, 7, parsed, &warnings);

    bool equal = wired.entries.size() == in_process.entries.size();
    for (std::size_t i = 0; equal && i < wired.entries.size(); ++i) {
        equal = wired.entries[i].cost == in_process.entries[i].cost;
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "in-process vs wire protocol: %zu vs %zu incumbents, cost sequences %s", in_process.entries.size(),
                  wired.entries.size(), equal ? "identical" : "DIFFER");
    report(9, equal, detail);
    fs::remove_all(dir);
}

void criterion_10_end_to_end_smoke() {
    const auto start = Clock::now();
    const fs::path dir = fs::temp_directory_path() / "ra_acceptance_smoke";
    fs::remove_all(dir);
    fs::create_directories(dir);

    GeneratorConfig config;
    config.n = 100;
    config.seed = 100001;
    config.demand_dist = DemandDist::UniformInt;
    config.demand_lo = 1;
    config.demand_hi = 10;
    config.fixed_capacity = 50;
    const std::vector<Instance> instances = generate_set_serial(config, 5);

    RunPlan plan;
    for (const auto& instance : instances) {
        const Instance writable = rescale_instance(instance, GridScale::integer_grid(10000));
        const fs::path file = dir / (writable.id + ".vrp");
        write_file_atomic(file, write_vrplib(writable));
        plan.instance_files.push_back(file);
    }
    plan.solver_cmd = std::string(RA_CLI_PATH) + " solve-base --adapter";
    plan.solver_id = kBaseSolverId;
    plan.runs = 3;
    plan.budget.fixed_seconds = 10.0;
    plan.machine.cpu_mark_single = 2000.0;
    plan.machine.mode = MachineMode::CpuSingleThread;
    plan.out_dir = dir / "out";
    plan.set_id = "unif100-smoke";
    plan.seed = 1;
    plan.workers = 2;
    plan.base_cache_dir = dir / "cache";

    const RunOutcome outcome = orchestrate(plan);
    bool wrap_ok = outcome.summaries.size() == 5 && outcome.records.size() == 15;
    for (const auto& summary : outcome.summaries) {
        wrap_ok = wrap_ok && summary.mean_wrap == 1.0;
    }
    for (const auto& record : outcome.records) {
        wrap_ok = wrap_ok && record.wrap_score == 1.0;
    }
    const double elapsed = seconds_since(start);
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "run over 5 Unif100-style instances x 3 runs @ 10 s: %zu records, WRAP = 1.000 %s, runtime %.0f s "
                  "(< 180)",
                  outcome.records.size(), wrap_ok ? "everywhere" : "VIOLATED", elapsed);
    report(10, wrap_ok && elapsed < 180.0, detail);
    fs::remove_all(dir);
}

}  // namespace

int main() {
    criterion_1_normalization_anchor();
    criterion_2_round_trip_identity();
    criterion_3_metric_oracle_suite();
    criterion_4_wrap_closed_cases();
    criterion_5_pi_closed_cases();
    criterion_6_aggregation_check();
    criterion_7_solver_correctness();
    criterion_8_parser_fidelity();
    criterion_9_adapter_equivalence();
    criterion_10_end_to_end_smoke();
    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures;
}
