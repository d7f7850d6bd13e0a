// ra - benchmark harness for CVRP solvers: instance generation, a
// savings+SA base solver, hardware-normalized budgets, and fixed-budget /
// any-time evaluation of adapter-wrapped solvers.

#include <unistd.h>

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "ra/generator.hpp"
#include "ra/harness.hpp"
#include "ra/machine.hpp"
#include "ra/metrics.hpp"
#include "ra/solver.hpp"
#include "ra/vrplib.hpp"

namespace {

namespace fs = std::filesystem;

std::string self_path() {
    char buffer[4096];
    const ssize_t n = readlink("/proc/self/exe", buffer, sizeof(buffer) - 1);
    if (n <= 0) {
        return "ra";
    }
    buffer[n] = '\0';
    return buffer;
}

ra::GeneratorConfig& make_generator_config(CLI::App* cmd, int* count, std::string* out_dir, double* grid_precision) {
    static ra::GeneratorConfig config;  // bound by pointer into CLI11 options
    config = ra::GeneratorConfig{};

    cmd->add_option("--n", config.n, "customers per instance")->capture_default_str();
    cmd->add_option("--seed", config.seed, "seed of the first instance")->capture_default_str();
    cmd->add_option("--count", *count, "number of instances")->capture_default_str();
    cmd->add_option("--out", *out_dir, "output directory")->required();
    std::map<std::string, ra::CoordDist> coord_dists{{"uniform", ra::CoordDist::Uniform},
                                                     {"gm", ra::CoordDist::GaussianMixture},
                                                     {"xtype", ra::CoordDist::XType}};
    cmd->add_option("--coord-dist", config.coord_dist, "uniform|gm|xtype")
        ->transform(CLI::CheckedTransformer(coord_dists, CLI::ignore_case))
        ->capture_default_str();
    std::map<std::string, ra::DemandDist> demand_dists{{"unitary", ra::DemandDist::Unitary},
                                                       {"uniform-int", ra::DemandDist::UniformInt},
                                                       {"gamma", ra::DemandDist::Gamma},
                                                       {"xtype-mix", ra::DemandDist::XTypeMix}};
    cmd->add_option("--demand-dist", config.demand_dist, "unitary|uniform-int|gamma|xtype-mix")
        ->transform(CLI::CheckedTransformer(demand_dists, CLI::ignore_case))
        ->capture_default_str();
    cmd->add_option("--demand-lo", config.demand_lo)->capture_default_str();
    cmd->add_option("--demand-hi", config.demand_hi)->capture_default_str();
    cmd->add_option("--gamma-shape", config.gamma_shape)->capture_default_str();
    cmd->add_option("--gamma-scale", config.gamma_scale)->capture_default_str();
    std::map<std::string, ra::DepotPosition> depot_positions{{"central", ra::DepotPosition::Central},
                                                             {"eccentric", ra::DepotPosition::Eccentric},
                                                             {"random", ra::DepotPosition::Random}};
    cmd->add_option("--depot-pos", config.depot_pos, "central|eccentric|random (x-type)")
        ->transform(CLI::CheckedTransformer(depot_positions, CLI::ignore_case))
        ->capture_default_str();
    std::map<std::string, ra::CustomerPosition> customer_positions{
        {"random", ra::CustomerPosition::Random},
        {"clustered", ra::CustomerPosition::Clustered},
        {"random-clustered", ra::CustomerPosition::RandomClustered}};
    cmd->add_option("--customer-pos", config.customer_pos, "random|clustered|random-clustered (x-type)")
        ->transform(CLI::CheckedTransformer(customer_positions, CLI::ignore_case))
        ->capture_default_str();
    cmd->add_option("--num-modes", config.num_modes, "gaussian modes, 0 = sample 1..7")->capture_default_str();
    cmd->add_option("--mode-std", config.mode_std)->capture_default_str();
    cmd->add_option("--num-clusters", config.num_clusters, "cluster seeds, 0 = sample 3..8")->capture_default_str();
    cmd->add_option("--cluster-decay", config.cluster_decay)->capture_default_str();
    cmd->add_option("--random-fraction", config.random_fraction)->capture_default_str();
    std::map<std::string, ra::CapacityRule> capacity_rules{{"fixed", ra::CapacityRule::Fixed},
                                                           {"avg-route-size", ra::CapacityRule::FromAvgRouteSize}};
    cmd->add_option("--capacity-rule", config.capacity_rule, "fixed|avg-route-size")
        ->transform(CLI::CheckedTransformer(capacity_rules, CLI::ignore_case))
        ->capture_default_str();
    cmd->add_option("--capacity", config.fixed_capacity)->capture_default_str();
    cmd->add_option("--avg-route-size", config.avg_route_size)->capture_default_str();
    cmd->add_option("--grid-precision", *grid_precision, "integer precision for writing unit-square instances")
        ->capture_default_str();
    return config;
}

void add_schedule_options(CLI::App* cmd, ra::SaSchedule* schedule, const std::string& prefix) {
    cmd->add_option("--" + prefix + "init-temp-factor", schedule->initial_temp_factor)->capture_default_str();
    cmd->add_option("--" + prefix + "cooling-rate", schedule->cooling_rate)->capture_default_str();
    cmd->add_option("--" + prefix + "moves-per-temp", schedule->moves_per_temperature,
                    "moves per temperature level, 0 = 100*N")
        ->capture_default_str();
    cmd->add_option("--" + prefix + "max-moves", schedule->max_moves, "deterministic move cutoff, 0 = unlimited")
        ->capture_default_str();
}

ra::BudgetRule parse_budget(const std::string& text) {
    ra::BudgetRule rule;
    if (text == "implicit") {
        rule.implicit = true;
        return rule;
    }
    rule.fixed_seconds = std::stod(text);
    return rule;
}

int cmd_generate(const ra::GeneratorConfig& config, int count, const std::string& out_dir, double grid_precision) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const std::vector<ra::Instance> instances = ra::generate_set(config, count);
    for (const auto& instance : instances) {
        ra::Instance writable = instance;
        if (writable.grid_scale.kind != ra::GridScale::Kind::IntegerGrid) {
            writable = ra::rescale_instance(writable, ra::GridScale::integer_grid(grid_precision));
        }
        const fs::path file = dir / (writable.id + ".vrp");
        ra::write_file_atomic(file, ra::write_vrplib(writable));
        std::cout << file.string() << "\n";
    }
    return 0;
}

int cmd_solve_base(const std::string& instance_file, double time_limit, std::uint64_t seed,
                   const ra::SaSchedule& schedule, bool adapter, const std::string& traj_out) {
    const ra::Instance instance = ra::parse_vrplib(ra::read_file(instance_file));
    const ra::Trajectory trajectory = ra::solve_base(instance, time_limit, seed, schedule);
    if (adapter) {
        for (const auto& entry : trajectory.entries) {
            std::cout << "INCUMBENT " << ra::format_number(entry.t) << " " << ra::format_number(entry.cost);
            if (entry.solution) {
                std::cout << " " << ra::format_routes(entry.solution->routes);
            }
            std::cout << "\n";
        }
        std::cout << "DONE\n";
        std::cout.flush();
        return 0;
    }
    std::cout << "instance " << instance.id << " (N=" << instance.num_customers() << ")\n";
    for (const auto& entry : trajectory.entries) {
        std::cout << "  t=" << ra::format_number(entry.t) << "s cost=" << ra::format_number(entry.cost) << "\n";
    }
    if (!trajectory.empty()) {
        std::cout << "final cost " << ra::format_number(trajectory.final_cost());
        if (instance.bks_cost) {
            std::cout << " gap " << ra::format_number(ra::gap_percent(trajectory.final_cost(), *instance.bks_cost))
                      << "%";
        }
        std::cout << "\n";
    }
    if (!traj_out.empty()) {
        ra::write_file_atomic(traj_out, ra::write_trajectory(trajectory));
    }
    return 0;
}

std::vector<fs::path> collect_instances(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const auto& input : inputs) {
        const fs::path p(input);
        if (fs::is_directory(p)) {
            for (const auto& entry : fs::directory_iterator(p)) {
                if (entry.path().extension() == ".vrp") {
                    files.push_back(entry.path());
                }
            }
        } else {
            files.push_back(p);
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

int cmd_run(ra::RunPlan plan, const std::vector<std::string>& inputs, const std::string& machine_file,
            const std::string& mode, const std::string& budget_text) {
    plan.instance_files = collect_instances(inputs);
    if (plan.solver_id.empty()) {
        if (plan.solver_cmd.empty()) {
            plan.solver_id = ra::kBaseSolverId;
        } else {
            // Name external solvers after their executable unless told otherwise.
            const std::string head = plan.solver_cmd.substr(0, plan.solver_cmd.find(' '));
            plan.solver_id = fs::path(head).filename().string();
        }
    }
    if (!machine_file.empty()) {
        plan.machine = ra::load_machine_spec(machine_file);
    } else {
        plan.machine.cpu_mark_single = 2000.0;  // reference-equivalent machine
        plan.machine.mode = ra::MachineMode::CpuSingleThread;
    }
    if (!mode.empty()) {
        plan.machine.mode = ra::parse_machine_mode(mode);
    }
    plan.budget = parse_budget(budget_text);
    if (plan.solver_cmd.empty()) {
        plan.solver_cmd = self_path() + " solve-base --adapter";
    }

    const ra::RunOutcome outcome = ra::orchestrate(plan);
    for (const auto& warning : outcome.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    for (const auto& skipped : outcome.skipped) {
        std::cerr << "skipped: " << skipped << "\n";
    }
    for (const auto& accepted : outcome.bks_delta.accepted) {
        std::cerr << "bks update: " << accepted.instance_id << " -> " << ra::format_number(accepted.cost) << " ("
                  << accepted.algorithm << ")\n";
    }
    for (const auto& rejected : outcome.bks_delta.rejected) {
        std::cerr << "bks rejected: " << rejected << "\n";
    }
    std::cout << ra::read_file(plan.out_dir / "report.txt");
    return outcome.summaries.empty() ? 1 : 0;
}

int cmd_report(const std::vector<std::string>& result_files, const std::string& out_dir) {
    std::vector<ra::ResultRecord> records;
    for (const auto& file : result_files) {
        const auto batch = ra::read_results(ra::read_file(file));
        records.insert(records.end(), batch.begin(), batch.end());
    }
    const ra::ReportBundle bundle = ra::emit_report(records);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        ra::write_file_atomic(fs::path(out_dir) / "report.txt", bundle.table_text);
        ra::write_file_atomic(fs::path(out_dir) / "curve.csv", bundle.curve_csv);
    }
    std::cout << bundle.table_text;
    return 0;
}

int cmd_bks_show(const std::string& file, const std::string& id) {
    const ra::BksRegistry registry = ra::load_bks_registry(ra::read_file(file));
    for (const auto& [key, record] : registry) {
        if (!id.empty() && key != id) {
            continue;
        }
        std::cout << key << " cost=" << ra::format_number(record.cost) << " algorithm=" << record.algorithm
                  << (record.optimal ? " opt" : " not_opt") << (record.routes.empty() ? "" : " routes=yes") << "\n";
    }
    return 0;
}

int cmd_bks_update(const std::string& file, const std::string& id, double cost, const std::string& algorithm,
                   const std::string& routes_text, const std::string& instance_file) {
    ra::BksRegistry registry;
    if (fs::exists(file)) {
        registry = ra::load_bks_registry(ra::read_file(file));
    }
    ra::Instance instance;
    ra::BksCandidate candidate;
    candidate.instance_id = id;
    candidate.cost = cost;
    candidate.solver_id = algorithm;
    if (!routes_text.empty()) {
        candidate.routes = ra::parse_routes(routes_text, "bks update routes");
    }
    if (!instance_file.empty()) {
        instance = ra::parse_vrplib(ra::read_file(instance_file));
        candidate.instance = &instance;
    }
    const ra::BksDelta delta = ra::update_bks(registry, {candidate});
    for (const auto& rejected : delta.rejected) {
        std::cerr << "rejected: " << rejected << "\n";
    }
    for (const auto& accepted : delta.accepted) {
        std::cout << "updated: " << accepted.instance_id << " -> " << ra::format_number(accepted.cost) << "\n";
    }
    ra::write_file_atomic(file, ra::store_bks_registry(registry));
    return delta.rejected.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"benchmark harness for CVRP solvers"};
    app.require_subcommand(1);
    // `ra --config run.toml generate`: keys live in a [generate] section.
    app.set_config("--config");

    // generate
    auto* generate = app.add_subcommand("generate", "sample instances and write VRPLIB files");
    int gen_count = 1;
    std::string gen_out;
    double grid_precision = 10000.0;
    const ra::GeneratorConfig& gen_config = make_generator_config(generate, &gen_count, &gen_out, &grid_precision);

    // solve-base
    auto* solve = app.add_subcommand("solve-base", "run the savings+SA base solver on one instance");
    std::string solve_instance;
    double solve_budget = 10.0;
    std::uint64_t solve_seed = 1;
    bool adapter = false;
    std::string traj_out;
    ra::SaSchedule solve_schedule;
    solve->add_option("--instance", solve_instance, "VRPLIB instance file")->required();
    solve->add_option("--time-limit", solve_budget, "budget in seconds")->capture_default_str();
    solve->add_option("--seed", solve_seed)->capture_default_str();
    solve->add_flag("--adapter", adapter, "emit the adapter wire protocol on stdout");
    solve->add_option("--trajectory-out", traj_out, "write the trajectory as JSON");
    add_schedule_options(solve, &solve_schedule, "");

    // run
    auto* run = app.add_subcommand("run", "benchmark a solver over an instance set");
    ra::RunPlan plan;
    std::vector<std::string> run_inputs;
    std::string machine_file;
    std::string mode;
    std::string budget_text = "implicit";
    std::string out_dir = "out";
    std::string bks_file;
    run->add_option("--instances", run_inputs, "instance files or directories")->required()->expected(-1);
    run->add_option("--solver-cmd", plan.solver_cmd, "adapter command prefix (default: own base solver)");
    run->add_option("--solver-id", plan.solver_id,
                    "identifier recorded with results (default: base solver id or the executable name)");
    run->add_option("--runs", plan.runs, "runs per instance")->capture_default_str();
    run->add_option("--time-limit", budget_text, "seconds or 'implicit' (2.4*N)")->capture_default_str();
    run->add_option("--machine", machine_file, "machine spec file (PassMark declarations)");
    run->add_option("--mode", mode, "cpu-single|cpu-multi|gpu (overrides the spec file)");
    run->add_option("--base-score", plan.base_score_override, "override the reference base score");
    run->add_option("--out", out_dir, "output directory")->capture_default_str();
    run->add_option("--bks", bks_file, "BKS registry file (read and updated)");
    run->add_option("--set-id", plan.set_id, "benchmark set label")->capture_default_str();
    run->add_option("--seed", plan.seed, "seed of run 0; run k adds k")->capture_default_str();
    run->add_option("--workers", plan.workers, "parallel instance workers")->capture_default_str();
    run->add_option("--base-seed", plan.base_seed, "seed of the cached base run")->capture_default_str();
    add_schedule_options(run, &plan.base_schedule, "base-");

    // report
    auto* report = app.add_subcommand("report", "rebuild report tables from results files");
    std::vector<std::string> report_files;
    std::string report_out;
    report->add_option("--results", report_files, "results.jsonl files")->required()->expected(-1);
    report->add_option("--out", report_out, "output directory");

    // bks
    auto* bks = app.add_subcommand("bks", "inspect or update a BKS registry");
    bks->require_subcommand(1);
    auto* bks_show = bks->add_subcommand("show", "print registry records");
    std::string bks_file_show;
    std::string bks_id;
    bks_show->add_option("--file", bks_file_show)->required();
    bks_show->add_option("--id", bks_id, "only this instance");
    auto* bks_update = bks->add_subcommand("update", "insert or improve one record");
    std::string bks_file_update;
    std::string upd_id;
    std::string upd_algorithm = "manual";
    std::string upd_routes;
    std::string upd_instance;
    double upd_cost = 0.0;
    bks_update->add_option("--file", bks_file_update)->required();
    bks_update->add_option("--id", upd_id)->required();
    bks_update->add_option("--cost", upd_cost)->required();
    bks_update->add_option("--algorithm", upd_algorithm)->capture_default_str();
    bks_update->add_option("--routes", upd_routes, ";-separated comma lists");
    bks_update->add_option("--instance", upd_instance, "instance file for validation");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            return cmd_generate(gen_config, gen_count, gen_out, grid_precision);
        }
        if (solve->parsed()) {
            return cmd_solve_base(solve_instance, solve_budget, solve_seed, solve_schedule, adapter, traj_out);
        }
        if (run->parsed()) {
            plan.out_dir = out_dir;
            plan.bks_path = bks_file;
            return cmd_run(std::move(plan), run_inputs, machine_file, mode, budget_text);
        }
        if (report->parsed()) {
            return cmd_report(report_files, report_out);
        }
        if (bks_show->parsed()) {
            return cmd_bks_show(bks_file_show, bks_id);
        }
        if (bks_update->parsed()) {
            return cmd_bks_update(bks_file_update, upd_id, upd_cost, upd_algorithm, upd_routes, upd_instance);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
