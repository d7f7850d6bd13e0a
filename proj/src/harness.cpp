#include "ra/harness.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <sstream>

namespace ra {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fixed4(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4f", v);
    return buffer;
}

struct ChildProcess {
    pid_t pid = -1;
    int out_fd = -1;

    ~ChildProcess() {
        if (out_fd >= 0) {
            close(out_fd);
        }
    }
};

ChildProcess spawn(const std::string& command) {
    int fds[2];
    if (pipe(fds) != 0) {
        throw std::runtime_error("run_adapter: pipe failed");
    }
    const pid_t pid = fork();
    if (pid < 0) {
        close(fds[0]);
        close(fds[1]);
        throw std::runtime_error("run_adapter: fork failed");
    }
    if (pid == 0) {
        setpgid(0, 0);  // own process group so the whole command line can be killed
        dup2(fds[1], STDOUT_FILENO);
        close(fds[0]);
        close(fds[1]);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(fds[1]);
    fcntl(fds[0], F_SETFL, O_NONBLOCK);
    ChildProcess child;
    child.pid = pid;
    child.out_fd = fds[0];
    return child;
}

// Waits briefly for exit, escalating SIGTERM -> SIGKILL on the process group.
int reap(ChildProcess& child, bool force) {
    int status = 0;
    for (int attempt = 0; attempt < 100; ++attempt) {
        const pid_t r = waitpid(child.pid, &status, WNOHANG);
        if (r == child.pid) {
            if (WIFEXITED(status)) {
                return WEXITSTATUS(status);
            }
            if (WIFSIGNALED(status)) {
                return 128 + WTERMSIG(status);
            }
            return -1;
        }
        if (force) {
            kill(-child.pid, attempt < 20 ? SIGTERM : SIGKILL);
        }
        usleep(10000);
    }
    kill(-child.pid, SIGKILL);
    waitpid(child.pid, &status, 0);
    return 137;
}

void warn(std::vector<std::string>* warnings, std::string message) {
    if (warnings != nullptr) {
        warnings->push_back(std::move(message));
    }
}

}  // namespace

AdapterEvent parse_adapter_line(const std::string& line) {
    std::istringstream stream(line);
    std::string keyword;
    stream >> keyword;
    if (keyword == "DONE") {
        std::string rest;
        if (stream >> rest) {
            throw protocol_error("adapter protocol: trailing tokens after DONE in '" + line + "'");
        }
        AdapterEvent event;
        event.kind = AdapterEvent::Kind::Done;
        return event;
    }
    if (keyword != "INCUMBENT") {
        throw protocol_error("adapter protocol: unrecognized line '" + line + "'");
    }
    AdapterEvent event;
    event.kind = AdapterEvent::Kind::Incumbent;
    std::string elapsed_text;
    std::string cost_text;
    if (!(stream >> elapsed_text >> cost_text)) {
        throw protocol_error("adapter protocol: INCUMBENT needs '<elapsed> <cost>' in '" + line + "'");
    }
    try {
        std::size_t used = 0;
        event.elapsed = std::stod(elapsed_text, &used);
        if (used != elapsed_text.size()) {
            throw std::invalid_argument(elapsed_text);
        }
        event.cost = std::stod(cost_text, &used);
        if (used != cost_text.size()) {
            throw std::invalid_argument(cost_text);
        }
    } catch (const std::exception&) {
        throw protocol_error("adapter protocol: bad number in '" + line + "'");
    }
    if (event.elapsed < 0.0) {
        throw protocol_error("adapter protocol: negative elapsed in '" + line + "'");
    }
    std::string routes_text;
    if (stream >> routes_text) {
        std::string rest;
        if (stream >> rest) {
            throw protocol_error("adapter protocol: trailing tokens in '" + line + "'");
        }
        try {
            event.routes = parse_routes(routes_text, "adapter routes");
        } catch (const std::exception& e) {
            throw protocol_error(std::string("adapter protocol: ") + e.what() + " in '" + line + "'");
        }
    }
    return event;
}

Trajectory run_adapter(const std::string& solver_cmd, const std::filesystem::path& instance_file,
                       double normalized_budget, std::uint64_t seed, std::vector<std::string>* warnings) {
    const Instance instance = parse_vrplib(read_file(instance_file));
    return run_adapter(solver_cmd, instance_file, normalized_budget, seed, instance, warnings);
}

Trajectory run_adapter(const std::string& solver_cmd, const std::filesystem::path& instance_file,
                       double normalized_budget, std::uint64_t seed, const Instance& instance,
                       std::vector<std::string>* warnings) {
    if (normalized_budget <= 0.0) {
        throw std::invalid_argument("run_adapter: budget must be positive");
    }
    const std::string command = solver_cmd + " --instance \"" + instance_file.string() + "\" --time-limit " +
                                format_number(normalized_budget) + " --seed " + std::to_string(seed);
    ChildProcess child = spawn(command);
    const auto started = Clock::now();
    const double deadline = normalized_budget + 1.0;  // grace before forced termination

    Trajectory trajectory;
    trajectory.budget = normalized_budget;
    trajectory.normalized = false;

    std::string buffer;
    bool done_seen = false;
    bool clock_warned = false;
    bool killed = false;

    auto handle_line = [&](const std::string& line) {
        if (line.empty()) {
            return;
        }
        AdapterEvent event = parse_adapter_line(line);
        event.wall_time = seconds_since(started);
        if (event.kind == AdapterEvent::Kind::Done) {
            done_seen = true;
            return;
        }
        // Output may be buffered, so elapsed < wall is normal; elapsed running
        // ahead of the harness wall clock is not.
        if (!clock_warned && event.elapsed > event.wall_time * 1.05 + 0.05) {
            warn(warnings, instance.id + ": solver-reported elapsed " + format_number(event.elapsed) +
                               " diverges >5% from harness wall time " + format_number(event.wall_time));
            clock_warned = true;
        }
        if (event.elapsed > normalized_budget) {
            warn(warnings, instance.id + ": incumbent past the budget discarded (t=" + format_number(event.elapsed) + ")");
            return;
        }
        if (!trajectory.entries.empty()) {
            if (event.cost >= trajectory.entries.back().cost) {
                warn(warnings, instance.id + ": non-improving incumbent rejected (cost " + format_number(event.cost) + ")");
                return;
            }
            if (event.elapsed < trajectory.entries.back().t) {
                warn(warnings, instance.id + ": incumbent with decreasing elapsed rejected");
                return;
            }
        }
        TrajectoryEntry entry;
        entry.t = trajectory.entries.empty()
                      ? event.elapsed
                      : std::max(event.elapsed, std::nextafter(trajectory.entries.back().t, normalized_budget));
        if (!trajectory.entries.empty() && entry.t <= trajectory.entries.back().t) {
            warn(warnings, instance.id + ": incumbent at the saturated budget boundary dropped");
            return;
        }
        entry.cost = event.cost;
        if (event.routes) {
            Solution solution = make_solution(instance, std::move(*event.routes));
            if (!check_feasibility(instance, solution).ok) {
                warn(warnings, instance.id + ": infeasible incumbent dropped (cost " + format_number(event.cost) + ")");
                return;
            }
            if (std::abs(solution.cost - event.cost) > 1e-6 * std::max(1.0, std::abs(event.cost))) {
                warn(warnings, instance.id + ": incumbent cost " + format_number(event.cost) +
                                   " disagrees with its routes (" + format_number(solution.cost) + "); dropped");
                return;
            }
            entry.solution = std::move(solution);
        }
        trajectory.entries.push_back(std::move(entry));
    };

    while (true) {
        const double remaining = deadline - seconds_since(started);
        if (remaining <= 0.0) {
            killed = true;
            break;
        }
        pollfd pfd{child.out_fd, POLLIN, 0};
        const int timeout_ms = static_cast<int>(std::min(remaining * 1000.0, 200.0)) + 1;
        const int ready = poll(&pfd, 1, timeout_ms);
        if (ready <= 0) {
            continue;
        }
        char chunk[4096];
        const ssize_t n = read(child.out_fd, chunk, sizeof(chunk));
        if (n == 0) {
            break;  // child closed stdout
        }
        if (n < 0) {
            if (errno == EAGAIN || errno == EINTR) {
                continue;
            }
            break;
        }
        buffer.append(chunk, static_cast<std::size_t>(n));
        std::size_t newline;
        while ((newline = buffer.find('\n')) != std::string::npos) {
            std::string line = buffer.substr(0, newline);
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            buffer.erase(0, newline + 1);
            try {
                handle_line(line);
            } catch (...) {
                reap(child, true);
                throw;
            }
        }
    }
    if (!buffer.empty() && !killed) {
        try {
            handle_line(buffer);
        } catch (...) {
            reap(child, true);
            throw;
        }
    }

    const int exit_code = reap(child, killed);
    if (killed) {
        warn(warnings, instance.id + ": solver terminated at budget + grace");
    } else if (exit_code != 0 && trajectory.entries.empty()) {
        warn(warnings, instance.id + ": solver exited with code " + std::to_string(exit_code) +
                           " before any incumbent; scoring an empty trajectory");
    } else if (exit_code != 0) {
        warn(warnings, instance.id + ": solver exited with code " + std::to_string(exit_code));
    } else if (!done_seen) {
        warn(warnings, instance.id + ": solver exited without DONE");
    }
    trajectory.produced_by = "adapter";
    validate_trajectory(trajectory);
    return trajectory;
}

BksDelta update_bks(BksRegistry& registry, const std::vector<BksCandidate>& candidates) {
    BksDelta delta;

    // Keep only the best claim per instance.
    std::map<std::string, const BksCandidate*> best;
    for (const auto& candidate : candidates) {
        auto [it, inserted] = best.try_emplace(candidate.instance_id, &candidate);
        if (!inserted && candidate.cost < it->second->cost) {
            it->second = &candidate;
        }
    }

    for (const auto& [id, candidate] : best) {
        const auto stored = registry.find(id);
        const bool improves = stored == registry.end() || candidate->cost < stored->second.cost - 1e-6;
        if (!improves) {
            continue;  // equal or worse: no change
        }
        if (candidate->routes.empty()) {
            delta.rejected.push_back(id + ": improvement claim without routes rejected");
            continue;
        }
        if (stored != registry.end() && stored->second.optimal) {
            delta.rejected.push_back(id + ": cost below an optimal-flagged record; claim is feasibility-suspect");
            continue;
        }
        BksRecord record;
        record.instance_id = id;
        record.cost = candidate->cost;
        record.routes = candidate->routes;
        record.algorithm = candidate->solver_id;
        record.optimal = false;
        if (candidate->instance != nullptr) {
            try {
                validate_bks_record(record, *candidate->instance);
            } catch (const std::exception& e) {
                delta.rejected.push_back(id + ": " + e.what());
                continue;
            }
        }
        registry[id] = record;
        delta.accepted.push_back(std::move(record));
    }
    return delta;
}

namespace {

// Scores of all runs of one instance plus the data needed afterwards.
struct InstanceSlot {
    bool skipped = false;
    std::string skip_reason;
    Instance instance;
    std::vector<ResultRecord> records;
    std::vector<RunMetrics> metrics;
    InstanceSummary summary;
    std::optional<BksCandidate> proposal;
    std::vector<std::string> warnings;
};

// Cost of the latest incumbent that carries a validated route payload.
std::optional<std::pair<double, const Solution*>> best_validated(const Trajectory& trajectory) {
    for (auto it = trajectory.entries.rbegin(); it != trajectory.entries.rend(); ++it) {
        if (it->solution) {
            return std::make_pair(it->cost, &*it->solution);
        }
    }
    return std::nullopt;
}

void process_instance(const RunPlan& plan, const std::filesystem::path& file, double score, double base_score,
                      const std::string& fingerprint, const BksRegistry& registry,
                      const std::filesystem::path& cache_dir, bool self_compare, InstanceSlot& slot) {
    slot.instance = parse_vrplib(read_file(file));
    const Instance& instance = slot.instance;

    const double reference_budget = plan.budget.seconds_for(instance.num_customers());
    if (reference_budget <= 0.0) {
        throw std::invalid_argument("budget must be positive after the budget rule");
    }
    const double local_budget = normalize_budget(reference_budget, score, base_score);

    // Base trajectory, reused across runs; skipped when the candidate is the
    // base solver itself (each run then scores against its own trajectory).
    Trajectory base_reference;
    if (!self_compare) {
        Trajectory base_local =
            solve_base_cached(instance, local_budget, plan.base_seed, plan.base_schedule, cache_dir);
        base_reference = renormalize_trajectory(std::move(base_local), score, base_score);
        base_reference.produced_by = kBaseSolverId;
    }

    std::vector<Trajectory> runs(static_cast<std::size_t>(plan.runs));
    for (int k = 0; k < plan.runs; ++k) {
        try {
            Trajectory local =
                run_adapter(plan.solver_cmd, file, local_budget, plan.seed + static_cast<std::uint64_t>(k),
                            instance, &slot.warnings);
            runs[static_cast<std::size_t>(k)] = renormalize_trajectory(std::move(local), score, base_score);
        } catch (const std::exception& e) {
            slot.warnings.push_back(instance.id + " run " + std::to_string(k) + ": " + e.what() +
                                    "; scoring an empty trajectory");
            Trajectory empty;
            // Same round-tripped budget as the renormalized runs, so the
            // synchronization budget equality holds bit-for-bit.
            empty.budget = renormalize_time(local_budget, score, base_score);
            empty.normalized = true;
            runs[static_cast<std::size_t>(k)] = std::move(empty);
        }
        runs[static_cast<std::size_t>(k)].produced_by = plan.solver_id;
    }

    // Effective BKS for this batch: the registry/instance value or anything
    // validated that beats it, so RPI denominators stay non-negative.
    std::optional<double> bks;
    auto consider = [&bks](std::optional<double> value) {
        if (value && (!bks || *value < *bks)) {
            bks = value;
        }
    };
    if (const auto it = registry.find(instance.id); it != registry.end()) {
        consider(it->second.cost);
    }
    consider(instance.bks_cost);
    if (!self_compare && !base_reference.empty()) {
        consider(base_reference.final_cost());
    }
    const Solution* best_routes = nullptr;
    double best_routes_cost = 0.0;
    std::string best_routes_source;
    auto consider_routes = [&](const Trajectory& trajectory, const std::string& source) {
        if (const auto validated = best_validated(trajectory)) {
            consider(validated->first);
            if (best_routes == nullptr || validated->first < best_routes_cost) {
                best_routes_cost = validated->first;
                best_routes = validated->second;
                best_routes_source = source;
            }
        }
    };
    for (const auto& run : runs) {
        consider_routes(run, plan.solver_id);
    }
    if (!self_compare && !base_reference.empty()) {
        consider_routes(base_reference, kBaseSolverId);
    }
    if (!bks) {
        throw std::runtime_error("no BKS available and no base run possible");
    }

    std::vector<EvalTask> tasks(static_cast<std::size_t>(plan.runs));
    for (int k = 0; k < plan.runs; ++k) {
        const auto& cand = runs[static_cast<std::size_t>(k)];
        tasks[static_cast<std::size_t>(k)] = {&cand, self_compare ? &cand : &base_reference, *bks};
    }
    const std::vector<EvalScores> scores = evaluate_batch_serial(tasks);

    for (int k = 0; k < plan.runs; ++k) {
        const auto& run = runs[static_cast<std::size_t>(k)];
        const auto& score_k = scores[static_cast<std::size_t>(k)];

        RunMetrics metric;
        metric.instance_id = instance.id;
        metric.run_index = k;
        metric.gap_percent = score_k.gap;
        metric.pi = score_k.pi;
        metric.wrap = score_k.wrap;
        metric.curve = score_k.curve;
        slot.metrics.push_back(metric);

        ResultRecord record;
        record.instance_id = instance.id;
        record.solver_id = plan.solver_id;
        record.run_index = k;
        if (!run.empty()) {
            record.cost = run.final_cost();
        }
        record.gap_percent = score_k.gap;
        record.pi_score = score_k.pi;
        record.wrap_score = score_k.wrap;
        if (const auto validated = best_validated(run)) {
            record.num_vehicles = validated->second->num_vehicles;
        }
        record.normalized_budget = run.budget;
        record.bks_cost = *bks;
        for (const auto& entry : run.entries) {
            record.running_costs.push_back(entry.cost);
            record.running_times.push_back(entry.t);
        }
        record.machine = fingerprint;
        record.set = plan.set_id;
        slot.records.push_back(std::move(record));
    }

    slot.summary.instance_id = instance.id;
    slot.summary.bks_used = *bks;
    slot.summary.normalized_budget = reference_budget;
    double pi_sum = 0.0;
    double wrap_sum = 0.0;
    double gap_sum = 0.0;
    int gap_count = 0;
    for (const auto& metric : slot.metrics) {
        pi_sum += metric.pi;
        wrap_sum += metric.wrap;
        if (metric.gap_percent) {
            gap_sum += *metric.gap_percent;
            ++gap_count;
        }
    }
    slot.summary.mean_pi = pi_sum / plan.runs;
    slot.summary.mean_wrap = wrap_sum / plan.runs;
    if (gap_count > 0) {
        slot.summary.mean_gap = gap_sum / gap_count;
    }

    if (best_routes != nullptr) {
        BksCandidate proposal;
        proposal.instance_id = instance.id;
        proposal.cost = best_routes_cost;
        proposal.routes = best_routes->routes;
        proposal.solver_id = best_routes_source;
        proposal.instance = &slot.instance;
        slot.proposal = std::move(proposal);
    }
}

}  // namespace

RunOutcome orchestrate(const RunPlan& plan) {
    if (plan.runs < 1) {
        throw std::invalid_argument("orchestrate: runs must be at least 1");
    }
    if (plan.instance_files.empty()) {
        throw std::invalid_argument("orchestrate: no instance files");
    }
    if (!plan.budget.implicit && plan.budget.fixed_seconds <= 0.0) {
        throw std::invalid_argument("orchestrate: fixed budget must be positive");
    }
    const double score = machine_score(plan.machine);
    const ReferenceBase base = plan.base_score_override ? ReferenceBase::custom(*plan.base_score_override)
                                                        : ReferenceBase::for_mode(plan.machine.mode);
    const std::string fingerprint = machine_fingerprint(plan.machine, base);

    BksRegistry registry;
    if (!plan.bks_path.empty() && std::filesystem::exists(plan.bks_path)) {
        registry = load_bks_registry(read_file(plan.bks_path));
    }

    std::filesystem::path cache_dir = plan.base_cache_dir;
    if (cache_dir.empty()) {
        const char* env = std::getenv("RA_BASE_CACHE");
        cache_dir = env != nullptr ? std::filesystem::path(env) : plan.out_dir / "base_cache";
    }
    const bool self_compare = plan.solver_id == kBaseSolverId;

    std::vector<InstanceSlot> slots(plan.instance_files.size());
    const int workers = std::max(1, plan.workers);
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (std::size_t i = 0; i < plan.instance_files.size(); ++i) {
        auto& slot = slots[i];
        try {
            process_instance(plan, plan.instance_files[i], score, base.score, fingerprint, registry, cache_dir,
                             self_compare, slot);
        } catch (const std::exception& e) {
            slot.skipped = true;
            slot.skip_reason = e.what();
        }
    }

    RunOutcome outcome;
    std::vector<RunMetrics> all_metrics;
    std::vector<BksCandidate> proposals;
    for (auto& slot : slots) {
        if (slot.skipped) {
            const std::string id = slot.instance.id.empty() ? "<unparsed>" : slot.instance.id;
            outcome.skipped.push_back(id + ": " + slot.skip_reason);
            continue;
        }
        outcome.records.insert(outcome.records.end(), slot.records.begin(), slot.records.end());
        outcome.summaries.push_back(slot.summary);
        all_metrics.insert(all_metrics.end(), slot.metrics.begin(), slot.metrics.end());
        if (slot.proposal) {
            proposals.push_back(*slot.proposal);
        }
        outcome.warnings.insert(outcome.warnings.end(), slot.warnings.begin(), slot.warnings.end());
    }

    outcome.bks_delta = update_bks(registry, proposals);
    if (!plan.bks_path.empty()) {
        write_file_atomic(plan.bks_path, store_bks_registry(registry));
    }

    if (!all_metrics.empty()) {
        outcome.report = aggregate(plan.set_id, plan.solver_id, all_metrics);
    }

    if (!plan.out_dir.empty()) {
        std::filesystem::create_directories(plan.out_dir);
        write_file_atomic(plan.out_dir / "results.jsonl", write_results(outcome.records));
        const ReportBundle bundle = emit_report(outcome.records);
        std::ostringstream report;
        report << "instance summaries (set '" << plan.set_id << "', solver '" << plan.solver_id << "', runs="
               << plan.runs << ")\n";
        report << "instance\tgap%\tpi\twrap\tbks\tbudget_s\n";
        for (const auto& summary : outcome.summaries) {
            report << summary.instance_id << "\t" << (summary.mean_gap ? fixed4(*summary.mean_gap) : "-") << "\t"
                   << fixed4(summary.mean_pi) << "\t" << fixed4(summary.mean_wrap) << "\t"
                   << format_number(summary.bks_used) << "\t" << format_number(summary.normalized_budget) << "\n";
        }
        for (const auto& skipped : outcome.skipped) {
            report << "skipped\t" << skipped << "\n";
        }
        report << "\n" << bundle.table_text;
        write_file_atomic(plan.out_dir / "report.txt", report.str());
        write_file_atomic(plan.out_dir / "curve.csv", bundle.curve_csv);
    }
    return outcome;
}

ReportBundle emit_report(const std::vector<ResultRecord>& records) {
    if (records.empty()) {
        throw std::invalid_argument("emit_report: empty result set");
    }

    // Rebuild per-run metrics; the gap-vs-budget curve comes from the stored
    // incumbent stream.
    std::map<std::pair<std::string, std::string>, std::vector<RunMetrics>> groups;
    for (const auto& record : records) {
        RunMetrics metric;
        metric.instance_id = record.instance_id;
        metric.run_index = record.run_index;
        metric.gap_percent = record.gap_percent;
        metric.pi = record.pi_score;
        metric.wrap = record.wrap_score;
        if (record.bks_cost && !record.running_times.empty()) {
            Trajectory trajectory;
            trajectory.budget = record.normalized_budget;
            trajectory.normalized = true;
            for (std::size_t i = 0; i < record.running_times.size(); ++i) {
                trajectory.entries.push_back({record.running_times[i], record.running_costs[i], std::nullopt});
            }
            for (std::size_t f = 0; f < kCurveFractions.size(); ++f) {
                metric.curve[f] =
                    gap_at_budget(trajectory, kCurveFractions[f] * trajectory.budget, *record.bks_cost);
            }
        }
        groups[{record.set, record.solver_id}].push_back(std::move(metric));
    }

    std::map<std::string, std::vector<SetReport>> by_solver;
    std::vector<SetReport> reports;
    for (const auto& [key, metrics] : groups) {
        SetReport report = aggregate(key.first, key.second, metrics);
        by_solver[key.second].push_back(report);
        reports.push_back(std::move(report));
    }
    for (const auto& [solver, sets] : by_solver) {
        if (sets.size() > 1) {
            reports.push_back(aggregate_sets(sets));
        }
    }

    std::ostringstream table;
    table << "set\tsolver\tgap%\tgap_sd\tpi\tpi_sd\twrap\twrap_sd\tinstances\truns\n";
    for (const auto& report : reports) {
        table << report.set_id << "\t" << report.solver_id << "\t"
              << (report.gap ? fixed4(report.gap->mean) : "-") << "\t"
              << (report.gap ? fixed4(report.gap->stddev) : "-") << "\t" << fixed4(report.pi.mean) << "\t"
              << fixed4(report.pi.stddev) << "\t" << fixed4(report.wrap.mean) << "\t" << fixed4(report.wrap.stddev)
              << "\t" << report.num_instances << "\t" << report.num_runs << "\n";
    }

    std::ostringstream curve;
    curve << "set,solver,fraction,gap_percent\n";
    for (const auto& report : reports) {
        for (std::size_t f = 0; f < kCurveFractions.size(); ++f) {
            curve << report.set_id << "," << report.solver_id << "," << format_number(kCurveFractions[f]) << ",";
            if (report.curve[f]) {
                curve << fixed4(*report.curve[f]);
            }
            curve << "\n";
        }
    }

    ReportBundle bundle;
    bundle.table_text = table.str();
    bundle.curve_csv = curve.str();
    return bundle;
}

}  // namespace ra
