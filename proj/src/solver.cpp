#include "ra/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ra/rng.hpp"
#include "ra/vrplib.hpp"

namespace ra {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double route_cost(const Instance& instance, const std::vector<int>& route) {
    if (route.empty()) {
        return 0.0;
    }
    double cost = leg_distance(instance, 0, route.front());
    for (std::size_t i = 1; i < route.size(); ++i) {
        cost += leg_distance(instance, route[i - 1], route[i]);
    }
    cost += leg_distance(instance, route.back(), 0);
    return cost;
}

double route_load(const Instance& instance, const std::vector<int>& route) {
    double load = 0.0;
    for (const int c : route) {
        load += instance.demands[static_cast<std::size_t>(c)];
    }
    return load;
}

// Working state of the annealing loop: routes plus cached loads.
struct SaState {
    std::vector<std::vector<int>> routes;
    std::vector<double> loads;

    void remove_route(std::size_t r) {
        routes.erase(routes.begin() + static_cast<std::ptrdiff_t>(r));
        loads.erase(loads.begin() + static_cast<std::ptrdiff_t>(r));
    }
};

enum class MoveKind { Relocate, Swap, TwoOptIntra, CrossExchange };

// Proposes one move and returns its cost delta, or nullopt when the move is
// infeasible or degenerate. Feasibility is checked before any cost is
// evaluated; `apply` commits the already validated candidate routes.
struct MoveProposal {
    double delta = 0.0;
    std::size_t route_a = 0;
    std::size_t route_b = 0;
    std::vector<int> new_a;
    std::vector<int> new_b;
    bool two_routes = false;
};

std::optional<MoveProposal> propose(const Instance& instance, const SaState& state, MoveKind kind, Rng& rng) {
    const std::size_t num_routes = state.routes.size();
    if (num_routes == 0) {
        return std::nullopt;
    }
    auto random_route = [&] { return static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(num_routes) - 1)); };

    switch (kind) {
        case MoveKind::Relocate: {
            const std::size_t ra_idx = random_route();
            const auto& a = state.routes[ra_idx];
            if (a.empty()) {
                return std::nullopt;
            }
            const std::size_t i = static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(a.size()) - 1));
            const std::size_t rb_idx = random_route();
            const auto& b = state.routes[rb_idx];
            const int customer = a[i];

            MoveProposal move;
            move.route_a = ra_idx;
            move.route_b = rb_idx;
            move.two_routes = ra_idx != rb_idx;
            if (move.two_routes) {
                if (state.loads[rb_idx] + instance.demands[static_cast<std::size_t>(customer)] > instance.capacity) {
                    return std::nullopt;
                }
                const std::size_t j = static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(b.size())));
                move.new_a = a;
                move.new_a.erase(move.new_a.begin() + static_cast<std::ptrdiff_t>(i));
                move.new_b = b;
                move.new_b.insert(move.new_b.begin() + static_cast<std::ptrdiff_t>(j), customer);
                move.delta = route_cost(instance, move.new_a) - route_cost(instance, a) +
                             route_cost(instance, move.new_b) - route_cost(instance, b);
            } else {
                if (a.size() < 2) {
                    return std::nullopt;
                }
                std::vector<int> candidate = a;
                candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(i));
                const std::size_t j =
                    static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(candidate.size())));
                candidate.insert(candidate.begin() + static_cast<std::ptrdiff_t>(j), customer);
                if (candidate == a) {
                    return std::nullopt;
                }
                move.new_a = std::move(candidate);
                move.delta = route_cost(instance, move.new_a) - route_cost(instance, a);
            }
            return move;
        }
        case MoveKind::Swap: {
            const std::size_t ra_idx = random_route();
            const std::size_t rb_idx = random_route();
            const auto& a = state.routes[ra_idx];
            const auto& b = state.routes[rb_idx];
            if (a.empty() || b.empty()) {
                return std::nullopt;
            }
            const std::size_t i = static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(a.size()) - 1));
            const std::size_t j = static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(b.size()) - 1));
            if (ra_idx == rb_idx && i == j) {
                return std::nullopt;
            }
            MoveProposal move;
            move.route_a = ra_idx;
            move.route_b = rb_idx;
            move.two_routes = ra_idx != rb_idx;
            if (move.two_routes) {
                const double qa = instance.demands[static_cast<std::size_t>(a[i])];
                const double qb = instance.demands[static_cast<std::size_t>(b[j])];
                if (state.loads[ra_idx] - qa + qb > instance.capacity ||
                    state.loads[rb_idx] - qb + qa > instance.capacity) {
                    return std::nullopt;
                }
                move.new_a = a;
                move.new_b = b;
                std::swap(move.new_a[i], move.new_b[j]);
                move.delta = route_cost(instance, move.new_a) - route_cost(instance, a) +
                             route_cost(instance, move.new_b) - route_cost(instance, b);
            } else {
                move.new_a = a;
                std::swap(move.new_a[i], move.new_a[j]);
                move.delta = route_cost(instance, move.new_a) - route_cost(instance, a);
            }
            return move;
        }
        case MoveKind::TwoOptIntra: {
            const std::size_t ra_idx = random_route();
            const auto& a = state.routes[ra_idx];
            if (a.size() < 3) {
                return std::nullopt;
            }
            std::size_t i = static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(a.size()) - 1));
            std::size_t j = static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(a.size()) - 1));
            if (i == j) {
                return std::nullopt;
            }
            if (i > j) {
                std::swap(i, j);
            }
            MoveProposal move;
            move.route_a = ra_idx;
            move.route_b = ra_idx;
            move.two_routes = false;
            move.new_a = a;
            std::reverse(move.new_a.begin() + static_cast<std::ptrdiff_t>(i),
                         move.new_a.begin() + static_cast<std::ptrdiff_t>(j) + 1);
            move.delta = route_cost(instance, move.new_a) - route_cost(instance, a);
            return move;
        }
        case MoveKind::CrossExchange: {
            if (num_routes < 2) {
                return std::nullopt;
            }
            const std::size_t ra_idx = random_route();
            const std::size_t rb_idx = random_route();
            if (ra_idx == rb_idx) {
                return std::nullopt;
            }
            const auto& a = state.routes[ra_idx];
            const auto& b = state.routes[rb_idx];
            // Tail swap at cut points i, j (customers a[i..], b[j..] change routes).
            const std::size_t i = static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(a.size())));
            const std::size_t j = static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(b.size())));
            if (i == a.size() && j == b.size()) {
                return std::nullopt;
            }
            MoveProposal move;
            move.route_a = ra_idx;
            move.route_b = rb_idx;
            move.two_routes = true;
            move.new_a.assign(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(i));
            move.new_a.insert(move.new_a.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
            move.new_b.assign(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(j));
            move.new_b.insert(move.new_b.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
            if (route_load(instance, move.new_a) > instance.capacity ||
                route_load(instance, move.new_b) > instance.capacity) {
                return std::nullopt;
            }
            move.delta = route_cost(instance, move.new_a) - route_cost(instance, a) +
                         route_cost(instance, move.new_b) - route_cost(instance, b);
            return move;
        }
    }
    return std::nullopt;
}

void commit(const Instance& instance, SaState& state, MoveProposal&& move) {
    state.routes[move.route_a] = std::move(move.new_a);
    state.loads[move.route_a] = route_load(instance, state.routes[move.route_a]);
    if (move.two_routes) {
        state.routes[move.route_b] = std::move(move.new_b);
        state.loads[move.route_b] = route_load(instance, state.routes[move.route_b]);
    }
    // Drop routes emptied by relocation or tail swaps (largest index first).
    for (std::size_t r = state.routes.size(); r-- > 0;) {
        if ((r == move.route_a || (move.two_routes && r == move.route_b)) && state.routes[r].empty()) {
            state.remove_route(r);
        }
    }
}

Solution snapshot(const Instance& instance, const SaState& state) {
    std::vector<std::vector<int>> routes;
    routes.reserve(state.routes.size());
    for (const auto& r : state.routes) {
        if (!r.empty()) {
            routes.push_back(r);
        }
    }
    return make_solution(instance, std::move(routes));
}

}  // namespace

void validate_schedule(const SaSchedule& schedule) {
    if (schedule.cooling_rate <= 0.0 || schedule.cooling_rate >= 1.0) {
        throw std::invalid_argument("sa schedule: cooling_rate must lie in (0, 1)");
    }
    if (schedule.initial_temp_factor <= 0.0) {
        throw std::invalid_argument("sa schedule: initial_temp_factor must be positive");
    }
    if (schedule.moves_per_temperature < 0) {
        throw std::invalid_argument("sa schedule: moves_per_temperature must be non-negative");
    }
    double total = 0.0;
    for (const double w : schedule.weights) {
        if (w < 0.0) {
            throw std::invalid_argument("sa schedule: weights must be non-negative");
        }
        total += w;
    }
    if (total <= 0.0) {
        throw std::invalid_argument("sa schedule: at least one weight must be positive");
    }
}

Solution savings_construct(const Instance& instance) {
    const int n = instance.num_customers();
    std::vector<std::vector<int>> routes;
    routes.reserve(static_cast<std::size_t>(n));
    for (int c = 1; c <= n; ++c) {
        if (instance.demands[static_cast<std::size_t>(c)] > instance.capacity) {
            throw std::invalid_argument("savings: demand of customer " + std::to_string(c) + " exceeds capacity");
        }
        routes.push_back({c});
    }
    if (n == 1) {
        return make_solution(instance, std::move(routes));
    }

    // Keys order exactly like the double saving value; the (i asc, j asc)
    // generation order survives the stable radix passes as the tie-break.
    struct Saving {
        std::uint64_t key;
        std::uint32_t i;
        std::uint32_t j;
    };
    std::vector<Saving> savings;
    savings.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
    std::vector<double> depot_dist(static_cast<std::size_t>(n) + 1, 0.0);
    for (int c = 1; c <= n; ++c) {
        depot_dist[static_cast<std::size_t>(c)] = leg_distance(instance, 0, c);
    }
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            const double value = depot_dist[static_cast<std::size_t>(i)] + depot_dist[static_cast<std::size_t>(j)] -
                                 leg_distance(instance, i, j);
            std::uint64_t bits;
            std::memcpy(&bits, &value, sizeof(bits));
            // Map to an unsigned key that sorts ascending by value, then
            // invert so ascending radix passes give saving-descending order.
            bits = (bits >> 63) != 0 ? ~bits : bits | 0x8000000000000000ULL;
            savings.push_back({~bits, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
        }
    }
    {
        std::vector<Saving> scratch(savings.size());
        std::vector<std::uint32_t> counts(1 << 16);
        for (int pass = 0; pass < 4; ++pass) {
            const int shift = 16 * pass;
            std::fill(counts.begin(), counts.end(), 0);
            for (const auto& s : savings) {
                counts[(s.key >> shift) & 0xffff] += 1;
            }
            std::uint32_t offset = 0;
            for (auto& count : counts) {
                const std::uint32_t next = offset + count;
                count = offset;
                offset = next;
            }
            for (const auto& s : savings) {
                scratch[counts[(s.key >> shift) & 0xffff]++] = s;
            }
            savings.swap(scratch);
        }
    }

    std::vector<int> route_of(static_cast<std::size_t>(n) + 1);
    std::vector<double> loads(routes.size());
    for (std::size_t r = 0; r < routes.size(); ++r) {
        route_of[static_cast<std::size_t>(routes[r][0])] = static_cast<int>(r);
        loads[r] = instance.demands[static_cast<std::size_t>(routes[r][0])];
    }

    for (const auto& saving : savings) {
        const int ri = route_of[saving.i];
        const int rj = route_of[saving.j];
        if (ri == rj) {
            continue;
        }
        auto& a = routes[static_cast<std::size_t>(ri)];
        auto& b = routes[static_cast<std::size_t>(rj)];
        const int si = static_cast<int>(saving.i);
        const int sj = static_cast<int>(saving.j);
        const bool i_head = a.front() == si;
        const bool i_tail = a.back() == si;
        const bool j_head = b.front() == sj;
        const bool j_tail = b.back() == sj;
        if ((!i_head && !i_tail) || (!j_head && !j_tail)) {
            continue;
        }
        if (loads[static_cast<std::size_t>(ri)] + loads[static_cast<std::size_t>(rj)] > instance.capacity) {
            continue;
        }
        // Orient so i ends route a and j starts route b, then concatenate.
        if (!i_tail) {
            std::reverse(a.begin(), a.end());
        }
        if (!j_head) {
            std::reverse(b.begin(), b.end());
        }
        a.insert(a.end(), b.begin(), b.end());
        loads[static_cast<std::size_t>(ri)] += loads[static_cast<std::size_t>(rj)];
        for (const int c : b) {
            route_of[static_cast<std::size_t>(c)] = ri;
        }
        b.clear();
        loads[static_cast<std::size_t>(rj)] = 0.0;
    }

    routes.erase(std::remove_if(routes.begin(), routes.end(), [](const auto& r) { return r.empty(); }), routes.end());
    return make_solution(instance, std::move(routes));
}

Trajectory sa_improve(const Instance& instance, const Solution& start, double budget_seconds, std::uint64_t seed,
                      const SaSchedule& schedule) {
    validate_schedule(schedule);
    if (budget_seconds < 0.0) {
        throw std::invalid_argument("sa_improve: negative budget");
    }
    const auto started = Clock::now();

    Trajectory trajectory;
    trajectory.budget = budget_seconds;
    trajectory.produced_by = kBaseSolverId;
    trajectory.entries.push_back({budget_seconds > 0.0 ? std::min(seconds_since(started), budget_seconds) : 0.0,
                                  start.cost, start});
    if (budget_seconds == 0.0) {
        return trajectory;
    }

    SaState state;
    for (const auto& r : start.routes) {
        if (!r.empty()) {
            state.routes.push_back(r);
            state.loads.push_back(route_load(instance, r));
        }
    }
    if (state.routes.empty()) {
        return trajectory;
    }

    Rng rng(seed);
    double current_cost = start.cost;
    double best_cost = start.cost;
    double temperature = std::max(schedule.initial_temp_factor * start.cost, 1e-12);
    const std::uint64_t moves_per_temp = schedule.moves_per_temperature > 0
                                             ? static_cast<std::uint64_t>(schedule.moves_per_temperature)
                                             : 100ULL * static_cast<std::uint64_t>(instance.num_customers());
    const std::array<double, 4> w = schedule.weights;
    const double weight_total = w[0] + w[1] + w[2] + w[3];

    std::uint64_t moves = 0;
    std::uint64_t moves_at_level = 0;
    for (;;) {
        if (schedule.max_moves > 0 && moves >= schedule.max_moves) {
            break;
        }
        if ((moves & 0xff) == 0 && seconds_since(started) >= budget_seconds) {
            break;
        }
        ++moves;
        if (++moves_at_level >= moves_per_temp) {
            moves_at_level = 0;
            temperature = std::max(temperature * schedule.cooling_rate, 1e-12);
        }

        double pick = rng.next_double() * weight_total;
        MoveKind kind = MoveKind::Relocate;
        for (int k = 0; k < 4; ++k) {
            if (pick < w[static_cast<std::size_t>(k)]) {
                kind = static_cast<MoveKind>(k);
                break;
            }
            pick -= w[static_cast<std::size_t>(k)];
        }

        auto move = propose(instance, state, kind, rng);
        if (!move) {
            continue;
        }
        const double delta = move->delta;
        if (delta > 0.0 && rng.next_double() >= std::exp(-delta / temperature)) {
            continue;
        }
        commit(instance, state, std::move(*move));
        current_cost += delta;

        if (current_cost < best_cost - 1e-9) {
            Solution incumbent = snapshot(instance, state);
            current_cost = incumbent.cost;  // resync against drift of summed deltas
            if (incumbent.cost < best_cost - 1e-9) {
                const double t = seconds_since(started);
                if (t >= budget_seconds) {
                    break;  // found after the budget expired; not recorded
                }
                best_cost = incumbent.cost;
                // Clock ties get bumped by one ulp to keep timestamps strictly increasing.
                const double prev_t = trajectory.entries.back().t;
                trajectory.entries.push_back({std::max(t, std::nextafter(prev_t, budget_seconds)), best_cost,
                                              std::move(incumbent)});
            }
        }
    }
    return trajectory;
}

Trajectory solve_base(const Instance& instance, double budget_seconds, std::uint64_t seed,
                      const SaSchedule& schedule) {
    const auto started = Clock::now();
    Solution constructed = savings_construct(instance);
    const double construction_time = std::min(seconds_since(started), budget_seconds);

    Trajectory trajectory;
    trajectory.budget = budget_seconds;
    trajectory.produced_by = kBaseSolverId;
    trajectory.entries.push_back({construction_time, constructed.cost, constructed});

    const double remaining = budget_seconds - seconds_since(started);
    if (remaining > 0.0) {
        Trajectory improved = sa_improve(instance, constructed, remaining, seed, schedule);
        for (std::size_t i = 1; i < improved.entries.size(); ++i) {  // entry 0 repeats the start
            TrajectoryEntry entry = std::move(improved.entries[i]);
            entry.t = std::min(entry.t + construction_time, budget_seconds);
            const double prev_t = trajectory.entries.back().t;
            entry.t = std::max(entry.t, std::nextafter(prev_t, budget_seconds));
            trajectory.entries.push_back(std::move(entry));
        }
    }
    return trajectory;
}

std::uint64_t instance_hash(const Instance& instance) {
    // FNV-1a over a canonical serialization.
    std::string blob = instance.id;
    blob += '|' + format_number(instance.capacity);
    for (std::size_t i = 0; i < instance.coords.size(); ++i) {
        blob += '|' + format_number(instance.coords[i].x) + ',' + format_number(instance.coords[i].y) + ',' +
                format_number(instance.demands[i]);
    }
    blob += instance.rounding == Rounding::RoundToNearestInt ? "|round" : "|exact";
    std::uint64_t hash = 1469598103934665603ULL;
    for (const unsigned char byte : blob) {
        hash ^= byte;
        hash *= 1099511628211ULL;
    }
    return hash;
}

Trajectory solve_base_cached(const Instance& instance, double budget_seconds, std::uint64_t seed,
                             const SaSchedule& schedule, const std::filesystem::path& cache_dir) {
    std::string key_blob = std::to_string(instance_hash(instance)) + '|' + format_number(budget_seconds) + '|' +
                           std::to_string(seed) + '|' + format_number(schedule.initial_temp_factor) + '|' +
                           format_number(schedule.cooling_rate) + '|' + std::to_string(schedule.moves_per_temperature) +
                           '|' + std::to_string(schedule.max_moves);
    for (const double w : schedule.weights) {
        key_blob += '|' + format_number(w);
    }
    std::uint64_t key = 1469598103934665603ULL;
    for (const unsigned char byte : key_blob) {
        key ^= byte;
        key *= 1099511628211ULL;
    }
    std::filesystem::create_directories(cache_dir);
    const std::filesystem::path file = cache_dir / ("base_" + std::to_string(key) + ".json");
    if (std::filesystem::exists(file)) {
        return read_trajectory(read_file(file));
    }
    Trajectory trajectory = solve_base(instance, budget_seconds, seed, schedule);
    write_file_atomic(file, write_trajectory(trajectory));
    return trajectory;
}

}  // namespace ra
