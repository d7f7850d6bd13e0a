#ifndef RA_SOLVER_HPP
#define RA_SOLVER_HPP

#include <array>
#include <cstdint>
#include <filesystem>

#include "ra/instance.hpp"
#include "ra/trajectory.hpp"

namespace ra {

inline constexpr const char* kBaseSolverId = "savings-sa";

// Annealing schedule. Temperatures start at initial_temp_factor * start cost
// and cool geometrically; weights select among the four neighborhoods
// {relocate, swap, intra-route 2-opt, cross-exchange}.
struct SaSchedule {
    double initial_temp_factor = 0.01;
    double cooling_rate = 0.995;
    int moves_per_temperature = 0;  // 0 = 100 * N
    std::array<double, 4> weights = {1.0, 1.0, 1.0, 1.0};
    // Deterministic cutoff: stop after exactly this many proposed moves
    // (0 = unlimited, wall clock alone decides). With a cutoff that fits the
    // budget, repeated runs produce identical incumbent sequences.
    std::uint64_t max_moves = 0;
};

void validate_schedule(const SaSchedule& schedule);

// Parallel-savings construction: all pairwise savings
// s(i,j) = d(0,i) + d(0,j) - d(i,j), sorted by (saving desc, i asc, j asc),
// merged at route endpoints while capacity allows. Deterministic.
Solution savings_construct(const Instance& instance);

// Simulated-annealing improvement. Records an entry whenever the best-so-far
// cost strictly improves, starting with (t ~ 0+, cost(start)); every recorded
// solution is feasible. Worsening moves are accepted with probability
// exp(-delta / T). The move sequence is a pure function of the seed; the wall
// clock only decides where it is cut off.
Trajectory sa_improve(const Instance& instance, const Solution& start, double budget_seconds, std::uint64_t seed,
                      const SaSchedule& schedule = {});

// Savings construction (timestamped) followed by SA on the remaining budget.
Trajectory solve_base(const Instance& instance, double budget_seconds, std::uint64_t seed,
                      const SaSchedule& schedule = {});

// solve_base behind a per-(instance, budget, seed, schedule) disk cache, so
// every metric evaluation reuses identical base data. A cache hit returns the
// stored trajectory byte-identically.
Trajectory solve_base_cached(const Instance& instance, double budget_seconds, std::uint64_t seed,
                             const SaSchedule& schedule, const std::filesystem::path& cache_dir);

// Stable content hash of an instance (cache keys, fingerprints).
std::uint64_t instance_hash(const Instance& instance);

}  // namespace ra

#endif
