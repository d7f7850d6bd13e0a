#ifndef RA_GENERATOR_HPP
#define RA_GENERATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ra/instance.hpp"
#include "ra/rng.hpp"

namespace ra {

enum class CoordDist { Uniform, GaussianMixture, XType };
enum class DepotPosition { Central, Eccentric, Random };
enum class CustomerPosition { Random, Clustered, RandomClustered };
enum class DemandDist { Unitary, UniformInt, Gamma, XTypeMix };
enum class CapacityRule { Fixed, FromAvgRouteSize };

// Sampler configuration. Uniform and GaussianMixture emit capacity-normalized
// unit-square instances; XType emits integer instances on the [0,1000]^2 grid.
struct GeneratorConfig {
    int n = 100;
    std::uint64_t seed = 1;

    CoordDist coord_dist = CoordDist::Uniform;
    int num_modes = 0;      // gaussian mixture; 0 = sample uniformly from 1..7
    double mode_std = 0.07;

    DepotPosition depot_pos = DepotPosition::Central;       // x-type only
    CustomerPosition customer_pos = CustomerPosition::Random;
    int num_clusters = 0;          // 0 = sample uniformly from 3..8
    double cluster_decay = 40.0;   // grid units; cluster points stay within 3*decay of a seed
    double random_fraction = 0.5;  // RandomClustered: share of unclustered customers

    DemandDist demand_dist = DemandDist::UniformInt;
    int demand_lo = 1;
    int demand_hi = 10;
    double gamma_shape = 2.0;
    double gamma_scale = 2.5;

    CapacityRule capacity_rule = CapacityRule::Fixed;
    double fixed_capacity = 50.0;
    double avg_route_size = 8.0;  // FromAvgRouteSize target customers per route
};

// Throws std::invalid_argument on out-of-range parameters.
void validate_config(const GeneratorConfig& config);

// Deterministic for a fixed (config, seed): equal configs produce identical
// instances. Throws when the capacity rule yields Q below the largest demand.
Instance generate(const GeneratorConfig& config);

// Demand sampler used by generate(); exposed for direct use. `customer_coords`
// and `grid_center` feed the quadrant-dependent x-type variant and may be
// null/ignored for the other kinds. Returned demands exclude the depot.
std::vector<double> sample_demands(const GeneratorConfig& config, int n, std::uint64_t seed,
                                   const std::vector<Point>* customer_coords, Point grid_center,
                                   std::string* tag_out = nullptr);

// Batch generation: instance k uses seed config.seed + k. The parallel variant
// distributes instances over OpenMP threads; both produce identical output.
std::vector<Instance> generate_set(const GeneratorConfig& config, int count);
std::vector<Instance> generate_set_serial(const GeneratorConfig& config, int count);

}  // namespace ra

#endif
