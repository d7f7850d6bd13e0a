#include "ra/generator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ra {

namespace {

constexpr double kXGrid = 1000.0;

std::string coord_dist_tag(const GeneratorConfig& config) {
    switch (config.coord_dist) {
        case CoordDist::Uniform:
            return "uniform";
        case CoordDist::GaussianMixture:
            return "gm";
        case CoordDist::XType:
            switch (config.customer_pos) {
                case CustomerPosition::Random:
                    return "R";
                case CustomerPosition::Clustered:
                    return "C";
                case CustomerPosition::RandomClustered:
                    return "RC";
            }
    }
    return "";
}

std::string depot_tag(DepotPosition pos) {
    switch (pos) {
        case DepotPosition::Central:
            return "C";
        case DepotPosition::Eccentric:
            return "E";
        case DepotPosition::Random:
            return "R";
    }
    return "";
}

Point sample_unit_point(Rng& rng) { return {rng.next_double(), rng.next_double()}; }

Point sample_grid_point(Rng& rng) {
    return {static_cast<double>(rng.next_int(0, static_cast<std::int64_t>(kXGrid))),
            static_cast<double>(rng.next_int(0, static_cast<std::int64_t>(kXGrid)))};
}

bool on_grid(const Point& p) { return p.x >= 0.0 && p.x <= kXGrid && p.y >= 0.0 && p.y <= kXGrid; }

// Cluster offsets: exponential-decay radius truncated at 3*decay, so every
// clustered customer stays within 3*decay of its seed point.
Point sample_cluster_point(Rng& rng, const std::vector<Point>& seeds, double decay) {
    for (;;) {
        const auto& seed = seeds[static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(seeds.size()) - 1))];
        double radius;
        do {
            radius = -decay * std::log(1.0 - rng.next_double());
        } while (radius > 3.0 * decay);
        const double angle = 2.0 * M_PI * rng.next_double();
        const Point p{std::round(seed.x + radius * std::cos(angle)), std::round(seed.y + radius * std::sin(angle))};
        if (on_grid(p)) {
            return p;
        }
    }
}

std::vector<Point> sample_coords(const GeneratorConfig& config, Rng& rng) {
    const std::size_t n = static_cast<std::size_t>(config.n);
    std::vector<Point> coords;
    coords.reserve(n + 1);

    switch (config.coord_dist) {
        case CoordDist::Uniform: {
            for (std::size_t i = 0; i <= n; ++i) {
                coords.push_back(sample_unit_point(rng));
            }
            break;
        }
        case CoordDist::GaussianMixture: {
            coords.push_back(sample_unit_point(rng));  // depot
            const int modes = config.num_modes > 0 ? config.num_modes : static_cast<int>(rng.next_int(1, 7));
            std::vector<Point> centers;
            centers.reserve(static_cast<std::size_t>(modes));
            for (int m = 0; m < modes; ++m) {
                centers.push_back(sample_unit_point(rng));
            }
            for (std::size_t i = 0; i < n; ++i) {
                Point p;
                do {
                    const auto& c = centers[static_cast<std::size_t>(rng.next_int(0, modes - 1))];
                    p = {c.x + config.mode_std * rng.next_normal(), c.y + config.mode_std * rng.next_normal()};
                } while (p.x < 0.0 || p.x > 1.0 || p.y < 0.0 || p.y > 1.0);
                coords.push_back(p);
            }
            break;
        }
        case CoordDist::XType: {
            switch (config.depot_pos) {
                case DepotPosition::Central:
                    coords.push_back({kXGrid / 2.0, kXGrid / 2.0});
                    break;
                case DepotPosition::Eccentric:
                    coords.push_back({0.0, 0.0});
                    break;
                case DepotPosition::Random:
                    coords.push_back(sample_grid_point(rng));
                    break;
            }
            std::size_t num_random = n;
            std::vector<Point> seeds;
            if (config.customer_pos != CustomerPosition::Random) {
                const double fraction =
                    config.customer_pos == CustomerPosition::Clustered ? 0.0 : config.random_fraction;
                num_random = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
                const int clusters =
                    config.num_clusters > 0 ? config.num_clusters : static_cast<int>(rng.next_int(3, 8));
                for (int s = 0; s < clusters; ++s) {
                    seeds.push_back(sample_grid_point(rng));
                }
            }
            std::set<std::pair<long, long>> used;
            used.insert({static_cast<long>(coords[0].x), static_cast<long>(coords[0].y)});
            for (std::size_t i = 0; i < n; ++i) {
                Point p;
                do {
                    p = i < num_random ? sample_grid_point(rng) : sample_cluster_point(rng, seeds, config.cluster_decay);
                } while (!used.insert({static_cast<long>(p.x), static_cast<long>(p.y)}).second);
                coords.push_back(p);
            }
            break;
        }
    }
    return coords;
}

}  // namespace

void validate_config(const GeneratorConfig& config) {
    if (config.n < 1) {
        throw std::invalid_argument("generator: n must be at least 1");
    }
    if (config.demand_dist == DemandDist::UniformInt && config.demand_lo > config.demand_hi) {
        throw std::invalid_argument("generator: demand_lo must not exceed demand_hi");
    }
    if (config.demand_lo < 1) {
        throw std::invalid_argument("generator: demands start at 1");
    }
    if (config.num_modes < 0 || config.num_clusters < 0) {
        throw std::invalid_argument("generator: mode/cluster counts must be non-negative");
    }
    if (config.mode_std <= 0.0) {
        throw std::invalid_argument("generator: mode_std must be positive");
    }
    if (config.random_fraction < 0.0 || config.random_fraction > 1.0) {
        throw std::invalid_argument("generator: random_fraction must lie in [0, 1]");
    }
    if (config.cluster_decay <= 0.0) {
        throw std::invalid_argument("generator: cluster_decay must be positive");
    }
    if (config.gamma_shape <= 0.0 || config.gamma_scale <= 0.0) {
        throw std::invalid_argument("generator: gamma parameters must be positive");
    }
    if (config.capacity_rule == CapacityRule::Fixed && config.fixed_capacity <= 0.0) {
        throw std::invalid_argument("generator: fixed capacity must be positive");
    }
    if (config.capacity_rule == CapacityRule::FromAvgRouteSize && config.avg_route_size <= 0.0) {
        throw std::invalid_argument("generator: avg_route_size must be positive");
    }
}

std::vector<double> sample_demands(const GeneratorConfig& config, int n, std::uint64_t seed,
                                   const std::vector<Point>* customer_coords, Point grid_center,
                                   std::string* tag_out) {
    Rng rng(seed);
    std::vector<double> demands(static_cast<std::size_t>(n));
    std::string tag;

    auto fill_uniform = [&](int lo, int hi) {
        for (auto& q : demands) {
            q = static_cast<double>(rng.next_int(lo, hi));
        }
        tag = std::to_string(lo) + "-" + std::to_string(hi);
    };

    switch (config.demand_dist) {
        case DemandDist::Unitary:
            std::fill(demands.begin(), demands.end(), 1.0);
            tag = "unitary";
            break;
        case DemandDist::UniformInt:
            fill_uniform(config.demand_lo, config.demand_hi);
            break;
        case DemandDist::Gamma:
            for (auto& q : demands) {
                q = std::max(1.0, std::ceil(rng.next_gamma(config.gamma_shape, config.gamma_scale)));
            }
            tag = "gamma";
            break;
        case DemandDist::XTypeMix: {
            switch (rng.next_int(0, 5)) {
                case 0:
                    std::fill(demands.begin(), demands.end(), 1.0);
                    tag = "unitary";
                    break;
                case 1:
                    fill_uniform(1, 10);
                    break;
                case 2:
                    fill_uniform(5, 10);
                    break;
                case 3:
                    fill_uniform(1, 100);
                    break;
                case 4: {
                    // Small demands in two opposite quadrants, large in the others.
                    if (customer_coords == nullptr) {
                        throw std::invalid_argument("quadrant demands need customer coordinates");
                    }
                    for (int i = 0; i < n; ++i) {
                        const auto& p = (*customer_coords)[static_cast<std::size_t>(i)];
                        const bool small = (p.x >= grid_center.x) == (p.y >= grid_center.y);
                        demands[static_cast<std::size_t>(i)] =
                            static_cast<double>(small ? rng.next_int(1, 50) : rng.next_int(51, 100));
                    }
                    tag = "quadrant";
                    break;
                }
                case 5: {
                    const double small_share = 0.70 + 0.25 * rng.next_double();
                    for (auto& q : demands) {
                        q = static_cast<double>(rng.next_double() < small_share ? rng.next_int(1, 10)
                                                                                : rng.next_int(50, 100));
                    }
                    tag = "small-large";
                    break;
                }
            }
            break;
        }
    }
    if (tag_out != nullptr) {
        *tag_out = tag;
    }
    return demands;
}

Instance generate(const GeneratorConfig& config) {
    validate_config(config);
    Rng rng(config.seed);

    Instance instance;
    instance.coords = sample_coords(config, rng);

    std::vector<Point> customers(instance.coords.begin() + 1, instance.coords.end());
    const Point center = config.coord_dist == CoordDist::XType ? Point{kXGrid / 2.0, kXGrid / 2.0} : Point{0.5, 0.5};
    std::string demand_tag;
    // Demand stream gets its own derived seed so coordinate and demand draws
    // stay independent of each other's sample counts.
    std::vector<double> demands =
        sample_demands(config, config.n, config.seed ^ 0x9e3779b97f4a7c15ULL, &customers, center, &demand_tag);

    double sum = 0.0;
    double max_demand = 0.0;
    for (const double q : demands) {
        sum += q;
        max_demand = std::max(max_demand, q);
    }
    double capacity = config.fixed_capacity;
    if (config.capacity_rule == CapacityRule::FromAvgRouteSize) {
        capacity = std::ceil(config.avg_route_size * sum / static_cast<double>(config.n));
    }
    if (capacity < max_demand) {
        throw std::invalid_argument("generator: capacity rule yields Q=" + std::to_string(capacity) +
                                    " below the largest demand " + std::to_string(max_demand));
    }

    instance.demands.assign(1, 0.0);
    instance.demands.insert(instance.demands.end(), demands.begin(), demands.end());
    instance.capacity = capacity;

    if (config.coord_dist == CoordDist::XType) {
        instance.grid_scale = GridScale::integer_grid(kXGrid);
        instance.rounding = Rounding::RoundToNearestInt;
        instance.depot_type = depot_tag(config.depot_pos);
    } else {
        // Unit-square families are capacity-normalized.
        for (auto& q : instance.demands) {
            q /= capacity;
        }
        instance.capacity = 1.0;
        instance.grid_scale = GridScale::unit_square();
        instance.rounding = Rounding::Exact;
    }
    instance.coords_dist = coord_dist_tag(config);
    instance.demands_dist = demand_tag;
    instance.id = coord_dist_tag(config) + "_n" + std::to_string(config.n) + "_s" + std::to_string(config.seed);

    validate_instance(instance);
    return instance;
}

std::vector<Instance> generate_set_serial(const GeneratorConfig& config, int count) {
    std::vector<Instance> instances(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        GeneratorConfig c = config;
        c.seed = config.seed + static_cast<std::uint64_t>(k);
        instances[static_cast<std::size_t>(k)] = generate(c);
    }
    return instances;
}

std::vector<Instance> generate_set(const GeneratorConfig& config, int count) {
    std::vector<Instance> instances(static_cast<std::size_t>(count));
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < count; ++k) {
        try {
            GeneratorConfig c = config;
            c.seed = config.seed + static_cast<std::uint64_t>(k);
            instances[static_cast<std::size_t>(k)] = generate(c);
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
    return instances;
}

}  // namespace ra
