#include <doctest.h>

#include <stdexcept>

#include <array>
#include <cmath>
#include <set>

#include "ra/generator.hpp"
#include "ra/vrplib.hpp"

using namespace ra;

namespace {

bool instances_identical(const Instance& a, const Instance& b) {
    return a.coords == b.coords && a.demands == b.demands && a.capacity == b.capacity && a.id == b.id &&
           a.coords_dist == b.coords_dist && a.demands_dist == b.demands_dist;
}

}  // namespace

TEST_SUITE("generator") {
    TEST_CASE("determinism: same config and seed give identical instances") {
        GeneratorConfig config;
        config.n = 50;
        config.seed = 77;
        config.coord_dist = CoordDist::XType;
        config.customer_pos = CustomerPosition::RandomClustered;
        config.demand_dist = DemandDist::XTypeMix;
        config.fixed_capacity = 200;  // covers every mix variant's demand range
        const Instance a = generate(config);
        const Instance b = generate(config);
        CHECK(instances_identical(a, b));
        // Byte-identical through the writer as well.
        CHECK(write_vrplib(a) == write_vrplib(b));

        config.seed = 78;
        CHECK_FALSE(instances_identical(a, generate(config)));
    }

    TEST_CASE("uniform instances are capacity-normalized unit-square data") {
        GeneratorConfig config;
        config.n = 100;
        config.seed = 3;
        config.demand_dist = DemandDist::UniformInt;
        config.demand_lo = 1;
        config.demand_hi = 10;
        config.fixed_capacity = 50;
        const Instance instance = generate(config);
        CHECK(instance.capacity == 1.0);
        CHECK(instance.grid_scale == GridScale::unit_square());
        CHECK(instance.rounding == Rounding::Exact);
        for (int c = 1; c <= instance.num_customers(); ++c) {
            const double q = instance.demands[static_cast<std::size_t>(c)];
            CHECK(q > 0.0);
            CHECK(q <= 0.2);  // 10 / 50
            CHECK(std::abs(q * 50.0 - std::round(q * 50.0)) < 1e-9);
        }
        for (const auto& p : instance.coords) {
            CHECK(p.x >= 0.0);
            CHECK(p.x <= 1.0);
            CHECK(p.y >= 0.0);
            CHECK(p.y <= 1.0);
        }
        CHECK(instance.demands_dist == "1-10");
    }

    TEST_CASE("x-type central depot is always the grid center") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            GeneratorConfig config;
            config.n = 20;
            config.seed = seed;
            config.coord_dist = CoordDist::XType;
            config.depot_pos = DepotPosition::Central;
            const Instance instance = generate(config);
            CHECK(instance.coords[0].x == 500.0);
            CHECK(instance.coords[0].y == 500.0);
            CHECK(instance.grid_scale == GridScale::integer_grid(1000));
            CHECK(instance.rounding == Rounding::RoundToNearestInt);
        }
        GeneratorConfig config;
        config.n = 20;
        config.coord_dist = CoordDist::XType;
        config.depot_pos = DepotPosition::Eccentric;
        const Instance eccentric = generate(config);
        CHECK(eccentric.coords[0].x == 0.0);
        CHECK(eccentric.coords[0].y == 0.0);
    }

    TEST_CASE("unitary demands") {
        GeneratorConfig config;
        config.n = 5;
        config.demand_dist = DemandDist::Unitary;
        config.fixed_capacity = 3;
        const Instance instance = generate(config);
        for (int c = 1; c <= 5; ++c) {
            CHECK(instance.demands[static_cast<std::size_t>(c)] == doctest::Approx(1.0 / 3.0));
        }
        CHECK(instance.demands_dist == "unitary");
    }

    TEST_CASE("uniform-int demands stay in range and tag as lo-hi") {
        GeneratorConfig config;
        config.demand_dist = DemandDist::UniformInt;
        config.demand_lo = 1;
        config.demand_hi = 100;
        config.n = 500;
        std::string tag;
        const auto demands = sample_demands(config, config.n, 9, nullptr, {0.5, 0.5}, &tag);
        CHECK(tag == "1-100");
        for (const double q : demands) {
            CHECK(q >= 1.0);
            CHECK(q <= 100.0);
            CHECK(q == std::round(q));
        }
    }

    TEST_CASE("gamma demands are integral and at least 1") {
        GeneratorConfig config;
        config.demand_dist = DemandDist::Gamma;
        config.gamma_shape = 0.5;  // exercises the shape < 1 boost
        config.gamma_scale = 1.0;
        const auto demands = sample_demands(config, 400, 4, nullptr, {0.5, 0.5});
        for (const double q : demands) {
            CHECK(q >= 1.0);
            CHECK(q == std::ceil(q));
        }
    }

    TEST_CASE("x-type mix picks a variant by seed") {
        GeneratorConfig config;
        config.demand_dist = DemandDist::XTypeMix;
        std::vector<Point> customers;
        for (int i = 0; i < 200; ++i) {
            customers.push_back({static_cast<double>((i * 37) % 1000), static_cast<double>((i * 91) % 1000)});
        }
        std::set<std::string> tags;
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            std::string tag;
            const auto demands = sample_demands(config, 200, seed, &customers, {500, 500}, &tag);
            tags.insert(tag);
            for (const double q : demands) {
                CHECK(q >= 1.0);
                CHECK(q <= 100.0);
            }
        }
        CHECK(tags.size() >= 4);  // several of the six variants show up over 40 seeds
    }

    TEST_CASE("uniform coordinate marginals pass the decile check") {
        GeneratorConfig config;
        config.n = 10000;
        config.seed = 123;
        config.demand_dist = DemandDist::Unitary;
        config.fixed_capacity = 100;
        const Instance instance = generate(config);
        std::array<int, 10> x_decile{};
        std::array<int, 10> y_decile{};
        for (int c = 1; c <= config.n; ++c) {
            const auto& p = instance.coords[static_cast<std::size_t>(c)];
            x_decile[std::min(9, static_cast<int>(p.x * 10.0))] += 1;
            y_decile[std::min(9, static_cast<int>(p.y * 10.0))] += 1;
        }
        for (int d = 0; d < 10; ++d) {
            CHECK(x_decile[static_cast<std::size_t>(d)] >= 800);
            CHECK(x_decile[static_cast<std::size_t>(d)] <= 1200);
            CHECK(y_decile[static_cast<std::size_t>(d)] >= 800);
            CHECK(y_decile[static_cast<std::size_t>(d)] <= 1200);
        }
    }

    TEST_CASE("clustered customers stay near their seed points") {
        GeneratorConfig config;
        config.n = 400;
        config.seed = 21;
        config.coord_dist = CoordDist::XType;
        config.customer_pos = CustomerPosition::RandomClustered;
        config.random_fraction = 0.25;
        config.num_clusters = 5;
        config.cluster_decay = 40.0;
        const Instance instance = generate(config);

        // Clustered points lie within 3*decay of some seed; seeds are unknown
        // here, so check against the nearest other clustered point cluster:
        // every clustered customer must be within 3*decay of a point that has
        // many close neighbors. Simpler sufficient check: at least
        // (1 - fraction) * n customers have a neighbor within 3*decay.
        const double radius = 3.0 * config.cluster_decay;
        int close = 0;
        for (int i = 1; i <= config.n; ++i) {
            for (int j = 1; j <= config.n; ++j) {
                if (i == j) {
                    continue;
                }
                const double dx = instance.coords[static_cast<std::size_t>(i)].x -
                                  instance.coords[static_cast<std::size_t>(j)].x;
                const double dy = instance.coords[static_cast<std::size_t>(i)].y -
                                  instance.coords[static_cast<std::size_t>(j)].y;
                if (std::hypot(dx, dy) <= radius) {
                    ++close;
                    break;
                }
            }
        }
        CHECK(close >= static_cast<int>((1.0 - config.random_fraction) * config.n));
    }

    TEST_CASE("pure clustered positioning keeps every customer near a dense region") {
        GeneratorConfig config;
        config.n = 200;
        config.seed = 33;
        config.coord_dist = CoordDist::XType;
        config.customer_pos = CustomerPosition::Clustered;
        config.num_clusters = 4;
        config.cluster_decay = 30.0;
        const Instance instance = generate(config);
        // With 4 clusters of 50 points inside radius 90, the bounding boxes of
        // dense neighborhoods cover everything: each customer needs >= 10
        // neighbors within 2 * 3 * decay (both within 3*decay of the shared seed).
        const double radius = 6.0 * config.cluster_decay;
        for (int i = 1; i <= config.n; ++i) {
            int neighbors = 0;
            for (int j = 1; j <= config.n; ++j) {
                if (i == j) {
                    continue;
                }
                const double dx = instance.coords[static_cast<std::size_t>(i)].x -
                                  instance.coords[static_cast<std::size_t>(j)].x;
                const double dy = instance.coords[static_cast<std::size_t>(i)].y -
                                  instance.coords[static_cast<std::size_t>(j)].y;
                if (std::hypot(dx, dy) <= radius) {
                    ++neighbors;
                }
            }
            CHECK(neighbors >= 10);
        }
    }

    TEST_CASE("capacity from average route size controls the vehicle count") {
        GeneratorConfig config;
        config.n = 100;
        config.seed = 8;
        config.coord_dist = CoordDist::XType;
        config.demand_dist = DemandDist::UniformInt;
        config.demand_lo = 1;
        config.demand_hi = 10;
        config.capacity_rule = CapacityRule::FromAvgRouteSize;
        config.avg_route_size = 10.0;
        const Instance instance = generate(config);
        double sum = 0.0;
        for (const double q : instance.demands) {
            sum += q;
        }
        const double vehicles = std::ceil(sum / instance.capacity);
        CHECK(std::abs(vehicles - config.n / config.avg_route_size) <= 1.0);
    }

    TEST_CASE("capacity rule below the largest demand is a config error") {
        GeneratorConfig config;
        config.n = 10;
        config.demand_dist = DemandDist::UniformInt;
        config.demand_lo = 40;
        config.demand_hi = 90;
        config.capacity_rule = CapacityRule::FromAvgRouteSize;
        config.avg_route_size = 0.5;  // Q ~ half the mean demand
        CHECK_THROWS_AS(generate(config), std::invalid_argument);
    }

    TEST_CASE("config validation") {
        GeneratorConfig config;
        config.n = 0;
        CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
        config.n = 5;
        config.demand_lo = 9;
        config.demand_hi = 3;
        CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
        config.demand_hi = 9;
        config.random_fraction = 1.5;
        CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
    }

    TEST_CASE("parallel and serial batch generation agree") {
        GeneratorConfig config;
        config.n = 40;
        config.seed = 900;
        config.coord_dist = CoordDist::GaussianMixture;
        const auto serial = generate_set_serial(config, 12);
        const auto parallel = generate_set(config, 12);
        REQUIRE(serial.size() == parallel.size());
        for (std::size_t i = 0; i < serial.size(); ++i) {
            CHECK(instances_identical(serial[i], parallel[i]));
        }
    }
}
