#include <doctest.h>

#include "oracles.hpp"
#include "unitk/errors.hpp"
#include "unitk/geometry.hpp"
#include "unitk/group.hpp"

using namespace unitk;
using namespace unitk::perm;

TEST_CASE("symmetric and alternating groups") {
    for (std::uint32_t n = 2; n <= 9; ++n) {
        std::vector<Permutation> sym{Permutation::from_cycles(n, {{0, 1}})};
        std::vector<std::uint32_t> cyc(n);
        std::iota(cyc.begin(), cyc.end(), 0u);
        sym.push_back(Permutation::from_cycles(n, {cyc}));
        BigInt fact = 1;
        for (std::uint32_t i = 2; i <= n; ++i)
            fact *= i;
        CHECK(schreier_sims(sym).order() == fact);
        if (n >= 3) {
            std::vector<Permutation> alt;
            for (std::uint32_t i = 2; i < n; ++i)
                alt.push_back(Permutation::from_cycles(n, {{0, 1, i}}));
            CHECK(schreier_sims(alt).order() == fact / 2);
        }
    }
}

TEST_CASE("membership and random elements") {
    std::vector<Permutation> gens{Permutation::from_cycles(8, {{0, 1, 2, 3}, {4, 5, 6, 7}}),
                                  Permutation::from_cycles(8, {{0, 4}, {1, 7}, {2, 6}, {3, 5}})};
    auto chain = schreier_sims(gens);
    CHECK(chain.order() == 8);  // dihedral
    CHECK(membership(chain, gens[0] * gens[1]));
    CHECK_FALSE(membership(chain, Permutation::from_cycles(8, {{0, 1}})));
    CHECK_THROWS_AS(membership(chain, Permutation::identity(3)), ShapeError);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i)
        CHECK(membership(chain, random_element(chain, rng)));
    CHECK(random_element(chain, 11) == random_element(chain, 11));
}

TEST_CASE("orbits") {
    std::vector<Permutation> gens{Permutation::from_cycles(6, {{0, 2}, {3, 5}})};
    auto o = orbits(gens, 6);
    CHECK(o == std::vector<std::vector<std::uint32_t>>{{0, 2}, {1}, {3, 5}, {4}});
}

TEST_CASE("setwise stabilizer oracle agrees with brute force") {
    // S5 acting on 5 points: stabilizer of a 2-set has order 2! * 3! = 12.
    std::vector<Permutation> gens{Permutation::from_cycles(5, {{0, 1}}), Permutation::from_cycles(5, {{0, 1, 2, 3, 4}})};
    auto chain = schreier_sims(gens);
    CHECK(setwise_stabilizer_oracle(chain, PointSet{1, 3}) == 12);
    CHECK(setwise_stabilizer_oracle(chain, PointSet{}) == 120);
    CHECK_THROWS_AS(setwise_stabilizer_oracle(chain, PointSet{0}, BigInt(10)), ResourceError);
}

TEST_CASE("subgroup seeds") {
    std::vector<Permutation> gens{Permutation::from_cycles(6, {{0, 1}}), Permutation::from_cycles(6, {{0, 1, 2, 3, 4, 5}})};
    auto chain = schreier_sims(gens);
    SubgroupSeedConfig cfg;
    cfg.random_elements = 12;
    cfg.max_pairs = 10;
    auto seeds = subgroup_seeds(chain, cfg);
    REQUIRE(!seeds.empty());
    CHECK(seeds.front().empty());
    for (std::size_t i = 1; i < seeds.size(); ++i) {
        for (const auto& g : seeds[i])
            CHECK(membership(chain, g));
    }
    CHECK(subgroup_seeds(chain, cfg) == seeds);
}
