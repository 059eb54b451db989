#include <doctest.h>

#include "oracles.hpp"
#include "unitk/errors.hpp"
#include "unitk/geometry.hpp"
#include "unitk/search.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace unitk;
using namespace unitk::search;

namespace {

std::multiset<std::uint32_t> size_multiset(const std::vector<std::uint32_t>& sizes, const std::vector<std::uint32_t>& idx) {
    std::multiset<std::uint32_t> m;
    for (auto i : idx)
        m.insert(sizes[i]);
    return m;
}

std::set<canon::Certificate> certificates(const SearchResult& r) {
    std::set<canon::Certificate> out;
    for (const auto& rec : r.records)
        out.insert(rec.certificate);
    return out;
}

SearchConfig small_config() {
    SearchConfig c;
    c.subgroup_budget = 48;
    c.combination_budget = 500;
    c.completion_budget = 5000;
    return c;
}

}  // namespace

TEST_CASE("orbit combinations") {
    auto one = orbit_combinations({65}, 65, 100);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == std::vector<std::uint32_t>{0});

    std::vector<std::uint32_t> sizes{5, 5, 5, 50, 10, 60};
    auto got = orbit_combinations(sizes, 65, 1000);
    auto want = oracle::subset_sums(sizes, 65);
    std::set<std::vector<std::uint32_t>> a(got.begin(), got.end()), b(want.begin(), want.end());
    CHECK(got.size() == a.size());
    CHECK(a == b);
    std::set<std::multiset<std::uint32_t>> shapes;
    for (const auto& c : got)
        shapes.insert(size_multiset(sizes, c));
    CHECK(shapes == std::set<std::multiset<std::uint32_t>>{{5, 60}, {5, 5, 5, 50}, {5, 10, 50}});
    // Largest sizes are tried first.
    CHECK(size_multiset(sizes, got.front()) == std::multiset<std::uint32_t>{5, 60});

    CHECK(orbit_combinations(std::vector<std::uint32_t>(40, 2), 65, 1000).empty());
    CHECK(orbit_combinations(sizes, 65, 0).empty());
    CHECK(orbit_combinations(sizes, 65, 2).size() == 2);
}

TEST_CASE("orbit combinations match subset sums on random sizes") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint32_t> sizes(2 + rng() % 10);
        for (auto& s : sizes)
            s = 1 + static_cast<std::uint32_t>(rng() % 20);
        std::uint32_t target = 1 + static_cast<std::uint32_t>(rng() % 40);
        auto got = orbit_combinations(sizes, target, 1u << 20);
        auto want = oracle::subset_sums(sizes, target);
        std::set<std::vector<std::uint32_t>> a(got.begin(), got.end()), b(want.begin(), want.end());
        CHECK(got.size() == want.size());
        CHECK(a == b);
        CHECK(orbit_combinations(sizes, target, 1u << 20) == got);
    }
    auto ranged = orbit_combinations_in_range({3, 4, 5}, 7, 10, 100);
    for (const auto& c : ranged) {
        std::uint32_t sum = 0;
        for (auto i : c)
            sum += std::vector<std::uint32_t>{3, 4, 5}[i];
        CHECK(sum >= 7);
        CHECK(sum < 10);
    }
    CHECK(ranged.size() == 3);
}

TEST_CASE("completion of partial sets") {
    auto plane = geometry::build_pg2(16);
    auto u = geometry::hermitian_unital(4);

    auto same = complete_partial(plane, u, {}, 1000);
    CHECK(same.complete);
    REQUIRE(same.unitals.size() == 1);
    CHECK(same.unitals[0] == u);

    for (std::size_t drop : {0u, 17u, 64u}) {
        std::vector<std::uint32_t> rest;
        for (std::size_t i = 0; i < u.size(); ++i)
            if (i != drop)
                rest.push_back(u[i]);
        auto done = complete_partial(plane, PointSet(rest), {}, 100000);
        CHECK(std::find(done.unitals.begin(), done.unitals.end(), u) != done.unitals.end());
        for (const auto& w : done.unitals)
            CHECK(unitals::is_unital(plane, w));
    }

    std::vector<std::uint32_t> six(plane.block(0).begin(), plane.block(0).begin() + 6);
    CHECK_THROWS_AS(complete_partial(plane, PointSet(six), {}, 1000), ContractError);
    CHECK_THROWS_AS(complete_partial(plane, PointSet{1}, PointSet{1}, 1000), ContractError);

    auto starved = complete_partial(plane, PointSet{}, {}, 50);
    CHECK_FALSE(starved.complete);
    CHECK(starved.nodes <= 50);
}

TEST_CASE("PG(2,4) exhaustive search equals brute force") {
    auto plane = geometry::build_pg2(4);
    auto chain = collineation_chain(plane);
    CHECK(chain.order() == 120960);

    SearchConfig config;
    config.exhaustive = true;
    config.completion_budget = 1'000'000;
    auto r = find_unitals(plane, chain, config);
    CHECK(r.stats.completions_incomplete == 0);
    CHECK(r.stats.distinct_sets == 280);

    auto brute = oracle::brute_force_unitals(plane);
    CHECK(brute.size() == 280);
    auto classes = unitals::classify_nonisomorphic(plane, brute);
    std::set<canon::Certificate> want;
    for (const auto& c : classes)
        want.insert(c.certificate);
    CHECK(certificates(r) == want);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].stabilizer_order == 432);
    CHECK(r.records[0].source == "search class 1");
}

TEST_CASE("PG(2,4) orbit pipeline is sound") {
    auto plane = geometry::build_pg2(4);
    auto chain = collineation_chain(plane);
    SearchConfig config;
    config.completion_threshold = 6;
    auto r = find_unitals(plane, chain, config);
    CHECK(r.stats.subgroups_tried > 0);
    REQUIRE(r.records.size() == 1);
    for (const auto& rec : r.records) {
        CHECK(unitals::is_unital(plane, rec.points));
        CHECK(chain.order() % rec.stabilizer_order == 0);
    }
}

TEST_CASE("zero subgroup budget") {
    auto plane = geometry::build_pg2(16);
    auto chain = collineation_chain(plane);
    SearchConfig config;
    config.subgroup_budget = 0;
    auto r = find_unitals(plane, chain, config);
    CHECK(r.records.empty());
    CHECK(r.stats.subgroups_tried == 0);
    auto text = stats_sidecar(config, r.stats);
    CHECK(text.find("subgroup_budget=0\n") != std::string::npos);
    CHECK(text.find("classes=0\n") != std::string::npos);
    CHECK(text.find("wall_seconds") == std::string::npos);
    CHECK(stats_sidecar(config, r.stats, true).find("wall_seconds=") != std::string::npos);
}

TEST_CASE("PG(2,16) search: sound, deterministic, thread independent") {
    auto plane = geometry::build_pg2(16);
    auto chain = collineation_chain(plane);
    CHECK(chain.order() == BigInt("17108582400"));
    auto config = small_config();
    auto a = find_unitals(plane, chain, config);
    config.threads = 3;
    auto b = find_unitals(plane, chain, config);

    REQUIRE_FALSE(a.records.empty());
    CHECK(a.records.size() == a.stats.classes);
    CHECK(a.records == b.records);
    CHECK(stats_sidecar(small_config(), a.stats) == stats_sidecar(small_config(), b.stats));
    CHECK(certificates(a).size() == a.records.size());
    for (const auto& rec : a.records) {
        CHECK(unitals::is_unital(plane, rec.points));
        auto ts = unitals::tangent_secant_counts(plane, rec.points);
        CHECK(ts.tangents == 65);
        CHECK(ts.secants == 208);
        CHECK(BigInt("17108582400") % rec.stabilizer_order == 0);
    }
    CHECK(a.records.front().stabilizer_order == 249600);
}

TEST_CASE("search budgets are monotone") {
    auto plane = geometry::build_pg2(16);
    auto chain = collineation_chain(plane);
    auto small = small_config();
    small.subgroup_budget = 40;
    small.combination_budget = 100;
    small.completion_budget = 1000;
    auto big = small_config();
    auto ca = certificates(find_unitals(plane, chain, small));
    auto cb = certificates(find_unitals(plane, chain, big));
    CHECK(std::includes(cb.begin(), cb.end(), ca.begin(), ca.end()));
}

TEST_CASE("search classes survive relabeling the plane") {
    auto plane = geometry::build_pg2(4);
    std::mt19937_64 rng(11);
    auto p = oracle::random_permutation(plane.v(), rng);
    std::vector<std::uint32_t> perm(p.images().begin(), p.images().end());
    auto moved = relabel(plane, perm);
    SearchConfig config;
    config.completion_threshold = 6;
    auto a = find_unitals(plane, collineation_chain(plane), config);
    auto b = find_unitals(moved, collineation_chain(moved), config);
    CHECK(certificates(a) == certificates(b));
    CHECK_FALSE(certificates(a).empty());
}
