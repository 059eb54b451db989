#include <doctest.h>

#include "oracles.hpp"
#include "unitk/canon.hpp"
#include "unitk/errors.hpp"
#include "unitk/geometry.hpp"
#include "unitk/group.hpp"

using namespace unitk;
using namespace unitk::canon;

namespace {

ColoredGraph cycle(std::uint32_t n) {
    ColoredGraph g(n);
    for (std::uint32_t i = 0; i < n; ++i)
        g.add_edge(i, (i + 1) % n);
    return g;
}

ColoredGraph petersen() {
    ColoredGraph g(10);
    for (std::uint32_t i = 0; i < 5; ++i) {
        g.add_edge(i, (i + 1) % 5);
        g.add_edge(i, i + 5);
        g.add_edge(5 + i, 5 + (i + 2) % 5);
    }
    return g;
}

ColoredGraph random_graph(std::uint32_t n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    ColoredGraph g(n);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (coin(rng))
                g.add_edge(i, j);
    return g;
}

}  // namespace

TEST_CASE("refinement yields equitable partitions") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        auto g = random_graph(16, 0.3, rng);
        auto cells = refine(g, color_partition(g));
        CHECK(oracle::is_equitable(g, cells));
    }
    auto p = petersen();
    CHECK(refine(p, color_partition(p)).size() == 1);
    ColoredGraph mixed(2);
    mixed.set_color(1, 1);
    CHECK_THROWS_AS(refine(mixed, {{0, 1}}), ContractError);
    CHECK_THROWS_AS(refine(mixed, {{0}}), ContractError);
}

TEST_CASE("automorphism group orders match a backtracking count") {
    CHECK(analyze(cycle(7)).order == 14);
    CHECK(analyze(petersen()).order == 120);
    CHECK(analyze(ColoredGraph(5)).order == 120);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 30; ++t) {
        auto g = random_graph(9, t % 2 ? 0.5 : 0.2, rng);
        if (t % 3 == 0)
            g.set_color(t % 9, 1);
        auto r = analyze(g);
        CHECK(r.order == oracle::count_automorphisms(g));
        CHECK(r.search_order == r.order);
        for (const auto& gen : r.generators)
            CHECK(is_automorphism(g, gen));
    }
}

TEST_CASE("certificates are invariant under relabeling") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 30; ++t) {
        auto g = random_graph(14, 0.35, rng);
        g.set_color(t % 14, 2);
        auto perm = oracle::random_permutation(14, rng);
        auto h = oracle::relabel(g, perm);
        auto [cg, lg] = canonical_form(g);
        auto [ch, lh] = canonical_form(h);
        CHECK(cg == ch);
        CHECK(certificate_of(g, lg) == cg);
        auto iso = are_isomorphic(g, h);
        REQUIRE(iso);
        CHECK(oracle::relabel(g, *iso) == h);
    }
}

TEST_CASE("non-isomorphic graphs get distinct certificates") {
    ColoredGraph path(4);
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    path.add_edge(2, 3);
    ColoredGraph star(4);
    star.add_edge(0, 1);
    star.add_edge(0, 2);
    star.add_edge(0, 3);
    CHECK(canonical_form(path).first != canonical_form(star).first);
    CHECK_FALSE(are_isomorphic(path, star));
    // Two 3-regular graphs on 6 vertices: K33 and the prism.
    ColoredGraph k33(6), prism(6);
    for (std::uint32_t i = 0; i < 3; ++i)
        for (std::uint32_t j = 3; j < 6; ++j)
            k33.add_edge(i, j);
    for (std::uint32_t i = 0; i < 3; ++i) {
        prism.add_edge(i, (i + 1) % 3);
        prism.add_edge(3 + i, 3 + (i + 1) % 3);
        prism.add_edge(i, i + 3);
    }
    CHECK_FALSE(are_isomorphic(k33, prism));
    CHECK(analyze(k33).order == 72);
    CHECK(analyze(prism).order == 12);
}

TEST_CASE("certificate byte layout") {
    ColoredGraph g(3);
    g.add_edge(0, 2);
    g.set_color(1, 5);
    auto c = certificate_of(g, perm::Permutation::identity(3));
    std::vector<std::uint8_t> expected{0, 0, 0, 3, 0, 0, 0, 0, 0, 0, 0, 5, 0, 0, 0, 0, 0b01000000};
    CHECK(c.bytes == expected);
}

TEST_CASE("projective plane incidence graphs") {
    // |PGammaL(3,q)| times 2 for the polarity when colors are shared.
    struct Case {
        std::uint32_t q;
        std::uint64_t collineations;
    };
    for (auto c : {Case{2, 168}, Case{3, 5616}, Case{4, 120960}}) {
        auto plane = geometry::build_pg2(c.q);
        CHECK(analyze(to_incidence_graph(plane)).order == c.collineations);
        auto sd = to_incidence_graph(plane, std::nullopt, Coloring::self_dual);
        auto r = analyze(sd);
        CHECK(r.order == 2 * c.collineations);
        CHECK(r.search_order == r.order);
    }
}

TEST_CASE("node budget") {
    CanonOptions tight;
    tight.node_budget = 2;
    CHECK_THROWS_AS(analyze(petersen(), tight), ResourceError);
}
