#pragma once

#include "unitk/bigint.hpp"
#include "unitk/incidence.hpp"
#include "unitk/perm.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace unitk::perm {

struct SchreierSimsOptions {
    /// Points to use first as base points, in order.
    std::vector<std::uint32_t> base_prefix;
    /// Seed of the product-replacement generator driving the randomized phase.
    std::uint64_t seed = 0x5eed5eedULL;
    /// Consecutive trivial sifts that end the randomized phase. The deterministic
    /// verification pass runs regardless, so this only affects speed.
    std::uint32_t random_stop = 32;
};

/// Base and strong generating set with explicit transversals. Immutable once built.
class GroupChain {
public:
    struct Level {
        std::uint32_t base_point = 0;
        std::vector<std::uint32_t> generators;  // indices into strong_generators()
        std::vector<std::uint32_t> orbit;       // orbit of base_point, discovery order
        std::vector<std::int32_t> orbit_index;  // point -> position in orbit, or -1
        std::vector<Permutation> transversal;   // transversal[i] maps base_point to orbit[i]
        std::vector<Permutation> transversal_inverse;
    };

    std::uint32_t degree() const noexcept { return degree_; }
    std::vector<std::uint32_t> base() const;
    std::size_t depth() const noexcept { return levels_.size(); }
    const Level& level(std::size_t i) const { return levels_.at(i); }
    const std::vector<Permutation>& strong_generators() const noexcept { return strong_; }
    /// Strong generators fixing base[0..i) pointwise.
    std::vector<Permutation> level_generators(std::size_t i) const;
    /// Transversal element at level i carrying the base point to x. x must be in the orbit.
    const Permutation& transversal(std::size_t i, std::uint32_t x) const;
    const BigInt& order() const noexcept { return order_; }

    /// Strip g through the chain. Returns the residue and the level at which sifting
    /// stopped (depth() when every level succeeded).
    std::pair<Permutation, std::size_t> sift(const Permutation& g, std::size_t from_level = 0) const;
    bool contains(const Permutation& g) const;

private:
    friend class ChainBuilder;

    std::uint32_t degree_ = 0;
    std::vector<Permutation> strong_;
    std::vector<Level> levels_;
    BigInt order_ = 1;
};

/// Randomized Schreier-Sims followed by a full Schreier-generator verification, so the
/// resulting order is exact. Throws ShapeError on mixed degrees.
GroupChain schreier_sims(std::uint32_t degree, std::span<const Permutation> generators,
                         const SchreierSimsOptions& options = {});
/// Degree taken from the generators; requires at least one.
GroupChain schreier_sims(std::span<const Permutation> generators, const SchreierSimsOptions& options = {});

/// Orbits of <generators> on [0, n): each sorted, ordered by minimum element.
std::vector<std::vector<std::uint32_t>> orbits(std::span<const Permutation> generators, std::uint32_t n);

/// Sifting membership test. Throws ShapeError on degree mismatch.
bool membership(const GroupChain& chain, const Permutation& g);

/// Uniform random element as a product of one random transversal element per level.
Permutation random_element(const GroupChain& chain, std::mt19937_64& rng);
Permutation random_element(const GroupChain& chain, std::uint64_t seed);

/// Order of the setwise stabilizer {g : g(set) = set}, by backtracking over the chain's
/// transversal tree. Independent of the graph canonizer. Throws ResourceError when the
/// group order exceeds max_group_order.
BigInt setwise_stabilizer_oracle(const GroupChain& chain, const PointSet& set,
                                 const BigInt& max_group_order = BigInt(10'000'000));

struct SubgroupSeedConfig {
    std::uint64_t seed = 1;
    /// Random group elements drawn; each contributes one cyclic subgroup of prime order
    /// per prime divisor p <= 17 of its order.
    std::uint32_t random_elements = 48;
    /// Two-generator subgroups built from pairs of cyclic seeds.
    std::uint32_t max_pairs = 64;
};

/// Small subgroups used to seed the orbit-union search. The first entry is always the
/// trivial subgroup (no generators); cyclic subgroups follow in draw order, then pairs
/// ordered by (later index, earlier index). Duplicates are removed by comparing sorted
/// generator images, with each cyclic generator replaced by the lexicographically least
/// generator of its subgroup.
std::vector<std::vector<Permutation>> subgroup_seeds(const GroupChain& chain, const SubgroupSeedConfig& config = {});

}  // namespace unitk::perm
