#pragma once

#include "unitk/canon.hpp"
#include "unitk/graph.hpp"
#include "unitk/group.hpp"
#include "unitk/incidence.hpp"
#include "unitk/unitals.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace unitk::search {

struct SearchConfig {
    std::uint64_t seed = 1;
    /// Subgroups tried, taken in order from subgroup_seeds (the trivial group first).
    std::uint32_t subgroup_budget = 48;
    /// Orbit combinations emitted per subgroup (exact and partial counted separately).
    std::uint64_t combination_budget = 5'000;
    /// Completion search-tree nodes per subgroup, shared by its completion calls (the
    /// single call in exhaustive mode).
    std::uint64_t completion_budget = 50'000;
    /// Wall-clock limit in seconds; 0 means none. Hitting it makes the result depend on
    /// machine speed, which the stats record.
    double time_budget = 0;
    /// Unital size; 0 means q^3+1 for the plane.
    std::uint32_t target_size = 0;
    /// Orbit unions of at least this many points (and fewer than target) go to completion.
    std::uint32_t completion_threshold = 45;
    /// Run completion from the empty set instead of the orbit pipeline.
    bool exhaustive = false;
    unsigned threads = 1;
    std::uint32_t random_elements = 48;
    std::uint32_t max_pairs = 64;
    Coloring coloring = Coloring::point_block;
};

struct SearchStats {
    std::uint64_t subgroups_available = 0;
    std::uint64_t subgroups_tried = 0;
    std::uint64_t exact_combinations = 0;
    std::uint64_t partial_combinations = 0;
    std::uint64_t combination_nodes = 0;
    std::uint64_t pruned_combinations = 0;
    std::uint64_t candidates_tested = 0;
    std::uint64_t completion_calls = 0;
    std::uint64_t completion_nodes = 0;
    std::uint64_t completions_incomplete = 0;
    std::uint64_t combination_budget_hits = 0;
    /// Subgroups whose shared completion budget ran out before their partial unions did.
    std::uint64_t completion_budget_hits = 0;
    std::uint64_t unitals_found = 0;
    std::uint64_t distinct_sets = 0;
    std::uint64_t classes = 0;
    bool time_budget_hit = false;
    double wall_seconds = 0;
};

struct SearchResult {
    /// One record per isomorphism class: the lexicographically smallest set found, sorted
    /// by (stabilizer order, certificate).
    std::vector<unitals::UnitalRecord> records;
    SearchStats stats;
};

/// Index subsets of sizes summing exactly to target, at most budget of them. Items are
/// visited by size descending (ties by index), include before exclude; a subset-sum
/// table rules out dead branches. Each subset is returned in ascending index order.
std::vector<std::vector<std::uint32_t>> orbit_combinations(const std::vector<std::uint32_t>& sizes, std::uint32_t target,
                                                           std::uint64_t budget);

/// As orbit_combinations, for sums in [low, high).
std::vector<std::vector<std::uint32_t>> orbit_combinations_in_range(const std::vector<std::uint32_t>& sizes,
                                                                    std::uint32_t low, std::uint32_t high,
                                                                    std::uint64_t budget);

struct Completion {
    std::vector<PointSet> unitals;
    /// False when the node budget ran out first.
    bool complete = true;
    std::uint64_t nodes = 0;
};

/// All unitals containing partial and avoiding forbidden, by include/exclude branching on
/// the lowest undecided point. Pruning: a line holding q+1 chosen points excludes its other
/// points; a line with at least two chosen points must still be able to reach q+1; every
/// line without chosen points needs an undecided point; the size must stay reachable.
/// Throws ContractError if a line already meets partial in more than q+1 points or the
/// two sets overlap.
Completion complete_partial(const IncidenceStructure& plane, const PointSet& partial, const PointSet& forbidden,
                            std::uint64_t budget);

/// Point action of the collineation group (two-colored incidence graph automorphisms).
perm::GroupChain collineation_chain(const IncidenceStructure& plane, const canon::CanonOptions& options = {});

/// Orbit-union pipeline: subgroup seeds, point orbits, exact and partial orbit unions,
/// completion, unital filter, certificate dedup. Deterministic for a fixed config unless
/// the time budget is hit.
SearchResult find_unitals(const IncidenceStructure& plane, const perm::GroupChain& chain, const SearchConfig& config);

/// key=value lines describing the run; timing only when asked for.
std::string stats_sidecar(const SearchConfig& config, const SearchStats& stats, bool include_timing = false);

}  // namespace unitk::search
