#pragma once

#include "unitk/bigint.hpp"
#include "unitk/graph.hpp"
#include "unitk/perm.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace unitk::canon {

/// Canonical encoding of a colored graph. Byte layout:
///   n as 4-byte big-endian,
///   n colors (canonical vertex order) as 4-byte big-endian each,
///   upper-triangle adjacency bits, row-major ((0,1), (0,2), ..., (1,2), ...),
///   packed most-significant bit first, last byte zero-padded.
/// Equal certificates <=> isomorphic colored graphs.
struct Certificate {
    std::vector<std::uint8_t> bytes;

    std::string hex() const;
    /// 16 hex digits of a 64-bit FNV-1a digest, for display only.
    std::string short_digest() const;

    friend bool operator==(const Certificate&, const Certificate&) = default;
    friend auto operator<=>(const Certificate&, const Certificate&) = default;
};

struct CanonOptions {
    /// Ceiling on search-tree nodes before a ResourceError.
    std::uint64_t node_budget = 100'000'000;
};

struct AutResult {
    std::vector<perm::Permutation> generators;
    /// Exact group order from Schreier-Sims on the generators.
    BigInt order;
    std::vector<std::vector<std::uint32_t>> orbits;
    /// canonical_labeling[v] is the canonical position of vertex v.
    perm::Permutation canonical_labeling;
    Certificate certificate;
    /// Product of first-path orbit sizes; equals order when the search is complete.
    BigInt search_order;
    std::uint64_t nodes = 0;
};

/// Coarsest equitable refinement of an ordered partition. Cells are split by neighbour
/// counts, pieces ordered by ascending count. Throws ContractError if a cell mixes
/// colors or the cells do not partition the vertex set.
std::vector<std::vector<std::uint32_t>> refine(const ColoredGraph& g, const std::vector<std::vector<std::uint32_t>>& cells);

/// Cells of equal color, ordered by color id.
std::vector<std::vector<std::uint32_t>> color_partition(const ColoredGraph& g);

/// Automorphism group and canonical labeling in one individualization-refinement search.
AutResult analyze(const ColoredGraph& g, const CanonOptions& options = {});

inline AutResult automorphism_group(const ColoredGraph& g, const CanonOptions& options = {}) { return analyze(g, options); }

std::pair<Certificate, perm::Permutation> canonical_form(const ColoredGraph& g, const CanonOptions& options = {});

/// A color- and adjacency-preserving bijection g1 -> g2 (as vertex images), if one exists.
std::optional<perm::Permutation> are_isomorphic(const ColoredGraph& g1, const ColoredGraph& g2,
                                                const CanonOptions& options = {});

/// Certificate of g under a given labeling (labeling[v] = new index of v).
Certificate certificate_of(const ColoredGraph& g, const perm::Permutation& labeling);

/// True when p preserves colors and adjacency of g.
bool is_automorphism(const ColoredGraph& g, const perm::Permutation& p);

}  // namespace unitk::canon
