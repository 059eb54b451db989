#pragma once

#include "unitk/incidence.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace unitk {

/// Simple undirected vertex-colored graph. Adjacency is kept both as bitset rows (for
/// O(1) tests) and as sorted neighbour lists (for refinement).
class ColoredGraph {
public:
    ColoredGraph() = default;
    explicit ColoredGraph(std::uint32_t n);

    std::uint32_t n() const noexcept { return n_; }

    /// Throws BoundsError for out-of-range vertices and ContractError for loops.
    /// Adding an existing edge is a no-op.
    void add_edge(std::uint32_t u, std::uint32_t v);
    bool adjacent(std::uint32_t u, std::uint32_t v) const noexcept {
        return (rows_[static_cast<std::size_t>(u) * words_ + (v >> 6)] >> (v & 63u)) & 1u;
    }
    std::span<const std::uint32_t> neighbors(std::uint32_t v) const { return adj_[v]; }
    std::uint32_t degree(std::uint32_t v) const { return static_cast<std::uint32_t>(adj_[v].size()); }
    std::size_t edge_count() const noexcept { return edges_; }

    std::uint32_t color(std::uint32_t v) const { return colors_[v]; }
    const std::vector<std::uint32_t>& colors() const noexcept { return colors_; }
    void set_color(std::uint32_t v, std::uint32_t c);
    /// Renumber colors to 0..k-1 preserving their relative order.
    void compact_colors();
    std::uint32_t color_count() const;

    /// Graph with vertex v renamed perm[v]; colors travel with their vertices.
    ColoredGraph relabeled(std::span<const std::uint32_t> perm) const;

    /// Same adjacency, every vertex color 0.
    ColoredGraph uncolored() const;

    bool same_adjacency(const ColoredGraph& other) const { return n_ == other.n_ && rows_ == other.rows_; }
    friend bool operator==(const ColoredGraph& a, const ColoredGraph& b) {
        return a.n_ == b.n_ && a.rows_ == b.rows_ && a.colors_ == b.colors_;
    }

private:
    std::uint32_t n_ = 0;
    std::size_t words_ = 0;
    std::size_t edges_ = 0;
    std::vector<std::uint64_t> rows_;
    std::vector<std::vector<std::uint32_t>> adj_;
    std::vector<std::uint32_t> colors_;
};

/// How the incidence graph's vertices are colored.
enum class Coloring {
    /// Points and blocks get distinct colors, so no automorphism can exchange them.
    point_block,
    /// Points and blocks share a color, so dualities are admitted (marked points still differ).
    self_dual,
};

/// Points are vertices 0..v-1, blocks v..v+b-1, point i adjacent to block j iff i in blocks[j].
/// point_block coloring: unmarked points 0, marked points 1, blocks 2 (without a marking:
/// points 0, blocks 1). self_dual coloring: unmarked points and blocks 0, marked points 1.
/// Throws BoundsError if a marked index is >= v.
ColoredGraph to_incidence_graph(const IncidenceStructure& s, const std::optional<PointSet>& marked = std::nullopt,
                                Coloring coloring = Coloring::point_block);

/// Recover a plane from a connected bipartite graph. Points are the side containing vertex
/// 0, numbered by ascending vertex index; blocks likewise on the other side.
/// Throws ShapeError if the graph is not connected and bipartite.
IncidenceStructure incidence_from_bipartite(const ColoredGraph& g, std::string name = {});

}  // namespace unitk
