#include "unitk/graph.hpp"

#include "unitk/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace unitk {

ColoredGraph::ColoredGraph(std::uint32_t n)
    : n_(n), words_((n + 63u) / 64u), rows_(words_ * n, 0), adj_(n), colors_(n, 0) {}

void ColoredGraph::add_edge(std::uint32_t u, std::uint32_t v) {
    if (u >= n_ || v >= n_)
        throw BoundsError("edge " + std::to_string(u) + "-" + std::to_string(v) + " out of range for n=" +
                          std::to_string(n_));
    if (u == v)
        throw ContractError("self-loop at vertex " + std::to_string(u));
    if (adjacent(u, v))
        return;
    rows_[static_cast<std::size_t>(u) * words_ + (v >> 6)] |= std::uint64_t{1} << (v & 63u);
    rows_[static_cast<std::size_t>(v) * words_ + (u >> 6)] |= std::uint64_t{1} << (u & 63u);
    adj_[u].insert(std::upper_bound(adj_[u].begin(), adj_[u].end(), v), v);
    adj_[v].insert(std::upper_bound(adj_[v].begin(), adj_[v].end(), u), u);
    ++edges_;
}

void ColoredGraph::set_color(std::uint32_t v, std::uint32_t c) {
    if (v >= n_)
        throw BoundsError("vertex " + std::to_string(v) + " out of range");
    colors_[v] = c;
}

void ColoredGraph::compact_colors() {
    std::map<std::uint32_t, std::uint32_t> remap;
    for (auto c : colors_)
        remap.emplace(c, 0);
    std::uint32_t next = 0;
    for (auto& [_, id] : remap)
        id = next++;
    for (auto& c : colors_)
        c = remap[c];
}

std::uint32_t ColoredGraph::color_count() const {
    if (colors_.empty())
        return 0;
    std::vector<std::uint32_t> sorted = colors_;
    std::sort(sorted.begin(), sorted.end());
    return static_cast<std::uint32_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

ColoredGraph ColoredGraph::relabeled(std::span<const std::uint32_t> perm) const {
    if (perm.size() != n_)
        throw ShapeError("relabel: permutation has wrong degree");
    ColoredGraph out(n_);
    for (std::uint32_t u = 0; u < n_; ++u) {
        out.colors_[perm[u]] = colors_[u];
        for (auto v : adj_[u])
            if (u < v)
                out.add_edge(perm[u], perm[v]);
    }
    return out;
}

ColoredGraph ColoredGraph::uncolored() const {
    ColoredGraph out = *this;
    std::fill(out.colors_.begin(), out.colors_.end(), 0);
    return out;
}

ColoredGraph to_incidence_graph(const IncidenceStructure& s, const std::optional<PointSet>& marked, Coloring coloring) {
    const std::uint32_t v = s.v();
    ColoredGraph g(v + s.b());
    for (std::uint32_t j = 0; j < s.b(); ++j)
        for (auto p : s.block(j))
            g.add_edge(p, v + j);

    std::vector<char> is_marked(v, 0);
    if (marked) {
        for (auto p : *marked) {
            if (p >= v)
                throw BoundsError("marked point " + std::to_string(p) + " out of range (v=" + std::to_string(v) + ")");
            is_marked[p] = 1;
        }
    }
    const bool has_mark = marked.has_value();
    for (std::uint32_t p = 0; p < v; ++p)
        g.set_color(p, is_marked[p] ? 1u : 0u);
    const std::uint32_t block_color = coloring == Coloring::self_dual ? 0u : (has_mark ? 2u : 1u);
    for (std::uint32_t j = 0; j < s.b(); ++j)
        g.set_color(v + j, block_color);
    // An empty marking under point_block still reserves color 2 for blocks; keep ids contiguous.
    g.compact_colors();
    return g;
}

IncidenceStructure incidence_from_bipartite(const ColoredGraph& g, std::string name) {
    const std::uint32_t n = g.n();
    if (n == 0)
        throw ShapeError("empty graph");
    std::vector<int> side(n, -1);
    std::deque<std::uint32_t> queue{0};
    side[0] = 0;
    while (!queue.empty()) {
        auto u = queue.front();
        queue.pop_front();
        for (auto w : g.neighbors(u)) {
            if (side[w] < 0) {
                side[w] = 1 - side[u];
                queue.push_back(w);
            } else if (side[w] == side[u]) {
                throw ShapeError("graph is not bipartite");
            }
        }
    }
    if (std::count(side.begin(), side.end(), -1) != 0)
        throw ShapeError("graph is not connected");
    std::vector<std::uint32_t> index(n);
    std::uint32_t points = 0, blocks = 0;
    for (std::uint32_t u = 0; u < n; ++u)
        index[u] = side[u] == 0 ? points++ : blocks++;
    std::vector<std::vector<std::uint32_t>> blk(blocks);
    for (std::uint32_t u = 0; u < n; ++u)
        if (side[u] == 1)
            for (auto w : g.neighbors(u))
                blk[index[u]].push_back(index[w]);
    return IncidenceStructure(points, std::move(blk), std::move(name));
}

}  // namespace unitk
