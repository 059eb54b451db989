#include "unitk/canon.hpp"

#include "unitk/errors.hpp"
#include "unitk/group.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <span>

namespace unitk::canon {

using perm::Permutation;

std::string Certificate::hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 15]);
    }
    return out;
}

std::string Certificate::short_digest() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4)
        out[static_cast<std::size_t>(i)] = digits[h & 15];
    return out;
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
    // splitmix64 finalizer over the running hash
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return h;
}

/// Ordered partition of the vertex set into contiguous cells of lab.
struct Partition {
    std::vector<std::uint32_t> lab;        // position -> vertex
    std::vector<std::uint32_t> pos;        // vertex -> position
    std::vector<std::uint32_t> cell_of;    // vertex -> start position of its cell
    std::vector<std::uint32_t> cell_size;  // start position -> size (valid at cell starts)
    std::uint32_t cells = 0;

    std::uint32_t n() const { return static_cast<std::uint32_t>(lab.size()); }
    bool discrete() const { return cells == n(); }
};

Partition make_partition(const std::vector<std::vector<std::uint32_t>>& cells, std::uint32_t n) {
    Partition p;
    p.lab.reserve(n);
    p.pos.assign(n, 0);
    p.cell_of.assign(n, 0);
    p.cell_size.assign(n, 0);
    std::vector<char> seen(n, 0);
    for (const auto& c : cells) {
        if (c.empty())
            continue;
        auto start = static_cast<std::uint32_t>(p.lab.size());
        for (auto v : c) {
            if (v >= n || seen[v])
                throw ContractError("cells do not partition the vertex set");
            seen[v] = 1;
            p.pos[v] = static_cast<std::uint32_t>(p.lab.size());
            p.cell_of[v] = start;
            p.lab.push_back(v);
        }
        p.cell_size[start] = static_cast<std::uint32_t>(c.size());
        ++p.cells;
    }
    if (p.lab.size() != n)
        throw ContractError("cells do not cover the vertex set");
    return p;
}

/// Equitable refinement engine with scratch buffers reused across calls.
class Refiner {
public:
    explicit Refiner(const ColoredGraph& g)
        : g_(g), count_(g.n(), 0), cell_touched_(g.n(), 0), in_queue_(g.n(), 0) {}

    /// Refines p until equitable, starting from the given splitter cells. Returns a trace
    /// hash that depends only on label-invariant quantities.
    std::uint64_t refine(Partition& p, const std::vector<std::uint32_t>& splitters) {
        std::uint64_t trace = 0x1234567ULL;
        std::deque<std::uint32_t> queue;
        for (auto s : splitters) {
            if (!in_queue_[s]) {
                in_queue_[s] = 1;
                queue.push_back(s);
            }
        }
        std::vector<std::uint32_t> members;
        while (!queue.empty() && !p.discrete()) {
            auto w = queue.front();
            queue.pop_front();
            in_queue_[w] = 0;
            members.assign(p.lab.begin() + w, p.lab.begin() + w + p.cell_size[w]);

            touched_.clear();
            touched_cells_.clear();
            for (auto v : members) {
                for (auto u : g_.neighbors(v)) {
                    if (count_[u]++ == 0)
                        touched_.push_back(u);
                    auto c = p.cell_of[u];
                    if (!cell_touched_[c]) {
                        cell_touched_[c] = 1;
                        touched_cells_.push_back(c);
                    }
                }
            }
            std::sort(touched_cells_.begin(), touched_cells_.end());
            trace = mix(trace, (static_cast<std::uint64_t>(w) << 32) | touched_cells_.size());
            for (auto c : touched_cells_) {
                cell_touched_[c] = 0;
                split_cell(p, c, queue, trace);
            }
            for (auto u : touched_)
                count_[u] = 0;
        }
        // Drain anything left when the partition became discrete early.
        for (auto s : queue)
            in_queue_[s] = 0;
        return mix(trace, p.cells);
    }

private:
    void split_cell(Partition& p, std::uint32_t start, std::deque<std::uint32_t>& queue, std::uint64_t& trace) {
        const auto size = p.cell_size[start];
        if (size == 1) {
            trace = mix(trace, (static_cast<std::uint64_t>(start) << 32) | count_[p.lab[start]]);
            return;
        }
        auto first = count_[p.lab[start]];
        bool uniform = true;
        for (std::uint32_t i = 1; i < size && uniform; ++i)
            uniform = count_[p.lab[start + i]] == first;
        if (uniform) {
            trace = mix(trace, (static_cast<std::uint64_t>(start) << 32) | first);
            return;
        }

        keyed_.clear();
        for (std::uint32_t i = 0; i < size; ++i) {
            auto v = p.lab[start + i];
            keyed_.emplace_back(count_[v], v);
        }
        std::sort(keyed_.begin(), keyed_.end());

        const bool was_queued = in_queue_[start] != 0;
        pieces_.clear();
        std::uint32_t piece_start = start;
        for (std::uint32_t i = 0; i < size; ++i) {
            auto [cnt, v] = keyed_[i];
            if (i > 0 && cnt != keyed_[i - 1].first) {
                pieces_.push_back(piece_start);
                piece_start = start + i;
            }
            p.lab[start + i] = v;
            p.pos[v] = start + i;
            p.cell_of[v] = piece_start;
        }
        pieces_.push_back(piece_start);
        for (std::size_t k = 0; k < pieces_.size(); ++k) {
            auto s = pieces_[k];
            auto e = k + 1 < pieces_.size() ? pieces_[k + 1] : start + size;
            p.cell_size[s] = e - s;
            trace = mix(trace, (static_cast<std::uint64_t>(s) << 40) ^ (static_cast<std::uint64_t>(count_[p.lab[s]]) << 20) ^
                                   (e - s));
        }
        p.cells += static_cast<std::uint32_t>(pieces_.size() - 1);

        if (was_queued) {
            for (auto s : pieces_)
                enqueue(s, queue);
        } else {
            // The largest piece (first among equals) is implied by the others.
            std::size_t largest = 0;
            for (std::size_t k = 1; k < pieces_.size(); ++k)
                if (p.cell_size[pieces_[k]] > p.cell_size[pieces_[largest]])
                    largest = k;
            for (std::size_t k = 0; k < pieces_.size(); ++k)
                if (k != largest)
                    enqueue(pieces_[k], queue);
        }
    }

    void enqueue(std::uint32_t s, std::deque<std::uint32_t>& queue) {
        if (!in_queue_[s]) {
            in_queue_[s] = 1;
            queue.push_back(s);
        }
    }

    const ColoredGraph& g_;
    std::vector<std::uint32_t> count_;
    std::vector<char> cell_touched_;
    std::vector<char> in_queue_;
    std::vector<std::uint32_t> touched_;
    std::vector<std::uint32_t> touched_cells_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> keyed_;
    std::vector<std::uint32_t> pieces_;
};

std::vector<std::uint32_t> all_cell_starts(const Partition& p) {
    std::vector<std::uint32_t> starts;
    for (std::uint32_t i = 0; i < p.n(); i += p.cell_size[i])
        starts.push_back(i);
    return starts;
}

/// Splits v off the front of its cell. Returns the start of the new singleton.
std::uint32_t individualize(Partition& p, std::uint32_t v) {
    auto start = p.cell_of[v];
    auto size = p.cell_size[start];
    auto at = p.pos[v];
    auto other = p.lab[start];
    std::swap(p.lab[start], p.lab[at]);
    p.pos[v] = start;
    p.pos[other] = at;
    p.cell_size[start] = 1;
    p.cell_size[start + 1] = size - 1;
    for (std::uint32_t i = start + 1; i < start + size; ++i)
        p.cell_of[p.lab[i]] = start + 1;
    ++p.cells;
    return start;
}

/// Start of the branching cell: among non-singleton cells, those non-trivially joined to
/// the most non-singleton cells win, then the smallest, then the first.
std::uint32_t target_cell(const ColoredGraph& g, const Partition& p, std::vector<std::uint32_t>& scratch) {
    scratch.assign(p.n(), 0);
    std::uint32_t best = p.n();
    std::uint32_t best_joins = 0;
    std::vector<std::uint32_t> touched;
    for (std::uint32_t i = 0; i < p.n(); i += p.cell_size[i]) {
        if (p.cell_size[i] == 1)
            continue;
        touched.clear();
        for (auto u : g.neighbors(p.lab[i])) {
            auto c = p.cell_of[u];
            if (scratch[c]++ == 0)
                touched.push_back(c);
        }
        std::uint32_t joins = 0;
        for (auto c : touched) {
            if (p.cell_size[c] > 1 && scratch[c] < p.cell_size[c])
                ++joins;
            scratch[c] = 0;
        }
        if (best == p.n() || joins > best_joins || (joins == best_joins && p.cell_size[i] < p.cell_size[best])) {
            best = i;
            best_joins = joins;
        }
    }
    return best;
}

/// Canonical adjacency of a discrete partition: per position, its degree then the sorted
/// positions of its neighbours.
std::vector<std::uint32_t> leaf_key(const ColoredGraph& g, const Partition& p) {
    std::vector<std::uint32_t> key;
    key.reserve(g.n() + 2 * g.edge_count());
    std::vector<std::uint32_t> row;
    for (std::uint32_t i = 0; i < g.n(); ++i) {
        auto v = p.lab[i];
        row.clear();
        for (auto u : g.neighbors(v))
            row.push_back(p.pos[u]);
        std::sort(row.begin(), row.end());
        key.push_back(static_cast<std::uint32_t>(row.size()));
        key.insert(key.end(), row.begin(), row.end());
    }
    return key;
}

struct Leaf {
    std::vector<std::uint32_t> key;
    std::vector<std::uint32_t> lab;
    std::vector<std::uint64_t> traces;  // per level, root at index 0
    std::vector<std::uint32_t> path;    // individualized vertices, level 1.. as index 0..
};

struct Node {
    Partition part;
    std::uint64_t trace = 0;
    std::vector<std::uint32_t> target;  // candidate children, ascending
    std::size_t next = 0;
    std::vector<std::uint32_t> tried;
    std::uint32_t vertex = 0;  // individualized to reach this node (unused at root)
    bool eq_first = true;
    int cmp_best = 0;
    // Orbit cache for pruning: generators fixing this node's prefix.
    std::size_t gens_seen = 0;
    std::vector<std::uint32_t> orbit_root;
};

class Search {
public:
    Search(const ColoredGraph& g, const CanonOptions& options) : g_(g), options_(options), refiner_(g) {}

    void run() {
        Node root;
        root.part = make_partition(color_partition(g_), g_.n());
        root.trace = refiner_.refine(root.part, all_cell_starts(root.part));
        prepare(root);
        stack_.push_back(std::move(root));
        nodes_ = 1;

        while (!stack_.empty()) {
            Node& node = stack_.back();
            if (node.part.discrete()) {
                on_leaf();
                continue;
            }
            auto w = next_child(node);
            if (!w) {
                stack_.pop_back();
                continue;
            }
            node.tried.push_back(*w);
            if (++nodes_ > options_.node_budget)
                throw ResourceError("canonical labeling exceeded the node budget of " +
                                    std::to_string(options_.node_budget));

            Node child;
            child.part = node.part;
            child.vertex = *w;
            auto s = individualize(child.part, *w);
            child.trace = refiner_.refine(child.part, {s});
            const std::size_t level = stack_.size();

            if (!first_) {
                child.eq_first = true;
                child.cmp_best = 0;
            } else {
                child.eq_first = node.eq_first && level < first_->traces.size() && first_->traces[level] == child.trace;
                child.cmp_best = node.cmp_best;
                if (child.cmp_best == 0) {
                    if (level >= best_->traces.size())
                        child.cmp_best = 1;
                    else if (child.trace != best_->traces[level])
                        child.cmp_best = child.trace > best_->traces[level] ? 1 : -1;
                }
                if (!child.eq_first && child.cmp_best < 0)
                    continue;
            }
            prepare(child);
            stack_.push_back(std::move(child));
        }
    }

    AutResult result() {
        AutResult r;
        r.nodes = nodes_;
        r.generators = generators_;
        const auto n = g_.n();
        std::vector<std::uint32_t> labeling(n);
        for (std::uint32_t i = 0; i < n; ++i)
            labeling[best_->lab[i]] = i;
        r.canonical_labeling = Permutation::from_trusted(std::move(labeling));
        r.certificate = certificate_of(g_, r.canonical_labeling);
        r.order = perm::schreier_sims(n, generators_).order();
        r.orbits = perm::orbits(generators_, n);

        r.search_order = 1;
        const auto& path = first_->path;
        for (std::size_t k = 0; k < path.size(); ++k) {
            std::vector<std::uint32_t> root(n);
            orbit_roots(std::span(path.data(), k), root);
            std::uint64_t size = 0;
            for (std::uint32_t x = 0; x < n; ++x)
                size += root[x] == root[path[k]];
            r.search_order *= size;
        }
        return r;
    }

private:
    void prepare(Node& node) {
        if (node.part.discrete())
            return;
        auto t = target_cell(g_, node.part, scratch_);
        node.target.assign(node.part.lab.begin() + t, node.part.lab.begin() + t + node.part.cell_size[t]);
        std::sort(node.target.begin(), node.target.end());
    }

    std::vector<std::uint32_t> prefix() const {
        std::vector<std::uint32_t> out;
        for (std::size_t i = 1; i < stack_.size(); ++i)
            out.push_back(stack_[i].vertex);
        return out;
    }

    // Union-find roots of the orbits of the generators fixing every vertex in fixed.
    void orbit_roots(std::span<const std::uint32_t> fixed, std::vector<std::uint32_t>& root) const {
        const auto n = g_.n();
        root.resize(n);
        std::iota(root.begin(), root.end(), 0u);
        auto find = [&](std::uint32_t x) {
            while (root[x] != x) {
                root[x] = root[root[x]];
                x = root[x];
            }
            return x;
        };
        for (const auto& gen : generators_) {
            if (!std::all_of(fixed.begin(), fixed.end(), [&](auto v) { return gen[v] == v; }))
                continue;
            for (std::uint32_t x = 0; x < n; ++x) {
                auto a = find(x), b = find(gen[x]);
                if (a != b)
                    root[std::max(a, b)] = std::min(a, b);
            }
        }
        for (std::uint32_t x = 0; x < n; ++x)
            root[x] = find(x);
    }

    std::optional<std::uint32_t> next_child(Node& node) {
        if (node.gens_seen != generators_.size() || node.orbit_root.empty()) {
            orbit_roots(prefix(), node.orbit_root);
            node.gens_seen = generators_.size();
        }
        while (node.next < node.target.size()) {
            auto w = node.target[node.next++];
            bool redundant = std::any_of(node.tried.begin(), node.tried.end(),
                                         [&](auto t) { return node.orbit_root[t] == node.orbit_root[w]; });
            if (!redundant)
                return w;
        }
        return std::nullopt;
    }

    Leaf capture_leaf(std::vector<std::uint32_t> key) const {
        Leaf leaf;
        leaf.key = std::move(key);
        leaf.lab = stack_.back().part.lab;
        for (const auto& nd : stack_)
            leaf.traces.push_back(nd.trace);
        leaf.path = prefix();
        return leaf;
    }

    static std::size_t common_prefix(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        std::size_t m = 0;
        while (m < a.size() && m < b.size() && a[m] == b[m])
            ++m;
        return m;
    }

    void add_automorphism(const std::vector<std::uint32_t>& from_lab, const std::vector<std::uint32_t>& to_lab) {
        std::vector<std::uint32_t> img(g_.n());
        for (std::uint32_t i = 0; i < g_.n(); ++i)
            img[from_lab[i]] = to_lab[i];
        auto gamma = Permutation::from_trusted(std::move(img));
        if (!gamma.is_identity())
            generators_.push_back(std::move(gamma));
    }

    void jump_to(std::size_t level) {
        // Keep nodes 0..level.
        stack_.resize(level + 1);
    }

    void on_leaf() {
        const Node& node = stack_.back();
        auto key = leaf_key(g_, node.part);
        const std::size_t depth = stack_.size();

        if (!first_) {
            first_ = capture_leaf(std::move(key));
            best_ = first_;
            stack_.pop_back();
            return;
        }
        auto path = prefix();
        if (node.eq_first && depth == first_->traces.size() && key == first_->key) {
            add_automorphism(first_->lab, node.part.lab);
            jump_to(common_prefix(path, first_->path));
            return;
        }
        if (node.cmp_best == 0 && depth == best_->traces.size() && key == best_->key) {
            add_automorphism(best_->lab, node.part.lab);
            jump_to(common_prefix(path, best_->path));
            return;
        }
        bool better = node.cmp_best > 0 ||
                      (node.cmp_best == 0 && (depth > best_->traces.size() ||
                                              (depth == best_->traces.size() && key > best_->key)));
        if (better) {
            best_ = capture_leaf(std::move(key));
            // Nodes on the stack now compare equal to the new best path.
            for (auto& nd : stack_)
                nd.cmp_best = 0;
        }
        stack_.pop_back();
    }

    const ColoredGraph& g_;
    CanonOptions options_;
    Refiner refiner_;
    std::vector<Node> stack_;
    std::optional<Leaf> first_;
    std::optional<Leaf> best_;
    std::vector<Permutation> generators_;
    std::uint64_t nodes_ = 0;
    std::vector<std::uint32_t> scratch_;
};

}  // namespace

std::vector<std::vector<std::uint32_t>> color_partition(const ColoredGraph& g) {
    std::vector<std::uint32_t> order(g.n());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return g.color(a) < g.color(b); });
    std::vector<std::vector<std::uint32_t>> cells;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i == 0 || g.color(order[i]) != g.color(order[i - 1]))
            cells.emplace_back();
        cells.back().push_back(order[i]);
    }
    return cells;
}

std::vector<std::vector<std::uint32_t>> refine(const ColoredGraph& g, const std::vector<std::vector<std::uint32_t>>& cells) {
    for (const auto& c : cells)
        for (auto v : c)
            if (v < g.n() && g.color(v) != g.color(c.front()))
                throw ContractError("refine: a cell mixes vertex colors");
    auto p = make_partition(cells, g.n());
    Refiner refiner(g);
    refiner.refine(p, all_cell_starts(p));
    std::vector<std::vector<std::uint32_t>> out;
    for (auto s : all_cell_starts(p))
        out.emplace_back(p.lab.begin() + s, p.lab.begin() + s + p.cell_size[s]);
    return out;
}

AutResult analyze(const ColoredGraph& g, const CanonOptions& options) {
    if (g.n() == 0) {
        AutResult r;
        r.order = 1;
        r.search_order = 1;
        r.certificate = certificate_of(g, Permutation{});
        return r;
    }
    Search search(g, options);
    search.run();
    return search.result();
}

std::pair<Certificate, Permutation> canonical_form(const ColoredGraph& g, const CanonOptions& options) {
    auto r = analyze(g, options);
    return {std::move(r.certificate), std::move(r.canonical_labeling)};
}

std::optional<Permutation> are_isomorphic(const ColoredGraph& g1, const ColoredGraph& g2, const CanonOptions& options) {
    if (g1.n() != g2.n() || g1.edge_count() != g2.edge_count())
        return std::nullopt;
    auto [c1, l1] = canonical_form(g1, options);
    auto [c2, l2] = canonical_form(g2, options);
    if (c1 != c2)
        return std::nullopt;
    if (g1.n() == 0)
        return Permutation{};
    return l1 * l2.inverse();
}

Certificate certificate_of(const ColoredGraph& g, const Permutation& labeling) {
    const auto n = g.n();
    if (labeling.degree() != n)
        throw ShapeError("certificate_of: labeling has wrong degree");
    Certificate c;
    auto put32 = [&](std::uint32_t x) {
        for (int s = 24; s >= 0; s -= 8)
            c.bytes.push_back(static_cast<std::uint8_t>(x >> s));
    };
    put32(n);
    std::vector<std::uint32_t> at(n);
    for (std::uint32_t v = 0; v < n; ++v)
        at[labeling[v]] = v;
    for (std::uint32_t i = 0; i < n; ++i)
        put32(g.color(at[i]));

    const std::uint64_t bits = static_cast<std::uint64_t>(n) * (n - (n ? 1 : 0)) / 2;
    const std::size_t header = c.bytes.size();
    c.bytes.resize(header + (bits + 7) / 8, 0);
    // Bit index of pair (i, j), i < j, in row-major upper-triangle order.
    auto index = [n](std::uint64_t i, std::uint64_t j) { return i * (2 * n - i - 1) / 2 + (j - i - 1); };
    for (std::uint32_t u = 0; u < n; ++u)
        for (auto w : g.neighbors(u)) {
            auto i = labeling[u], j = labeling[w];
            if (i >= j)
                continue;
            auto b = index(i, j);
            c.bytes[header + b / 8] |= static_cast<std::uint8_t>(0x80u >> (b % 8));
        }
    return c;
}

bool is_automorphism(const ColoredGraph& g, const Permutation& p) {
    if (p.degree() != g.n())
        return false;
    for (std::uint32_t u = 0; u < g.n(); ++u) {
        if (g.color(u) != g.color(p[u]))
            return false;
        for (auto w : g.neighbors(u))
            if (!g.adjacent(p[u], p[w]))
                return false;
    }
    return true;
}

}  // namespace unitk::canon
