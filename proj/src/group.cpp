#include "unitk/group.hpp"

#include "unitk/errors.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace unitk::perm {

namespace {

struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(std::uint32_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

std::vector<std::uint32_t> GroupChain::base() const {
    std::vector<std::uint32_t> b;
    for (const auto& l : levels_)
        b.push_back(l.base_point);
    return b;
}

std::vector<Permutation> GroupChain::level_generators(std::size_t i) const {
    std::vector<Permutation> out;
    for (auto idx : levels_.at(i).generators)
        out.push_back(strong_[idx]);
    return out;
}

const Permutation& GroupChain::transversal(std::size_t i, std::uint32_t x) const {
    const auto& l = levels_.at(i);
    auto idx = l.orbit_index.at(x);
    if (idx < 0)
        throw ContractError("point not in the basic orbit");
    return l.transversal[static_cast<std::size_t>(idx)];
}

std::pair<Permutation, std::size_t> GroupChain::sift(const Permutation& g, std::size_t from_level) const {
    if (g.degree() != degree_)
        throw ShapeError("sift: degree mismatch");
    Permutation h = g;
    for (std::size_t i = from_level; i < levels_.size(); ++i) {
        const auto& l = levels_[i];
        auto idx = l.orbit_index[h[l.base_point]];
        if (idx < 0)
            return {std::move(h), i};
        h = h * l.transversal_inverse[static_cast<std::size_t>(idx)];
    }
    return {std::move(h), levels_.size()};
}

bool GroupChain::contains(const Permutation& g) const {
    auto [residue, level] = sift(g);
    return level == levels_.size() && residue.is_identity();
}

class ChainBuilder {
public:
    ChainBuilder(std::uint32_t n, const SchreierSimsOptions& options) : options_(options) { chain_.degree_ = n; }

    GroupChain build(std::span<const Permutation> generators) {
        const auto n = chain_.degree_;
        for (auto b : options_.base_prefix) {
            if (b >= n)
                throw BoundsError("base point out of range");
            if (std::none_of(chain_.levels_.begin(), chain_.levels_.end(),
                             [b](const auto& l) { return l.base_point == b; }))
                add_level(b);
        }
        std::set<std::vector<std::uint32_t>> seen;
        for (const auto& g : generators) {
            if (g.is_identity() || !seen.insert(g.images()).second)
                continue;
            add_strong(g);
        }
        for (std::size_t i = 0; i < chain_.levels_.size(); ++i)
            rebuild_level(i);

        if (!chain_.strong_.empty()) {
            random_phase();
            verify_phase();
        }
        // Drop trailing levels with trivial orbits that came only from the base prefix.
        while (!chain_.levels_.empty() && chain_.levels_.back().orbit.size() == 1 &&
               chain_.levels_.back().generators.empty())
            chain_.levels_.pop_back();
        chain_.order_ = 1;
        for (const auto& l : chain_.levels_)
            chain_.order_ *= l.orbit.size();
        return std::move(chain_);
    }

private:
    void add_level(std::uint32_t b) {
        GroupChain::Level l;
        l.base_point = b;
        chain_.levels_.push_back(std::move(l));
    }

    // First level whose base point g moves, or depth() if g fixes the whole base.
    std::size_t first_moved_level(const Permutation& g) const {
        for (std::size_t i = 0; i < chain_.levels_.size(); ++i)
            if (!g.fixes(chain_.levels_[i].base_point))
                return i;
        return chain_.levels_.size();
    }

    // New base point for a generator that fixes the current base: the point it moves that
    // lies in the largest orbit of the last-level generators together with g.
    std::uint32_t choose_base_point(const Permutation& g) const {
        const auto n = chain_.degree_;
        UnionFind uf(n);
        auto merge = [&](const Permutation& p) {
            for (std::uint32_t x = 0; x < n; ++x)
                uf.unite(x, p[x]);
        };
        merge(g);
        for (const auto& s : chain_.strong_)
            if (first_moved_level(s) == chain_.levels_.size())
                merge(s);
        std::vector<std::uint32_t> size(n, 0);
        for (std::uint32_t x = 0; x < n; ++x)
            ++size[uf.find(x)];
        std::uint32_t best = n;
        for (std::uint32_t x = 0; x < n; ++x)
            if (!g.fixes(x) && (best == n || size[uf.find(x)] > size[uf.find(best)]))
                best = x;
        return best;
    }

    // Registers g as a strong generator, extending the base if needed. Returns the deepest
    // level index g belongs to.
    std::size_t add_strong(const Permutation& g) {
        std::size_t moved = first_moved_level(g);
        if (moved == chain_.levels_.size()) {
            add_level(choose_base_point(g));
        }
        auto idx = static_cast<std::uint32_t>(chain_.strong_.size());
        chain_.strong_.push_back(g);
        for (std::size_t i = 0; i <= moved; ++i)
            chain_.levels_[i].generators.push_back(idx);
        return moved;
    }

    void rebuild_level(std::size_t i) {
        auto& l = chain_.levels_[i];
        const auto n = chain_.degree_;
        l.orbit.assign(1, l.base_point);
        l.orbit_index.assign(n, -1);
        l.orbit_index[l.base_point] = 0;
        l.transversal.assign(1, Permutation::identity(n));
        l.transversal_inverse.assign(1, Permutation::identity(n));
        for (std::size_t k = 0; k < l.orbit.size(); ++k) {
            auto x = l.orbit[k];
            for (auto gi : l.generators) {
                const auto& s = chain_.strong_[gi];
                auto y = s[x];
                if (l.orbit_index[y] >= 0)
                    continue;
                l.orbit_index[y] = static_cast<std::int32_t>(l.orbit.size());
                l.orbit.push_back(y);
                auto t = l.transversal[k] * s;
                l.transversal_inverse.push_back(t.inverse());
                l.transversal.push_back(std::move(t));
            }
        }
    }

    // Adds a nontrivial sift residue and refreshes every level it belongs to.
    std::size_t absorb(const Permutation& residue) {
        auto deepest = add_strong(residue);
        for (std::size_t i = 0; i <= deepest; ++i)
            rebuild_level(i);
        return deepest;
    }

    void random_phase() {
        std::mt19937_64 rng(options_.seed);
        // Product replacement state.
        std::vector<Permutation> state(chain_.strong_.begin(), chain_.strong_.end());
        while (state.size() < 10)
            state.push_back(state[state.size() % chain_.strong_.size()]);
        Permutation acc = Permutation::identity(chain_.degree_);
        std::uniform_int_distribution<std::size_t> pick(0, state.size() - 1);
        auto step = [&] {
            auto i = pick(rng);
            auto j = pick(rng);
            if (i == j)
                j = (j + 1) % state.size();
            state[i] = (rng() & 1u) ? state[i] * state[j] : state[i] * state[j].inverse();
            acc = acc * state[i];
        };
        for (int w = 0; w < 50; ++w)
            step();
        std::uint32_t quiet = 0;
        while (quiet < options_.random_stop) {
            step();
            auto [residue, level] = chain_.sift(acc);
            if (residue.is_identity()) {
                ++quiet;
            } else {
                quiet = 0;
                absorb(residue);
            }
        }
    }

    // Every Schreier generator of every level must sift to the identity through the
    // levels below it. Restarts from the deepest touched level whenever one does not.
    void verify_phase() {
        std::ptrdiff_t i = static_cast<std::ptrdiff_t>(chain_.levels_.size()) - 1;
        while (i >= 0) {
            bool changed = false;
            const auto li = static_cast<std::size_t>(i);
            for (std::size_t k = 0; k < chain_.levels_[li].orbit.size() && !changed; ++k) {
                // Copy: absorb() may rebuild this level.
                const auto gens = chain_.levels_[li].generators;
                for (auto gi : gens) {
                    const auto& l = chain_.levels_[li];
                    const auto& s = chain_.strong_[gi];
                    auto image = s[l.orbit[k]];
                    auto h = l.transversal[k] * s *
                             l.transversal_inverse[static_cast<std::size_t>(l.orbit_index[image])];
                    auto [residue, level] = chain_.sift(h, li + 1);
                    if (!residue.is_identity()) {
                        i = static_cast<std::ptrdiff_t>(absorb(residue));
                        changed = true;
                        break;
                    }
                }
            }
            if (!changed)
                --i;
        }
    }

    GroupChain chain_;
    SchreierSimsOptions options_;
};

GroupChain schreier_sims(std::uint32_t degree, std::span<const Permutation> generators,
                         const SchreierSimsOptions& options) {
    require_degree(generators, degree);
    return ChainBuilder(degree, options).build(generators);
}

GroupChain schreier_sims(std::span<const Permutation> generators, const SchreierSimsOptions& options) {
    if (generators.empty())
        throw ShapeError("schreier_sims: degree unknown without generators");
    return schreier_sims(generators.front().degree(), generators, options);
}

std::vector<std::vector<std::uint32_t>> orbits(std::span<const Permutation> generators, std::uint32_t n) {
    require_degree(generators, n);
    UnionFind uf(n);
    for (const auto& g : generators)
        for (std::uint32_t x = 0; x < n; ++x)
            uf.unite(x, g[x]);
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::int64_t> slot(n, -1);
    for (std::uint32_t x = 0; x < n; ++x) {
        auto r = uf.find(x);
        if (slot[r] < 0) {
            slot[r] = static_cast<std::int64_t>(out.size());
            out.emplace_back();
        }
        out[static_cast<std::size_t>(slot[r])].push_back(x);
    }
    return out;
}

bool membership(const GroupChain& chain, const Permutation& g) {
    if (g.degree() != chain.degree())
        throw ShapeError("membership: degree mismatch");
    return chain.contains(g);
}

Permutation random_element(const GroupChain& chain, std::mt19937_64& rng) {
    auto g = Permutation::identity(chain.degree());
    for (std::size_t i = chain.depth(); i-- > 0;) {
        const auto& l = chain.level(i);
        std::uniform_int_distribution<std::size_t> pick(0, l.transversal.size() - 1);
        g = g * l.transversal[pick(rng)];
    }
    return g;
}

Permutation random_element(const GroupChain& chain, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_element(chain, rng);
}

BigInt setwise_stabilizer_oracle(const GroupChain& chain, const PointSet& set, const BigInt& max_group_order) {
    if (chain.order() > max_group_order)
        throw ResourceError("setwise stabilizer oracle: group order " + chain.order().str() + " exceeds limit " +
                            max_group_order.str());
    const auto n = chain.degree();
    std::vector<char> in(n, 0);
    for (auto p : set) {
        if (p >= n)
            throw BoundsError("set element out of range");
        in[p] = 1;
    }
    const std::size_t depth = chain.depth();
    BigInt count = 0;
    // partial[i] = u_{x_i} * ... * u_{x_0}: the element restricted to base[0..i].
    std::vector<Permutation> partial(depth + 1, Permutation::identity(n));
    auto recurse = [&](auto&& self, std::size_t level) -> void {
        if (level == depth) {
            const auto& g = partial[level];
            for (auto p : set)
                if (!in[g[p]])
                    return;
            ++count;
            return;
        }
        const auto& l = chain.level(level);
        const auto& prev = partial[level];
        for (std::size_t k = 0; k < l.orbit.size(); ++k) {
            // Image of this level's base point under the full element.
            if (in[l.base_point] != in[prev[l.orbit[k]]])
                continue;
            partial[level + 1] = l.transversal[k] * prev;
            self(self, level + 1);
        }
    };
    recurse(recurse, 0);
    return count;
}

namespace {

constexpr std::uint32_t seed_primes[] = {2, 3, 5, 7, 11, 13, 17};

// Least image vector among the nonidentity powers of an element of prime order p.
Permutation least_generator(const Permutation& h, std::uint32_t p) {
    Permutation best = h;
    Permutation cur = h;
    for (std::uint32_t k = 2; k < p; ++k) {
        cur = cur * h;
        if (cur < best)
            best = cur;
    }
    return best;
}

}  // namespace

std::vector<std::vector<Permutation>> subgroup_seeds(const GroupChain& chain, const SubgroupSeedConfig& config) {
    std::vector<std::vector<Permutation>> seeds{{}};
    std::set<std::vector<std::vector<std::uint32_t>>> seen{{}};
    auto key_of = [](std::vector<Permutation> gens) {
        std::sort(gens.begin(), gens.end());
        std::vector<std::vector<std::uint32_t>> key;
        for (auto& g : gens)
            key.push_back(g.images());
        return key;
    };

    std::mt19937_64 rng(config.seed);
    std::vector<Permutation> cyclic;
    for (std::uint32_t r = 0; r < config.random_elements; ++r) {
        auto g = random_element(chain, rng);
        if (g.is_identity())
            continue;
        BigInt ord = g.order();
        for (auto p : seed_primes) {
            if (ord % p != 0)
                continue;
            auto h = least_generator(g.pow(ord / p), p);
            if (seen.insert(key_of({h})).second) {
                seeds.push_back({h});
                cyclic.push_back(h);
            }
        }
    }
    std::uint32_t pairs = 0;
    for (std::size_t j = 1; j < cyclic.size() && pairs < config.max_pairs; ++j)
        for (std::size_t i = 0; i < j && pairs < config.max_pairs; ++i) {
            std::vector<Permutation> gens{cyclic[i], cyclic[j]};
            std::sort(gens.begin(), gens.end());
            if (seen.insert(key_of(gens)).second) {
                seeds.push_back(std::move(gens));
                ++pairs;
            }
        }
    return seeds;
}

}  // namespace unitk::perm
