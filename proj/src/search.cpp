#include "unitk/search.hpp"

#include "unitk/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

namespace unitk::search {

namespace {

using Clock = std::chrono::steady_clock;

/// Depth-first subset enumeration over items sorted by size descending, guided by a
/// table of reachable suffix sums. Optional hooks veto or undo inclusions.
class SubsetEnumerator {
public:
    using Emit = std::function<bool(const std::vector<std::uint32_t>&)>;
    using Include = std::function<bool(std::uint32_t)>;
    using Undo = std::function<void(std::uint32_t)>;

    SubsetEnumerator(const std::vector<std::uint32_t>& sizes, std::uint32_t low, std::uint32_t high)
        : sizes_(sizes), low_(low), high_(high) {
        for (auto s : sizes)
            if (s == 0)
                throw ContractError("orbit sizes must be positive");
        order_.resize(sizes.size());
        std::iota(order_.begin(), order_.end(), 0u);
        std::stable_sort(order_.begin(), order_.end(), [&](auto a, auto b) { return sizes[a] > sizes[b]; });

        // next_[i][x]: least reachable sum >= x using items order_[i..], or `none`.
        const auto m = order_.size();
        const std::uint32_t width = high_ + 1;
        std::vector<char> reach(width, 0), prev(width, 0);
        next_.assign(m + 1, std::vector<std::uint32_t>(width, none));
        reach[0] = 1;
        fill_next(m, reach);
        for (std::size_t i = m; i-- > 0;) {
            prev = reach;
            auto s = sizes[order_[i]];
            for (std::uint32_t x = s; x < width; ++x)
                if (prev[x - s])
                    reach[x] = 1;
            fill_next(i, reach);
        }
    }

    void run(const Emit& emit, const Include& include = {}, const Undo& undo = {},
             std::uint64_t node_budget = std::numeric_limits<std::uint64_t>::max()) {
        emit_ = &emit;
        include_ = include ? &include : nullptr;
        undo_ = undo ? &undo : nullptr;
        node_budget_ = node_budget;
        stopped_ = false;
        chosen_.clear();
        if (low_ < high_ && feasible(0, 0))
            dfs(0, 0);
    }

    std::uint64_t nodes() const { return nodes_; }
    std::uint64_t vetoed() const { return vetoed_; }
    bool node_budget_hit() const { return node_budget_hit_; }

private:
    static constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();

    void fill_next(std::size_t i, const std::vector<char>& reach) {
        auto& nx = next_[i];
        std::uint32_t least = none;
        for (std::size_t x = reach.size(); x-- > 0;) {
            if (reach[x])
                least = static_cast<std::uint32_t>(x);
            nx[x] = least;
        }
    }

    bool feasible(std::size_t i, std::uint32_t cur) const {
        if (cur >= high_)
            return false;
        std::uint32_t need = low_ > cur ? low_ - cur : 0;
        auto least = next_[i][need];
        return least != none && cur + least < high_;
    }

    void dfs(std::size_t i, std::uint32_t cur) {
        if (stopped_)
            return;
        if (nodes_ >= node_budget_) {
            node_budget_hit_ = true;
            stopped_ = true;
            return;
        }
        ++nodes_;
        if (i == order_.size()) {
            auto out = chosen_;
            std::sort(out.begin(), out.end());
            if (!(*emit_)(out))
                stopped_ = true;
            return;
        }
        auto item = order_[i];
        auto s = sizes_[item];
        if (feasible(i + 1, cur + s)) {
            if (!include_ || (*include_)(item)) {
                chosen_.push_back(item);
                dfs(i + 1, cur + s);
                chosen_.pop_back();
                if (undo_)
                    (*undo_)(item);
            } else {
                ++vetoed_;
            }
        }
        if (!stopped_ && feasible(i + 1, cur))
            dfs(i + 1, cur);
    }

    const std::vector<std::uint32_t>& sizes_;
    std::uint32_t low_, high_;
    std::vector<std::uint32_t> order_;
    std::vector<std::vector<std::uint32_t>> next_;
    std::vector<std::uint32_t> chosen_;
    const Emit* emit_ = nullptr;
    const Include* include_ = nullptr;
    const Undo* undo_ = nullptr;
    std::uint64_t node_budget_ = 0;
    std::uint64_t nodes_ = 0;
    std::uint64_t vetoed_ = 0;
    bool stopped_ = false;
    bool node_budget_hit_ = false;
};

/// Include/exclude completion state. Copied at every branch.
struct CompletionState {
    std::vector<std::uint8_t> status;  // 0 undecided, 1 chosen, 2 excluded
    std::vector<std::uint32_t> count;  // chosen points per line
    std::vector<std::uint32_t> avail;  // undecided points per line
    std::uint32_t chosen = 0;
    std::uint32_t undecided = 0;
};

class Completer {
public:
    Completer(const IncidenceStructure& plane, const std::vector<std::vector<std::uint32_t>>& lines_of, std::uint32_t s,
              std::uint32_t target, std::uint64_t budget)
        : plane_(plane), lines_of_(lines_of), s_(s), target_(target), budget_(budget) {}

    Completion run(const PointSet& partial, const PointSet& forbidden) {
        CompletionState st;
        const auto v = plane_.v();
        st.status.assign(v, 0);
        st.count.assign(plane_.b(), 0);
        st.avail.assign(plane_.b(), 0);
        for (std::uint32_t j = 0; j < plane_.b(); ++j)
            st.avail[j] = static_cast<std::uint32_t>(plane_.block(j).size());
        st.undecided = v;
        for (auto p : forbidden) {
            if (p >= v)
                throw BoundsError("forbidden point outside the plane");
            exclude(st, p);
        }
        for (auto p : partial) {
            if (p >= v)
                throw BoundsError("partial point outside the plane");
            if (st.status[p] == 2)
                throw ContractError("point " + std::to_string(p) + " is both required and forbidden");
            st.status[p] = 1;
            ++st.chosen;
            --st.undecided;
            for (auto j : lines_of_[p]) {
                ++st.count[j];
                --st.avail[j];
            }
        }
        for (std::uint32_t j = 0; j < plane_.b(); ++j)
            if (st.count[j] > s_)
                throw ContractError("line " + std::to_string(j) + " already meets the partial set in " +
                                    std::to_string(st.count[j]) + " points");
        for (std::uint32_t j = 0; j < plane_.b(); ++j)
            if (st.count[j] == s_)
                close_line(st, j);
        if (partial.size() > target_) {
            result_.nodes = 1;
            return std::move(result_);
        }
        search(st);
        return std::move(result_);
    }

private:
    void exclude(CompletionState& st, std::uint32_t p) {
        st.status[p] = 2;
        --st.undecided;
        for (auto j : lines_of_[p])
            --st.avail[j];
    }

    void close_line(CompletionState& st, std::uint32_t j) {
        for (auto p : plane_.block(j))
            if (st.status[p] == 0)
                exclude(st, p);
    }

    /// Returns false on overflow of a line.
    bool include(CompletionState& st, std::uint32_t p) {
        st.status[p] = 1;
        ++st.chosen;
        --st.undecided;
        bool ok = true;
        for (auto j : lines_of_[p]) {
            ++st.count[j];
            --st.avail[j];
            if (st.count[j] > s_)
                ok = false;
        }
        if (ok)
            for (auto j : lines_of_[p])
                if (st.count[j] == s_)
                    close_line(st, j);
        return ok;
    }

    /// Applies forced inclusions until nothing changes; false on contradiction.
    bool propagate(CompletionState& st) {
        for (;;) {
            if (st.chosen > target_ || st.chosen + st.undecided < target_)
                return false;
            std::int64_t forced_line = -1;
            for (std::uint32_t j = 0; j < plane_.b(); ++j) {
                auto c = st.count[j], a = st.avail[j];
                if (c > s_)
                    return false;
                if (c >= 2 && c + a < s_)
                    return false;
                if (c == 0 && a == 0)
                    return false;
                if (forced_line < 0 && a > 0 && ((c >= 2 && c + a == s_) || (c == 0 && a == 1)))
                    forced_line = j;
            }
            if (forced_line < 0)
                return true;
            std::vector<std::uint32_t> pts;
            for (auto p : plane_.block(static_cast<std::size_t>(forced_line)))
                if (st.status[p] == 0)
                    pts.push_back(p);
            for (auto p : pts)
                if (st.status[p] == 0 && !include(st, p))
                    return false;
        }
    }

    void search(CompletionState& st) {
        if (!result_.complete)
            return;
        if (result_.nodes >= budget_) {
            result_.complete = false;
            return;
        }
        ++result_.nodes;
        if (!propagate(st))
            return;
        if (st.chosen == target_) {
            std::vector<std::uint32_t> pts;
            for (std::uint32_t p = 0; p < plane_.v(); ++p)
                if (st.status[p] == 1)
                    pts.push_back(p);
            for (std::uint32_t j = 0; j < plane_.b(); ++j)
                if (st.count[j] != 1 && st.count[j] != s_)
                    return;
            result_.unitals.emplace_back(std::move(pts));
            return;
        }
        std::uint32_t p = 0;
        while (p < plane_.v() && st.status[p] != 0)
            ++p;
        if (p == plane_.v())
            return;
        {
            CompletionState in = st;
            if (include(in, p))
                search(in);
        }
        exclude(st, p);
        search(st);
    }

    const IncidenceStructure& plane_;
    const std::vector<std::vector<std::uint32_t>>& lines_of_;
    std::uint32_t s_;
    std::uint32_t target_;
    std::uint64_t budget_;
    Completion result_;
};

struct ItemResult {
    std::vector<PointSet> found;
    SearchStats stats;
};

}  // namespace

std::vector<std::vector<std::uint32_t>> orbit_combinations_in_range(const std::vector<std::uint32_t>& sizes,
                                                                    std::uint32_t low, std::uint32_t high,
                                                                    std::uint64_t budget) {
    std::vector<std::vector<std::uint32_t>> out;
    if (budget == 0)
        return out;
    SubsetEnumerator e(sizes, low, high);
    e.run([&](const std::vector<std::uint32_t>& subset) {
        out.push_back(subset);
        return out.size() < budget;
    });
    return out;
}

std::vector<std::vector<std::uint32_t>> orbit_combinations(const std::vector<std::uint32_t>& sizes, std::uint32_t target,
                                                           std::uint64_t budget) {
    return orbit_combinations_in_range(sizes, target, target + 1, budget);
}

Completion complete_partial(const IncidenceStructure& plane, const PointSet& partial, const PointSet& forbidden,
                            std::uint64_t budget) {
    auto q = unitals::unital_parameter(plane);
    const auto lines_of = plane.point_blocks();
    Completer c(plane, lines_of, q + 1, q * q * q + 1, budget);
    return c.run(partial, forbidden);
}

perm::GroupChain collineation_chain(const IncidenceStructure& plane, const canon::CanonOptions& options) {
    auto r = canon::analyze(to_incidence_graph(plane), options);
    std::vector<perm::Permutation> gens;
    for (const auto& g : r.generators)
        gens.emplace_back(std::vector<std::uint32_t>(g.images().begin(), g.images().begin() + plane.v()));
    return perm::schreier_sims(plane.v(), gens);
}

namespace {

class Pipeline {
public:
    Pipeline(const IncidenceStructure& plane, const SearchConfig& config, std::uint32_t s, std::uint32_t target,
             Clock::time_point start)
        : plane_(plane), config_(config), s_(s), target_(target), start_(start) {
        lines_of_ = plane.point_blocks();
    }

    bool out_of_time() const {
        return config_.time_budget > 0 &&
               std::chrono::duration<double>(Clock::now() - start_).count() > config_.time_budget;
    }

    ItemResult run_item(const std::vector<perm::Permutation>& generators) {
        ItemResult r;
        auto orbits = perm::orbits(generators, plane_.v());
        std::vector<std::uint32_t> sizes;
        for (const auto& o : orbits)
            sizes.push_back(static_cast<std::uint32_t>(o.size()));

        // Per orbit: (line, points of the orbit on it).
        std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> meets(orbits.size());
        {
            std::map<std::uint32_t, std::uint32_t> tally;
            for (std::size_t k = 0; k < orbits.size(); ++k) {
                tally.clear();
                for (auto p : orbits[k])
                    for (auto j : lines_of_[p])
                        ++tally[j];
                meets[k].assign(tally.begin(), tally.end());
            }
        }
        std::vector<std::uint32_t> count(plane_.b(), 0);
        auto include = [&](std::uint32_t k) {
            for (auto [j, c] : meets[k])
                if (count[j] + c > s_)
                    return false;
            for (auto [j, c] : meets[k])
                count[j] += c;
            return true;
        };
        auto undo = [&](std::uint32_t k) {
            for (auto [j, c] : meets[k])
                count[j] -= c;
        };
        auto union_of = [&](const std::vector<std::uint32_t>& subset) {
            std::vector<std::uint32_t> pts;
            for (auto k : subset)
                pts.insert(pts.end(), orbits[k].begin(), orbits[k].end());
            return PointSet(std::move(pts));
        };
        const std::uint64_t node_budget = config_.combination_budget * 64 + 1024;

        // Exact unions.
        {
            std::uint64_t emitted = 0;
            SubsetEnumerator e(sizes, target_, target_ + 1);
            e.run(
                [&](const std::vector<std::uint32_t>& subset) {
                    ++emitted;
                    ++r.stats.candidates_tested;
                    if (std::all_of(count.begin(), count.end(), [&](auto c) { return c == 1 || c == s_; }))
                        r.found.push_back(union_of(subset));
                    if ((emitted & 255) == 0 && out_of_time()) {
                        r.stats.time_budget_hit = true;
                        return false;
                    }
                    if (emitted >= config_.combination_budget) {
                        ++r.stats.combination_budget_hits;
                        return false;
                    }
                    return true;
                },
                include, undo, node_budget);
            r.stats.exact_combinations += emitted;
            r.stats.combination_nodes += e.nodes();
            r.stats.pruned_combinations += e.vetoed();
            if (e.node_budget_hit())
                ++r.stats.combination_budget_hits;
        }

        // Partial unions handed to completion.
        const auto low = std::min(config_.completion_threshold, target_);
        if (low < target_ && !r.stats.time_budget_hit) {
            std::uint64_t emitted = 0;
            std::uint64_t remaining = config_.completion_budget;
            SubsetEnumerator e(sizes, low, target_);
            e.run(
                [&](const std::vector<std::uint32_t>& subset) {
                    if (remaining == 0) {
                        ++r.stats.completion_budget_hits;
                        return false;
                    }
                    ++emitted;
                    Completer c(plane_, lines_of_, s_, target_, remaining);
                    auto done = c.run(union_of(subset), PointSet{});
                    ++r.stats.completion_calls;
                    r.stats.completion_nodes += done.nodes;
                    remaining -= std::min(remaining, done.nodes);
                    if (!done.complete)
                        ++r.stats.completions_incomplete;
                    r.stats.candidates_tested += done.unitals.size();
                    for (auto& u : done.unitals)
                        r.found.push_back(std::move(u));
                    if (out_of_time()) {
                        r.stats.time_budget_hit = true;
                        return false;
                    }
                    if (emitted >= config_.combination_budget) {
                        ++r.stats.combination_budget_hits;
                        return false;
                    }
                    return true;
                },
                include, undo, node_budget);
            r.stats.partial_combinations += emitted;
            r.stats.combination_nodes += e.nodes();
            r.stats.pruned_combinations += e.vetoed();
            if (e.node_budget_hit())
                ++r.stats.combination_budget_hits;
        }
        return r;
    }

private:
    const IncidenceStructure& plane_;
    const SearchConfig& config_;
    std::uint32_t s_;
    std::uint32_t target_;
    Clock::time_point start_;
    std::vector<std::vector<std::uint32_t>> lines_of_;
};

void accumulate(SearchStats& into, const SearchStats& from) {
    into.exact_combinations += from.exact_combinations;
    into.partial_combinations += from.partial_combinations;
    into.combination_nodes += from.combination_nodes;
    into.pruned_combinations += from.pruned_combinations;
    into.candidates_tested += from.candidates_tested;
    into.completion_calls += from.completion_calls;
    into.completion_nodes += from.completion_nodes;
    into.completions_incomplete += from.completions_incomplete;
    into.combination_budget_hits += from.combination_budget_hits;
    into.completion_budget_hits += from.completion_budget_hits;
    into.time_budget_hit = into.time_budget_hit || from.time_budget_hit;
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            try {
                for (auto i = next++; i < n; i = next++)
                    body(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

}  // namespace

SearchResult find_unitals(const IncidenceStructure& plane, const perm::GroupChain& chain, const SearchConfig& config) {
    const auto start = Clock::now();
    const auto q = unitals::unital_parameter(plane);
    const std::uint32_t s = q + 1;
    const std::uint32_t target = config.target_size ? config.target_size : q * q * q + 1;
    if (chain.degree() != plane.v())
        throw ShapeError("group acts on " + std::to_string(chain.degree()) + " points, plane has " +
                         std::to_string(plane.v()));

    SearchResult result;
    auto& stats = result.stats;
    std::vector<PointSet> found;

    if (config.exhaustive) {
        const auto lines_of = plane.point_blocks();
        Completer c(plane, lines_of, s, target, config.completion_budget);
        auto done = c.run(PointSet{}, PointSet{});
        stats.completion_calls = 1;
        stats.completion_nodes = done.nodes;
        stats.completions_incomplete = done.complete ? 0 : 1;
        stats.candidates_tested = done.unitals.size();
        found = std::move(done.unitals);
    } else {
        perm::SubgroupSeedConfig seed_config;
        seed_config.seed = config.seed;
        seed_config.random_elements = config.random_elements;
        seed_config.max_pairs = config.max_pairs;
        std::vector<std::vector<perm::Permutation>> seeds;
        if (config.subgroup_budget > 0)
            seeds = perm::subgroup_seeds(chain, seed_config);
        stats.subgroups_available = seeds.size();
        const std::size_t n = std::min<std::size_t>(seeds.size(), config.subgroup_budget);
        Pipeline pipeline(plane, config, s, target, start);
        std::vector<ItemResult> items(n);
        std::vector<char> ran(n, 0);
        parallel_for(n, config.threads, [&](std::size_t i) {
            if (pipeline.out_of_time()) {
                items[i].stats.time_budget_hit = true;
                return;
            }
            items[i] = pipeline.run_item(seeds[i]);
            ran[i] = 1;
        });
        for (std::size_t i = 0; i < n; ++i) {
            stats.subgroups_tried += ran[i];
            accumulate(stats, items[i].stats);
            for (auto& u : items[i].found)
                found.push_back(std::move(u));
        }
    }

    stats.unitals_found = found.size();
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    // Independent re-check: every candidate must pass the full line scan.
    found.erase(std::remove_if(found.begin(), found.end(), [&](const PointSet& u) { return !unitals::is_unital(plane, u); }),
                found.end());
    stats.distinct_sets = found.size();

    std::vector<unitals::UnitalRecord> records(found.size());
    parallel_for(found.size(), config.threads, [&](std::size_t i) {
        records[i] = unitals::make_record(plane, found[i], unitals::Provenance::search, {}, config.coloring);
    });
    std::map<canon::Certificate, std::size_t> first;
    for (std::size_t i = 0; i < records.size(); ++i)
        if (first.try_emplace(records[i].certificate, i).second) {
            // found is sorted, so the first member of a class is its smallest set.
            result.records.push_back(records[i]);
        }
    std::sort(result.records.begin(), result.records.end(), [](const auto& a, const auto& b) {
        if (a.stabilizer_order != b.stabilizer_order)
            return a.stabilizer_order < b.stabilizer_order;
        return a.certificate < b.certificate;
    });
    for (std::size_t i = 0; i < result.records.size(); ++i)
        result.records[i].source = "search class " + std::to_string(i + 1);
    stats.classes = result.records.size();
    stats.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
}

std::string stats_sidecar(const SearchConfig& config, const SearchStats& stats, bool include_timing) {
    std::ostringstream out;
    out << "seed=" << config.seed << '\n'
        << "exhaustive=" << (config.exhaustive ? 1 : 0) << '\n'
        << "subgroup_budget=" << config.subgroup_budget << '\n'
        << "combination_budget=" << config.combination_budget << '\n'
        << "completion_budget=" << config.completion_budget << '\n'
        << "completion_threshold=" << config.completion_threshold << '\n'
        << "time_budget=" << config.time_budget << '\n'
        << "target_size=" << config.target_size << '\n'
        << "random_elements=" << config.random_elements << '\n'
        << "max_pairs=" << config.max_pairs << '\n'
        << "coloring=" << (config.coloring == Coloring::self_dual ? "self_dual" : "point_block") << '\n'
        << "subgroups_available=" << stats.subgroups_available << '\n'
        << "subgroups_tried=" << stats.subgroups_tried << '\n'
        << "exact_combinations=" << stats.exact_combinations << '\n'
        << "partial_combinations=" << stats.partial_combinations << '\n'
        << "combination_nodes=" << stats.combination_nodes << '\n'
        << "pruned_combinations=" << stats.pruned_combinations << '\n'
        << "combination_budget_hits=" << stats.combination_budget_hits << '\n'
        << "candidates_tested=" << stats.candidates_tested << '\n'
        << "completion_calls=" << stats.completion_calls << '\n'
        << "completion_nodes=" << stats.completion_nodes << '\n'
        << "completions_incomplete=" << stats.completions_incomplete << '\n'
        << "completion_budget_hits=" << stats.completion_budget_hits << '\n'
        << "unitals_found=" << stats.unitals_found << '\n'
        << "distinct_sets=" << stats.distinct_sets << '\n'
        << "classes=" << stats.classes << '\n'
        << "time_budget_hit=" << (stats.time_budget_hit ? 1 : 0) << '\n';
    if (include_timing)
        out << "wall_seconds=" << stats.wall_seconds << '\n';
    return out.str();
}

}  // namespace unitk::search
