#include "unitk/unitals.hpp"

#include "unitk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>

namespace unitk::unitals {

std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::appendix:
        return "appendix";
    case Provenance::search:
        return "search";
    case Provenance::constructed:
        return "constructed";
    }
    return "constructed";
}

std::uint32_t unital_parameter(const IncidenceStructure& plane) {
    auto n = plane.plane_order();
    if (!n)
        throw ContractError("not a projective plane: v=" + std::to_string(plane.v()) + " b=" + std::to_string(plane.b()));
    auto r = static_cast<std::uint32_t>(std::lround(std::sqrt(double(*n))));
    if (r * r != *n)
        throw DomainError("plane order " + std::to_string(*n) + " is not a square; unitals need order q^2");
    return r;
}

namespace {

void check_range(const IncidenceStructure& plane, const PointSet& set) {
    if (!set.empty() && set.indices().back() >= plane.v())
        throw BoundsError("point " + std::to_string(set.indices().back()) + " outside the plane");
}

}  // namespace

bool is_unital(const IncidenceStructure& plane, const PointSet& set) {
    auto q = unital_parameter(plane);
    check_range(plane, set);
    if (set.size() != q * q * q + 1)
        return false;
    for (auto c : intersection_sizes(plane, set))
        if (c != 1 && c != q + 1)
            return false;
    return true;
}

bool is_line_unital(const IncidenceStructure& plane, const PointSet& lines) { return is_unital(dual(plane), lines); }

BigInt stabilizer_order(const IncidenceStructure& plane, const PointSet& set, Coloring coloring,
                        const canon::CanonOptions& options) {
    return canon::analyze(to_incidence_graph(plane, set, coloring), options).order;
}

TangentSecant tangent_secant_counts(const IncidenceStructure& plane, const PointSet& set) {
    if (!is_unital(plane, set))
        throw ContractError("tangent/secant counts need a unital");
    TangentSecant out;
    std::vector<std::uint32_t> tangents_at(plane.v(), 0);
    auto sizes = intersection_sizes(plane, set);
    for (std::size_t j = 0; j < sizes.size(); ++j) {
        if (sizes[j] == 1) {
            ++out.tangents;
            for (auto p : plane.block(j))
                if (set.contains(p))
                    ++tangents_at[p];
        } else {
            ++out.secants;
        }
    }
    for (auto p : set)
        if (tangents_at[p] != 1)
            throw ContractError("point " + std::to_string(p) + " lies on " + std::to_string(tangents_at[p]) + " tangents");
    return out;
}

UnitalRecord make_record(const IncidenceStructure& plane, const PointSet& set, Provenance provenance, std::string source,
                         Coloring coloring, const canon::CanonOptions& options) {
    auto r = canon::analyze(to_incidence_graph(plane, set, coloring), options);
    UnitalRecord rec;
    rec.plane_name = plane.name();
    rec.points = set;
    rec.stabilizer_order = r.order;
    rec.certificate = std::move(r.certificate);
    rec.provenance = provenance;
    rec.source = std::move(source);
    return rec;
}

std::vector<UnitalClass> classify_nonisomorphic(const IncidenceStructure& plane, const std::vector<PointSet>& sets,
                                                const ClassifyOptions& options) {
    for (const auto& s : sets)
        check_range(plane, s);
    std::vector<canon::AutResult> results(sets.size());
    auto work = [&](std::size_t i) { results[i] = canon::analyze(to_incidence_graph(plane, sets[i], options.coloring), options.canon); };
    unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(sets.size())));
    if (threads <= 1) {
        for (std::size_t i = 0; i < sets.size(); ++i)
            work(i);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < sets.size(); i += threads)
                        work(i);
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

    std::map<canon::Certificate, std::size_t> by_cert;
    std::vector<UnitalClass> classes;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        auto [it, fresh] = by_cert.try_emplace(results[i].certificate, classes.size());
        if (fresh) {
            UnitalClass c;
            c.certificate = results[i].certificate;
            c.stabilizer_order = results[i].order;
            classes.push_back(std::move(c));
        }
        auto& c = classes[it->second];
        const auto& rep = results[c.members.empty() ? i : c.members.front()];
        // rep vertex -> canonical position -> member vertex
        c.members.push_back(i);
        c.witnesses.push_back(rep.canonical_labeling * results[i].canonical_labeling.inverse());
    }
    std::stable_sort(classes.begin(), classes.end(), [](const UnitalClass& a, const UnitalClass& b) {
        if (a.stabilizer_order != b.stabilizer_order)
            return a.stabilizer_order < b.stabilizer_order;
        return a.certificate < b.certificate;
    });
    return classes;
}

bool cross_representation_match(const UnitalRecord& a, const UnitalRecord& b) {
    if (a.certificate.bytes.empty() || b.certificate.bytes.empty())
        throw ContractError("records without certificates cannot be compared");
    return a.certificate == b.certificate;
}

}  // namespace unitk::unitals
