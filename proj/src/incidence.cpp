#include "unitk/incidence.hpp"

#include "unitk/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace unitk {

PointSet::PointSet(std::vector<std::uint32_t> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
        throw ContractError("point set contains a repeated index");
}

bool PointSet::contains(std::uint32_t p) const { return std::binary_search(indices_.begin(), indices_.end(), p); }

IncidenceStructure::IncidenceStructure(std::uint32_t v, std::vector<std::vector<std::uint32_t>> blocks, std::string name)
    : v_(v), blocks_(std::move(blocks)), name_(std::move(name)) {
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
        auto& blk = blocks_[j];
        std::sort(blk.begin(), blk.end());
        if (!blk.empty() && blk.back() >= v_)
            throw BoundsError("block " + std::to_string(j) + " contains point " + std::to_string(blk.back()) +
                              " but v=" + std::to_string(v_));
        if (std::adjacent_find(blk.begin(), blk.end()) != blk.end())
            throw ContractError("block " + std::to_string(j) + " repeats a point");
    }
    std::vector<const std::vector<std::uint32_t>*> order;
    order.reserve(blocks_.size());
    for (const auto& blk : blocks_)
        order.push_back(&blk);
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return *a < *b; });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (*order[i] == *order[i - 1])
            throw ContractError("repeated block");
}

std::vector<std::vector<std::uint32_t>> IncidenceStructure::point_blocks() const {
    std::vector<std::vector<std::uint32_t>> through(v_);
    for (std::uint32_t j = 0; j < blocks_.size(); ++j)
        for (auto p : blocks_[j])
            through[p].push_back(j);
    return through;
}

std::optional<std::uint32_t> IncidenceStructure::plane_order() const {
    if (v_ != b() || blocks_.empty())
        return std::nullopt;
    auto k = blocks_.front().size();
    if (k < 3)
        return std::nullopt;
    std::uint32_t n = static_cast<std::uint32_t>(k - 1);
    if (v_ != n * n + n + 1)
        return std::nullopt;
    for (const auto& blk : blocks_)
        if (blk.size() != k)
            return std::nullopt;
    return n;
}

std::string ValidationReport::summary() const {
    std::ostringstream out;
    out << "2-(" << v << "," << k << "," << lambda << ") b=" << b << (valid ? " valid" : " INVALID")
        << (symmetric ? " symmetric" : "");
    if (!valid)
        out << " pair_violations=" << pair_violation_count << " block_size_violations=" << block_size_violations.size();
    return out.str();
}

namespace {

// Count pairs covered by blocks; violations recorded against lambda.
void check_pairs(const IncidenceStructure& s, std::uint32_t lambda, ValidationReport& report) {
    const std::uint32_t v = s.v();
    std::vector<std::uint32_t> cover(static_cast<std::size_t>(v) * v, 0);
    for (const auto& blk : s.blocks())
        for (std::size_t i = 0; i < blk.size(); ++i)
            for (std::size_t j = i + 1; j < blk.size(); ++j)
                ++cover[static_cast<std::size_t>(blk[i]) * v + blk[j]];
    for (std::uint32_t a = 0; a < v; ++a)
        for (std::uint32_t b = a + 1; b < v; ++b) {
            ++report.pairs_checked;
            auto c = cover[static_cast<std::size_t>(a) * v + b];
            if (c != lambda) {
                ++report.pair_violation_count;
                if (report.pair_violations.size() < ValidationReport::max_listed)
                    report.pair_violations.push_back({a, b, c});
            }
        }
}

}  // namespace

ValidationReport validate_design(const IncidenceStructure& s, std::uint32_t k, std::uint32_t lambda) {
    ValidationReport report;
    report.v = s.v();
    report.b = s.b();
    report.k = k;
    report.lambda = lambda;
    for (std::uint32_t j = 0; j < s.b(); ++j)
        if (s.block(j).size() != k && report.block_size_violations.size() < ValidationReport::max_listed)
            report.block_size_violations.push_back({j, static_cast<std::uint32_t>(s.block(j).size())});
    check_pairs(s, lambda, report);
    report.valid = report.block_size_violations.empty() && report.pair_violation_count == 0 && s.v() >= 2;

    if (report.valid && s.v() == s.b()) {
        // Dual must have uniform block size k and every pair of blocks meeting in lambda points.
        ValidationReport dual_report;
        auto d = dual(s);
        bool ok = true;
        for (const auto& blk : d.blocks())
            ok = ok && blk.size() == k;
        check_pairs(d, lambda, dual_report);
        report.symmetric = ok && dual_report.pair_violation_count == 0;
    }
    return report;
}

IncidenceStructure dual(const IncidenceStructure& s) {
    if (s.v() != s.b())
        throw ShapeError("dual requires v == b (v=" + std::to_string(s.v()) + ", b=" + std::to_string(s.b()) + ")");
    return IncidenceStructure(s.b(), s.point_blocks(), s.name().empty() ? std::string{} : s.name() + "_dual");
}

std::vector<std::uint32_t> intersection_sizes(const IncidenceStructure& s, const PointSet& set) {
    std::vector<char> in(s.v(), 0);
    for (auto p : set) {
        if (p >= s.v())
            throw BoundsError("point " + std::to_string(p) + " out of range");
        in[p] = 1;
    }
    std::vector<std::uint32_t> sizes;
    sizes.reserve(s.b());
    for (const auto& blk : s.blocks()) {
        std::uint32_t c = 0;
        for (auto p : blk)
            c += static_cast<std::uint32_t>(in[p]);
        sizes.push_back(c);
    }
    return sizes;
}

std::map<std::uint32_t, std::uint32_t> line_profile(const IncidenceStructure& s, const PointSet& set) {
    std::map<std::uint32_t, std::uint32_t> profile;
    for (auto c : intersection_sizes(s, set))
        ++profile[c];
    return profile;
}

IncidenceStructure relabel(const IncidenceStructure& s, std::span<const std::uint32_t> perm,
                           std::span<const std::uint32_t> block_perm) {
    if (perm.size() != s.v() || (!block_perm.empty() && block_perm.size() != s.b()))
        throw ShapeError("relabel: permutation size mismatch");
    std::vector<std::vector<std::uint32_t>> blocks(s.b());
    for (std::uint32_t j = 0; j < s.b(); ++j) {
        auto& dst = blocks[block_perm.empty() ? j : block_perm[j]];
        for (auto p : s.block(j))
            dst.push_back(perm[p]);
    }
    return IncidenceStructure(s.v(), std::move(blocks), s.name());
}

}  // namespace unitk
