#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace unitk {

/// Sorted, duplicate-free point indices (0-based).
class PointSet {
public:
    PointSet() = default;
    /// Sorts the input; throws ContractError on repeated indices.
    explicit PointSet(std::vector<std::uint32_t> indices);
    PointSet(std::initializer_list<std::uint32_t> indices) : PointSet(std::vector<std::uint32_t>(indices)) {}

    const std::vector<std::uint32_t>& indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }
    bool empty() const noexcept { return indices_.empty(); }
    bool contains(std::uint32_t p) const;
    auto begin() const noexcept { return indices_.begin(); }
    auto end() const noexcept { return indices_.end(); }
    std::uint32_t operator[](std::size_t i) const { return indices_[i]; }

    friend bool operator==(const PointSet&, const PointSet&) = default;
    friend auto operator<=>(const PointSet&, const PointSet&) = default;

private:
    std::vector<std::uint32_t> indices_;
};

/// Points 0..v-1 and a list of blocks, each a sorted list of point indices.
class IncidenceStructure {
public:
    IncidenceStructure() = default;
    /// Sorts each block. Throws BoundsError for indices >= v and ContractError for a
    /// repeated index inside a block or a repeated block.
    IncidenceStructure(std::uint32_t v, std::vector<std::vector<std::uint32_t>> blocks, std::string name = {});

    std::uint32_t v() const noexcept { return v_; }
    std::uint32_t b() const noexcept { return static_cast<std::uint32_t>(blocks_.size()); }
    const std::vector<std::vector<std::uint32_t>>& blocks() const noexcept { return blocks_; }
    const std::vector<std::uint32_t>& block(std::size_t j) const { return blocks_.at(j); }
    const std::string& name() const noexcept { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    /// Blocks through each point, ascending.
    std::vector<std::vector<std::uint32_t>> point_blocks() const;

    /// n when this has the counts of a projective plane of order n (v = b = n^2+n+1, uniform block size n+1).
    std::optional<std::uint32_t> plane_order() const;

    friend bool operator==(const IncidenceStructure& a, const IncidenceStructure& b) {
        return a.v_ == b.v_ && a.blocks_ == b.blocks_;
    }

private:
    std::uint32_t v_ = 0;
    std::vector<std::vector<std::uint32_t>> blocks_;
    std::string name_;
};

/// Outcome of checking 2-(v,k,lambda) design conditions. Violations are content, not errors.
struct ValidationReport {
    struct PairViolation {
        std::uint32_t a;
        std::uint32_t b;
        std::uint32_t count;
    };
    struct BlockSizeViolation {
        std::uint32_t block;
        std::uint32_t size;
    };

    static constexpr std::size_t max_listed = 1000;

    std::uint32_t v = 0;
    std::uint32_t b = 0;
    std::uint32_t k = 0;
    std::uint32_t lambda = 0;
    bool valid = false;
    /// The dual is also a 2-design with the same parameters.
    bool symmetric = false;
    std::uint64_t pairs_checked = 0;
    std::uint64_t pair_violation_count = 0;
    std::vector<PairViolation> pair_violations;   // capped at max_listed
    std::vector<BlockSizeViolation> block_size_violations;  // capped at max_listed

    std::string summary() const;
};

ValidationReport validate_design(const IncidenceStructure& s, std::uint32_t k, std::uint32_t lambda);

/// Point i of the result is block i of s; block j lists the blocks of s through point j.
/// Throws ShapeError when v != b.
IncidenceStructure dual(const IncidenceStructure& s);

/// Size of block ∩ set for every block, aggregated as size -> number of blocks.
std::map<std::uint32_t, std::uint32_t> line_profile(const IncidenceStructure& s, const PointSet& set);

/// Per-block intersection sizes, in block order.
std::vector<std::uint32_t> intersection_sizes(const IncidenceStructure& s, const PointSet& set);

/// Relabel points by perm (point p becomes perm[p]) and reorder blocks by block_perm
/// (block j becomes block_perm[j]); empty block_perm keeps block order.
IncidenceStructure relabel(const IncidenceStructure& s, std::span<const std::uint32_t> perm,
                           std::span<const std::uint32_t> block_perm = {});

}  // namespace unitk
