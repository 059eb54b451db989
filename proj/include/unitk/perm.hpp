#pragma once

#include "unitk/bigint.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace unitk::perm {

/// A bijection on {0, ..., n-1}. Products compose left to right: (a * b)(x) = b(a(x)).
class Permutation {
public:
    Permutation() = default;
    /// Throws ContractError unless images is a bijection on [0, images.size()).
    explicit Permutation(std::vector<std::uint32_t> images);

    static Permutation identity(std::uint32_t n);
    /// Builds from disjoint cycles; unmentioned points are fixed.
    static Permutation from_cycles(std::uint32_t n, const std::vector<std::vector<std::uint32_t>>& cycles);
    /// Skips the bijectivity check; callers guarantee it.
    static Permutation from_trusted(std::vector<std::uint32_t> images);

    std::uint32_t degree() const noexcept { return static_cast<std::uint32_t>(images_.size()); }
    std::uint32_t operator[](std::uint32_t x) const noexcept { return images_[x]; }
    const std::vector<std::uint32_t>& images() const noexcept { return images_; }

    bool is_identity() const noexcept;
    bool fixes(std::uint32_t x) const noexcept { return images_[x] == x; }
    Permutation inverse() const;
    /// Element order: lcm of cycle lengths.
    BigInt order() const;
    /// this^e for e >= 0.
    Permutation pow(const BigInt& e) const;
    /// Cycles of length >= 2, each starting at its smallest point, sorted by that point.
    std::vector<std::vector<std::uint32_t>> cycles() const;
    std::string to_cycle_string() const;

    friend Permutation operator*(const Permutation& a, const Permutation& b);
    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
    std::vector<std::uint32_t> images_;
};

/// Throws ShapeError unless every permutation has degree n.
void require_degree(std::span<const Permutation> perms, std::uint32_t n);

}  // namespace unitk::perm
