#pragma once

#include <cstdint>
#include <vector>

namespace unitk::geometry {

/// An element of GF(q), stored as the base-p digits of a polynomial over the prime
/// subfield (digit i is the coefficient of x^i).
struct FieldElement {
    std::uint32_t value = 0;

    friend bool operator==(FieldElement, FieldElement) = default;
    friend auto operator<=>(FieldElement, FieldElement) = default;
};

enum class FieldOp { add, mul, inv, pow };

/// Finite field GF(q) for q in {2, 3, 4, 5, 7, 8, 9, 13, 16} with full operation tables.
///
/// Extension fields use fixed moduli: GF(4) = GF(2)[x]/(x^2+x+1),
/// GF(8) = GF(2)[x]/(x^3+x+1), GF(9) = GF(3)[x]/(x^2+1), GF(16) = GF(2)[x]/(x^4+x+1).
class GaloisField {
public:
    /// Shared instance for q; throws ConfigError for unsupported sizes.
    static const GaloisField& get(std::uint32_t q);

    static bool supported(std::uint32_t q);

    std::uint32_t order() const noexcept { return q_; }
    std::uint32_t characteristic() const noexcept { return p_; }
    std::uint32_t degree() const noexcept { return degree_; }

    FieldElement zero() const noexcept { return {0}; }
    FieldElement one() const noexcept { return {1}; }
    /// The element x (or 1 in prime fields, where x is not meaningful).
    FieldElement x() const noexcept { return {degree_ > 1 ? p_ : 1u}; }
    FieldElement element(std::uint32_t value) const;

    FieldElement add(FieldElement a, FieldElement b) const noexcept { return {add_[a.value * q_ + b.value]}; }
    FieldElement sub(FieldElement a, FieldElement b) const noexcept { return add(a, neg(b)); }
    FieldElement neg(FieldElement a) const noexcept { return {neg_[a.value]}; }
    FieldElement mul(FieldElement a, FieldElement b) const noexcept { return {mul_[a.value * q_ + b.value]}; }
    /// Throws DomainError for zero.
    FieldElement inv(FieldElement a) const;
    FieldElement pow(FieldElement a, std::uint64_t e) const noexcept;

    /// Dispatch on op; for pow, b.value is the exponent. inv ignores b.
    FieldElement apply(FieldOp op, FieldElement a, FieldElement b) const;

private:
    GaloisField(std::uint32_t q, std::uint32_t p, std::uint32_t degree, std::vector<std::uint32_t> modulus);

    std::uint32_t q_;
    std::uint32_t p_;
    std::uint32_t degree_;
    std::vector<std::uint32_t> add_;
    std::vector<std::uint32_t> mul_;
    std::vector<std::uint32_t> neg_;
    std::vector<std::uint32_t> inv_;
};

}  // namespace unitk::geometry
