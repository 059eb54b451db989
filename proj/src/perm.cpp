#include "unitk/perm.hpp"

#include "unitk/errors.hpp"


#include <numeric>
#include <sstream>

namespace unitk::perm {

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
    std::vector<char> seen(images_.size(), 0);
    for (auto x : images_) {
        if (x >= images_.size() || seen[x])
            throw ContractError("not a permutation");
        seen[x] = 1;
    }
}

Permutation Permutation::identity(std::uint32_t n) {
    std::vector<std::uint32_t> id(n);
    std::iota(id.begin(), id.end(), 0u);
    return from_trusted(std::move(id));
}

Permutation Permutation::from_cycles(std::uint32_t n, const std::vector<std::vector<std::uint32_t>>& cycles) {
    std::vector<std::uint32_t> img(n);
    std::iota(img.begin(), img.end(), 0u);
    std::vector<char> used(n, 0);
    for (const auto& c : cycles) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] >= n || used[c[i]])
                throw ContractError("cycles are not disjoint or out of range");
            used[c[i]] = 1;
            img[c[i]] = c[(i + 1) % c.size()];
        }
    }
    return from_trusted(std::move(img));
}

Permutation Permutation::from_trusted(std::vector<std::uint32_t> images) {
    Permutation p;
    p.images_ = std::move(images);
    return p;
}

bool Permutation::is_identity() const noexcept {
    for (std::uint32_t i = 0; i < images_.size(); ++i)
        if (images_[i] != i)
            return false;
    return true;
}

Permutation Permutation::inverse() const {
    std::vector<std::uint32_t> inv(images_.size());
    for (std::uint32_t i = 0; i < images_.size(); ++i)
        inv[images_[i]] = i;
    return from_trusted(std::move(inv));
}

Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.degree() != b.degree())
        throw ShapeError("degree mismatch in permutation product");
    std::vector<std::uint32_t> out(a.images_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = b.images_[a.images_[i]];
    return Permutation::from_trusted(std::move(out));
}

std::vector<std::vector<std::uint32_t>> Permutation::cycles() const {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<char> seen(images_.size(), 0);
    for (std::uint32_t i = 0; i < images_.size(); ++i) {
        if (seen[i] || images_[i] == i)
            continue;
        std::vector<std::uint32_t> cyc;
        for (auto x = i; !seen[x]; x = images_[x]) {
            seen[x] = 1;
            cyc.push_back(x);
        }
        out.push_back(std::move(cyc));
    }
    return out;
}

BigInt Permutation::order() const {
    BigInt result = 1;
    for (const auto& c : cycles()) {
        BigInt len = c.size();
        result = result / boost::multiprecision::gcd(result, len) * len;
    }
    return result;
}

Permutation Permutation::pow(const BigInt& e) const {
    if (e < 0)
        return inverse().pow(-e);
    std::vector<std::uint32_t> img(images_.size());
    std::iota(img.begin(), img.end(), 0u);
    for (const auto& c : cycles()) {
        auto shift = static_cast<std::size_t>(static_cast<unsigned long long>(e % c.size()));
        for (std::size_t i = 0; i < c.size(); ++i)
            img[c[i]] = c[(i + shift) % c.size()];
    }
    return from_trusted(std::move(img));
}

std::string Permutation::to_cycle_string() const {
    auto cs = cycles();
    if (cs.empty())
        return "()";
    std::ostringstream out;
    for (const auto& c : cs) {
        out << '(';
        for (std::size_t i = 0; i < c.size(); ++i)
            out << (i ? " " : "") << c[i];
        out << ')';
    }
    return out.str();
}

void require_degree(std::span<const Permutation> perms, std::uint32_t n) {
    for (const auto& p : perms)
        if (p.degree() != n)
            throw ShapeError("permutation of degree " + std::to_string(p.degree()) + " where " + std::to_string(n) +
                             " was expected");
}

}  // namespace unitk::perm
