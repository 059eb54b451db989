#include "unitk/field.hpp"

#include "unitk/errors.hpp"

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace unitk::geometry {

namespace {

struct FieldSpec {
    std::uint32_t p;
    std::uint32_t degree;
    // Coefficients of the monic modulus, lowest degree first, leading 1 omitted.
    std::vector<std::uint32_t> modulus;
};

const std::map<std::uint32_t, FieldSpec>& field_specs() {
    static const std::map<std::uint32_t, FieldSpec> specs = {
        {2, {2, 1, {}}},
        {3, {3, 1, {}}},
        {4, {2, 2, {1, 1}}},        // x^2 + x + 1
        {5, {5, 1, {}}},
        {7, {7, 1, {}}},
        {8, {2, 3, {1, 1, 0}}},     // x^3 + x + 1
        {9, {3, 2, {1, 0}}},        // x^2 + 1
        {13, {13, 1, {}}},
        {16, {2, 4, {1, 1, 0, 0}}}, // x^4 + x + 1
    };
    return specs;
}

std::vector<std::uint32_t> digits(std::uint32_t v, std::uint32_t p, std::uint32_t n) {
    std::vector<std::uint32_t> d(n);
    for (auto& c : d) {
        c = v % p;
        v /= p;
    }
    return d;
}

std::uint32_t from_digits(const std::vector<std::uint32_t>& d, std::uint32_t p) {
    std::uint32_t v = 0;
    for (auto it = d.rbegin(); it != d.rend(); ++it)
        v = v * p + *it;
    return v;
}

}  // namespace

bool GaloisField::supported(std::uint32_t q) { return field_specs().count(q) != 0; }

const GaloisField& GaloisField::get(std::uint32_t q) {
    static std::mutex mutex;
    static std::map<std::uint32_t, std::unique_ptr<GaloisField>> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(q); it != cache.end())
        return *it->second;
    auto spec = field_specs().find(q);
    if (spec == field_specs().end())
        throw ConfigError("unsupported field size q=" + std::to_string(q));
    auto [it, _] = cache.emplace(
        q, std::unique_ptr<GaloisField>(new GaloisField(q, spec->second.p, spec->second.degree, spec->second.modulus)));
    return *it->second;
}

GaloisField::GaloisField(std::uint32_t q, std::uint32_t p, std::uint32_t degree, std::vector<std::uint32_t> modulus)
    : q_(q), p_(p), degree_(degree), add_(q * q), mul_(q * q), neg_(q), inv_(q, 0) {
    for (std::uint32_t a = 0; a < q; ++a) {
        auto da = digits(a, p, degree);
        std::vector<std::uint32_t> dn(degree);
        for (std::uint32_t i = 0; i < degree; ++i)
            dn[i] = (p - da[i]) % p;
        neg_[a] = from_digits(dn, p);
        for (std::uint32_t b = 0; b < q; ++b) {
            auto db = digits(b, p, degree);
            std::vector<std::uint32_t> sum(degree);
            for (std::uint32_t i = 0; i < degree; ++i)
                sum[i] = (da[i] + db[i]) % p;
            add_[a * q + b] = from_digits(sum, p);

            // Schoolbook product, then reduce x^k for k >= degree using the modulus.
            std::vector<std::uint32_t> prod(2 * degree - 1, 0);
            for (std::uint32_t i = 0; i < degree; ++i)
                for (std::uint32_t j = 0; j < degree; ++j)
                    prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            for (std::uint32_t k = 2 * degree - 1; k-- > degree;) {
                std::uint32_t c = prod[k];
                if (c == 0)
                    continue;
                prod[k] = 0;
                // x^k = x^(k-degree) * x^degree = -x^(k-degree) * modulus_low
                for (std::uint32_t i = 0; i < degree; ++i)
                    prod[k - degree + i] = (prod[k - degree + i] + (p - c) * modulus[i]) % p;
            }
            prod.resize(degree);
            mul_[a * q + b] = from_digits(prod, p);
        }
    }
    for (std::uint32_t a = 1; a < q; ++a)
        for (std::uint32_t b = 1; b < q; ++b)
            if (mul_[a * q + b] == 1)
                inv_[a] = b;
}

FieldElement GaloisField::element(std::uint32_t value) const {
    if (value >= q_)
        throw BoundsError("field element " + std::to_string(value) + " out of range for GF(" + std::to_string(q_) + ")");
    return {value};
}

FieldElement GaloisField::inv(FieldElement a) const {
    if (a.value == 0)
        throw DomainError("inverse of zero in GF(" + std::to_string(q_) + ")");
    return {inv_[a.value]};
}

FieldElement GaloisField::pow(FieldElement a, std::uint64_t e) const noexcept {
    FieldElement result = one();
    FieldElement base = a;
    while (e != 0) {
        if (e & 1u)
            result = mul(result, base);
        base = mul(base, base);
        e >>= 1u;
    }
    return result;
}

FieldElement GaloisField::apply(FieldOp op, FieldElement a, FieldElement b) const {
    switch (op) {
    case FieldOp::add:
        return add(a, b);
    case FieldOp::mul:
        return mul(a, b);
    case FieldOp::inv:
        return inv(a);
    case FieldOp::pow:
        return pow(a, b.value);
    }
    throw ContractError("unknown field operation");
}

}  // namespace unitk::geometry
