#include "unitk/geometry.hpp"

#include "unitk/errors.hpp"

#include <cmath>
#include <string>

namespace unitk::geometry {

ProjectivePoint normalize(const GaloisField& f, std::array<FieldElement, 3> c) {
    for (std::size_t i = 0; i < 3; ++i) {
        if (c[i].value != 0) {
            auto s = f.inv(c[i]);
            for (auto& x : c)
                x = f.mul(x, s);
            return {c};
        }
    }
    throw DomainError("the zero vector is not a projective point");
}

std::vector<ProjectivePoint> projective_points(const GaloisField& f) {
    const std::uint32_t q = f.order();
    std::vector<ProjectivePoint> pts;
    pts.reserve(q * q + q + 1);
    // Lexicographic order on (x,y,z) restricted to normalized triples.
    for (std::uint32_t x = 0; x < q; ++x)
        for (std::uint32_t y = 0; y < q; ++y)
            for (std::uint32_t z = 0; z < q; ++z) {
                std::array<std::uint32_t, 3> v{x, y, z};
                std::size_t lead = 0;
                while (lead < 3 && v[lead] == 0)
                    ++lead;
                if (lead == 3 || v[lead] != 1)
                    continue;
                pts.push_back({{FieldElement{x}, FieldElement{y}, FieldElement{z}}});
            }
    return pts;
}

std::uint32_t point_index(const GaloisField& f, const ProjectivePoint& p) {
    const std::uint32_t q = f.order();
    auto [x, y, z] = p.coords;
    // Normalized triples in lexicographic order: (0,0,1) | (0,1,*) | (1,*,*).
    if (x.value == 1)
        return 1 + q + y.value * q + z.value;
    if (x.value == 0 && y.value == 1)
        return 1 + z.value;
    if (x.value == 0 && y.value == 0 && z.value == 1)
        return 0;
    throw ContractError("point_index: coordinates are not normalized");
}

IncidenceStructure build_pg2(std::uint32_t q) {
    const auto& f = GaloisField::get(q);
    auto pts = projective_points(f);
    std::vector<std::vector<std::uint32_t>> blocks;
    blocks.reserve(pts.size());
    for (const auto& line : pts) {
        std::vector<std::uint32_t> on;
        on.reserve(q + 1);
        for (std::uint32_t i = 0; i < pts.size(); ++i) {
            const auto& p = pts[i].coords;
            auto dot = f.add(f.add(f.mul(line.coords[0], p[0]), f.mul(line.coords[1], p[1])), f.mul(line.coords[2], p[2]));
            if (dot.value == 0)
                on.push_back(i);
        }
        blocks.push_back(std::move(on));
    }
    return IncidenceStructure(static_cast<std::uint32_t>(pts.size()), std::move(blocks), "pg2_" + std::to_string(q));
}

PointSet hermitian_unital(std::uint32_t q0) {
    const std::uint32_t q = q0 * q0;
    const auto& f = GaloisField::get(q);
    auto pts = projective_points(f);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < pts.size(); ++i) {
        const auto& c = pts[i].coords;
        FieldElement sum = f.zero();
        for (auto x : c)
            sum = f.add(sum, f.pow(x, q0 + 1));
        if (sum.value == 0)
            out.push_back(i);
    }
    return PointSet(std::move(out));
}

std::vector<std::uint32_t> standard_polarity(std::uint32_t q) {
    const std::uint32_t v = q * q + q + 1;
    std::vector<std::uint32_t> map(v);
    for (std::uint32_t i = 0; i < v; ++i)
        map[i] = i;
    return map;
}

}  // namespace unitk::geometry
