#pragma once

#include "unitk/field.hpp"
#include "unitk/incidence.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace unitk::geometry {

/// Homogeneous coordinates normalized so that the first nonzero entry is 1.
struct ProjectivePoint {
    std::array<FieldElement, 3> coords;

    friend bool operator==(const ProjectivePoint&, const ProjectivePoint&) = default;
    friend auto operator<=>(const ProjectivePoint&, const ProjectivePoint&) = default;
};

/// Scale a nonzero triple so its first nonzero coordinate is 1. Throws DomainError for (0,0,0).
ProjectivePoint normalize(const GaloisField& f, std::array<FieldElement, 3> c);

/// All normalized points of PG(2,q), lexicographic by coordinate values.
std::vector<ProjectivePoint> projective_points(const GaloisField& f);

/// Desarguesian plane PG(2,q). Points and lines are both indexed by the lexicographic
/// order of their normalized coordinate triples; point (x,y,z) lies on line [a,b,c] iff
/// ax+by+cz = 0. Named "pg2_<q>".
IncidenceStructure build_pg2(std::uint32_t q);

/// Index of a normalized point in build_pg2 order.
std::uint32_t point_index(const GaloisField& f, const ProjectivePoint& p);

/// Points of PG(2, q0^2) with x^(q0+1) + y^(q0+1) + z^(q0+1) = 0 (q0^3 + 1 of them).
PointSet hermitian_unital(std::uint32_t q0);

/// The polarity of PG(2,q) sending point (x,y,z) to line [x,y,z]. As index maps this is
/// the identity, because points and lines share the same coordinate order.
/// Returned as block index per point.
std::vector<std::uint32_t> standard_polarity(std::uint32_t q);

}  // namespace unitk::geometry
