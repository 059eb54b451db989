#pragma once

#include "unitk/bigint.hpp"
#include "unitk/canon.hpp"
#include "unitk/graph.hpp"
#include "unitk/incidence.hpp"
#include "unitk/perm.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace unitk::unitals {

enum class Provenance { appendix, search, constructed };
std::string_view to_string(Provenance p);

struct UnitalRecord {
    std::string plane_name;
    PointSet points;
    BigInt stabilizer_order = 1;
    canon::Certificate certificate;
    Provenance provenance = Provenance::constructed;
    /// Free-form origin, e.g. catalog section and unital number.
    std::string source;

    friend bool operator==(const UnitalRecord&, const UnitalRecord&) = default;
};

/// Square root of the plane order when it is a perfect square. Throws ContractError when
/// the structure is not a projective plane and DomainError when its order is not a square.
std::uint32_t unital_parameter(const IncidenceStructure& plane);

/// |set| = q^3+1 and every line meets the set in 1 or q+1 points, for a plane of order q^2.
bool is_unital(const IncidenceStructure& plane, const PointSet& set);
/// is_unital on the dual plane: set lists line indices.
bool is_line_unital(const IncidenceStructure& plane, const PointSet& lines);

/// Order of the automorphism group of the marked incidence graph. With the default
/// coloring this is the collineation stabilizer of the set.
BigInt stabilizer_order(const IncidenceStructure& plane, const PointSet& set, Coloring coloring = Coloring::point_block,
                        const canon::CanonOptions& options = {});

struct TangentSecant {
    std::uint32_t tangents = 0;
    std::uint32_t secants = 0;
};
/// Throws ContractError unless set is a unital; also checks that each of its points lies
/// on exactly one tangent.
TangentSecant tangent_secant_counts(const IncidenceStructure& plane, const PointSet& set);

/// Builds a record with certificate and stabilizer order of the marked incidence graph.
UnitalRecord make_record(const IncidenceStructure& plane, const PointSet& set, Provenance provenance,
                         std::string source = {}, Coloring coloring = Coloring::point_block,
                         const canon::CanonOptions& options = {});

struct UnitalClass {
    canon::Certificate certificate;
    BigInt stabilizer_order;
    /// Indices into the input, ascending; the first is the representative.
    std::vector<std::size_t> members;
    /// For each member, a vertex map of the incidence graph (points 0..v-1, then lines)
    /// carrying the representative's marked graph onto the member's.
    std::vector<perm::Permutation> witnesses;
};

struct ClassifyOptions {
    Coloring coloring = Coloring::point_block;
    canon::CanonOptions canon;
    unsigned threads = 1;
};

/// Groups sets by the certificate of their marked incidence graph. Classes are sorted by
/// (stabilizer order, certificate). Does not re-verify the unital property.
std::vector<UnitalClass> classify_nonisomorphic(const IncidenceStructure& plane, const std::vector<PointSet>& sets,
                                                const ClassifyOptions& options = {});

/// Equal certificates, so the two records describe isomorphic (plane, unital) pairs.
bool cross_representation_match(const UnitalRecord& a, const UnitalRecord& b);

}  // namespace unitk::unitals
