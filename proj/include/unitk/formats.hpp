#pragma once

#include "unitk/bigint.hpp"
#include "unitk/graph.hpp"
#include "unitk/incidence.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace unitk::formats {

enum class SourceKind { royle, moorhouse, dreadnaut, native };

std::string_view to_string(SourceKind kind);
/// Accepts "royle", "moorhouse", "dreadnaut", "native". Throws ConfigError otherwise.
SourceKind parse_source_kind(std::string_view name);

struct PlaneFile {
    SourceKind source_kind = SourceKind::native;
    IncidenceStructure structure;
    std::string origin;
};

/// Header "plane <name> v=<v> b=<b>", then one line per block with 1-based sorted indices.
IncidenceStructure parse_native(std::string_view text);
std::string write_native(const IncidenceStructure& s);

/// One block per text line, order+1 tokens each, order^2+order+1 lines. Labels 0-based.
/// Blank lines and lines starting with '#' are skipped.
IncidenceStructure parse_royle(std::string_view text, std::uint32_t order = 16);
/// Same grammar as parse_royle with 1-based labels.
IncidenceStructure parse_moorhouse(std::string_view text, std::uint32_t order = 16);

/// Static subset of the dreadnaut language: "$=<base>", "n=<N>", "g" followed by adjacency
/// lists ("v: w w ...;" or bare lists for consecutive vertices) closed by ".", and
/// "f=[cell|cell|...]" where a cell lists vertices and ranges "a:b". '!' comments run to
/// the end of the line. Anything else is a ParseError.
ColoredGraph parse_dreadnaut(std::string_view text);

/// Parse text of the given kind and accept it only as a projective plane of some order
/// (validated as a 2-(n^2+n+1, n+1, 1) design). Dreadnaut input must be the bipartite
/// incidence graph. Throws ParseError or ContractError.
PlaneFile load_plane(std::string_view text, SourceKind kind, std::string origin, std::string name = {},
                     std::uint32_t order = 16);

struct CatalogLimits {
    std::uint32_t points = 65;
    std::uint32_t max_label = 273;
};

/// One unital as listed in a catalog. Labels are kept 1-based, as read.
struct CatalogRecord {
    std::string plane_name;
    std::string section;
    std::uint32_t unital_index = 0;
    BigInt stabilizer_order = 1;
    PointSet points;

    /// Points shifted to 0-based plane indices.
    PointSet zero_based() const;
    friend bool operator==(const CatalogRecord&, const CatalogRecord&) = default;
};

struct CatalogSection {
    std::string header;
    std::string plane_name;
    std::optional<BigInt> group_order;
};

struct CatalogIssue {
    std::size_t line = 0;
    std::string section;
    std::uint32_t unital_index = 0;
    std::string message;
};

struct Catalog {
    std::vector<CatalogSection> sections;
    std::vector<CatalogRecord> records;
    std::vector<CatalogIssue> issues;

    /// Records per plane key, in first-seen order.
    std::vector<std::pair<std::string, std::size_t>> counts_by_plane() const;
};

/// Plane key for a section header: "pp-16-N" for dreadnaut file names, the plane name
/// before " graph" for Royle headers, the upper-cased .DAT base name (without a "moor"
/// prefix) for Moorhouse headers. Returns the trimmed header when nothing matches.
std::string catalog_plane_key(std::string_view header);
/// Plane group order announced in a section header, if any.
std::optional<BigInt> catalog_group_order(std::string_view header);

/// Catalog grammar: '#' lines are comments, blank lines are ignored. A unital header is
/// "Unital No <k>", "Unitals No <k>", "Unital No= <k>" or "BRRESH[=] <k>"; the order line is
/// "|Aut(G,M65)|= <n>" where n may carry a zero decimal tail; then exactly limits.points
/// integers. Any other text line opens a new section. Record-level problems go to issues.
Catalog parse_unital_catalog(std::string_view text, const CatalogLimits& limits = {});

/// Canonical catalog text: optional "# <title>" line, section headers as stored, then per
/// record "Unital No <k>", "|Aut(G,M<size>)|= <n>" and rows of 16 labels.
std::string write_unital_catalog(const std::vector<CatalogRecord>& records, std::string_view title = {});

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary file and rename, so readers never see partial content.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Lower-case hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

struct CachedFile {
    std::filesystem::path path;
    std::string sha256;
    bool downloaded = false;
};

/// Fetch an http(s) URL into cache_dir, named by the digest of the URL, with a sibling
/// ".sha256" file holding the content digest. A cached copy whose digest still matches is
/// reused without network access. Writes are serialized process-wide.
CachedFile fetch_to_cache(const std::string& url, const std::filesystem::path& cache_dir);

/// Local path or URL: URLs go through fetch_to_cache, paths are read directly.
std::string read_source(const std::string& path_or_url, const std::filesystem::path& cache_dir, std::string* origin = nullptr);

}  // namespace unitk::formats
