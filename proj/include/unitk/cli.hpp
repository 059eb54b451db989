#pragma once

#include "unitk/formats.hpp"
#include "unitk/incidence.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace unitk::cli {

/// Directory tree holding stored planes, catalogs, the download cache and run logs.
class Workspace {
public:
    /// Uses root when given, else $UNITAL_WORKSPACE, else ./unitk-workspace. Creates the
    /// subdirectories.
    static Workspace open(const std::optional<std::filesystem::path>& root = std::nullopt);

    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path planes() const { return root_ / "planes"; }
    std::filesystem::path catalogs() const { return root_ / "catalogs"; }
    std::filesystem::path cache() const { return root_ / "cache"; }
    std::filesystem::path logs() const { return root_ / "logs"; }

    std::filesystem::path plane_path(const std::string& name) const { return planes() / (name + ".plane"); }

    /// Stores the plane in native format under its name; re-validates before writing.
    std::filesystem::path store_plane(const IncidenceStructure& plane) const;

    /// A stored plane name, a plane file path (read as kind), or "pg2_<q>", which is
    /// constructed when not stored. Stored planes are re-validated on load.
    IncidenceStructure resolve_plane(const std::string& ref, formats::SourceKind kind = formats::SourceKind::native) const;

    /// "embedded:royle|moorhouse|dreadnaut", a URL, or a file path.
    std::string read_catalog_text(const std::string& ref, std::string* origin = nullptr) const;

    /// Catalog files grouped by column: catalogs/<column>.cat and catalogs/<column>/*.cat,
    /// sorted by column then file name.
    std::vector<std::pair<std::string, std::vector<std::filesystem::path>>> catalog_columns() const;

    void log(const std::string& line) const;

private:
    std::filesystem::path root_;
};

/// Runs the command line (without the program name). Returns the process exit code:
/// 0 on success, 1 when some record failed verification or classification, 2 on errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace unitk::cli
