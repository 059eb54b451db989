#pragma once

#include <span>
#include <string_view>

namespace unitk::data {

struct EmbeddedFile {
    std::string_view name;
    std::string_view text;
    std::string_view sha256;
};

/// Catalog files compiled into the library, checked against their manifest at build time.
std::span<const EmbeddedFile> embedded_files();

}  // namespace unitk::data
