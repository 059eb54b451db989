#pragma once

#include "unitk/formats.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

/// Published reference values for order-16 planes and the embedded unital catalogs.
namespace unitk::published {

enum class Presentation { royle, moorhouse, dreadnaut };

std::string_view to_string(Presentation p);
std::string_view embedded_catalog_text(Presentation p);
formats::Catalog embedded_catalog(Presentation p);

/// Unitals found per plane: Royle presentation, Moorhouse presentation, earlier literature.
struct CountRow {
    std::string_view plane;
    std::uint32_t royle;
    std::uint32_t moorhouse;
    std::uint32_t literature;
};
const std::vector<CountRow>& unital_counts();
struct CountTotals {
    std::uint32_t royle;
    std::uint32_t moorhouse;
    std::uint32_t literature;
};
/// Totals as printed, which need not equal the column sums.
CountTotals unital_count_totals();

/// Stabilizer orders of the unitals found on the Royle presentation, in unital order.
struct OrderList {
    std::string_view plane;
    std::vector<std::uint64_t> orders;
};
const std::vector<OrderList>& royle_unital_orders();

struct PlaneRow {
    std::string_view plane;
    std::uint64_t group_order;
    std::uint32_t unitals;
};
const std::vector<PlaneRow>& dreadnaut_planes();
std::uint32_t dreadnaut_total();

}  // namespace unitk::published
