#include "unitk/tables.hpp"

#include "unitk/embedded.hpp"
#include "unitk/errors.hpp"

namespace unitk::published {

std::string_view to_string(Presentation p) {
    switch (p) {
    case Presentation::royle:
        return "royle";
    case Presentation::moorhouse:
        return "moorhouse";
    case Presentation::dreadnaut:
        return "dreadnaut";
    }
    return "royle";
}

std::string_view embedded_catalog_text(Presentation p) {
    std::string_view file;
    switch (p) {
    case Presentation::royle:
        file = "appendix1_royle.cat";
        break;
    case Presentation::moorhouse:
        file = "appendix2_moorhouse.cat";
        break;
    case Presentation::dreadnaut:
        file = "appendix3_dreadnaut.cat";
        break;
    }
    for (const auto& f : data::embedded_files())
        if (f.name == file)
            return f.text;
    throw Error("embedded catalog missing: " + std::string(file));
}

formats::Catalog embedded_catalog(Presentation p) { return formats::parse_unital_catalog(embedded_catalog_text(p)); }

const std::vector<CountRow>& unital_counts() {
    static const std::vector<CountRow> rows{
        {"MATH", 16, 16, 16}, {"JOHN", 21, 25, 8},     {"BBH1", 16, 13, 6},  {"PG(2,16)", 2, 2, 2}, {"BBS4", 13, 13, 3},
        {"JOWK", 7, 7, 5},    {"DSFP", 2, 2, 2},       {"HALL", 7, 6, 6},    {"DEMP", 4, 4, 4},     {"SEMI2", 21, 21, 21},
        {"SEMI4", 12, 12, 8}, {"LMRH", 2, 2, 2},       {"BBH2", 26, 25, 12},
    };
    return rows;
}

CountTotals unital_count_totals() { return {149, 148, 95}; }

const std::vector<OrderList>& royle_unital_orders() {
    static const std::vector<OrderList> lists{
        {"BBH2", {16, 16, 16, 32, 32, 4, 4, 80, 20, 10, 8, 8, 16, 16, 16, 16, 16, 8, 8, 8, 8, 8, 8, 8, 4, 4}},
        {"JOHN", {48, 32, 32, 16, 8, 8, 8, 8, 24, 16, 16, 8, 8, 4, 4, 4, 8, 16, 8, 8, 8}},
        {"SEMI2", {64, 64, 64, 192, 48, 192, 48, 192, 48, 64, 16, 64, 64, 64, 64, 64, 64, 32, 32, 64, 64}},
        {"BBH1", {16, 16, 8, 8, 8, 8, 8, 32, 8, 32, 16, 16, 4, 8, 4, 4}},
        {"HALL", {1200, 48, 32, 100, 16, 80}},
        {"DSFP", {12, 24}},
        {"DEMP", {48, 16, 12, 24}},
        {"LMRH", {32, 16}},
        {"PG(2,16)", {249600, 768}},
        {"MATH", {16, 128, 64, 128, 16, 16, 64, 128, 128, 128, 128, 16, 32, 64, 16, 16}},
        {"BBS4", {8, 8, 8, 8, 4, 4, 8, 24, 12, 4, 4, 4, 12}},
        {"SEMI4", {8, 8, 128, 64, 48, 192, 8, 12, 128, 128, 12, 8}},
        {"JOWK", {8, 16, 4, 48, 24, 32, 12}},
    };
    return lists;
}

const std::vector<PlaneRow>& dreadnaut_planes() {
    static const std::vector<PlaneRow> rows{
        {"pp-16-1", 34217164800ULL, 2}, {"pp-16-2", 147456, 21},  {"pp-16-3", 884736, 11},  {"pp-16-4", 921600, 6},
        {"pp-16-5", 921600, 6},         {"pp-16-6", 258048, 2},   {"pp-16-7", 258048, 2},   {"pp-16-8", 258048, 7},
        {"pp-16-9", 258048, 7},         {"pp-16-10", 55296, 2},   {"pp-16-11", 55296, 2},   {"pp-16-12", 92160, 3},
        {"pp-16-13", 92160, 3},         {"pp-16-14", 2304, 27},   {"pp-16-15", 2304, 29},   {"pp-16-16", 3456, 13},
        {"pp-16-17", 3456, 13},         {"pp-16-18", 3840, 26},   {"pp-16-19", 3840, 26},   {"pp-16-20", 12288, 16},
        {"pp-16-21", 12288, 16},        {"pp-16-22", 18432, 16},
    };
    return rows;
}

std::uint32_t dreadnaut_total() { return 256; }

}  // namespace unitk::published
