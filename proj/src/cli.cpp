#include "unitk/cli.hpp"

#include "unitk/canon.hpp"
#include "unitk/errors.hpp"
#include "unitk/geometry.hpp"
#include "unitk/search.hpp"
#include "unitk/tables.hpp"
#include "unitk/unitals.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

namespace unitk::cli {

namespace fs = std::filesystem;
using formats::SourceKind;

namespace {

std::string sanitize(std::string name) {
    for (auto& c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.'))
            c = '_';
    return name.empty() ? std::string("plane") : name;
}

std::uint32_t block_size(const IncidenceStructure& s) { return s.b() ? static_cast<std::uint32_t>(s.block(0).size()) : 0; }

void require_plane(const IncidenceStructure& s, const std::string& what) {
    auto n = s.plane_order();
    if (!n)
        throw ContractError(what + " does not have the counts of a projective plane");
    auto report = validate_design(s, *n + 1, 1);
    if (!report.valid)
        throw ContractError(what + " is not a projective plane: " + report.summary());
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    auto work = [&](unsigned t) {
        try {
            for (auto i = next++; i < n; i = next++)
                body(i);
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(work, t);
    work(0);
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

std::vector<std::uint32_t> parse_labels(const std::string& text) {
    std::vector<std::uint32_t> out;
    std::string digits;
    auto flush = [&] {
        if (!digits.empty())
            out.push_back(static_cast<std::uint32_t>(std::stoul(digits)));
        digits.clear();
    };
    for (char c : text) {
        if (std::isdigit(static_cast<unsigned char>(c)))
            digits.push_back(c);
        else if (c == ' ' || c == ',' || c == '\t' || c == '\n')
            flush();
        else
            throw ConfigError(std::string("unexpected character '") + c + "' in point list");
    }
    flush();
    return out;
}

std::string line_size_summary(const IncidenceStructure& plane, const PointSet& set) {
    std::ostringstream out;
    bool first = true;
    for (auto [size, lines] : line_profile(plane, set)) {
        out << (first ? "" : ", ") << lines << " lines meet it in " << size;
        first = false;
    }
    return out.str();
}

/// A 65-set to check: labels are 1-based as given by the user or catalog.
struct Item {
    std::string label;
    std::vector<std::uint32_t> labels;
    std::optional<BigInt> recorded;
    std::string error;
};

struct Checked {
    bool pass = false;
    std::string line;
    PointSet points;
    BigInt order = 0;
};

Checked check_item(const IncidenceStructure& plane, const Item& item, Coloring coloring) {
    Checked c;
    if (!item.error.empty()) {
        c.line = "FAIL " + item.label + ": " + item.error;
        return c;
    }
    std::vector<std::uint32_t> zero;
    for (auto x : item.labels) {
        if (x < 1 || x > plane.v()) {
            c.line = "FAIL " + item.label + ": label " + std::to_string(x) + " outside 1.." + std::to_string(plane.v());
            return c;
        }
        zero.push_back(x - 1);
    }
    std::sort(zero.begin(), zero.end());
    if (std::adjacent_find(zero.begin(), zero.end()) != zero.end()) {
        c.line = "FAIL " + item.label + ": repeated label";
        return c;
    }
    c.points = PointSet(zero);
    if (!unitals::is_unital(plane, c.points)) {
        c.line = "FAIL " + item.label + ": not a unital (" + std::to_string(c.points.size()) + " points; " +
                 line_size_summary(plane, c.points) + ")";
        return c;
    }
    auto ts = unitals::tangent_secant_counts(plane, c.points);
    c.order = unitals::stabilizer_order(plane, c.points, coloring);
    std::ostringstream line;
    line << item.label << ": unital, tangents " << ts.tangents << ", secants " << ts.secants << ", order " << c.order;
    c.pass = true;
    if (item.recorded) {
        line << ", recorded " << *item.recorded;
        c.pass = *item.recorded == c.order;
    }
    c.line = (c.pass ? "PASS " : "FAIL ") + line.str();
    return c;
}

formats::CatalogLimits limits_for(const IncidenceStructure& plane) {
    formats::CatalogLimits limits;
    limits.max_label = plane.v();
    auto n = plane.plane_order().value_or(16);
    std::uint32_t q = 1;
    while ((q + 1) * (q + 1) <= n)
        ++q;
    limits.points = q * q == n ? q * q * q + 1 : 65;
    return limits;
}

/// Records from catalog refs and explicit sets, with catalog issues turned into failing items.
std::vector<Item> collect_items(const Workspace& ws, const IncidenceStructure& plane, const std::vector<std::string>& catalogs,
                                const std::vector<std::string>& sets, bool hermitian, const std::string& section) {
    std::vector<Item> items;
    for (const auto& ref : catalogs) {
        auto catalog = formats::parse_unital_catalog(ws.read_catalog_text(ref), limits_for(plane));
        for (const auto& issue : catalog.issues) {
            if (!section.empty() && formats::catalog_plane_key(issue.section) != section)
                continue;
            Item it;
            it.label = ref + " " + issue.section + " #" + std::to_string(issue.unital_index);
            it.error = "line " + std::to_string(issue.line) + ": " + issue.message;
            items.push_back(std::move(it));
        }
        for (const auto& r : catalog.records) {
            if (!section.empty() && r.plane_name != section)
                continue;
            Item it;
            it.label = ref + " " + r.plane_name + " #" + std::to_string(r.unital_index);
            it.labels = r.points.indices();
            it.recorded = r.stabilizer_order;
            items.push_back(std::move(it));
        }
    }
    for (std::size_t i = 0; i < sets.size(); ++i) {
        Item it;
        it.label = "set " + std::to_string(i + 1);
        try {
            it.labels = parse_labels(sets[i]);
        } catch (const Error& e) {
            it.error = e.what();
        }
        items.push_back(std::move(it));
    }
    if (hermitian) {
        auto n = plane.plane_order().value_or(0);
        std::uint32_t q0 = 1;
        while ((q0 + 1) * (q0 + 1) <= n)
            ++q0;
        if (q0 * q0 != n)
            throw DomainError("plane order " + std::to_string(n) + " is not a square");
        Item it;
        it.label = "hermitian";
        for (auto p : geometry::hermitian_unital(q0))
            it.labels.push_back(p + 1);
        items.push_back(std::move(it));
    }
    return items;
}

std::string join_args(const std::vector<std::string>& args) {
    std::string out;
    for (const auto& a : args)
        out += (out.empty() ? "" : " ") + a;
    return out;
}

// ---- reports ----------------------------------------------------------------

struct Column {
    std::string name;
    formats::Catalog catalog;
};

std::vector<Column> embedded_columns() {
    std::vector<Column> out;
    for (auto p : {published::Presentation::royle, published::Presentation::moorhouse, published::Presentation::dreadnaut})
        out.push_back({std::string(published::to_string(p)), published::embedded_catalog(p)});
    return out;
}

std::vector<Column> workspace_columns(const Workspace& ws, std::ostream& out) {
    std::vector<Column> cols;
    for (const auto& [name, files] : ws.catalog_columns()) {
        Column c{name, {}};
        for (const auto& f : files) {
            auto part = formats::parse_unital_catalog(formats::read_file(f));
            for (const auto& i : part.issues)
                out << "note: " << f.filename().string() << " line " << i.line << ": " << i.message << '\n';
            c.catalog.sections.insert(c.catalog.sections.end(), part.sections.begin(), part.sections.end());
            c.catalog.records.insert(c.catalog.records.end(), part.records.begin(), part.records.end());
        }
        cols.push_back(std::move(c));
    }
    for (auto expected : {"royle", "moorhouse", "dreadnaut"})
        if (std::none_of(cols.begin(), cols.end(), [&](const Column& c) { return c.name == expected; }))
            out << "missing catalog: " << expected << '\n';
    return cols;
}

const Column* find_column(const std::vector<Column>& cols, std::string_view name) {
    for (const auto& c : cols)
        if (c.name == name)
            return &c;
    return nullptr;
}

std::map<std::string, std::size_t> counts(const Column* c) {
    std::map<std::string, std::size_t> m;
    if (c)
        for (const auto& [k, n] : c->catalog.counts_by_plane())
            m[k] = n;
    return m;
}

/// Plane keys: published order first, then any others in first-seen order.
std::vector<std::string> table1_rows(const std::vector<Column>& cols) {
    std::vector<std::string> seen;
    for (const auto& c : cols) {
        if (c.name == "dreadnaut")
            continue;
        for (const auto& [k, n] : c.catalog.counts_by_plane())
            if (std::find(seen.begin(), seen.end(), k) == seen.end())
                seen.push_back(k);
    }
    std::vector<std::string> rows;
    for (const auto& r : published::unital_counts())
        if (std::find(seen.begin(), seen.end(), r.plane) != seen.end())
            rows.emplace_back(r.plane);
    for (const auto& k : seen)
        if (std::find(rows.begin(), rows.end(), k) == rows.end())
            rows.push_back(k);
    return rows;
}

void render_table1(const std::vector<Column>& cols, std::ostream& out) {
    std::vector<std::string> shown{"royle", "moorhouse"};
    for (const auto& c : cols)
        if (c.name != "dreadnaut" && std::find(shown.begin(), shown.end(), c.name) == shown.end())
            shown.push_back(c.name);
    out << "Table 1: unitals per plane\n" << std::left << std::setw(10) << "plane";
    for (const auto& name : shown)
        out << std::right << std::setw(11) << name;
    out << std::right << std::setw(13) << "literature*" << '\n';
    auto rows = table1_rows(cols);
    if (rows.empty())
        return;
    std::vector<std::size_t> totals(shown.size(), 0);
    for (const auto& plane : rows) {
        out << std::left << std::setw(10) << plane;
        for (std::size_t i = 0; i < shown.size(); ++i) {
            auto m = counts(find_column(cols, shown[i]));
            auto n = m.count(plane) ? m[plane] : 0;
            totals[i] += n;
            out << std::right << std::setw(11) << n;
        }
        std::string lit = "-";
        for (const auto& r : published::unital_counts())
            if (r.plane == plane)
                lit = std::to_string(r.literature);
        out << std::right << std::setw(13) << lit << '\n';
    }
    out << std::left << std::setw(10) << "TOTAL";
    for (auto t : totals)
        out << std::right << std::setw(11) << t;
    out << std::right << std::setw(13) << published::unital_count_totals().literature << '\n';
    out << "* echoed from the published table, not computed\n";
}

void render_table2(const std::vector<Column>& cols, std::ostream& out) {
    out << "Table 2: stabilizer orders per plane\n";
    for (const auto& c : cols) {
        std::vector<std::pair<std::string, std::vector<std::string>>> planes;
        for (const auto& r : c.catalog.records) {
            auto it = std::find_if(planes.begin(), planes.end(), [&](auto& p) { return p.first == r.plane_name; });
            if (it == planes.end())
                it = planes.insert(planes.end(), {r.plane_name, {}});
            it->second.push_back(to_string(r.stabilizer_order));
        }
        if (planes.empty())
            continue;
        out << "[" << c.name << "]\n";
        for (const auto& [plane, orders] : planes) {
            out << std::left << std::setw(10) << plane << std::right << std::setw(4) << orders.size() << "  ";
            for (std::size_t i = 0; i < orders.size(); ++i)
                out << (i ? " " : "") << orders[i];
            out << '\n';
        }
    }
}

std::optional<BigInt> section_order(const Column& c, const std::string& plane) {
    for (const auto& s : c.catalog.sections)
        if (s.plane_name == plane && s.group_order)
            return s.group_order;
    return std::nullopt;
}

void render_table3(const std::vector<Column>& cols, std::ostream& out) {
    out << "Table 3: planes by group order\n"
        << std::left << std::setw(10) << "plane" << std::right << std::setw(14) << "group order" << std::setw(9)
        << "unitals" << '\n';
    const Column* c = find_column(cols, "dreadnaut");
    if (!c || c->catalog.records.empty())
        return;
    std::size_t total = 0;
    bool echoed = false;
    for (const auto& [plane, n] : c->catalog.counts_by_plane()) {
        std::string order = "-";
        if (auto o = section_order(*c, plane)) {
            order = to_string(*o);
        } else {
            for (const auto& r : published::dreadnaut_planes())
                if (r.plane == plane) {
                    order = std::to_string(r.group_order) + "*";
                    echoed = true;
                }
        }
        out << std::left << std::setw(10) << plane << std::right << std::setw(14) << order << std::setw(9) << n << '\n';
        total += n;
    }
    out << std::left << std::setw(10) << "Total" << std::right << std::setw(14) << "" << std::setw(9) << total << '\n';
    if (echoed)
        out << "* not in the catalog; echoed from the published table\n";
}

std::size_t paper_diff(const std::vector<Column>& cols, bool embedded_source, std::ostream& out) {
    std::size_t diffs = 0;
    auto diff = [&](const std::string& msg) {
        out << "DIFF " << msg << '\n';
        ++diffs;
    };
    const Column* royle = find_column(cols, "royle");
    const Column* moorhouse = find_column(cols, "moorhouse");
    const Column* dreadnaut = find_column(cols, "dreadnaut");

    auto t1 = [&](const Column* c, auto field, std::uint32_t published_total) {
        if (!c) {
            out << "skip: no " << (field == 0 ? "royle" : "moorhouse") << " catalog\n";
            return;
        }
        auto m = counts(c);
        std::size_t total = 0;
        for (const auto& r : published::unital_counts()) {
            std::size_t want = field == 0 ? r.royle : r.moorhouse;
            std::size_t got = m.count(std::string(r.plane)) ? m[std::string(r.plane)] : 0;
            if (got != want)
                diff("table1 " + std::string(r.plane) + " " + c->name + ": catalog " + std::to_string(got) + ", published " +
                     std::to_string(want));
        }
        for (const auto& [k, n] : m)
            total += n;
        if (total != published_total)
            diff("table1 TOTAL " + c->name + ": catalog " + std::to_string(total) + ", published " +
                 std::to_string(published_total));
    };
    t1(royle, 0, published::unital_count_totals().royle);
    t1(moorhouse, 1, published::unital_count_totals().moorhouse);

    if (royle) {
        for (const auto& list : published::royle_unital_orders()) {
            std::multiset<BigInt> want, got;
            for (auto o : list.orders)
                want.insert(BigInt(o));
            for (const auto& r : royle->catalog.records)
                if (r.plane_name == list.plane)
                    got.insert(r.stabilizer_order);
            if (got != want) {
                std::ostringstream msg;
                msg << "table2 " << list.plane << ": catalog {";
                bool first = true;
                for (const auto& o : got) {
                    msg << (first ? "" : ",") << o;
                    first = false;
                }
                msg << "}, published {";
                first = true;
                for (const auto& o : want) {
                    msg << (first ? "" : ",") << o;
                    first = false;
                }
                msg << "}";
                diff(msg.str());
            }
        }
    }

    if (dreadnaut) {
        auto m = counts(dreadnaut);
        std::size_t total = 0;
        for (const auto& r : published::dreadnaut_planes()) {
            std::string plane(r.plane);
            std::size_t got = m.count(plane) ? m[plane] : 0;
            if (got != r.unitals)
                diff("table3 " + plane + " unitals: catalog " + std::to_string(got) + ", published " +
                     std::to_string(r.unitals));
            if (auto o = section_order(*dreadnaut, plane); o && *o != BigInt(r.group_order))
                diff("table3 " + plane + " group order: catalog " + to_string(*o) + ", published " +
                     std::to_string(r.group_order));
        }
        for (const auto& [k, n] : m)
            total += n;
        if (total != published::dreadnaut_total())
            diff("table3 Total: catalog " + std::to_string(total) + ", published " +
                 std::to_string(published::dreadnaut_total()));
    } else {
        out << "skip: no dreadnaut catalog\n";
    }

    if (!embedded_source) {
        for (const auto& ref : embedded_columns()) {
            const Column* c = find_column(cols, ref.name);
            if (!c)
                continue;
            std::set<std::pair<std::string, PointSet>> a, b;
            for (const auto& r : c->catalog.records)
                a.insert({r.plane_name, r.points});
            for (const auto& r : ref.catalog.records)
                b.insert({r.plane_name, r.points});
            for (const auto& r : c->catalog.records)
                if (!b.count({r.plane_name, r.points}))
                    diff("records " + c->name + " " + r.plane_name + " #" + std::to_string(r.unital_index) +
                         ": not in the embedded appendix data");
            for (const auto& r : ref.catalog.records)
                if (!a.count({r.plane_name, r.points}))
                    diff("records " + c->name + " " + r.plane_name + " #" + std::to_string(r.unital_index) +
                         ": in the embedded appendix data, missing here");
        }
    }
    out << "paper-diff: " << diffs << " discrepanc" << (diffs == 1 ? "y" : "ies") << '\n';
    return diffs;
}

// ---- options ----------------------------------------------------------------

const std::vector<std::string> kind_names{"royle", "moorhouse", "dreadnaut", "native"};

struct Options {
    std::string workspace;
    unsigned threads = 1;
    bool self_dual = false;

    std::uint32_t q = 16;
    std::string name;
    bool group = false;
    bool store_dual = false;

    std::string source;
    std::string kind_name = "native";
    SourceKind kind = SourceKind::native;
    std::uint32_t order = 16;

    std::string plane;
    std::vector<std::string> catalogs;
    std::vector<std::string> sets;
    bool hermitian = false;
    std::string section;

    std::vector<int> tables;
    bool embedded = false;
    bool diff = false;

    bool on_dual = false;
    search::SearchConfig search;
    std::optional<std::uint32_t> budget;
};

Coloring coloring(const Options& o) { return o.self_dual ? Coloring::self_dual : Coloring::point_block; }

void print_plane(const IncidenceStructure& s, bool group, std::ostream& out) {
    out << s.name() << ": v=" << s.v() << " b=" << s.b() << " k=" << block_size(s) << '\n';
    if (group) {
        auto g = to_incidence_graph(s);
        out << "collineation group order: " << canon::analyze(g).order << '\n';
        auto sd = to_incidence_graph(s, std::nullopt, Coloring::self_dual);
        out << "incidence graph group order: " << canon::analyze(sd).order << '\n';
    }
}

int cmd_construct(const Workspace& ws, const Options& o, std::ostream& out) {
    auto s = geometry::build_pg2(o.q);
    s.set_name(sanitize(o.name.empty() ? "pg2_" + std::to_string(o.q) : o.name));
    auto path = ws.store_plane(s);
    out << "stored " << path.filename().string() << '\n';
    print_plane(s, o.group, out);
    if (o.store_dual) {
        auto d = dual(s);
        d.set_name(s.name() + "_dual");
        out << "stored " << ws.store_plane(d).filename().string() << '\n';
    }
    return 0;
}

int cmd_ingest(const Workspace& ws, const Options& o, std::ostream& out) {
    std::string origin;
    auto text = formats::read_source(o.source, ws.cache(), &origin);
    auto name = o.name;
    if (name.empty()) {
        auto stem = fs::path(o.source).stem().string();
        name = stem.empty() ? "plane" : stem;
    }
    auto file = formats::load_plane(text, o.kind, origin, sanitize(name), o.order);
    auto path = ws.store_plane(file.structure);
    out << "stored " << path.filename().string() << " from " << origin << " (" << formats::to_string(o.kind) << ")\n";
    print_plane(file.structure, o.group, out);
    if (o.store_dual) {
        auto d = dual(file.structure);
        d.set_name(file.structure.name() + "_dual");
        out << "stored " << ws.store_plane(d).filename().string() << '\n';
    }
    return 0;
}

int cmd_verify(const Workspace& ws, const Options& o, std::ostream& out) {
    auto plane = ws.resolve_plane(o.plane, o.kind);
    auto items = collect_items(ws, plane, o.catalogs, o.sets, o.hermitian, o.section);
    std::vector<Checked> results(items.size());
    parallel_for(items.size(), o.threads, [&](std::size_t i) { results[i] = check_item(plane, items[i], coloring(o)); });
    std::size_t failures = 0;
    for (const auto& r : results) {
        out << r.line << '\n';
        failures += r.pass ? 0 : 1;
    }
    out << "verified " << results.size() << " record" << (results.size() == 1 ? "" : "s") << " on " << plane.name()
        << ": " << results.size() - failures << " pass, " << failures << " fail\n";
    return failures ? 1 : 0;
}

int cmd_report(const Workspace& ws, const Options& o, std::ostream& out) {
    auto cols = o.embedded ? embedded_columns() : workspace_columns(ws, out);
    auto tables = o.tables.empty() ? std::vector<int>{1, 2, 3} : o.tables;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (i)
            out << '\n';
        switch (tables[i]) {
        case 1:
            render_table1(cols, out);
            break;
        case 2:
            render_table2(cols, out);
            break;
        case 3:
            render_table3(cols, out);
            break;
        }
    }
    if (o.diff) {
        out << '\n';
        paper_diff(cols, o.embedded, out);
    }
    return 0;
}

int cmd_search(const Workspace& ws, const Options& o, std::ostream& out) {
    auto plane = ws.resolve_plane(o.plane, o.kind);
    if (o.on_dual) {
        auto name = plane.name() + "_dual";
        plane = dual(plane);
        plane.set_name(name);
    }
    auto config = o.search;
    if (o.budget)
        config.subgroup_budget = *o.budget;
    config.threads = o.threads;
    config.coloring = coloring(o);
    auto chain = search::collineation_chain(plane);
    auto result = search::find_unitals(plane, chain, config);

    std::string stem = sanitize(o.name.empty() ? plane.name() : o.name);
    std::vector<formats::CatalogRecord> records;
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        formats::CatalogRecord r;
        r.plane_name = stem;
        r.section = stem;
        r.unital_index = static_cast<std::uint32_t>(i + 1);
        r.stabilizer_order = result.records[i].stabilizer_order;
        std::vector<std::uint32_t> one;
        for (auto p : result.records[i].points)
            one.push_back(p + 1);
        r.points = PointSet(one);
        records.push_back(std::move(r));
    }
    auto dir = ws.catalogs() / "search";
    formats::write_file_atomic(dir / (stem + ".cat"), formats::write_unital_catalog(records, "search results on " + stem));
    formats::write_file_atomic(dir / (stem + ".stats"), search::stats_sidecar(config, result.stats));
    ws.log("search " + stem + " wall_seconds=" + std::to_string(result.stats.wall_seconds));
    out << "search on " << plane.name() << ": " << result.records.size() << " class"
        << (result.records.size() == 1 ? "" : "es") << " from " << result.stats.distinct_sets << " distinct unitals\n";
    for (std::size_t i = 0; i < result.records.size(); ++i)
        out << "class " << i + 1 << ": order " << result.records[i].stabilizer_order << ", certificate "
            << result.records[i].certificate.short_digest() << '\n';
    if (result.stats.combination_budget_hits || result.stats.completion_budget_hits || result.stats.completions_incomplete ||
        result.stats.time_budget_hit)
        out << "budgets ran out; see the stats file\n";
    out << "wrote " << (fs::path("search") / (stem + ".cat")).string() << " and " << stem << ".stats\n";
    return 0;
}

int cmd_classify(const Workspace& ws, const Options& o, std::ostream& out) {
    auto plane = ws.resolve_plane(o.plane, o.kind);
    auto items = collect_items(ws, plane, o.catalogs, o.sets, o.hermitian, o.section);
    std::vector<Checked> checked(items.size());
    parallel_for(items.size(), o.threads, [&](std::size_t i) {
        Item it = items[i];
        it.recorded.reset();
        checked[i] = check_item(plane, it, coloring(o));
    });
    std::vector<PointSet> sets;
    std::vector<std::size_t> origin;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < checked.size(); ++i) {
        if (checked[i].pass) {
            sets.push_back(checked[i].points);
            origin.push_back(i);
        } else {
            out << checked[i].line << '\n';
            ++failures;
        }
    }
    unitals::ClassifyOptions copt;
    copt.coloring = coloring(o);
    copt.threads = o.threads;
    auto classes = unitals::classify_nonisomorphic(plane, sets, copt);

    std::string stem = sanitize(o.name.empty() ? plane.name() : o.name);
    std::vector<formats::CatalogRecord> reps;
    std::ostringstream listing;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto& cls = classes[c];
        listing << "class " << c + 1 << ": order " << cls.stabilizer_order << ", " << cls.members.size() << " member"
                << (cls.members.size() == 1 ? "" : "s") << ", certificate " << cls.certificate.short_digest() << '\n';
        for (auto m : cls.members)
            listing << "  " << items[origin[m]].label << '\n';
        formats::CatalogRecord r;
        r.plane_name = stem;
        r.section = stem;
        r.unital_index = static_cast<std::uint32_t>(c + 1);
        r.stabilizer_order = cls.stabilizer_order;
        std::vector<std::uint32_t> one;
        for (auto p : sets[cls.members.front()])
            one.push_back(p + 1);
        r.points = PointSet(one);
        reps.push_back(std::move(r));
    }
    out << listing.str();
    out << classes.size() << " class" << (classes.size() == 1 ? "" : "es") << " among " << sets.size() << " unital"
        << (sets.size() == 1 ? "" : "s") << ", " << failures << " record failure" << (failures == 1 ? "" : "s") << '\n';
    auto dir = ws.catalogs() / "classify";
    formats::write_file_atomic(dir / (stem + ".cat"), formats::write_unital_catalog(reps, "class representatives on " + stem));
    formats::write_file_atomic(dir / (stem + ".classes"), listing.str());
    return failures ? 1 : 0;
}

int cmd_group(const Workspace& ws, const Options& o, std::ostream& out) {
    auto plane = ws.resolve_plane(o.plane, o.kind);
    std::optional<PointSet> marked;
    if (!o.sets.empty()) {
        std::vector<std::uint32_t> zero;
        for (auto x : parse_labels(o.sets.front())) {
            if (x < 1 || x > plane.v())
                throw BoundsError("label " + std::to_string(x) + " outside 1.." + std::to_string(plane.v()));
            zero.push_back(x - 1);
        }
        marked = PointSet(zero);
    }
    auto g = to_incidence_graph(plane, marked, coloring(o));
    auto r = canon::analyze(g);
    std::size_t point_orbits = 0;
    for (const auto& orb : r.orbits)
        if (orb.front() < plane.v())
            ++point_orbits;
    out << plane.name() << ": order " << r.order << ", " << r.generators.size() << " generators, " << r.orbits.size()
        << " vertex orbits (" << point_orbits << " containing points), certificate " << r.certificate.short_digest() << '\n';
    return 0;
}

}  // namespace

Workspace Workspace::open(const std::optional<fs::path>& root) {
    Workspace ws;
    if (root && !root->empty())
        ws.root_ = *root;
    else if (const char* env = std::getenv("UNITAL_WORKSPACE"); env && *env)
        ws.root_ = env;
    else
        ws.root_ = "unitk-workspace";
    for (const auto& d : {ws.planes(), ws.catalogs(), ws.cache(), ws.logs()})
        fs::create_directories(d);
    return ws;
}

fs::path Workspace::store_plane(const IncidenceStructure& plane) const {
    require_plane(plane, plane.name());
    auto path = plane_path(sanitize(plane.name()));
    formats::write_file_atomic(path, formats::write_native(plane));
    return path;
}

IncidenceStructure Workspace::resolve_plane(const std::string& ref, SourceKind kind) const {
    static const std::regex pg(R"(^pg2_([0-9]+)$)");
    auto stored = plane_path(ref);
    if (fs::exists(stored)) {
        auto s = formats::parse_native(formats::read_file(stored));
        require_plane(s, stored.string());
        s.set_name(ref);
        return s;
    }
    if (fs::exists(ref)) {
        return formats::load_plane(formats::read_file(ref), kind, ref, fs::path(ref).stem().string()).structure;
    }
    std::smatch m;
    if (std::regex_match(ref, m, pg)) {
        auto s = geometry::build_pg2(static_cast<std::uint32_t>(std::stoul(m[1].str())));
        s.set_name(ref);
        return s;
    }
    throw ConfigError("unknown plane '" + ref + "' (not stored in " + planes().string() + ", not a file)");
}

std::string Workspace::read_catalog_text(const std::string& ref, std::string* origin) const {
    if (ref.rfind("embedded:", 0) == 0) {
        auto which = ref.substr(9);
        for (auto p : {published::Presentation::royle, published::Presentation::moorhouse, published::Presentation::dreadnaut})
            if (published::to_string(p) == which) {
                if (origin)
                    *origin = ref;
                return std::string(published::embedded_catalog_text(p));
            }
        throw ConfigError("unknown embedded catalog '" + which + "' (royle, moorhouse, dreadnaut)");
    }
    return formats::read_source(ref, cache(), origin);
}

std::vector<std::pair<std::string, std::vector<fs::path>>> Workspace::catalog_columns() const {
    std::map<std::string, std::vector<fs::path>> cols;
    if (fs::exists(catalogs()))
        for (const auto& e : fs::directory_iterator(catalogs())) {
            if (e.is_regular_file() && e.path().extension() == ".cat") {
                cols[e.path().stem().string()].push_back(e.path());
            } else if (e.is_directory()) {
                for (const auto& f : fs::directory_iterator(e.path()))
                    if (f.is_regular_file() && f.path().extension() == ".cat")
                        cols[e.path().filename().string()].push_back(f.path());
            }
        }
    std::vector<std::pair<std::string, std::vector<fs::path>>> out;
    for (auto& [k, files] : cols) {
        std::sort(files.begin(), files.end());
        if (!files.empty())
            out.emplace_back(k, std::move(files));
    }
    return out;
}

void Workspace::log(const std::string& line) const {
    static std::mutex m;
    std::lock_guard lock(m);
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ofstream out(logs() / "unitk.log", std::ios::app);
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << ' ' << line << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Projective planes of order 16 and their unitals", "unitk"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--workspace", o.workspace, "workspace root (default $UNITAL_WORKSPACE or ./unitk-workspace)");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 256u));
        sub->add_flag("--self-dual-coloring", o.self_dual, "color points and lines alike, admitting dualities");
    };
    auto add_plane = [&](CLI::App* sub) {
        sub->add_option("--plane", o.plane, "stored plane name, plane file, or pg2_<q>")->required();
        sub->add_option("--kind", o.kind_name, "format of a plane file")->check(CLI::IsMember(kind_names));
    };
    auto add_records = [&](CLI::App* sub) {
        sub->add_option("--catalog", o.catalogs, "catalog file, URL, or embedded:<royle|moorhouse|dreadnaut>");
        sub->add_option("--set", o.sets, "1-based point labels separated by spaces or commas");
        sub->add_flag("--hermitian", o.hermitian, "the Hermitian unital of the constructed plane");
        sub->add_option("--section", o.section, "only catalog records of this plane key");
    };

    auto* construct = app.add_subcommand("construct", "build PG(2,q) and store it");
    construct->add_option("q", o.q, "field size")->required();
    construct->add_option("--name", o.name, "stored name (default pg2_<q>)");
    construct->add_flag("--group", o.group, "print group orders");
    construct->add_flag("--dual", o.store_dual, "also store the dual plane");

    auto* ingest = app.add_subcommand("ingest", "parse, validate and store a plane file");
    ingest->add_option("source", o.source, "file path or http(s) URL")->required();
    ingest->add_option("--kind", o.kind_name, "input format")->required()->check(CLI::IsMember(kind_names));
    ingest->add_option("--name", o.name, "stored name (default: file stem)");
    ingest->add_option("--order", o.order, "plane order for line-list formats");
    ingest->add_flag("--group", o.group, "print group orders");
    ingest->add_flag("--dual", o.store_dual, "also store the dual plane");

    auto* verify = app.add_subcommand("verify", "check unitals and their stabilizer orders");
    add_plane(verify);
    add_records(verify);
    add_common(verify);

    auto* report = app.add_subcommand("report", "render unital tables from catalogs");
    report->add_option("--table", o.tables, "table number (1, 2 or 3); default all")->check(CLI::Range(1, 3));
    report->add_flag("--embedded", o.embedded, "use the embedded appendix catalogs instead of the workspace");
    report->add_flag("--paper-diff", o.diff, "compare against the published tables and appendix data");

    auto* search = app.add_subcommand("search", "orbit-union search for unitals");
    add_plane(search);
    add_common(search);
    search->add_flag("--dual", o.on_dual, "search the dual plane");
    search->add_flag("--exhaustive", o.search.exhaustive, "complete from the empty set (small planes)");
    search->add_option("--seed", o.search.seed, "subgroup sampling seed");
    search->add_option("--budget", o.budget, "subgroups tried (same as --budget-subgroups)");
    search->add_option("--budget-subgroups", o.search.subgroup_budget, "subgroups tried");
    search->add_option("--budget-combinations", o.search.combination_budget, "orbit combinations per subgroup");
    search->add_option("--budget-completion", o.search.completion_budget, "completion nodes per subgroup");
    search->add_option("--budget-time", o.search.time_budget, "wall-clock seconds, 0 for none");
    search->add_option("--threshold", o.search.completion_threshold, "smallest orbit union sent to completion");
    search->add_option("--name", o.name, "output catalog name (default: plane name)");

    auto* classify = app.add_subcommand("classify", "group unitals into isomorphism classes");
    add_plane(classify);
    add_records(classify);
    add_common(classify);
    classify->add_option("--name", o.name, "output catalog name (default: plane name)");

    auto* group = app.add_subcommand("group", "automorphism group of a plane's incidence graph");
    add_plane(group);
    add_common(group);
    group->add_option("--set", o.sets, "1-based labels of points to mark")->expected(0, 1);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        o.kind = formats::parse_source_kind(o.kind_name);
        auto ws = Workspace::open(o.workspace.empty() ? std::nullopt : std::optional<fs::path>(o.workspace));
        int code = 0;
        if (construct->parsed())
            code = cmd_construct(ws, o, out);
        else if (ingest->parsed())
            code = cmd_ingest(ws, o, out);
        else if (verify->parsed())
            code = cmd_verify(ws, o, out);
        else if (report->parsed())
            code = cmd_report(ws, o, out);
        else if (search->parsed())
            code = cmd_search(ws, o, out);
        else if (classify->parsed())
            code = cmd_classify(ws, o, out);
        else if (group->parsed())
            code = cmd_group(ws, o, out);
        ws.log(join_args(args) + " -> " + std::to_string(code));
        return code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace unitk::cli
