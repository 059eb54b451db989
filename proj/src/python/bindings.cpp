#include "unitk/canon.hpp"
#include "unitk/cli.hpp"
#include "unitk/errors.hpp"
#include "unitk/formats.hpp"
#include "unitk/geometry.hpp"
#include "unitk/search.hpp"
#include "unitk/tables.hpp"
#include "unitk/unitals.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace unitk;

namespace {

py::int_ to_py(const BigInt& x) { return py::int_(py::module_::import("builtins").attr("int")(to_string(x))); }

PointSet points(const std::vector<std::uint32_t>& xs) { return PointSet(xs); }

Coloring coloring(bool self_dual) { return self_dual ? Coloring::self_dual : Coloring::point_block; }

py::dict record_dict(const formats::CatalogRecord& r) {
    py::dict d;
    d["plane"] = r.plane_name;
    d["section"] = r.section;
    d["index"] = r.unital_index;
    d["order"] = to_py(r.stabilizer_order);
    d["points"] = r.points.indices();
    return d;
}

py::dict unital_dict(const unitals::UnitalRecord& r) {
    py::dict d;
    d["points"] = r.points.indices();
    d["order"] = to_py(r.stabilizer_order);
    d["certificate"] = r.certificate.hex();
    d["source"] = r.source;
    return d;
}

published::Presentation presentation(const std::string& name) {
    for (auto p : {published::Presentation::royle, published::Presentation::moorhouse, published::Presentation::dreadnaut})
        if (published::to_string(p) == name)
            return p;
    throw ConfigError("unknown presentation '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Projective planes of order 16 and their unitals";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
    py::register_exception<BoundsError>(m, "BoundsError", base.ptr());
    py::register_exception<ContractError>(m, "ContractError", base.ptr());
    py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());

    py::class_<IncidenceStructure>(m, "Plane")
        .def(py::init<std::uint32_t, std::vector<std::vector<std::uint32_t>>, std::string>(), py::arg("v"),
             py::arg("blocks"), py::arg("name") = "")
        .def_property_readonly("v", &IncidenceStructure::v)
        .def_property_readonly("b", &IncidenceStructure::b)
        .def_property_readonly("name", &IncidenceStructure::name)
        .def_property_readonly("blocks", &IncidenceStructure::blocks)
        .def_property_readonly("order", &IncidenceStructure::plane_order)
        .def("__repr__", [](const IncidenceStructure& s) {
            return "<Plane " + s.name() + " v=" + std::to_string(s.v()) + " b=" + std::to_string(s.b()) + ">";
        });

    m.def("build_pg2", &geometry::build_pg2, py::arg("q"));
    m.def("dual", &dual, py::arg("plane"));
    m.def("hermitian_unital", [](std::uint32_t q0) { return geometry::hermitian_unital(q0).indices(); }, py::arg("q0"));
    m.def(
        "validate_design",
        [](const IncidenceStructure& s, std::uint32_t k, std::uint32_t lambda) {
            auto r = validate_design(s, k, lambda);
            py::dict d;
            d["valid"] = r.valid;
            d["symmetric"] = r.symmetric;
            d["v"] = r.v;
            d["b"] = r.b;
            d["k"] = r.k;
            d["lambda"] = r.lambda;
            d["pairs_checked"] = r.pairs_checked;
            d["pair_violations"] = r.pair_violation_count;
            return d;
        },
        py::arg("plane"), py::arg("k"), py::arg("lam") = 1);

    m.def("is_unital", [](const IncidenceStructure& s, const std::vector<std::uint32_t>& pts) {
        return unitals::is_unital(s, points(pts));
    });
    m.def("tangent_secant_counts", [](const IncidenceStructure& s, const std::vector<std::uint32_t>& pts) {
        auto ts = unitals::tangent_secant_counts(s, points(pts));
        return std::make_pair(ts.tangents, ts.secants);
    });
    m.def(
        "stabilizer_order",
        [](const IncidenceStructure& s, const std::vector<std::uint32_t>& pts, bool self_dual) {
            return to_py(unitals::stabilizer_order(s, points(pts), coloring(self_dual)));
        },
        py::arg("plane"), py::arg("points"), py::arg("self_dual") = false);
    m.def(
        "group_order",
        [](const IncidenceStructure& s, bool self_dual) {
            return to_py(canon::analyze(to_incidence_graph(s, std::nullopt, coloring(self_dual))).order);
        },
        py::arg("plane"), py::arg("self_dual") = true);
    m.def(
        "certificate",
        [](const IncidenceStructure& s, std::optional<std::vector<std::uint32_t>> pts, bool self_dual) {
            std::optional<PointSet> marked;
            if (pts)
                marked = points(*pts);
            return canon::analyze(to_incidence_graph(s, marked, coloring(self_dual))).certificate.hex();
        },
        py::arg("plane"), py::arg("points") = py::none(), py::arg("self_dual") = false);

    m.def(
        "load_plane",
        [](const std::string& text, const std::string& kind, std::uint32_t order, const std::string& name) {
            return formats::load_plane(text, formats::parse_source_kind(kind), "python", name, order).structure;
        },
        py::arg("text"), py::arg("kind"), py::arg("order") = 16, py::arg("name") = "");
    m.def("write_native", &formats::write_native, py::arg("plane"));
    m.def(
        "parse_unital_catalog",
        [](const std::string& text) {
            auto c = formats::parse_unital_catalog(text);
            py::list records, issues;
            for (const auto& r : c.records)
                records.append(record_dict(r));
            for (const auto& i : c.issues)
                issues.append(py::make_tuple(i.line, i.message));
            return py::make_tuple(records, issues);
        },
        py::arg("text"));
    m.def(
        "embedded_catalog",
        [](const std::string& name) {
            py::list out;
            for (const auto& r : published::embedded_catalog(presentation(name)).records)
                out.append(record_dict(r));
            return out;
        },
        py::arg("name"));
    m.def(
        "embedded_catalog_text",
        [](const std::string& name) { return std::string(published::embedded_catalog_text(presentation(name))); },
        py::arg("name"));

    m.def(
        "find_unitals",
        [](const IncidenceStructure& plane, bool exhaustive, std::uint64_t seed, std::uint32_t subgroup_budget,
           std::uint64_t combination_budget, std::uint64_t completion_budget, unsigned threads) {
            search::SearchConfig config;
            config.exhaustive = exhaustive;
            config.seed = seed;
            config.subgroup_budget = subgroup_budget;
            config.combination_budget = combination_budget;
            config.completion_budget = completion_budget;
            config.threads = threads;
            search::SearchResult r;
            {
                py::gil_scoped_release release;
                r = search::find_unitals(plane, search::collineation_chain(plane), config);
            }
            py::list out;
            for (const auto& rec : r.records)
                out.append(unital_dict(rec));
            return py::make_tuple(out, search::stats_sidecar(config, r.stats));
        },
        py::arg("plane"), py::arg("exhaustive") = false, py::arg("seed") = 1,
        py::arg("subgroup_budget") = search::SearchConfig{}.subgroup_budget,
        py::arg("combination_budget") = search::SearchConfig{}.combination_budget,
        py::arg("completion_budget") = search::SearchConfig{}.completion_budget, py::arg("threads") = 1);
    m.def(
        "classify",
        [](const IncidenceStructure& plane, const std::vector<std::vector<std::uint32_t>>& sets, bool self_dual) {
            std::vector<PointSet> ps;
            for (const auto& s : sets)
                ps.push_back(points(s));
            unitals::ClassifyOptions options;
            options.coloring = coloring(self_dual);
            py::list out;
            for (const auto& c : unitals::classify_nonisomorphic(plane, ps, options)) {
                py::dict d;
                d["order"] = to_py(c.stabilizer_order);
                d["certificate"] = c.certificate.hex();
                d["members"] = c.members;
                out.append(d);
            }
            return out;
        },
        py::arg("plane"), py::arg("sets"), py::arg("self_dual") = false);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
