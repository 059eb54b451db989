#include <doctest.h>

#include "unitk/cli.hpp"
#include "unitk/formats.hpp"
#include "unitk/geometry.hpp"
#include "unitk/tables.hpp"

#include <filesystem>
#include <random>
#include <sstream>

using namespace unitk;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

class TempWorkspace {
public:
    TempWorkspace() {
        std::random_device rd;
        root_ = fs::temp_directory_path() / ("unitk-cli-" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(root_);
    }
    ~TempWorkspace() {
        std::error_code ec;
        fs::remove_all(root_, ec);
    }
    const fs::path& root() const { return root_; }

    Run run(std::vector<std::string> args) const {
        args.insert(args.begin(), {"--workspace", root_.string()});
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        return {code, out.str(), err.str()};
    }

private:
    fs::path root_;
};

std::string royle_text(const IncidenceStructure& s) {
    std::ostringstream out;
    for (const auto& b : s.blocks()) {
        for (std::size_t i = 0; i < b.size(); ++i)
            out << (i ? " " : "") << b[i];
        out << '\n';
    }
    return out.str();
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

std::size_t count_lines_starting(const std::string& text, const std::string& prefix) {
    std::istringstream in(text);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);)
        n += line.rfind(prefix, 0) == 0;
    return n;
}

}  // namespace

TEST_CASE("cli: construct and group") {
    TempWorkspace ws;
    auto r = ws.run({"construct", "16", "--group"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "pg2_16: v=273 b=273 k=17"));
    CHECK(contains(r.out, "incidence graph group order: 34217164800"));
    CHECK(contains(r.out, "collineation group order: 17108582400"));
    CHECK(fs::exists(ws.root() / "planes" / "pg2_16.plane"));
    CHECK(fs::exists(ws.root() / "logs" / "unitk.log"));

    auto g = ws.run({"group", "--plane", "pg2_16", "--self-dual-coloring"});
    CHECK(g.code == 0);
    CHECK(contains(g.out, "order 34217164800"));

    auto bad = ws.run({"construct", "6"});
    CHECK(bad.code == 2);
    CHECK(contains(bad.err, "error:"));
    CHECK(ws.run({"frobnicate"}).code != 0);
}

TEST_CASE("cli: ingest") {
    TempWorkspace ws;
    auto file = ws.root() / "pg4.txt";
    auto text = royle_text(geometry::build_pg2(4));
    formats::write_file_atomic(file, text);
    auto r = ws.run({"ingest", file.string(), "--kind", "royle", "--order", "4", "--name", "four", "--dual"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "four: v=21 b=21 k=5"));
    CHECK(fs::exists(ws.root() / "planes" / "four.plane"));
    CHECK(fs::exists(ws.root() / "planes" / "four_dual.plane"));
    auto g = ws.run({"group", "--plane", "four"});
    CHECK(contains(g.out, "order 120960"));

    auto truncated = ws.root() / "short.txt";
    formats::write_file_atomic(truncated, text.substr(0, text.rfind('\n', text.size() - 2) + 1));
    auto t = ws.run({"ingest", truncated.string(), "--kind", "royle", "--order", "4"});
    CHECK(t.code != 0);
    CHECK(contains(t.err, "error:"));
    CHECK_FALSE(fs::exists(ws.root() / "planes" / "short.plane"));

    auto garbage = ws.root() / "garbage.txt";
    formats::write_file_atomic(garbage, "0 1 2 3 4\n0 1 x\n");
    auto e = ws.run({"ingest", garbage.string(), "--kind", "royle", "--order", "4"});
    CHECK(e.code == 2);
    CHECK(contains(e.err, "line 2"));

    CHECK(ws.run({"ingest", file.string(), "--kind", "bogus"}).code != 0);
}

TEST_CASE("cli: verify") {
    TempWorkspace ws;
    auto h = ws.run({"verify", "--plane", "pg2_16", "--hermitian"});
    CHECK(h.code == 0);
    CHECK(contains(h.out, "PASS hermitian: unital, tangents 65, secants 208, order 249600"));

    std::mt19937_64 rng(3);
    std::vector<std::uint32_t> all(273);
    for (std::uint32_t i = 0; i < 273; ++i)
        all[i] = i + 1;
    std::shuffle(all.begin(), all.end(), rng);
    std::string labels;
    for (int i = 0; i < 65; ++i)
        labels += std::to_string(all[i]) + " ";
    auto neg = ws.run({"verify", "--plane", "pg2_16", "--set", labels});
    CHECK(neg.code == 1);
    CHECK(contains(neg.out, "FAIL set 1: not a unital"));
    CHECK(contains(neg.out, "lines meet it in"));

    auto empty = ws.root() / "empty.cat";
    formats::write_file_atomic(empty, "");
    auto e = ws.run({"verify", "--plane", "pg2_16", "--catalog", empty.string()});
    CHECK(e.code == 0);
    CHECK(contains(e.out, "verified 0 records"));

    auto out_of_range = ws.run({"verify", "--plane", "pg2_16", "--set", "1 2 274"});
    CHECK(out_of_range.code == 1);
    CHECK(contains(out_of_range.out, "label 274 outside 1..273"));
}

TEST_CASE("cli: report") {
    TempWorkspace ws;
    auto t1 = ws.run({"report", "--embedded", "--table", "1"});
    CHECK(t1.code == 0);
    CHECK(contains(t1.out, "TOTAL             148        138           95"));
    auto t3 = ws.run({"report", "--embedded", "--table", "3"});
    CHECK(count_lines_starting(t3.out, "pp-16-") == 22);
    CHECK(contains(t3.out, "pp-16-1      34217164800        2"));
    CHECK(contains(t3.out, "Total                         256"));

    auto blank = ws.run({"report"});
    CHECK(blank.code == 0);
    CHECK(contains(blank.out, "missing catalog: royle"));
    CHECK(count_lines_starting(blank.out, "TOTAL") == 0);
    CHECK(count_lines_starting(blank.out, "pp-16-") == 0);
    CHECK(ws.run({"report"}).out == blank.out);

    auto diff = ws.run({"report", "--embedded", "--paper-diff", "--table", "1"});
    CHECK(contains(diff.out, "DIFF table1 TOTAL royle: catalog 148, published 149"));
    CHECK(contains(diff.out, "paper-diff: "));

    // A workspace copy of the embedded royle data differs only from the published tables.
    formats::write_file_atomic(ws.root() / "catalogs" / "royle" / "appendix.cat",
                               published::embedded_catalog_text(published::Presentation::royle));
    auto copy = ws.run({"report", "--paper-diff", "--table", "1"});
    CHECK(contains(copy.out, "TOTAL             148"));
    CHECK(contains(copy.out, "DIFF table1 HALL royle: catalog 6, published 7"));
    CHECK_FALSE(contains(copy.out, "DIFF records"));
    CHECK(contains(copy.out, "skip: no moorhouse catalog"));
}

TEST_CASE("cli: search and classify") {
    TempWorkspace ws;
    auto s = ws.run({"search", "--plane", "pg2_4", "--exhaustive"});
    CHECK(s.code == 0);
    CHECK(contains(s.out, "1 class from 280 distinct unitals"));
    auto cat = ws.root() / "catalogs" / "search" / "pg2_4.cat";
    auto stats = ws.root() / "catalogs" / "search" / "pg2_4.stats";
    REQUIRE(fs::exists(cat));
    auto first = formats::read_file(cat);
    auto first_stats = formats::read_file(stats);
    CHECK(ws.run({"search", "--plane", "pg2_4", "--exhaustive"}).code == 0);
    CHECK(formats::read_file(cat) == first);
    CHECK(formats::read_file(stats) == first_stats);

    auto zero = ws.run({"search", "--plane", "pg2_16", "--budget", "0"});
    CHECK(zero.code == 0);
    CHECK(fs::exists(ws.root() / "catalogs" / "search" / "pg2_16.stats"));
    auto zero_cat = formats::parse_unital_catalog(formats::read_file(ws.root() / "catalogs" / "search" / "pg2_16.cat"));
    CHECK(zero_cat.records.empty());
    CHECK(zero_cat.issues.empty());

    auto once = ws.run({"classify", "--plane", "pg2_4", "--catalog", cat.string(), "--hermitian"});
    auto twice = ws.run({"classify", "--plane", "pg2_4", "--catalog", cat.string(), "--catalog", cat.string(), "--hermitian"});
    CHECK(once.code == 0);
    CHECK(twice.code == 0);
    CHECK(contains(once.out, "1 class among 2 unitals"));
    CHECK(contains(twice.out, "1 class among 3 unitals"));

    auto fail = ws.run({"classify", "--plane", "pg2_4", "--set", "1 2 3", "--hermitian"});
    CHECK(fail.code == 1);
    CHECK(contains(fail.out, "1 record failure"));
}
