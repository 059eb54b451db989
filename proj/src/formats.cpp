#include "unitk/formats.hpp"

#include "unitk/errors.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <regex>
#include <sstream>

namespace unitk::formats {

std::string_view to_string(SourceKind kind) {
    switch (kind) {
    case SourceKind::royle:
        return "royle";
    case SourceKind::moorhouse:
        return "moorhouse";
    case SourceKind::dreadnaut:
        return "dreadnaut";
    case SourceKind::native:
        return "native";
    }
    return "native";
}

SourceKind parse_source_kind(std::string_view name) {
    for (auto k : {SourceKind::royle, SourceKind::moorhouse, SourceKind::dreadnaut, SourceKind::native})
        if (name == to_string(k))
            return k;
    throw ConfigError("unknown plane kind '" + std::string(name) + "' (expected royle, moorhouse, dreadnaut or native)");
}

namespace {

struct Line {
    std::size_t number;
    std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t start = 0, number = 1;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        lines.push_back({number++, line});
        if (end == text.size())
            break;
        start = end + 1;
    }
    return lines;
}

std::string_view trim(std::string_view s) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
    while (!s.empty() && is_space(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && is_space(s.back()))
        s.remove_suffix(1);
    return s;
}

struct Token {
    std::string_view text;
    std::size_t column;
};

std::vector<Token> split_words(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
            ++i;
        auto start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t')
            ++i;
        if (i > start)
            out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

std::optional<std::uint64_t> to_uint(std::string_view s) {
    std::uint64_t v = 0;
    if (s.empty())
        return std::nullopt;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        return std::nullopt;
    return v;
}

bool skip_line(std::string_view line) {
    auto t = trim(line);
    return t.empty() || t.front() == '#';
}

IncidenceStructure build(std::uint32_t v, std::vector<std::vector<std::uint32_t>> blocks, std::string name,
                         std::size_t line) {
    try {
        return IncidenceStructure(v, std::move(blocks), std::move(name));
    } catch (const Error& e) {
        throw ParseError(e.what(), line);
    }
}

IncidenceStructure parse_records(std::string_view text, std::uint32_t order, std::uint32_t base, std::string name) {
    if (order < 2)
        throw ConfigError("plane order must be at least 2");
    const std::uint32_t k = order + 1;
    const std::uint32_t v = order * order + order + 1;
    std::vector<std::vector<std::uint32_t>> blocks;
    std::size_t last_line = 0;
    for (const auto& [number, line] : split_lines(text)) {
        if (skip_line(line))
            continue;
        last_line = number;
        auto words = split_words(line);
        if (words.size() != k)
            throw ParseError("expected " + std::to_string(k) + " labels in a line record, found " +
                                 std::to_string(words.size()),
                             number);
        std::vector<std::uint32_t> block;
        for (const auto& w : words) {
            auto x = to_uint(w.text);
            if (!x)
                throw ParseError("not a label: '" + std::string(w.text) + "'", number, w.column);
            if (*x < base || *x >= std::uint64_t(v) + base)
                throw ParseError("label " + std::to_string(*x) + " outside [" + std::to_string(base) + ", " +
                                     std::to_string(v + base - 1) + "]",
                                 number, w.column);
            auto p = static_cast<std::uint32_t>(*x - base);
            if (std::find(block.begin(), block.end(), p) != block.end())
                throw ParseError("duplicate label " + std::to_string(*x) + " in a line record", number, w.column);
            block.push_back(p);
        }
        blocks.push_back(std::move(block));
    }
    if (blocks.size() != v)
        throw ParseError("expected " + std::to_string(v) + " line records, found " + std::to_string(blocks.size()),
                         last_line);
    return build(v, std::move(blocks), std::move(name), last_line);
}

}  // namespace

IncidenceStructure parse_native(std::string_view text) {
    auto lines = split_lines(text);
    std::size_t i = 0;
    while (i < lines.size() && trim(lines[i].text).empty())
        ++i;
    if (i == lines.size())
        throw ParseError("missing 'plane' header", 1);
    static const std::regex header(R"(^plane (\S+) v=([0-9]+) b=([0-9]+)$)");
    std::string head(trim(lines[i].text));
    std::smatch m;
    if (!std::regex_match(head, m, header))
        throw ParseError("malformed header, expected 'plane <name> v=<v> b=<b>'", lines[i].number);
    auto v = to_uint(m[2].str());
    auto b = to_uint(m[3].str());
    if (!v || !b || *v > 1'000'000 || *b > 1'000'000)
        throw ParseError("header counts out of range", lines[i].number);
    std::string name = m[1].str();

    std::vector<std::vector<std::uint32_t>> blocks;
    std::size_t last = lines[i].number;
    for (++i; i < lines.size(); ++i) {
        const auto& [number, line] = lines[i];
        if (trim(line).empty())
            continue;
        last = number;
        std::vector<std::uint32_t> block;
        for (const auto& w : split_words(line)) {
            auto x = to_uint(w.text);
            if (!x)
                throw ParseError("not an index: '" + std::string(w.text) + "'", number, w.column);
            if (*x < 1 || *x > *v)
                throw ParseError("index " + std::to_string(*x) + " outside [1, " + std::to_string(*v) + "]", number,
                                 w.column);
            auto p = static_cast<std::uint32_t>(*x - 1);
            if (std::find(block.begin(), block.end(), p) != block.end())
                throw ParseError("duplicate index " + std::to_string(*x) + " in a block", number, w.column);
            block.push_back(p);
        }
        blocks.push_back(std::move(block));
    }
    if (blocks.size() != *b)
        throw ParseError("header announces " + std::to_string(*b) + " blocks, found " + std::to_string(blocks.size()),
                         last);
    return build(static_cast<std::uint32_t>(*v), std::move(blocks), std::move(name), last);
}

std::string write_native(const IncidenceStructure& s) {
    std::ostringstream out;
    out << "plane " << (s.name().empty() ? "unnamed" : s.name()) << " v=" << s.v() << " b=" << s.b() << '\n';
    for (const auto& block : s.blocks()) {
        for (std::size_t i = 0; i < block.size(); ++i)
            out << (i ? " " : "") << block[i] + 1;
        out << '\n';
    }
    return out.str();
}

IncidenceStructure parse_royle(std::string_view text, std::uint32_t order) {
    return parse_records(text, order, 0, "royle");
}

IncidenceStructure parse_moorhouse(std::string_view text, std::uint32_t order) {
    return parse_records(text, order, 1, "moorhouse");
}

namespace {

class DreadnautLexer {
public:
    struct Tok {
        enum Kind { number, word, punct, end } kind = end;
        std::string_view text;
        std::uint64_t value = 0;
        std::size_t line = 1;
        std::size_t column = 1;
    };

    explicit DreadnautLexer(std::string_view text) : text_(text) {}

    const Tok& peek() {
        if (!has_buffered_) {
            buffered_ = read();
            has_buffered_ = true;
        }
        return buffered_;
    }
    Tok next() {
        auto t = peek();
        has_buffered_ = false;
        return t;
    }
    bool accept(std::string_view punct) {
        if (peek().kind == Tok::punct && peek().text == punct) {
            next();
            return true;
        }
        return false;
    }

private:
    Tok read() {
        skip();
        Tok t{Tok::end, {}, 0, line_, column()};
        if (pos_ >= text_.size())
            return t;
        char c = text_[pos_];
        auto start = pos_;
        if (c >= '0' && c <= '9') {
            while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9')
                ++pos_;
            t.kind = Tok::number;
            t.text = text_.substr(start, pos_ - start);
            auto v = to_uint(t.text);
            if (!v)
                throw ParseError("number too large", t.line, t.column);
            t.value = *v;
        } else if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
            ++pos_;
            t.kind = Tok::word;
            t.text = text_.substr(start, 1);
        } else {
            ++pos_;
            t.kind = Tok::punct;
            t.text = text_.substr(start, 1);
        }
        return t;
    }

    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                line_start_ = ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == ',') {
                ++pos_;
            } else if (c == '!') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    ++pos_;
            } else {
                break;
            }
        }
    }
    std::size_t column() const { return pos_ - line_start_ + 1; }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t line_start_ = 0;
    Tok buffered_;
    bool has_buffered_ = false;
};

}  // namespace

ColoredGraph parse_dreadnaut(std::string_view text) {
    using Tok = DreadnautLexer::Tok;
    DreadnautLexer lex(text);
    std::uint64_t base = 0;
    std::optional<std::uint32_t> n;
    std::optional<ColoredGraph> g;
    bool have_graph = false;

    auto expect = [&](std::string_view punct) {
        auto t = lex.next();
        if (t.kind != Tok::punct || t.text != punct)
            throw ParseError("expected '" + std::string(punct) + "'", t.line, t.column);
    };
    auto expect_number = [&](const char* what) {
        auto t = lex.next();
        if (t.kind != Tok::number)
            throw ParseError(std::string("expected ") + what, t.line, t.column);
        return t;
    };
    auto vertex = [&](const Tok& t) -> std::uint32_t {
        if (t.value < base || t.value - base >= *n)
            throw ParseError("vertex " + std::string(t.text) + " out of range", t.line, t.column);
        return static_cast<std::uint32_t>(t.value - base);
    };

    for (auto t = lex.next(); t.kind != Tok::end; t = lex.next()) {
        if (t.kind == Tok::punct && t.text == "$") {
            expect("=");
            base = expect_number("label base").value;
            if (base > 1)
                throw ParseError("label base must be 0 or 1", t.line, t.column);
        } else if (t.kind == Tok::word && t.text == "n") {
            expect("=");
            auto v = expect_number("vertex count");
            if (v.value == 0 || v.value > 1'000'000)
                throw ParseError("vertex count out of range", v.line, v.column);
            n = static_cast<std::uint32_t>(v.value);
            g = ColoredGraph(*n);
        } else if (t.kind == Tok::word && t.text == "g") {
            if (!n)
                throw ParseError("'g' before 'n='", t.line, t.column);
            *g = ColoredGraph(*n);
            std::uint32_t current = 0;
            for (;;) {
                auto u = lex.next();
                if (u.kind == Tok::end)
                    throw ParseError("unterminated adjacency list (missing '.')", u.line, u.column);
                if (u.kind == Tok::punct && u.text == ".")
                    break;
                if (u.kind == Tok::punct && u.text == ";") {
                    ++current;
                    continue;
                }
                if (u.kind != Tok::number)
                    throw ParseError("unexpected '" + std::string(u.text) + "' in adjacency list", u.line, u.column);
                if (lex.accept(":")) {
                    current = vertex(u);
                    continue;
                }
                auto w = vertex(u);
                if (current >= *n)
                    throw ParseError("adjacency list past the last vertex", u.line, u.column);
                if (w == current)
                    throw ParseError("loop at vertex " + std::string(u.text), u.line, u.column);
                g->add_edge(current, w);
            }
            have_graph = true;
        } else if (t.kind == Tok::word && t.text == "f") {
            if (!n)
                throw ParseError("'f' before 'n='", t.line, t.column);
            expect("=");
            expect("[");
            std::vector<std::uint32_t> color(*n, 0);
            std::vector<char> listed(*n, 0);
            std::uint32_t cell = 0;
            for (;;) {
                auto u = lex.next();
                if (u.kind == Tok::punct && u.text == "]")
                    break;
                if (u.kind == Tok::punct && u.text == "|") {
                    ++cell;
                    continue;
                }
                if (u.kind != Tok::number)
                    throw ParseError("unexpected token in partition", u.line, u.column);
                auto a = vertex(u);
                auto b = a;
                if (lex.accept(":")) {
                    b = vertex(expect_number("range end"));
                    if (b < a)
                        throw ParseError("empty range", u.line, u.column);
                }
                for (auto x = a; x <= b; ++x) {
                    if (listed[x])
                        throw ParseError("vertex listed twice in partition", u.line, u.column);
                    listed[x] = 1;
                    color[x] = cell;
                }
            }
            // Unlisted vertices form a final cell, as in dreadnaut.
            for (std::uint32_t x = 0; x < *n; ++x)
                g->set_color(x, listed[x] ? color[x] : cell + 1);
            g->compact_colors();
        } else {
            throw ParseError("unsupported dreadnaut directive '" + std::string(t.text) + "'", t.line, t.column);
        }
    }
    if (!have_graph)
        throw ParseError("no graph ('g' ... '.') in input", 1);
    return std::move(*g);
}

PlaneFile load_plane(std::string_view text, SourceKind kind, std::string origin, std::string name, std::uint32_t order) {
    PlaneFile f;
    f.source_kind = kind;
    f.origin = std::move(origin);
    switch (kind) {
    case SourceKind::royle:
        f.structure = parse_royle(text, order);
        break;
    case SourceKind::moorhouse:
        f.structure = parse_moorhouse(text, order);
        break;
    case SourceKind::native:
        f.structure = parse_native(text);
        break;
    case SourceKind::dreadnaut:
        try {
            f.structure = incidence_from_bipartite(parse_dreadnaut(text));
        } catch (const ShapeError& e) {
            throw ContractError(std::string("dreadnaut graph is not a plane incidence graph: ") + e.what());
        }
        break;
    }
    if (!name.empty())
        f.structure.set_name(std::move(name));
    auto n = f.structure.plane_order();
    if (!n)
        throw ContractError("not a projective plane: v=" + std::to_string(f.structure.v()) +
                            " b=" + std::to_string(f.structure.b()));
    auto report = validate_design(f.structure, *n + 1, 1);
    if (!report.valid)
        throw ContractError("not a projective plane: " + report.summary());
    return f;
}

PointSet CatalogRecord::zero_based() const {
    std::vector<std::uint32_t> out;
    out.reserve(points.size());
    for (auto x : points) {
        if (x == 0)
            throw BoundsError("catalog label 0 in a 1-based record");
        out.push_back(x - 1);
    }
    return PointSet(std::move(out));
}

std::vector<std::pair<std::string, std::size_t>> Catalog::counts_by_plane() const {
    std::vector<std::pair<std::string, std::size_t>> out;
    for (const auto& r : records) {
        auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == r.plane_name; });
        if (it == out.end())
            out.emplace_back(r.plane_name, 1);
        else
            ++it->second;
    }
    return out;
}

std::string catalog_plane_key(std::string_view header) {
    std::string h(trim(header));
    std::smatch m;
    static const std::regex pp(R"(pp-16-([0-9]+))", std::regex::icase);
    if (std::regex_search(h, m, pp))
        return "pp-16-" + m[1].str();

    static const std::regex royle(R"(^(?:[Gg]546[A-Za-z]*\s*,)?\s*(.*?)\s+graph\b)");
    if (std::regex_search(h, m, royle)) {
        auto key = m[1].str();
        if (!key.empty())
            return key;
    }

    static const std::regex dat(R"(([A-Za-z0-9_-]+)\.DAT)", std::regex::icase);
    if (std::regex_search(h, m, dat)) {
        auto key = m[1].str();
        if (key.size() > 4 && (key.compare(0, 4, "Moor") == 0 || key.compare(0, 4, "moor") == 0))
            key = key.substr(4);
        std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::toupper(c); });
        // One appendix header misspells BBH2.
        if (key == "BHB2")
            key = "BBH2";
        return key;
    }
    return h;
}

std::optional<BigInt> catalog_group_order(std::string_view header) {
    std::string h(header);
    static const std::regex order(R"((?:\|Aut\s*G\||\|Aut\(G[0-9]*\)\||group order)\s*=?\s*([0-9]+))", std::regex::icase);
    std::smatch m;
    if (std::regex_search(h, m, order))
        return BigInt(m[1].str());
    return std::nullopt;
}

Catalog parse_unital_catalog(std::string_view text, const CatalogLimits& limits) {
    static const std::regex unital_header(R"(^(?:Unitals?\s*No|BRRESH)\s*=?\s*([0-9]+)$)");
    static const std::regex order_line(R"(^\|Aut\(G,\s*M[0-9]+\)\|\s*=\s*([0-9]+)(?:\.([0-9]*))?$)");

    Catalog cat;
    struct Open {
        CatalogRecord record;
        std::size_t line = 0;
        bool has_order = false;
        std::vector<std::uint32_t> labels;
        std::vector<std::string> problems;
    };
    std::optional<Open> open;
    std::string section, plane;

    auto close = [&]() {
        if (!open)
            return;
        auto& o = *open;
        if (!o.has_order)
            o.problems.push_back("missing |Aut(G,M65)| line");
        if (o.labels.size() != limits.points)
            o.problems.push_back("expected " + std::to_string(limits.points) + " points, found " +
                                 std::to_string(o.labels.size()));
        auto sorted = o.labels;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            o.problems.push_back("duplicate point " + std::to_string(*std::adjacent_find(sorted.begin(), sorted.end())));
        for (auto x : sorted)
            if (x < 1 || x > limits.max_label) {
                o.problems.push_back("label " + std::to_string(x) + " outside [1, " + std::to_string(limits.max_label) + "]");
                break;
            }
        if (o.problems.empty()) {
            o.record.points = PointSet(std::move(sorted));
            cat.records.push_back(std::move(o.record));
        } else {
            for (auto& p : o.problems)
                cat.issues.push_back({o.line, section, o.record.unital_index, std::move(p)});
        }
        open.reset();
    };

    for (const auto& [number, raw] : split_lines(text)) {
        auto line = trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        std::string s(line);
        std::smatch m;
        if (std::regex_match(s, m, unital_header)) {
            close();
            open.emplace();
            open->line = number;
            open->record.plane_name = plane;
            open->record.section = section;
            auto k = to_uint(m[1].str());
            if (!k || *k == 0 || *k > 1'000'000)
                open->problems.push_back("unital number must be a positive integer");
            else
                open->record.unital_index = static_cast<std::uint32_t>(*k);
            if (section.empty())
                open->problems.push_back("record outside any plane section");
            continue;
        }
        if (std::regex_match(s, m, order_line)) {
            if (!open) {
                cat.issues.push_back({number, section, 0, "order line without a unital header"});
                continue;
            }
            auto frac = m[2].str();
            if (std::any_of(frac.begin(), frac.end(), [](char c) { return c != '0'; })) {
                open->problems.push_back("non-integral order " + m[1].str() + "." + frac);
                open->has_order = true;
            } else if (open->has_order)
                open->problems.push_back("second order line");
            else {
                open->record.stabilizer_order = BigInt(m[1].str());
                open->has_order = true;
                if (open->record.stabilizer_order < 1)
                    open->problems.push_back("order must be at least 1");
            }
            continue;
        }
        auto words = split_words(line);
        bool numeric = std::all_of(words.begin(), words.end(), [](const Token& w) { return to_uint(w.text).has_value(); });
        if (numeric) {
            if (!open) {
                cat.issues.push_back({number, section, 0, "point row without a unital header"});
                continue;
            }
            for (const auto& w : words) {
                auto x = *to_uint(w.text);
                open->labels.push_back(x > 0xffffffffULL ? 0xffffffffu : static_cast<std::uint32_t>(x));
            }
            continue;
        }
        close();
        section = s;
        plane = catalog_plane_key(s);
        cat.sections.push_back({section, plane, catalog_group_order(s)});
    }
    close();
    return cat;
}

std::string write_unital_catalog(const std::vector<CatalogRecord>& records, std::string_view title) {
    std::ostringstream out;
    if (!title.empty())
        out << "# " << title << '\n';
    std::optional<std::string> section;
    for (const auto& r : records) {
        if (!section || *section != r.section) {
            if (section || !title.empty())
                out << '\n';
            out << (r.section.empty() ? r.plane_name : r.section) << '\n';
            section = r.section;
        }
        out << "Unital No " << r.unital_index << '\n';
        out << "|Aut(G,M" << r.points.size() << ")|= " << r.stabilizer_order << '\n';
        std::size_t i = 0;
        for (auto x : r.points) {
            out << (i % 16 ? " " : "") << x;
            if (++i % 16 == 0 || i == r.points.size())
                out << '\n';
        }
    }
    return out.str();
}

}  // namespace unitk::formats
