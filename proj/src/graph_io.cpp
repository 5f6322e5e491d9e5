#include <algorithm>
#include <cctype>
#include <map>

#include <json.hpp>

#include "abeldim/lattice.hpp"

namespace abeldim {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_tokens(std::string_view s, std::string_view seps) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && seps.find(s[i]) != std::string_view::npos) ++i;
        std::size_t j = i;
        while (j < s.size() && seps.find(s[j]) == std::string_view::npos) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

bool parse_int(std::string_view s, std::int64_t& out) {
    if (s.empty()) return false;
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) return false;
    std::int64_t v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        if (v > 100000000000LL) return false;
        v = v * 10 + (s[i] - '0');
    }
    out = neg ? -v : v;
    return true;
}

bool parse_rational_impl(std::string_view s, Rational& out) {
    auto slash = s.find('/');
    std::string_view num = s.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
    auto digits = [](std::string_view t, bool allow_sign) {
        if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
        if (t.empty()) return false;
        for (char c : t)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    if (!digits(num, true) || !digits(den, false)) return false;
    std::string n(num);
    if (!n.empty() && n[0] == '+') n.erase(0, 1);
    BigInt p(n), q{std::string(den)};
    if (q == 0) return false;
    out = Rational(p, q);
    out.canonicalize();
    return true;
}

GraphPtr parse_graph_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::SyntaxError, std::string("structured graph: ") + e.what());
    }
    std::vector<VertexDecl> vertices;
    std::vector<std::pair<std::string, std::string>> edges;
    try {
        for (const auto& v : j.at("vertices"))
            vertices.push_back({v.at("id").get<std::string>(), v.at("euler").get<std::int64_t>()});
        if (j.contains("edges"))
            for (const auto& e : j.at("edges")) {
                if (!e.is_array() || e.size() != 2)
                    throw Error(ErrorKind::SyntaxError, "edge entries must be id pairs");
                edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
            }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::SyntaxError, std::string("structured graph: ") + e.what());
    }
    return PlumbingGraph::create(std::move(vertices), std::move(edges));
}

template <class Value, class Parse>
std::vector<Value> parse_assignments(const GraphPtr& g, std::string_view text, Value zero, Parse parse,
                                     const char* what) {
    std::vector<Value> c(g->size(), zero);
    std::vector<char> given(g->size(), 0);
    text = trim(text);
    if (text.empty() || text == "0") return c;
    for (auto tok : split_tokens(text, " \t\r\n,")) {
        auto colon = tok.rfind(':');
        if (colon == std::string_view::npos)
            throw Error(ErrorKind::SyntaxError,
                        "expected <id>:<" + std::string(what) + ">, got '" + std::string(tok) + "'");
        std::size_t v = g->index_of(tok.substr(0, colon));
        if (given[v])
            throw Error(ErrorKind::SyntaxError, "vertex '" + g->id(v) + "' given twice");
        given[v] = 1;
        if (!parse(tok.substr(colon + 1), c[v]))
            throw Error(ErrorKind::SyntaxError, "bad " + std::string(what) + " in '" + std::string(tok) + "'");
    }
    return c;
}

}  // namespace

bool parse_rational(std::string_view text, Rational& out) { return parse_rational_impl(trim(text), out); }

GraphPtr parse_graph(std::string_view text) {
    std::string_view t = trim(text);
    if (!t.empty() && t.front() == '{') return parse_graph_json(t);

    std::vector<VertexDecl> vertices;
    std::vector<std::pair<std::string, std::string>> edges;
    std::size_t line_no = 0;
    for (auto raw_line : split_tokens(text, "\n")) {
        ++line_no;
        auto hash = raw_line.find('#');
        std::string_view line = raw_line.substr(0, hash);
        for (auto stmt : split_tokens(line, ";")) {
            stmt = trim(stmt);
            if (stmt.empty()) continue;
            auto where = " (line " + std::to_string(line_no) + ")";
            auto words = split_tokens(stmt, " \t\r");
            if (words[0] == "edge") {
                if (words.size() != 3)
                    throw Error(ErrorKind::SyntaxError, "edge needs two vertex ids" + where);
                edges.emplace_back(std::string(words[1]), std::string(words[2]));
                continue;
            }
            auto colon = stmt.find(':');
            if (colon == std::string_view::npos)
                throw Error(ErrorKind::SyntaxError, "cannot parse '" + std::string(stmt) + "'" + where);
            auto id = trim(stmt.substr(0, colon));
            auto val = trim(stmt.substr(colon + 1));
            std::int64_t e = 0;
            if (id.empty() || !parse_int(val, e))
                throw Error(ErrorKind::SyntaxError, "cannot parse '" + std::string(stmt) + "'" + where);
            if (split_tokens(id, " \t").size() != 1)
                throw Error(ErrorKind::SyntaxError, "vertex id contains spaces" + where);
            vertices.push_back({std::string(id), e});
        }
    }
    return PlumbingGraph::create(std::move(vertices), std::move(edges));
}

Cycle parse_cycle(const GraphPtr& g, std::string_view text) {
    auto c = parse_assignments<std::int64_t>(
        g, text, 0,
        [](std::string_view s, std::int64_t& out) {
            return parse_int(s, out) && out <= kMaxCoefficient && out >= -kMaxCoefficient;
        },
        "integer");
    return Cycle(g, std::move(c));
}

RatCycle parse_rat_cycle(const GraphPtr& g, std::string_view text) {
    auto c = parse_assignments<Rational>(g, text, Rational(0), parse_rational_impl, "rational");
    return RatCycle(g, std::move(c));
}

std::vector<std::int64_t> parse_vertex_integers(const GraphPtr& g, std::string_view text) {
    return parse_cycle(g, text).coefficients();
}

std::vector<std::size_t> parse_vertex_set(const GraphPtr& g, std::string_view text) {
    std::vector<std::size_t> out;
    for (auto tok : split_tokens(text, " \t\r\n,")) out.push_back(g->index_of(tok));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace abeldim
