#include "abeldim/oracle.hpp"

#include <algorithm>
#include <cctype>

namespace abeldim {

namespace {

using Vec = BundleDescriptor::Vec;

Vec trimmed(Vec v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
    return v;
}

Vec sub(const Vec& a, const Vec& b) {
    Vec r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return trimmed(std::move(r));
}

Vec add(const Vec& a, const Vec& b) {
    Vec r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return trimmed(std::move(r));
}

Vec pick(const Vec& v, const std::vector<std::size_t>& idx) {
    if (v.empty()) return {};
    Vec r;
    for (std::size_t i : idx) r.push_back(i < v.size() ? v[i] : 0);
    return trimmed(std::move(r));
}

Vec widened(const Vec& v, std::size_t n) {
    Vec r = v;
    r.resize(n, 0);
    return r;
}

std::string join(const Vec& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

const char* kind_tag(BundleKind k) {
    switch (k) {
        case BundleKind::Trivial: return "trivial";
        case BundleKind::Natural: return "natural";
        case BundleKind::GenericPic: return "genpic";
        case BundleKind::GenericAbelImage: return "genim";
        case BundleKind::RelativeGeneric: return "relgen";
        case BundleKind::Table: return "table";
    }
    return "?";
}

// ---------------------------------------------------------------- text forms

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

using RatMap = std::map<std::string, Rational>;

RatMap parse_rat_map(std::string_view text) {
    RatMap m;
    text = trim(text);
    if (text.empty() || text == "0") return m;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != ',') ++j;
        if (j == i) break;
        auto tok = text.substr(i, j - i);
        auto colon = tok.rfind(':');
        Rational q;
        if (colon == std::string_view::npos || colon == 0 || !parse_rational(tok.substr(colon + 1), q))
            throw Error(ErrorKind::ParseError, "bad cycle entry '" + std::string(tok) + "'");
        std::string id(tok.substr(0, colon));
        if (m.count(id)) throw Error(ErrorKind::ParseError, "vertex '" + id + "' repeated");
        m[id] = q;
        i = j;
    }
    for (auto it = m.begin(); it != m.end();) it = it->second == 0 ? m.erase(it) : std::next(it);
    return m;
}

std::string format_map(const RatMap& m) {
    std::string out;
    for (const auto& [id, q] : m) {
        if (q == 0) continue;
        if (!out.empty()) out += ' ';
        out += id + ":" + format_rational(q);
    }
    return out.empty() ? "0" : out;
}

RatMap map_sub(RatMap a, const RatMap& b) {
    for (const auto& [id, q] : b) a[id] -= q;
    for (auto it = a.begin(); it != a.end();) it = it->second == 0 ? a.erase(it) : std::next(it);
    return a;
}

struct DText {
    std::string kind;
    RatMap chern;
    RatMap twist;
    std::string key;
    std::shared_ptr<DText> base;
};

// Position of the parenthesis closing the one at `open`.
std::size_t closing(std::string_view s, std::size_t open) {
    int depth = 0;
    for (std::size_t i = open; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')' && --depth == 0) return i;
    }
    throw Error(ErrorKind::ParseError, "unbalanced parentheses in '" + std::string(s) + "'");
}

DText parse_dtext(std::string_view text) {
    text = trim(text);
    std::size_t i = 0;
    while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
    DText d;
    d.kind = std::string(text.substr(0, i));
    std::string_view rest = trim(text.substr(i));
    auto bad = [&] { return Error(ErrorKind::ParseError, "cannot parse descriptor '" + std::string(text) + "'"); };
    if (d.kind != "trivial") {
        if (rest.empty() || rest[0] != '(') throw bad();
        std::size_t close = closing(rest, 0);
        std::string_view inner = rest.substr(1, close - 1);
        rest = trim(rest.substr(close + 1));
        if (d.kind == "natural" || d.kind == "genpic" || d.kind == "genim") {
            d.chern = parse_rat_map(inner);
        } else if (d.kind == "table") {
            d.key = std::string(trim(inner));
            if (d.key.empty()) throw bad();
        } else if (d.kind == "relgen") {
            int depth = 0;
            std::size_t split = std::string_view::npos;
            for (std::size_t k = 0; k < inner.size(); ++k) {
                if (inner[k] == '(') ++depth;
                if (inner[k] == ')') --depth;
                if (inner[k] == ';' && depth == 0) split = k;
            }
            if (split == std::string_view::npos) throw bad();
            d.base = std::make_shared<DText>(parse_dtext(inner.substr(0, split)));
            d.chern = parse_rat_map(inner.substr(split + 1));
        } else {
            throw bad();
        }
    }
    if (!rest.empty()) {
        if (rest.substr(0, 5) != "twist") throw bad();
        rest = trim(rest.substr(5));
        if (rest.empty() || rest[0] != '(') throw bad();
        std::size_t close = closing(rest, 0);
        d.twist = parse_rat_map(rest.substr(1, close - 1));
        if (!trim(rest.substr(close + 1)).empty()) throw bad();
    }
    if (d.kind == "trivial" || d.kind == "natural" || d.kind == "genpic") {
        d.chern = map_sub(d.chern, d.twist);
        d.twist.clear();
        if (d.kind == "natural" && d.chern.empty()) d.kind = "trivial";
        if (d.kind == "trivial" && !d.chern.empty()) d.kind = "natural";
    }
    return d;
}

std::string format_dtext(const DText& d) {
    std::string out;
    if (d.kind == "trivial") {
        out = "trivial";
    } else if (d.kind == "table") {
        out = "table(" + d.key + ")";
    } else if (d.kind == "relgen") {
        out = "relgen(" + format_dtext(*d.base) + "; " + format_map(d.chern) + ")";
    } else {
        out = d.kind + "(" + format_map(d.chern) + ")";
    }
    if (!d.twist.empty()) out += " twist(" + format_map(d.twist) + ")";
    return out;
}

std::string rat_text(const GraphPtr& g, const Vec& v) {
    if (v.empty()) return "0";
    return from_pairing(g, widened(v, g->size())).to_string();
}

std::string raw_text(const BundleDescriptor& d, const GraphPtr& g) {
    std::string out;
    switch (d.kind()) {
        case BundleKind::Trivial: out = "trivial"; break;
        case BundleKind::Table: out = "table(" + d.table_key() + ")"; break;
        case BundleKind::RelativeGeneric:
            out = "relgen(" + raw_text(*d.base(), g) + "; " + rat_text(g, d.chern()) + ")";
            break;
        default: out = std::string(kind_tag(d.kind())) + "(" + rat_text(g, d.chern()) + ")";
    }
    if (!d.twist().empty()) out += " twist(" + rat_text(g, d.twist()) + ")";
    return out;
}

Vec map_to_pairing(const RatMap& m, const GraphPtr& g) {
    RatCycle x(g);
    for (const auto& [id, q] : m) x[g->index_of(id)] = q;
    return trimmed(pairing_vector(x));
}

BundleDescriptor from_dtext(const DText& d, const GraphPtr& g) {
    BundleDescriptor out = BundleDescriptor::trivial();
    Vec c = map_to_pairing(d.chern, g);
    if (d.kind == "trivial") out = BundleDescriptor::trivial();
    else if (d.kind == "natural") out = BundleDescriptor::natural(c);
    else if (d.kind == "genpic") out = BundleDescriptor::generic_pic(c);
    else if (d.kind == "genim") out = BundleDescriptor::generic_abel_image(c);
    else if (d.kind == "table") out = BundleDescriptor::table(d.key);
    else out = BundleDescriptor::relative_generic(from_dtext(*d.base, g), c);
    if (!d.twist.empty()) out = out.twisted(map_to_pairing(d.twist, g));
    return out;
}

}  // namespace

// ---------------------------------------------------------------- descriptor

BundleDescriptor BundleDescriptor::trivial() { return BundleDescriptor(); }

BundleDescriptor BundleDescriptor::natural(Vec chern) {
    BundleDescriptor d;
    d.kind_ = BundleKind::Natural;
    d.chern_ = std::move(chern);
    d.normalize();
    return d;
}

BundleDescriptor BundleDescriptor::generic_pic(Vec chern) {
    BundleDescriptor d;
    d.kind_ = BundleKind::GenericPic;
    d.chern_ = std::move(chern);
    d.normalize();
    return d;
}

BundleDescriptor BundleDescriptor::generic_abel_image(Vec chern) {
    BundleDescriptor d;
    d.kind_ = BundleKind::GenericAbelImage;
    d.chern_ = std::move(chern);
    d.normalize();
    return d;
}

BundleDescriptor BundleDescriptor::relative_generic(const BundleDescriptor& base, Vec chern) {
    BundleDescriptor d;
    d.kind_ = BundleKind::RelativeGeneric;
    d.chern_ = std::move(chern);
    d.base_ = std::make_shared<const BundleDescriptor>(base);
    d.normalize();
    return d;
}

BundleDescriptor BundleDescriptor::table(std::string key) {
    BundleDescriptor d;
    d.kind_ = BundleKind::Table;
    d.key_ = std::move(key);
    return d;
}

void BundleDescriptor::normalize() {
    chern_ = trimmed(std::move(chern_));
    twist_ = trimmed(std::move(twist_));
    if (kind_ == BundleKind::Trivial || kind_ == BundleKind::Natural || kind_ == BundleKind::GenericPic) {
        chern_ = sub(chern_, twist_);
        twist_.clear();
        if (kind_ == BundleKind::Natural && chern_.empty()) kind_ = BundleKind::Trivial;
        if (kind_ == BundleKind::Trivial && !chern_.empty()) kind_ = BundleKind::Natural;
    }
}

Vec BundleDescriptor::first_chern_class(std::size_t n) const {
    if (kind_ == BundleKind::Table) throw Error(ErrorKind::UnsupportedDescriptor, "table descriptors carry no Chern class");
    return widened(sub(chern_, twist_), n);
}

BundleDescriptor BundleDescriptor::twisted(const Vec& tau) const {
    BundleDescriptor d = *this;
    d.twist_ = add(d.twist_, tau);
    d.normalize();
    return d;
}

BundleDescriptor BundleDescriptor::restricted(const std::vector<std::size_t>& indices) const {
    BundleDescriptor d = *this;
    d.chern_ = pick(chern_, indices);
    d.twist_ = pick(twist_, indices);
    if (base_) d.base_ = std::make_shared<const BundleDescriptor>(base_->restricted(indices));
    return d;
}

std::string BundleDescriptor::key() const {
    std::string k = std::string(kind_tag(kind_)) + "[" + join(chern_) + "]";
    if (!twist_.empty()) k += "t[" + join(twist_) + "]";
    if (kind_ == BundleKind::Table) k += "{" + key_ + "}";
    if (base_) k += "<" + base_->key() + ">";
    return k;
}

std::string serialize_descriptor(const BundleDescriptor& d, const GraphPtr& g) {
    return canonical_descriptor_text(raw_text(d, g));
}

BundleDescriptor parse_descriptor(std::string_view text, const GraphPtr& g) {
    return from_dtext(parse_dtext(text), g);
}

std::string canonical_descriptor_text(std::string_view text) { return format_dtext(parse_dtext(text)); }

std::string canonical_cycle_text(std::string_view text) {
    auto m = parse_rat_map(text);
    for (const auto& [id, q] : m)
        if (q.get_den() != 1) throw Error(ErrorKind::ParseError, "cycle coefficient of '" + id + "' is not an integer");
    return format_map(m);
}

std::string serialize_query(const Cycle& cycle, const BundleDescriptor& d) {
    return cycle.to_string() + " | " + serialize_descriptor(d, cycle.graph());
}

// ---------------------------------------------------------------- oracle base

AnalyticOracle::AnalyticOracle(OracleOptions options) : options_(std::move(options)) {}

std::int64_t AnalyticOracle::h1(const Cycle& cycle, const BundleDescriptor& bundle) const {
    if (!cycle.is_effective()) throw Error(ErrorKind::InvalidArgument, "h1 queried on a non-effective cycle");
    if (cycle.is_zero()) return 0;
    std::string key;
    if (options_.memoize) {
        key = cycle.graph()->fingerprint();
        key += '#';
        for (auto x : cycle.coefficients()) key += std::to_string(x) + ",";
        key += '#';
        key += bundle.key();
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    std::int64_t value = compute_h1(cycle, bundle);
    if (value < 0)
        throw Error(ErrorKind::OracleFailure,
                    "negative h1 " + std::to_string(value) + " for " + serialize_query(cycle, bundle));
    if (options_.memoize) {
        std::lock_guard<std::mutex> lock(mutex_);
        memo_.emplace(std::move(key), value);
    }
    return value;
}

std::optional<bool> AnalyticOracle::try_has_section(const Cycle& cycle, const BundleDescriptor& bundle) const {
    if (!cycle.is_effective()) throw Error(ErrorKind::InvalidArgument, "section query on a non-effective cycle");
    if (cycle.is_zero()) return true;
    return compute_section(cycle, bundle);
}

bool AnalyticOracle::has_section_without_fixed_component(const Cycle& cycle, const BundleDescriptor& bundle) const {
    auto r = try_has_section(cycle, bundle);
    if (!r)
        throw Error(ErrorKind::UnsupportedDescriptor,
                    "no section criterion for " + serialize_descriptor(bundle, cycle.graph()));
    return *r;
}

std::optional<bool> AnalyticOracle::compute_section(const Cycle&, const BundleDescriptor&) const {
    return std::nullopt;
}

std::vector<std::string> AnalyticOracle::notes() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return {notes_.begin(), notes_.end()};
}

void AnalyticOracle::note(const std::string& text) const {
    std::lock_guard<std::mutex> lock(mutex_);
    notes_.insert(text);
}

std::size_t AnalyticOracle::memo_size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return memo_.size();
}

// ---------------------------------------------------------------- generic

void GenericOracle::check_natural_hypothesis(const Cycle& cycle, const Vec& c1) const {
    // -m must have positive E-coordinates on every component of the support,
    // m being the Chern class restricted to that component.
    const auto& g = cycle.graph();
    bool ok = true;
    for (const auto& comp : components(*g, cycle.support())) {
        auto sub = induce_subgraph(g, comp);
        const auto& part = sub.components().front();
        Vec p;
        for (std::size_t v : part.to_parent) p.push_back(c1[v]);
        RatCycle m = from_pairing(part.graph, p);
        for (std::size_t i = 0; i < m.size(); ++i) ok = ok && m[i] < 0;
    }
    if (ok) return;
    std::string msg = "natural bundle formula applied with a coefficient a_v <= 0 on the cycle support";
    if (options().hypothesis == HypothesisMode::Strict)
        throw Error(ErrorKind::HypothesisViolation,
                    msg + " (" + serialize_query(cycle, BundleDescriptor::natural(c1)) + ")");
    note(msg);
}

std::int64_t GenericOracle::natural_formula(const Cycle& cycle, const Vec& c1) const {
    // chi(-m) - min_{0 <= l <= B} chi(-m + l), with -m built as a rational cycle
    const auto& g = cycle.graph();
    RatCycle minus_m = -from_pairing(g, c1);
    BoxProblem p(Cycle(g), cycle, Objective::chi_of(minus_m));
    auto r = minimize_box(p, options().box);
    Rational h = chi(minus_m) - r.value;
    if (h.get_den() != 1) throw Error(ErrorKind::ConsistencyError, "non-integral h1");
    return h.get_num().get_si();
}

std::int64_t GenericOracle::compute_h1(const Cycle& cycle, const BundleDescriptor& bundle) const {
    const std::size_t n = cycle.size();
    switch (bundle.kind()) {
        case BundleKind::Trivial:
            return h1_O_generic(cycle, options().box);
        case BundleKind::Natural: {
            Vec c1 = bundle.first_chern_class(n);
            check_natural_hypothesis(cycle, c1);
            return natural_formula(cycle, c1);
        }
        case BundleKind::GenericPic:
            return natural_formula(cycle, bundle.first_chern_class(n));
        case BundleKind::GenericAbelImage: {
            if (!options().assume_regular_section)
                throw Error(ErrorKind::HypothesisViolation,
                            "generic Abel-image bundle needs the regular-section assumption");
            note("generic Abel-image values assume a regular section of the twisting bundle");
            BundleDescriptor nat = BundleDescriptor::trivial().twisted(widened(bundle.twist(), n));
            Vec c = widened(bundle.chern(), n);
            Objective obj;
            obj.linear.resize(n);
            for (std::size_t v = 0; v < n; ++v) obj.linear[v] = -c[v];
            obj.callback = [this, nat](const Cycle& w) { return h1(w, nat); };
            BoxProblem p(Cycle(cycle.graph()), cycle, std::move(obj));
            auto r = maximize_box(p, options().box);
            return r.value.get_num().get_si();
        }
        default:
            throw Error(ErrorKind::UnsupportedDescriptor,
                        "generic oracle cannot evaluate " + serialize_descriptor(bundle, cycle.graph()));
    }
}

std::optional<bool> GenericOracle::compute_section(const Cycle& cycle, const BundleDescriptor& bundle) const {
    const std::size_t n = cycle.size();
    switch (bundle.kind()) {
        case BundleKind::Trivial:
            return true;
        case BundleKind::Natural:
        case BundleKind::GenericPic: {
            Vec c1 = bundle.first_chern_class(n);
            if (bundle.kind() == BundleKind::Natural) check_natural_hypothesis(cycle, c1);
            // chi(-c) < chi(-c + l) for all 0 < l <= B
            Objective obj = Objective::chi_zero(cycle.graph());
            obj.linear = c1;
            BoxProblem p(Cycle(cycle.graph()), cycle, std::move(obj));
            return !first_at_most(p, Rational(0), true, options().box).has_value();
        }
        case BundleKind::GenericAbelImage:
            if (bundle.twist().empty()) return true;
            return std::nullopt;
        default:
            return std::nullopt;
    }
}

// ---------------------------------------------------------------- table

TableOracle::TableOracle(OraclePtr fallback, OracleOptions options)
    : AnalyticOracle(std::move(options)), fallback_(std::move(fallback)) {}

std::shared_ptr<TableOracle> TableOracle::load(std::string_view text, OraclePtr fallback, OracleOptions options) {
    auto t = std::make_shared<TableOracle>(std::move(fallback), std::move(options));
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        auto hash = line.find('#');
        line = trim(line.substr(0, hash));
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        auto where = " (line " + std::to_string(line_no) + ")";
        try {
            std::size_t sp = 0;
            while (sp < line.size() && !std::isspace(static_cast<unsigned char>(line[sp]))) ++sp;
            std::string_view tag = line.substr(0, sp);
            auto bar = line.find('|');
            auto eq = line.rfind('=');
            if ((tag != "h1" && tag != "h0nz") || bar == std::string_view::npos || eq == std::string_view::npos ||
                eq < bar)
                throw Error(ErrorKind::ParseError, "expected 'h1|h0nz <cycle> | <descriptor> = <value>'");
            std::string key = canonical_cycle_text(line.substr(sp, bar - sp)) + " | " +
                              canonical_descriptor_text(line.substr(bar + 1, eq - bar - 1));
            std::string_view val = trim(line.substr(eq + 1));
            if (tag == "h1") {
                std::int64_t v = 0;
                Rational q;
                if (!parse_rational(val, q) || q.get_den() != 1 || q < 0 || !q.get_num().fits_slong_p())
                    throw Error(ErrorKind::ParseError, "h1 value must be a nonnegative integer");
                v = q.get_num().get_si();
                auto [it, fresh] = t->h1_.emplace(key, v);
                if (!fresh && it->second != v) throw Error(ErrorKind::ParseError, "conflicting values for " + key);
            } else {
                if (val != "true" && val != "false") throw Error(ErrorKind::ParseError, "h0nz value must be true or false");
                bool b = val == "true";
                auto [it, fresh] = t->section_.emplace(key, b);
                if (!fresh && it->second != b) throw Error(ErrorKind::ParseError, "conflicting values for " + key);
            }
        } catch (const Error& e) {
            throw Error(ErrorKind::ParseError, std::string(e.what()) + where);
        }
        if (end == text.size()) break;
    }
    return t;
}

void TableOracle::store_h1(const Cycle& cycle, const BundleDescriptor& bundle, std::int64_t value) {
    h1_[serialize_query(cycle, bundle)] = value;
}

void TableOracle::store_section(const Cycle& cycle, const BundleDescriptor& bundle, bool value) {
    section_[serialize_query(cycle, bundle)] = value;
}

std::vector<std::string> TableOracle::misses() const {
    std::lock_guard<std::mutex> lock(miss_mutex_);
    return {misses_.begin(), misses_.end()};
}

std::string TableOracle::misses_report() const {
    std::string out;
    for (const auto& m : misses()) out += m + " = ?\n";
    return out;
}

std::string TableOracle::serialize() const {
    std::string out;
    for (const auto& [k, v] : h1_) out += "h1 " + k + " = " + std::to_string(v) + "\n";
    for (const auto& [k, v] : section_) out += "h0nz " + k + " = " + (v ? "true" : "false") + "\n";
    return out;
}

namespace {
bool involves_table(const BundleDescriptor& d) {
    if (d.kind() == BundleKind::Table) return true;
    return d.base() && involves_table(*d.base());
}
}  // namespace

std::int64_t TableOracle::compute_h1(const Cycle& cycle, const BundleDescriptor& bundle) const {
    std::string key = serialize_query(cycle, bundle);
    auto it = h1_.find(key);
    if (it != h1_.end()) return it->second;
    if (fallback_ && !involves_table(bundle)) return fallback_->h1(cycle, bundle);
    {
        std::lock_guard<std::mutex> lock(miss_mutex_);
        misses_.insert("h1 " + key);
    }
    throw Error(ErrorKind::MissingEntry, "h1 " + key);
}

std::optional<bool> TableOracle::compute_section(const Cycle& cycle, const BundleDescriptor& bundle) const {
    std::string key = serialize_query(cycle, bundle);
    auto it = section_.find(key);
    if (it != section_.end()) return it->second;
    if (fallback_ && !involves_table(bundle)) return fallback_->try_has_section(cycle, bundle);
    {
        std::lock_guard<std::mutex> lock(miss_mutex_);
        misses_.insert("h0nz " + key);
    }
    return std::nullopt;
}

}  // namespace abeldim
