#include "abeldim/lattice.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace abeldim {

namespace {

bool valid_id(std::string_view id) {
    if (id.empty()) return false;
    for (char ch : id) {
        unsigned char u = static_cast<unsigned char>(ch);
        if (u <= 0x20 || u == 0x7f) return false;
        switch (ch) {
            case ':': case '#': case ';': case '|': case '(': case ')':
            case ',': case '=': case '[': case ']': case '{': case '}': case '"':
                return false;
            default: break;
        }
    }
    return true;
}

std::string size_mismatch(std::size_t a, std::size_t b) {
    return "cycles live on graphs with " + std::to_string(a) + " and " + std::to_string(b) +
           " vertices";
}

}  // namespace

// ---------------------------------------------------------------- graph

GraphPtr PlumbingGraph::create(std::vector<VertexDecl> vertices,
                               std::vector<std::pair<std::string, std::string>> edges) {
    return build(std::move(vertices), std::move(edges), true);
}

GraphPtr PlumbingGraph::create_trusted(std::vector<VertexDecl> vertices,
                                       std::vector<std::pair<std::string, std::string>> edges) {
    return build(std::move(vertices), std::move(edges), false);
}

GraphPtr PlumbingGraph::build(std::vector<VertexDecl> vertices,
                              std::vector<std::pair<std::string, std::string>> edges, bool check) {
    if (vertices.empty()) throw Error(ErrorKind::NotATree, "graph has no vertices");
    if (vertices.size() > kMaxVertices)
        throw Error(ErrorKind::InvalidArgument,
                    "graph has " + std::to_string(vertices.size()) + " vertices, limit is " +
                        std::to_string(kMaxVertices));
    std::sort(vertices.begin(), vertices.end(),
              [](const VertexDecl& a, const VertexDecl& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (!valid_id(vertices[i].id))
            throw Error(ErrorKind::SyntaxError, "invalid vertex id '" + vertices[i].id + "'");
        if (i > 0 && vertices[i].id == vertices[i - 1].id)
            throw Error(ErrorKind::DuplicateVertex, "vertex '" + vertices[i].id + "' declared twice");
        if (vertices[i].euler > kMaxEuler || vertices[i].euler < -kMaxEuler)
            throw Error(ErrorKind::InvalidArgument,
                        "Euler number of '" + vertices[i].id + "' is out of range");
    }

    std::shared_ptr<PlumbingGraph> g(new PlumbingGraph());
    const std::size_t n = vertices.size();
    for (auto& v : vertices) {
        g->ids_.push_back(std::move(v.id));
        g->euler_.push_back(v.euler);
    }
    g->adjacency_.resize(n);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& [a, b] : edges) {
        auto ia = g->find(a);
        auto ib = g->find(b);
        if (!ia) throw Error(ErrorKind::UnknownVertex, "edge names unknown vertex '" + a + "'");
        if (!ib) throw Error(ErrorKind::UnknownVertex, "edge names unknown vertex '" + b + "'");
        if (*ia == *ib) throw Error(ErrorKind::NotATree, "loop at vertex '" + a + "'");
        auto key = std::minmax(*ia, *ib);
        if (!seen.insert(key).second)
            throw Error(ErrorKind::NotATree, "repeated edge " + a + " " + b);
    }
    g->edges_.assign(seen.begin(), seen.end());
    for (const auto& [u, w] : g->edges_) {
        g->adjacency_[u].push_back(w);
        g->adjacency_[w].push_back(u);
    }
    for (auto& adj : g->adjacency_) std::sort(adj.begin(), adj.end());

    if (g->edges_.size() + 1 != n)
        throw Error(ErrorKind::NotATree, std::to_string(n) + " vertices but " +
                                             std::to_string(g->edges_.size()) + " edges");
    std::vector<char> reached(n, 0);
    std::deque<std::size_t> queue{0};
    reached[0] = 1;
    std::size_t count = 1;
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t w : g->adjacency_[v])
            if (!reached[w]) {
                reached[w] = 1;
                ++count;
                queue.push_back(w);
            }
    }
    if (count != n) throw Error(ErrorKind::NotATree, "graph is disconnected");

    std::string fp;
    for (std::size_t v = 0; v < n; ++v) fp += g->ids_[v] + ":" + std::to_string(g->euler_[v]) + ";";
    fp += "|";
    for (const auto& [u, w] : g->edges_) fp += std::to_string(u) + "-" + std::to_string(w) + ";";
    g->fingerprint_ = std::move(fp);

    if (check) {
        const auto& minors = g->leading_minors();
        for (std::size_t k = 0; k < minors.size(); ++k) {
            int want = (k % 2 == 0) ? -1 : 1;
            if (sgn(minors[k]) != want)
                throw Error(ErrorKind::NotNegativeDefinite,
                            "leading minor of order " + std::to_string(k + 1) + " is " +
                                minors[k].get_str());
        }
    }
    return g;
}

std::optional<std::size_t> PlumbingGraph::find(std::string_view id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id,
                               [](const std::string& a, std::string_view b) { return a < b; });
    if (it == ids_.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - ids_.begin());
}

std::size_t PlumbingGraph::index_of(std::string_view id) const {
    auto i = find(id);
    if (!i) throw Error(ErrorKind::UnknownVertex, "no vertex '" + std::string(id) + "'");
    return *i;
}

bool PlumbingGraph::adjacent(std::size_t u, std::size_t w) const {
    const auto& adj = adjacency_[u];
    return std::binary_search(adj.begin(), adj.end(), w);
}

std::int64_t PlumbingGraph::form(std::size_t u, std::size_t w) const {
    if (u == w) return euler_[u];
    return adjacent(u, w) ? 1 : 0;
}

bool PlumbingGraph::same_as(const PlumbingGraph& other) const {
    return this == &other || fingerprint_ == other.fingerprint_;
}

void PlumbingGraph::compute_derived() const {
    std::call_once(derived_once_, [this] {
        const std::size_t n = size();
        auto d = std::make_unique<Derived>();

        // Fraction-free elimination: the k-th pivot is the k-th leading minor.
        std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m[i][j] = static_cast<long>(form(i, j));
        BigInt prev = 1;
        bool singular = false;
        for (std::size_t k = 0; k < n; ++k) {
            d->minors.push_back(m[k][k]);
            if (m[k][k] == 0) {
                singular = true;
                break;
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                for (std::size_t j = k + 1; j < n; ++j) {
                    m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                    mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
                }
            }
            prev = m[k][k];
        }
        if (singular) {
            d->det = 0;
            derived_ = std::move(d);
            return;
        }
        d->det = d->minors.back();

        // Gauss-Jordan on [I | -Id]; the solution rows are the E*_v.
        std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) a[i][j] = static_cast<long>(form(i, j));
            a[i][n + i] = -1;
        }
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            while (a[piv][col] == 0) ++piv;
            std::swap(a[piv], a[col]);
            Rational inv = 1 / a[col][col];
            for (auto& x : a[col]) x *= inv;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == col || a[r][col] == 0) continue;
                Rational f = a[r][col];
                for (std::size_t j = col; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
            }
        }
        // Column v of the inverse system holds E*_v; the matrix is symmetric.
        d->dual.assign(n, std::vector<Rational>(n));
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t u = 0; u < n; ++u) d->dual[v][u] = a[u][n + v];

        // (Z_K, E_v) = e_v + 2, so Z_K = -sum (e_v + 2) E*_v.
        d->zk.assign(n, Rational(0));
        for (std::size_t v = 0; v < n; ++v) {
            Rational w = static_cast<long>(euler_[v] + 2);
            if (w == 0) continue;
            for (std::size_t u = 0; u < n; ++u) d->zk[u] -= w * d->dual[v][u];
        }
        derived_ = std::move(d);
    });
}

const BigInt& PlumbingGraph::determinant() const {
    compute_derived();
    return derived_->det;
}

BigInt PlumbingGraph::class_group_order() const { return abs(determinant()); }

const std::vector<BigInt>& PlumbingGraph::leading_minors() const {
    compute_derived();
    return derived_->minors;
}

const std::vector<std::vector<Rational>>& PlumbingGraph::dual_basis() const {
    compute_derived();
    if (derived_->dual.empty())
        throw Error(ErrorKind::NotNegativeDefinite, "intersection form is singular");
    return derived_->dual;
}

const std::vector<Rational>& PlumbingGraph::canonical_coefficients() const {
    compute_derived();
    if (derived_->zk.empty())
        throw Error(ErrorKind::NotNegativeDefinite, "intersection form is singular");
    return derived_->zk;
}

std::string PlumbingGraph::to_text() const {
    std::string out;
    for (std::size_t v = 0; v < size(); ++v) out += ids_[v] + ": " + std::to_string(euler_[v]) + "\n";
    for (const auto& [u, w] : edges_) out += "edge " + ids_[u] + " " + ids_[w] + "\n";
    return out;
}

void require_same_graph(const PlumbingGraph& a, const PlumbingGraph& b) {
    if (!a.same_as(b)) throw Error(ErrorKind::GraphMismatch, "arguments live on different graphs");
}

// ---------------------------------------------------------------- cycles

Cycle::Cycle(GraphPtr graph) : graph_(std::move(graph)), c_(graph_->size(), 0) {}

Cycle::Cycle(GraphPtr graph, std::vector<std::int64_t> coefficients)
    : graph_(std::move(graph)), c_(std::move(coefficients)) {
    if (c_.size() != graph_->size())
        throw Error(ErrorKind::GraphMismatch, size_mismatch(c_.size(), graph_->size()));
}

Cycle Cycle::reduced(GraphPtr graph, const std::vector<std::size_t>& vertices) {
    Cycle c(std::move(graph));
    for (std::size_t v : vertices) c.c_.at(v) = 1;
    return c;
}

Cycle Cycle::unit(GraphPtr graph, std::size_t v) {
    Cycle c(std::move(graph));
    c.c_.at(v) = 1;
    return c;
}

Cycle Cycle::all_ones(GraphPtr graph) {
    Cycle c(std::move(graph));
    std::fill(c.c_.begin(), c.c_.end(), 1);
    return c;
}

bool Cycle::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](std::int64_t x) { return x == 0; });
}

bool Cycle::is_effective() const {
    return std::all_of(c_.begin(), c_.end(), [](std::int64_t x) { return x >= 0; });
}

std::vector<std::size_t> Cycle::support() const {
    std::vector<std::size_t> s;
    for (std::size_t v = 0; v < c_.size(); ++v)
        if (c_[v] != 0) s.push_back(v);
    return s;
}

Cycle Cycle::reduced_support() const {
    Cycle r(graph_);
    for (std::size_t v = 0; v < c_.size(); ++v) r.c_[v] = c_[v] != 0 ? 1 : 0;
    return r;
}

Cycle& Cycle::operator+=(const Cycle& other) {
    require_same_graph(*graph_, *other.graph_);
    for (std::size_t v = 0; v < c_.size(); ++v) c_[v] += other.c_[v];
    return *this;
}

Cycle& Cycle::operator-=(const Cycle& other) {
    require_same_graph(*graph_, *other.graph_);
    for (std::size_t v = 0; v < c_.size(); ++v) c_[v] -= other.c_[v];
    return *this;
}

bool Cycle::leq(const Cycle& other) const {
    require_same_graph(*graph_, *other.graph_);
    for (std::size_t v = 0; v < c_.size(); ++v)
        if (c_[v] > other.c_[v]) return false;
    return true;
}

std::string Cycle::to_string() const {
    std::string out;
    for (std::size_t v = 0; v < c_.size(); ++v) {
        if (c_[v] == 0) continue;
        if (!out.empty()) out += ' ';
        out += graph_->id(v) + ":" + std::to_string(c_[v]);
    }
    return out.empty() ? "0" : out;
}

Cycle cycle_min(const Cycle& a, const Cycle& b) {
    require_same_graph(*a.graph(), *b.graph());
    Cycle r = a;
    for (std::size_t v = 0; v < a.size(); ++v) r[v] = std::min(a[v], b[v]);
    return r;
}

Cycle cycle_max(const Cycle& a, const Cycle& b) {
    require_same_graph(*a.graph(), *b.graph());
    Cycle r = a;
    for (std::size_t v = 0; v < a.size(); ++v) r[v] = std::max(a[v], b[v]);
    return r;
}

RatCycle::RatCycle(GraphPtr graph) : graph_(std::move(graph)), c_(graph_->size(), Rational(0)) {}

RatCycle::RatCycle(GraphPtr graph, std::vector<Rational> coefficients)
    : graph_(std::move(graph)), c_(std::move(coefficients)) {
    if (c_.size() != graph_->size())
        throw Error(ErrorKind::GraphMismatch, size_mismatch(c_.size(), graph_->size()));
}

RatCycle::RatCycle(const Cycle& cycle) : graph_(cycle.graph()) {
    c_.reserve(cycle.size());
    for (std::int64_t x : cycle.coefficients()) c_.emplace_back(static_cast<long>(x));
}

bool RatCycle::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return x == 0; });
}

bool RatCycle::is_in_L() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return x.get_den() == 1; });
}

bool RatCycle::is_in_Lprime() const {
    for (std::size_t v = 0; v < c_.size(); ++v) {
        Rational p = c_[v] * static_cast<long>(graph_->euler(v));
        for (std::size_t w : graph_->neighbors(v)) p += c_[w];
        if (p.get_den() != 1) return false;
    }
    return true;
}

bool RatCycle::is_in_neg_lipman() const { return in_neg_lipman(*this); }

std::optional<Cycle> RatCycle::to_cycle() const {
    if (!is_in_L()) return std::nullopt;
    std::vector<std::int64_t> c;
    c.reserve(c_.size());
    for (const auto& x : c_) {
        if (!x.get_num().fits_slong_p())
            throw Error(ErrorKind::InvalidArgument, "coefficient too large");
        c.push_back(x.get_num().get_si());
    }
    return Cycle(graph_, std::move(c));
}

RatCycle& RatCycle::operator+=(const RatCycle& other) {
    require_same_graph(*graph_, *other.graph_);
    for (std::size_t v = 0; v < c_.size(); ++v) c_[v] += other.c_[v];
    return *this;
}

RatCycle& RatCycle::operator-=(const RatCycle& other) {
    require_same_graph(*graph_, *other.graph_);
    for (std::size_t v = 0; v < c_.size(); ++v) c_[v] -= other.c_[v];
    return *this;
}

RatCycle RatCycle::operator-() const {
    RatCycle r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

RatCycle operator*(const Rational& k, RatCycle a) {
    for (auto& x : a.c_) x *= k;
    return a;
}

std::string RatCycle::to_string() const {
    std::string out;
    for (std::size_t v = 0; v < c_.size(); ++v) {
        if (c_[v] == 0) continue;
        if (!out.empty()) out += ' ';
        out += graph_->id(v) + ":" + format_rational(c_[v]);
    }
    return out.empty() ? "0" : out;
}

std::string format_rational(const Rational& q) { return q.get_str(); }

// ---------------------------------------------------------------- pairing, chi

Rational pair(const RatCycle& x, const RatCycle& y) {
    require_same_graph(*x.graph(), *y.graph());
    const auto& g = *x.graph();
    Rational s = 0;
    for (std::size_t v = 0; v < g.size(); ++v) s += x[v] * y[v] * static_cast<long>(g.euler(v));
    for (const auto& [u, w] : g.edges()) s += x[u] * y[w] + x[w] * y[u];
    return s;
}

std::int64_t pair(const Cycle& x, const Cycle& y) {
    require_same_graph(*x.graph(), *y.graph());
    const auto& g = *x.graph();
    std::int64_t s = 0;
    for (std::size_t v = 0; v < g.size(); ++v) s += x[v] * y[v] * g.euler(v);
    for (const auto& [u, w] : g.edges()) s += x[u] * y[w] + x[w] * y[u];
    return s;
}

std::int64_t chi_raw(const PlumbingGraph& g, std::span<const std::int64_t> l) {
    std::int64_t twice = 0;
    for (std::size_t v = 0; v < g.size(); ++v) {
        const std::int64_t e = g.euler(v);
        twice += l[v] * ((e + 2) - e * l[v]);
    }
    for (const auto& [u, w] : g.edges()) twice -= 2 * l[u] * l[w];
    return twice / 2;
}

std::int64_t chi(const Cycle& x) { return chi_raw(*x.graph(), x.coefficients()); }

Rational chi(const RatCycle& x) {
    RatCycle zk = canonical_cycle(x.graph());
    return -pair(x, x - zk) / 2;
}

RatCycle canonical_cycle(const GraphPtr& g) { return RatCycle(g, g->canonical_coefficients()); }

RatCycle dual_cycle(const GraphPtr& g, std::size_t v) {
    if (v >= g->size()) throw Error(ErrorKind::UnknownVertex, "vertex index out of range");
    return RatCycle(g, g->dual_basis()[v]);
}

std::vector<Rational> estar_coords(const RatCycle& x) {
    const auto& g = *x.graph();
    std::vector<Rational> a(g.size());
    for (std::size_t v = 0; v < g.size(); ++v) {
        Rational p = x[v] * static_cast<long>(g.euler(v));
        for (std::size_t w : g.neighbors(v)) p += x[w];
        a[v] = -p;
    }
    return a;
}

std::vector<std::int64_t> pairing_vector(const RatCycle& x) {
    auto a = estar_coords(x);
    std::vector<std::int64_t> p(a.size());
    for (std::size_t v = 0; v < a.size(); ++v) {
        if (a[v].get_den() != 1)
            throw Error(ErrorKind::NotInLprime, "(x, E_" + x.graph()->id(v) + ") = " +
                                                    format_rational(-a[v]) + " is not an integer");
        if (!a[v].get_num().fits_slong_p())
            throw Error(ErrorKind::InvalidArgument, "pairing too large");
        p[v] = -a[v].get_num().get_si();
    }
    return p;
}

RatCycle from_pairing(const GraphPtr& g, std::span<const std::int64_t> a) {
    if (a.size() != g->size())
        throw Error(ErrorKind::GraphMismatch, size_mismatch(a.size(), g->size()));
    const auto& dual = g->dual_basis();
    RatCycle x(g);
    for (std::size_t v = 0; v < g->size(); ++v) {
        if (a[v] == 0) continue;
        Rational k = static_cast<long>(a[v]);
        for (std::size_t u = 0; u < g->size(); ++u) x[u] -= k * dual[v][u];
    }
    return x;
}

bool in_neg_lipman(const RatCycle& x) {
    auto p = pairing_vector(x);
    return std::all_of(p.begin(), p.end(), [](std::int64_t t) { return t >= 0; });
}

Cycle minimal_cycle(const GraphPtr& g) {
    std::vector<std::size_t> order(g->size());
    for (std::size_t v = 0; v < order.size(); ++v) order[v] = v;
    return minimal_cycle(g, order);
}

Cycle minimal_cycle(const GraphPtr& g, std::span<const std::size_t> order) {
    Cycle l = Cycle::all_ones(g);
    const std::size_t n = g->size();
    std::vector<std::int64_t> p(n);
    for (std::size_t v = 0; v < n; ++v) {
        p[v] = g->euler(v) + static_cast<std::int64_t>(g->degree(v));
    }
    for (;;) {
        std::size_t pick = n;
        for (std::size_t v : order)
            if (p[v] > 0) {
                pick = v;
                break;
            }
        if (pick == n) break;
        l[pick] += 1;
        p[pick] += g->euler(pick);
        for (std::size_t w : g->neighbors(pick)) p[w] += 1;
    }
    return l;
}

RatCycle cube_representative(const RatCycle& x) {
    if (!x.is_in_Lprime()) throw Error(ErrorKind::NotInLprime, "cycle is not in L'");
    RatCycle y = x;
    for (std::size_t v = 0; v < y.size(); ++v) {
        BigInt fl;
        mpz_fdiv_q(fl.get_mpz_t(), x[v].get_num_mpz_t(), x[v].get_den_mpz_t());
        y[v] = x[v] - Rational(fl);
    }
    return y;
}

// ---------------------------------------------------------------- subgraphs

std::vector<std::vector<std::size_t>> components(const PlumbingGraph& g,
                                                 std::span<const std::size_t> vertices) {
    std::vector<char> in(g.size(), 0), seen(g.size(), 0);
    for (std::size_t v : vertices) {
        if (v >= g.size()) throw Error(ErrorKind::UnknownVertex, "vertex index out of range");
        in[v] = 1;
    }
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t s = 0; s < g.size(); ++s) {
        if (!in[s] || seen[s]) continue;
        std::vector<std::size_t> comp;
        std::vector<std::size_t> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (std::size_t w : g.neighbors(v))
                if (in[w] && !seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

std::vector<Cycle> split_cycle(const Cycle& z) {
    std::vector<Cycle> parts;
    for (const auto& comp : components(*z.graph(), z.support())) {
        Cycle part(z.graph());
        for (std::size_t v : comp) part[v] = z[v];
        parts.push_back(std::move(part));
    }
    return parts;
}

std::size_t component_count(const Cycle& z) {
    return components(*z.graph(), z.support()).size();
}

SubgraphEmbedding::SubgraphEmbedding(GraphPtr parent, std::vector<std::size_t> vertices)
    : parent_(std::move(parent)), vertices_(std::move(vertices)) {
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    component_of_.assign(parent_->size(), -1);
    local_.assign(parent_->size(), 0);
    for (const auto& comp : abeldim::components(*parent_, vertices_)) {
        std::vector<VertexDecl> decls;
        std::vector<std::pair<std::string, std::string>> edges;
        for (std::size_t i = 0; i < comp.size(); ++i) {
            std::size_t v = comp[i];
            decls.push_back({parent_->id(v), parent_->euler(v)});
            component_of_[v] = static_cast<int>(components_.size());
            local_[v] = i;
        }
        for (std::size_t v : comp)
            for (std::size_t w : parent_->neighbors(v))
                if (v < w && component_of_[w] == component_of_[v])
                    edges.emplace_back(parent_->id(v), parent_->id(w));
        components_.push_back(SubgraphComponent{PlumbingGraph::create_trusted(std::move(decls), std::move(edges)), comp});
    }
}

Cycle SubgraphEmbedding::restrict(const Cycle& x, std::size_t k) const {
    require_same_graph(*x.graph(), *parent_);
    const auto& comp = components_.at(k);
    Cycle r(comp.graph);
    for (std::size_t i = 0; i < comp.to_parent.size(); ++i) r[i] = x[comp.to_parent[i]];
    return r;
}

Cycle SubgraphEmbedding::restrict_to_parent(const Cycle& x) const {
    require_same_graph(*x.graph(), *parent_);
    Cycle r(parent_);
    for (std::size_t v : vertices_) r[v] = x[v];
    return r;
}

Cycle SubgraphEmbedding::extend(const Cycle& local, std::size_t k) const {
    const auto& comp = components_.at(k);
    require_same_graph(*local.graph(), *comp.graph);
    Cycle r(parent_);
    for (std::size_t i = 0; i < comp.to_parent.size(); ++i) r[comp.to_parent[i]] = local[i];
    return r;
}

SubgraphEmbedding induce_subgraph(const GraphPtr& g, std::vector<std::size_t> vertices) {
    return SubgraphEmbedding(g, std::move(vertices));
}

// ---------------------------------------------------------------- blow-ups

BlowupMap::BlowupMap(GraphPtr source, std::size_t center, std::string new_id)
    : source_(std::move(source)), center_(center), new_id_(std::move(new_id)) {
    if (center_ >= source_->size()) throw Error(ErrorKind::UnknownVertex, "blow-up center out of range");
    if (new_id_.empty()) {
        for (int k = 1;; ++k) {
            std::string cand = source_->id(center_) + "~" + std::to_string(k);
            if (!source_->find(cand)) {
                new_id_ = cand;
                break;
            }
        }
    } else if (source_->find(new_id_)) {
        throw Error(ErrorKind::DuplicateVertex, "vertex '" + new_id_ + "' already exists");
    }
    std::vector<VertexDecl> decls;
    for (std::size_t v = 0; v < source_->size(); ++v)
        decls.push_back({source_->id(v), source_->euler(v) - (v == center_ ? 1 : 0)});
    decls.push_back({new_id_, -1});
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& [u, w] : source_->edges()) edges.emplace_back(source_->id(u), source_->id(w));
    edges.emplace_back(source_->id(center_), new_id_);
    target_ = PlumbingGraph::create_trusted(std::move(decls), std::move(edges));
    to_target_.resize(source_->size());
    for (std::size_t v = 0; v < source_->size(); ++v) to_target_[v] = target_->index_of(source_->id(v));
    new_index_ = target_->index_of(new_id_);
}

Cycle BlowupMap::pullback(const Cycle& x) const {
    require_same_graph(*x.graph(), *source_);
    Cycle y(target_);
    for (std::size_t v = 0; v < source_->size(); ++v) y[to_target_[v]] = x[v];
    y[new_index_] = x[center_];
    return y;
}

RatCycle BlowupMap::pullback(const RatCycle& x) const {
    require_same_graph(*x.graph(), *source_);
    RatCycle y(target_);
    for (std::size_t v = 0; v < source_->size(); ++v) y[to_target_[v]] = x[v];
    y[new_index_] = x[center_];
    return y;
}

BlowupMap blow_up(const GraphPtr& g, std::string_view vertex) {
    return BlowupMap(g, g->index_of(vertex));
}

}  // namespace abeldim
