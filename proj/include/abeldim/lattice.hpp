#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "abeldim/error.hpp"

namespace abeldim {

using Rational = mpq_class;
using BigInt = mpz_class;

// Input limits. Inside them every integer-cycle pairing and chi value fits
// comfortably in 64 bits, so the hot loops never need big integers.
inline constexpr std::size_t kMaxVertices = 500;
inline constexpr std::int64_t kMaxEuler = 10000;
inline constexpr std::int64_t kMaxCoefficient = 100000;

class PlumbingGraph;
using GraphPtr = std::shared_ptr<const PlumbingGraph>;

struct VertexDecl {
    std::string id;
    std::int64_t euler = 0;
};

// Negative definite plumbing tree. Vertices are kept in lexicographic order
// of their ids; every index used by the library refers to that order.
class PlumbingGraph {
public:
    // Validates ids, tree shape and negative definiteness.
    static GraphPtr create(std::vector<VertexDecl> vertices,
                           std::vector<std::pair<std::string, std::string>> edges);

    // Skips the definiteness test; for graphs derived from validated ones
    // (blow-ups, induced subgraphs) where it holds automatically.
    static GraphPtr create_trusted(std::vector<VertexDecl> vertices,
                                   std::vector<std::pair<std::string, std::string>> edges);

    std::size_t size() const { return ids_.size(); }
    const std::string& id(std::size_t v) const { return ids_[v]; }
    const std::vector<std::string>& ids() const { return ids_; }
    std::optional<std::size_t> find(std::string_view id) const;
    std::size_t index_of(std::string_view id) const;  // throws UnknownVertex

    std::int64_t euler(std::size_t v) const { return euler_[v]; }
    const std::vector<std::int64_t>& eulers() const { return euler_; }
    std::span<const std::size_t> neighbors(std::size_t v) const { return adjacency_[v]; }
    std::size_t degree(std::size_t v) const { return adjacency_[v].size(); }
    // Edges as index pairs (u < w), sorted.
    const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
    bool adjacent(std::size_t u, std::size_t w) const;
    std::int64_t form(std::size_t u, std::size_t w) const;

    // Canonical text; equal for structurally identical graphs.
    const std::string& fingerprint() const { return fingerprint_; }
    bool same_as(const PlumbingGraph& other) const;

    const BigInt& determinant() const;
    BigInt class_group_order() const;
    const std::vector<BigInt>& leading_minors() const;
    // Row v holds the E-coordinates of E*_v.
    const std::vector<std::vector<Rational>>& dual_basis() const;
    const std::vector<Rational>& canonical_coefficients() const;

    std::string to_text() const;

private:
    PlumbingGraph() = default;
    static GraphPtr build(std::vector<VertexDecl> vertices,
                          std::vector<std::pair<std::string, std::string>> edges, bool check);
    void compute_derived() const;

    std::vector<std::string> ids_;
    std::vector<std::int64_t> euler_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::string fingerprint_;

    struct Derived {
        BigInt det;
        std::vector<BigInt> minors;
        std::vector<std::vector<Rational>> dual;
        std::vector<Rational> zk;
    };
    mutable std::once_flag derived_once_;
    mutable std::unique_ptr<Derived> derived_;
};

// Element of L: integer coefficients indexed by the graph's vertex order.
class Cycle {
public:
    Cycle() = default;
    explicit Cycle(GraphPtr graph);
    Cycle(GraphPtr graph, std::vector<std::int64_t> coefficients);

    static Cycle reduced(GraphPtr graph, const std::vector<std::size_t>& vertices);
    static Cycle unit(GraphPtr graph, std::size_t v);
    static Cycle all_ones(GraphPtr graph);

    const GraphPtr& graph() const { return graph_; }
    std::size_t size() const { return c_.size(); }
    std::int64_t operator[](std::size_t v) const { return c_[v]; }
    std::int64_t& operator[](std::size_t v) { return c_[v]; }
    const std::vector<std::int64_t>& coefficients() const { return c_; }

    bool is_zero() const;
    bool is_effective() const;  // every coefficient >= 0
    std::vector<std::size_t> support() const;
    Cycle reduced_support() const;  // E_{|x|}

    Cycle& operator+=(const Cycle& other);
    Cycle& operator-=(const Cycle& other);
    friend Cycle operator+(Cycle a, const Cycle& b) { return a += b; }
    friend Cycle operator-(Cycle a, const Cycle& b) { return a -= b; }
    friend bool operator==(const Cycle& a, const Cycle& b) { return a.c_ == b.c_; }
    // Coefficientwise order.
    bool leq(const Cycle& other) const;

    std::string to_string() const;

private:
    GraphPtr graph_;
    std::vector<std::int64_t> c_;
};

Cycle cycle_min(const Cycle& a, const Cycle& b);
Cycle cycle_max(const Cycle& a, const Cycle& b);

// Element of L tensor Q.
class RatCycle {
public:
    RatCycle() = default;
    explicit RatCycle(GraphPtr graph);
    RatCycle(GraphPtr graph, std::vector<Rational> coefficients);
    RatCycle(const Cycle& cycle);  // NOLINT: integral cycles embed implicitly

    const GraphPtr& graph() const { return graph_; }
    std::size_t size() const { return c_.size(); }
    const Rational& operator[](std::size_t v) const { return c_[v]; }
    Rational& operator[](std::size_t v) { return c_[v]; }
    const std::vector<Rational>& coefficients() const { return c_; }

    bool is_zero() const;
    bool is_in_L() const;
    bool is_in_Lprime() const;
    bool is_in_neg_lipman() const;  // throws NotInLprime
    std::optional<Cycle> to_cycle() const;

    RatCycle& operator+=(const RatCycle& other);
    RatCycle& operator-=(const RatCycle& other);
    RatCycle operator-() const;
    friend RatCycle operator+(RatCycle a, const RatCycle& b) { return a += b; }
    friend RatCycle operator-(RatCycle a, const RatCycle& b) { return a -= b; }
    friend RatCycle operator*(const Rational& k, RatCycle a);
    friend bool operator==(const RatCycle& a, const RatCycle& b) { return a.c_ == b.c_; }

    std::string to_string() const;

private:
    GraphPtr graph_;
    std::vector<Rational> c_;
};

void require_same_graph(const PlumbingGraph& a, const PlumbingGraph& b);

Rational pair(const RatCycle& x, const RatCycle& y);
std::int64_t pair(const Cycle& x, const Cycle& y);
Rational chi(const RatCycle& x);
std::int64_t chi(const Cycle& x);
// chi of an integral cycle given only its coefficients (no graph checks).
std::int64_t chi_raw(const PlumbingGraph& g, std::span<const std::int64_t> l);

RatCycle canonical_cycle(const GraphPtr& g);
RatCycle dual_cycle(const GraphPtr& g, std::size_t v);
// a with x = sum a_v E*_v, that is a_v = -(x, E_v).
std::vector<Rational> estar_coords(const RatCycle& x);
// The integer vector (x, E_v); throws NotInLprime.
std::vector<std::int64_t> pairing_vector(const RatCycle& x);
// The cycle -sum a_v E*_v, which is the cycle x with (x, E_v) = a_v.
RatCycle from_pairing(const GraphPtr& g, std::span<const std::int64_t> a);

bool in_neg_lipman(const RatCycle& x);
Cycle minimal_cycle(const GraphPtr& g);
// Laufer descent processing violating vertices in the given priority order.
Cycle minimal_cycle(const GraphPtr& g, std::span<const std::size_t> order);
RatCycle cube_representative(const RatCycle& x);

// Connected components of the subgraph induced on a vertex set, each sorted,
// ordered by their least vertex.
std::vector<std::vector<std::size_t>> components(const PlumbingGraph& g,
                                                 std::span<const std::size_t> vertices);
std::vector<Cycle> split_cycle(const Cycle& z);
std::size_t component_count(const Cycle& z);

struct SubgraphComponent {
    GraphPtr graph;
    std::vector<std::size_t> to_parent;  // component index -> parent index
};

class SubgraphEmbedding {
public:
    SubgraphEmbedding(GraphPtr parent, std::vector<std::size_t> vertices);

    const GraphPtr& parent() const { return parent_; }
    const std::vector<std::size_t>& vertices() const { return vertices_; }
    const std::vector<SubgraphComponent>& components() const { return components_; }
    bool empty() const { return vertices_.empty(); }
    bool contains(std::size_t v) const { return component_of_[v] >= 0; }
    int component_of(std::size_t v) const { return component_of_[v]; }
    std::size_t local_index(std::size_t v) const { return local_[v]; }

    // Restriction of a parent cycle to component k.
    Cycle restrict(const Cycle& x, std::size_t k) const;
    // Parent cycle agreeing with x on the subgraph and zero elsewhere.
    Cycle restrict_to_parent(const Cycle& x) const;
    Cycle extend(const Cycle& local, std::size_t k) const;

private:
    GraphPtr parent_;
    std::vector<std::size_t> vertices_;
    std::vector<SubgraphComponent> components_;
    std::vector<int> component_of_;
    std::vector<std::size_t> local_;
};

SubgraphEmbedding induce_subgraph(const GraphPtr& g, std::vector<std::size_t> vertices);

class BlowupMap {
public:
    BlowupMap(GraphPtr source, std::size_t center, std::string new_id = {});

    const GraphPtr& source() const { return source_; }
    const GraphPtr& target() const { return target_; }
    std::size_t center() const { return center_; }
    std::size_t new_vertex() const { return new_index_; }
    const std::string& new_id() const { return new_id_; }
    std::size_t image(std::size_t v) const { return to_target_[v]; }

    Cycle pullback(const Cycle& x) const;
    RatCycle pullback(const RatCycle& x) const;

private:
    GraphPtr source_;
    GraphPtr target_;
    std::size_t center_;
    std::string new_id_;
    std::size_t new_index_ = 0;
    std::vector<std::size_t> to_target_;
};

BlowupMap blow_up(const GraphPtr& g, std::string_view vertex);

// Text formats.
GraphPtr parse_graph(std::string_view text);
Cycle parse_cycle(const GraphPtr& g, std::string_view text);
RatCycle parse_rat_cycle(const GraphPtr& g, std::string_view text);
std::vector<std::int64_t> parse_vertex_integers(const GraphPtr& g, std::string_view text);
std::vector<std::size_t> parse_vertex_set(const GraphPtr& g, std::string_view text);
std::string format_rational(const Rational& q);
// Accepts p, -p and p/q; returns false on malformed input.
bool parse_rational(std::string_view text, Rational& out);

}  // namespace abeldim
