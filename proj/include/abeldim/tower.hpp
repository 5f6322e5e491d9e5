#pragma once

#include <functional>
#include <string>
#include <vector>

#include "abeldim/abel_dim.hpp"

namespace abeldim {

inline constexpr std::uint64_t kDefaultTowerCap = 10'000;

struct TowerChain {
    std::size_t vertex;  // index in the base graph
    std::int64_t k;      // 1 .. a_v
    std::int64_t length; // m_v
};

struct TowerSpec {
    GraphPtr graph;
    Cycle z;
    RatCycle lprime;
    std::vector<std::int64_t> a;  // -l' = sum a_v E*_v
    std::vector<std::int64_t> m;  // multiplicities of max(0, floor Z_K)
    std::vector<TowerChain> chains;
    std::uint64_t size = 1;       // number of s-tuples
};

TowerSpec build_tower(const Cycle& z, const RatCycle& lprime, std::uint64_t cap = kDefaultTowerCap);

// Blown-up graph of an s-tuple with the pulled back cycle and the tips I_s.
struct TowerGraph {
    GraphPtr graph;
    Cycle z;
    std::vector<std::size_t> tips;
};

TowerGraph tower_graph(const TowerSpec& spec, const std::vector<std::int64_t>& s);

// Supplies h1(O) on the cycles of one tower graph.
using TowerProvider = std::function<H1Provider(const GraphPtr&)>;

TowerProvider generic_tower_provider(const BoxOptions& options = {});
// Relatively generic over the base vertex ids, which keep their names in
// every tower graph.
TowerProvider relgen_tower_provider(std::vector<std::string> base_ids, OraclePtr oracle, RelativeOptions options = {});

struct TowerNode {
    std::vector<std::int64_t> s;
    std::int64_t e = 0;
    std::int64_t d = 0;
};

struct TowerResult {
    std::int64_t d0 = 0;
    // All s-tuples in lexicographic order.
    std::vector<TowerNode> nodes;
    // Indices into nodes from 0 to a node with d = e.
    std::vector<std::size_t> path;
};

TowerResult d_recursion(const TowerSpec& spec, const TowerProvider& provider, unsigned jobs = 1);

// Plain text table of (s, e_s, d_s) with the chain layout in the header.
std::string tower_table_text(const TowerSpec& spec, const TowerResult& result);

}  // namespace abeldim
