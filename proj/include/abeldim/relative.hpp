#pragma once

#include <optional>
#include <vector>

#include "abeldim/box_opt.hpp"
#include "abeldim/lattice.hpp"
#include "abeldim/oracle.hpp"

namespace abeldim {

struct RelativeOptions {
    HypothesisMode hypothesis = HypothesisMode::Warn;
    BoxOptions box;
};

// Ambient graph with a base subgraph on the vertex set V1 and an oracle
// answering h1 on the components of the base (a generic oracle when null).
//
// Base bundles are descriptors indexed by the ambient vertex order; only the
// entries on V1 are meaningful and the rest are kept at zero. Restricting a
// class x to the base therefore amounts to keeping (x, E_v) for v in V1.
class RelativeContext {
public:
    RelativeContext(GraphPtr graph, std::vector<std::size_t> v1, OraclePtr oracle, RelativeOptions options = {});

    const GraphPtr& graph() const { return graph_; }
    const SubgraphEmbedding& base() const { return embedding_; }
    const std::vector<std::size_t>& v1() const { return embedding_.vertices(); }
    bool in_v1(std::size_t v) const { return embedding_.contains(v); }
    const OraclePtr& oracle() const { return oracle_; }
    const RelativeOptions& options() const { return options_; }

    // (x, E_v) for v in V1, zero elsewhere.
    BundleDescriptor::Vec restrict_pairing(const RatCycle& x) const;
    BundleDescriptor::Vec restrict_pairing(const Cycle& x) const;
    // x with the coefficients off V1 set to zero.
    Cycle base_part(const Cycle& x) const;
    // Sum over the base components of the oracle value; y must vanish off V1.
    std::int64_t base_h1(const Cycle& y, const BundleDescriptor& bundle) const;
    // Nonemptiness of H0(y, bundle)_0 per component; nullopt if some component
    // is undecided.
    std::optional<bool> base_has_section(const Cycle& y, const BundleDescriptor& bundle) const;

    void note(const std::string& text) const { oracle_->note(text); }

private:
    GraphPtr graph_;
    SubgraphEmbedding embedding_;
    OraclePtr oracle_;
    RelativeOptions options_;
};

// R1(x) on each component of the base, as cycles of the component graphs.
std::vector<RatCycle> restrict_chern(const RelativeContext& ctx, const RatCycle& x);

// min(Z - l, Z1) coefficientwise.
Cycle truncate(const Cycle& z, const Cycle& l, const Cycle& z1);

struct DominanceResult {
    bool dominant = true;
    // Lexicographically first violating l.
    std::optional<Cycle> witness;
};

// Relative dominance of (l', base) on Z, with Z1 the part of Z on V1.
DominanceResult rel_dominant(const RelativeContext& ctx, const Cycle& z, const RatCycle& lprime,
                             const BundleDescriptor& base);

struct RelH1Result {
    std::int64_t value = 0;
    OptResult minimizers;
};

// h1(Z, L) for L generic among bundles with Chern class l' restricting to base.
RelH1Result h1_rel_generic(const RelativeContext& ctx, const Cycle& z, const RatCycle& lprime,
                           const BundleDescriptor& base);

// h1(Z, O(l')) on a relatively generic ambient singularity.
std::int64_t h1_natural_relgen(const RelativeContext& ctx, const Cycle& z, const RatCycle& lprime);

// h1(O_Z') on a relatively generic ambient singularity.
std::int64_t h1_O_relgen(const RelativeContext& ctx, const Cycle& z);

// Throws ChernMismatch unless c1(base) agrees with R1(l') on V1.
void check_base_chern(const RelativeContext& ctx, const RatCycle& lprime, const BundleDescriptor& base);

}  // namespace abeldim
