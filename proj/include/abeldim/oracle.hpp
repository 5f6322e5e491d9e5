#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "abeldim/box_opt.hpp"
#include "abeldim/lattice.hpp"

namespace abeldim {

enum class BundleKind { Trivial, Natural, GenericPic, GenericAbelImage, RelativeGeneric, Table };

// Symbolic line bundle on a (base) graph. Chern classes are stored as
// pairing vectors p_v = (c1, E_v); an empty vector means zero. The
// descriptor stands for bundle(c1) tensored with O(-twist).
class BundleDescriptor {
public:
    using Vec = std::vector<std::int64_t>;

    static BundleDescriptor trivial();
    static BundleDescriptor natural(Vec chern);
    static BundleDescriptor generic_pic(Vec chern);
    static BundleDescriptor generic_abel_image(Vec chern);
    static BundleDescriptor relative_generic(const BundleDescriptor& base, Vec chern);
    static BundleDescriptor table(std::string key);

    BundleKind kind() const { return kind_; }
    const Vec& chern() const { return chern_; }
    const Vec& twist() const { return twist_; }
    const std::string& table_key() const { return key_; }
    const BundleDescriptor* base() const { return base_.get(); }

    // c1 of the twisted bundle, c1 - twist, as a vector of length n.
    Vec first_chern_class(std::size_t n) const;
    // Tensor with O(-tau).
    BundleDescriptor twisted(const Vec& tau) const;
    // Keep only the entries at the given indices (restriction to a component).
    BundleDescriptor restricted(const std::vector<std::size_t>& indices) const;

    // Structural normal form used for equality and memo keys.
    std::string key() const;
    friend bool operator==(const BundleDescriptor& a, const BundleDescriptor& b) { return a.key() == b.key(); }

private:
    void normalize();

    BundleKind kind_ = BundleKind::Trivial;
    Vec chern_;
    Vec twist_;
    std::string key_;
    std::shared_ptr<const BundleDescriptor> base_;
};

// Text forms: trivial | natural(<ratcycle>) | genpic(<ratcycle>) |
// genim(<ratcycle>) | table(<key>) | relgen(<descriptor>; <ratcycle>), each
// optionally followed by twist(<ratcycle>). Rational cycles are written in
// E-coordinates.
std::string serialize_descriptor(const BundleDescriptor& d, const GraphPtr& g);
BundleDescriptor parse_descriptor(std::string_view text, const GraphPtr& g);
// Graph-free normal form of a descriptor text.
std::string canonical_descriptor_text(std::string_view text);
std::string canonical_cycle_text(std::string_view text);
std::string serialize_query(const Cycle& cycle, const BundleDescriptor& d);

enum class HypothesisMode { Strict, Warn };

struct OracleOptions {
    HypothesisMode hypothesis = HypothesisMode::Warn;
    bool assume_regular_section = true;
    bool memoize = true;
    BoxOptions box;
};

// Answers h1(B, L) for cycles B on a connected base graph.
class AnalyticOracle {
public:
    explicit AnalyticOracle(OracleOptions options = {});
    virtual ~AnalyticOracle() = default;
    AnalyticOracle(const AnalyticOracle&) = delete;
    AnalyticOracle& operator=(const AnalyticOracle&) = delete;

    std::int64_t h1(const Cycle& cycle, const BundleDescriptor& bundle) const;
    // nullopt when the oracle cannot decide for this descriptor.
    std::optional<bool> try_has_section(const Cycle& cycle, const BundleDescriptor& bundle) const;
    // Throws UnsupportedDescriptor when the capability is absent.
    bool has_section_without_fixed_component(const Cycle& cycle, const BundleDescriptor& bundle) const;

    const OracleOptions& options() const { return options_; }
    // Warnings and recorded assumptions, sorted.
    std::vector<std::string> notes() const;
    void note(const std::string& text) const;
    std::size_t memo_size() const;
    virtual std::string name() const = 0;

protected:
    virtual std::int64_t compute_h1(const Cycle& cycle, const BundleDescriptor& bundle) const = 0;
    virtual std::optional<bool> compute_section(const Cycle& cycle, const BundleDescriptor& bundle) const;

private:
    OracleOptions options_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<std::string, std::int64_t> memo_;
    mutable std::set<std::string> notes_;
};

using OraclePtr = std::shared_ptr<const AnalyticOracle>;

// Closed formulas valid for generic analytic structures on the base.
class GenericOracle : public AnalyticOracle {
public:
    explicit GenericOracle(OracleOptions options = {}) : AnalyticOracle(std::move(options)) {}
    std::string name() const override { return "generic"; }

protected:
    std::int64_t compute_h1(const Cycle& cycle, const BundleDescriptor& bundle) const override;
    std::optional<bool> compute_section(const Cycle& cycle, const BundleDescriptor& bundle) const override;

private:
    std::int64_t natural_formula(const Cycle& cycle, const BundleDescriptor::Vec& c1) const;
    void check_natural_hypothesis(const Cycle& cycle, const BundleDescriptor::Vec& c1) const;
};

// Values read from a table; absent queries go to the fallback or fail.
class TableOracle : public AnalyticOracle {
public:
    explicit TableOracle(OraclePtr fallback = nullptr, OracleOptions options = {});
    static std::shared_ptr<TableOracle> load(std::string_view text, OraclePtr fallback = nullptr,
                                             OracleOptions options = {});

    void store_h1(const Cycle& cycle, const BundleDescriptor& bundle, std::int64_t value);
    void store_section(const Cycle& cycle, const BundleDescriptor& bundle, bool value);
    std::size_t size() const { return h1_.size() + section_.size(); }
    std::vector<std::string> misses() const;
    // One line per missed query in table syntax with '?' for the value.
    std::string misses_report() const;
    std::string serialize() const;
    std::string name() const override { return "table"; }

protected:
    std::int64_t compute_h1(const Cycle& cycle, const BundleDescriptor& bundle) const override;
    std::optional<bool> compute_section(const Cycle& cycle, const BundleDescriptor& bundle) const override;

private:
    OraclePtr fallback_;
    std::map<std::string, std::int64_t> h1_;
    std::map<std::string, bool> section_;
    mutable std::mutex miss_mutex_;
    mutable std::set<std::string> misses_;
};

}  // namespace abeldim
