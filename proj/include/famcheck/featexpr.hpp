// ============================================================================
// famcheck/featexpr.hpp — feature expressions over explicit configuration sets
// ============================================================================
//
// A configuration space is an explicit, enumerated set of feature assignments
// (bit-vectors), not a BDD: spaces at desk scale stay below 2^15 members, so
// satisfiability questions are linear scans.
//
// The two quantified satisfiability checks, sat_exists and sat_forall, induce
// the may/must transition relations of the abstract model (see models.hpp).
// They obey the duality  sat_forall(e, K) == !sat_exists(!e, K).
//
// ============================================================================

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace famcheck {

// ── Feature / Config ────────────────────────────────────────────────────────

// One boolean configuration option. Ids are dense indices into the owning
// space's feature list; names are unique within a space.
struct Feature {
    int id = 0;
    std::string name;
};

// A total feature assignment (one variant). Bit i holds feature id i.
struct Config {
    std::uint32_t bits = 0;

    Config() = default;
    explicit Config(std::uint32_t b) : bits(b) {}

    bool has(int feature_id) const { return (bits >> feature_id) & 1u; }

    bool operator==(const Config& o) const { return bits == o.bits; }
    bool operator!=(const Config& o) const { return bits != o.bits; }
    bool operator<(const Config& o) const { return bits < o.bits; }
};

// ── FeatExpr ────────────────────────────────────────────────────────────────
// Immutable propositional formula over the features of one space. Guards are
// never canonicalized or compared, only evaluated, so a plain shared tree is
// enough.

class FeatExpr {
public:
    enum class Kind : std::uint8_t { True, False, Var, Not, And, Or };

    FeatExpr() : FeatExpr(tt()) {}

    static FeatExpr tt() { return FeatExpr(make(Kind::True, -1, {}, {})); }
    static FeatExpr ff() { return FeatExpr(make(Kind::False, -1, {}, {})); }
    static FeatExpr var(int feature_id) {
        if (feature_id < 0) throw std::invalid_argument("feature id must be non-negative");
        return FeatExpr(make(Kind::Var, feature_id, {}, {}));
    }
    static FeatExpr neg(FeatExpr e) { return FeatExpr(make(Kind::Not, -1, e.node_, {})); }
    static FeatExpr conj(FeatExpr a, FeatExpr b) { return FeatExpr(make(Kind::And, -1, a.node_, b.node_)); }
    static FeatExpr disj(FeatExpr a, FeatExpr b) { return FeatExpr(make(Kind::Or, -1, a.node_, b.node_)); }

    Kind kind() const { return node_->kind; }
    int feature() const { return node_->var; }
    FeatExpr lhs() const { return FeatExpr(node_->lhs); }
    FeatExpr rhs() const { return FeatExpr(node_->rhs); }

    // Largest feature id mentioned, or -1 for a constant expression.
    int max_feature() const {
        switch (node_->kind) {
            case Kind::True:
            case Kind::False: return -1;
            case Kind::Var: return node_->var;
            case Kind::Not: return lhs().max_feature();
            case Kind::And:
            case Kind::Or: return std::max(lhs().max_feature(), rhs().max_feature());
        }
        return -1;
    }

private:
    struct Node {
        Kind kind;
        int var;
        std::shared_ptr<const Node> lhs, rhs;
    };

    explicit FeatExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static std::shared_ptr<const Node> make(Kind k, int var,
                                            std::shared_ptr<const Node> l,
                                            std::shared_ptr<const Node> r) {
        return std::make_shared<const Node>(Node{k, var, std::move(l), std::move(r)});
    }

    std::shared_ptr<const Node> node_;
};

inline bool evaluate(const FeatExpr& e, Config k) {
    switch (e.kind()) {
        case FeatExpr::Kind::True: return true;
        case FeatExpr::Kind::False: return false;
        case FeatExpr::Kind::Var: return k.has(e.feature());
        case FeatExpr::Kind::Not: return !evaluate(e.lhs(), k);
        case FeatExpr::Kind::And: return evaluate(e.lhs(), k) && evaluate(e.rhs(), k);
        case FeatExpr::Kind::Or: return evaluate(e.lhs(), k) || evaluate(e.rhs(), k);
    }
    return false;
}

// Structural comparison; used by tests and the model round-trip check.
inline bool structurally_equal(const FeatExpr& a, const FeatExpr& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case FeatExpr::Kind::True:
        case FeatExpr::Kind::False: return true;
        case FeatExpr::Kind::Var: return a.feature() == b.feature();
        case FeatExpr::Kind::Not: return structurally_equal(a.lhs(), b.lhs());
        case FeatExpr::Kind::And:
        case FeatExpr::Kind::Or:
            return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
    }
    return false;
}

// ── ConfigSpace ─────────────────────────────────────────────────────────────
// The explicit set of valid configurations over a fixed feature list. Member
// configs are kept sorted and unique, so set identity is canonical.

class ConfigSpace {
public:
    ConfigSpace() = default;

    ConfigSpace(std::vector<Feature> features, std::vector<Config> configs)
        : features_(std::move(features)), configs_(std::move(configs)) {
        for (std::size_t i = 0; i < features_.size(); ++i) {
            if (features_[i].id != static_cast<int>(i))
                throw std::invalid_argument("feature ids must be dense 0..n-1");
            for (std::size_t j = i + 1; j < features_.size(); ++j)
                if (features_[i].name == features_[j].name)
                    throw std::invalid_argument("duplicate feature name: " + features_[i].name);
        }
        std::sort(configs_.begin(), configs_.end());
        configs_.erase(std::unique(configs_.begin(), configs_.end()), configs_.end());
        const std::uint32_t limit = features_.size() >= 32 ? 0xffffffffu
                                                           : ((1u << features_.size()) - 1u);
        for (const Config& k : configs_)
            if (features_.size() < 32 && k.bits > limit)
                throw std::invalid_argument("config mentions a feature outside the space");
    }

    static ConfigSpace from_names(const std::vector<std::string>& names,
                                  std::vector<Config> configs) {
        std::vector<Feature> fs;
        fs.reserve(names.size());
        for (std::size_t i = 0; i < names.size(); ++i)
            fs.push_back(Feature{static_cast<int>(i), names[i]});
        return ConfigSpace(std::move(fs), std::move(configs));
    }

    // The full space 2^F.
    static ConfigSpace full(const std::vector<std::string>& names) {
        if (names.size() > 20)
            throw std::invalid_argument("full space limited to 20 features");
        std::vector<Config> all;
        all.reserve(1u << names.size());
        for (std::uint32_t m = 0; m < (1u << names.size()); ++m) all.emplace_back(m);
        return from_names(names, std::move(all));
    }

    const std::vector<Feature>& features() const { return features_; }
    const std::vector<Config>& configs() const { return configs_; }
    std::size_t size() const { return configs_.size(); }
    bool empty() const { return configs_.empty(); }

    bool contains(Config k) const {
        return std::binary_search(configs_.begin(), configs_.end(), k);
    }

    int find_feature(const std::string& name) const {
        for (const Feature& f : features_)
            if (f.name == name) return f.id;
        return -1;
    }

    // Same feature list, different member set.
    ConfigSpace with_configs(std::vector<Config> configs) const {
        return ConfigSpace(features_, std::move(configs));
    }

    bool same_features(const ConfigSpace& o) const {
        if (features_.size() != o.features_.size()) return false;
        for (std::size_t i = 0; i < features_.size(); ++i)
            if (features_[i].name != o.features_[i].name) return false;
        return true;
    }

    // k ⊆ this, feature-lists identical.
    bool contains_all(const ConfigSpace& sub) const {
        if (!same_features(sub)) return false;
        return std::includes(configs_.begin(), configs_.end(),
                             sub.configs().begin(), sub.configs().end());
    }

    // "{c,f}" notation; the empty set of features prints as "{}".
    std::string config_to_string(Config k) const {
        std::string out = "{";
        bool first = true;
        for (const Feature& f : features_) {
            if (!k.has(f.id)) continue;
            if (!first) out += ",";
            out += f.name;
            first = false;
        }
        out += "}";
        return out;
    }

    bool operator==(const ConfigSpace& o) const {
        return same_features(o) && configs_ == o.configs_;
    }

private:
    std::vector<Feature> features_;
    std::vector<Config> configs_;  // sorted, unique
};

// ── Quantified satisfiability over a space ──────────────────────────────────

// The subspace { k in K | k |= e }, same feature list.
inline ConfigSpace satisfying_configs(const FeatExpr& e, const ConfigSpace& space) {
    std::vector<Config> kept;
    for (Config k : space.configs())
        if (evaluate(e, k)) kept.push_back(k);
    return space.with_configs(std::move(kept));
}

namespace detail {

// Linear scan with early exit, walking the sorted config list from both ends.
// Single-literal guards cluster their witnesses in one half of the sorted
// order, so a one-ended scan would routinely pay |K|/2 for them.
template <typename Pred>
inline bool scan_any(const std::vector<Config>& configs, Pred pred) {
    std::size_t lo = 0, hi = configs.size();
    while (lo < hi) {
        if (pred(configs[lo++])) return true;
        if (lo < hi && pred(configs[--hi])) return true;
    }
    return false;
}

}  // namespace detail

// True iff at least one valid configuration satisfies e. False on an empty
// space.
inline bool sat_exists(const FeatExpr& e, const ConfigSpace& space) {
    if (e.kind() == FeatExpr::Kind::True) return !space.empty();
    if (e.kind() == FeatExpr::Kind::False) return false;
    return detail::scan_any(space.configs(), [&](Config k) { return evaluate(e, k); });
}

// True iff every valid configuration satisfies e. Vacuously true on an empty
// space.
inline bool sat_forall(const FeatExpr& e, const ConfigSpace& space) {
    if (e.kind() == FeatExpr::Kind::True) return true;
    if (e.kind() == FeatExpr::Kind::False) return space.empty();
    return !detail::scan_any(space.configs(), [&](Config k) { return !evaluate(e, k); });
}

// Partition of the space into (satisfying, violating) halves.
inline std::pair<ConfigSpace, ConfigSpace> split_space(const ConfigSpace& space,
                                                       const FeatExpr& e) {
    std::vector<Config> yes, no;
    for (Config k : space.configs())
        (evaluate(e, k) ? yes : no).push_back(k);
    return {space.with_configs(std::move(yes)), space.with_configs(std::move(no))};
}

// ── Printing ────────────────────────────────────────────────────────────────

namespace detail {
inline void print_featexpr(std::string& out, const FeatExpr& e,
                           const std::vector<Feature>& features, int parent_prec) {
    // precedence: ! = 3, & = 2, | = 1
    switch (e.kind()) {
        case FeatExpr::Kind::True: out += "true"; return;
        case FeatExpr::Kind::False: out += "false"; return;
        case FeatExpr::Kind::Var:
            out += features.at(static_cast<std::size_t>(e.feature())).name;
            return;
        case FeatExpr::Kind::Not:
            out += "!";
            print_featexpr(out, e.lhs(), features, 3);
            return;
        case FeatExpr::Kind::And: {
            const bool paren = parent_prec > 2;
            if (paren) out += "(";
            print_featexpr(out, e.lhs(), features, 2);
            out += " & ";
            print_featexpr(out, e.rhs(), features, 2);
            if (paren) out += ")";
            return;
        }
        case FeatExpr::Kind::Or: {
            const bool paren = parent_prec > 1;
            if (paren) out += "(";
            print_featexpr(out, e.lhs(), features, 1);
            out += " | ";
            print_featexpr(out, e.rhs(), features, 1);
            if (paren) out += ")";
            return;
        }
    }
}
}  // namespace detail

inline std::string to_string(const FeatExpr& e, const std::vector<Feature>& features) {
    std::string out;
    detail::print_featexpr(out, e, features, 0);
    return out;
}

}  // namespace famcheck
