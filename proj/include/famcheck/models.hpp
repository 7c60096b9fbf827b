// ============================================================================
// famcheck/models.hpp — transition systems, featured variants, and their
//                       may/must abstraction
// ============================================================================
//
// Three model flavours share one core:
//
//   Ts   — a plain transition system (one variant).
//   Fts  — the family model: a Ts whose transitions carry presence-condition
//          guards over a configuration space.
//   Mts  — the abstraction of an Fts: every transition some variant admits is
//          a may transition, every transition all variants admit is also a
//          must transition (must ⊆ may).
//
// States, actions and propositions are interned to dense integer ids; all
// derived models (projections, abstractions) keep the id spaces of the source
// family model, so game results can be reused across refinement iterations.
//
// The input family model must have a total transition relation (checked by
// validate()). Projections and abstractions may lose totality; downstream
// consumers treat childless states vacuously.
//
// ============================================================================

#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "famcheck/featexpr.hpp"

namespace famcheck {

// ── Core transition system ──────────────────────────────────────────────────

struct Transition {
    int src = 0;
    int action = 0;
    int dst = 0;

    bool operator==(const Transition& o) const {
        return src == o.src && action == o.action && dst == o.dst;
    }
};

struct Ts {
    std::vector<std::string> states;
    std::vector<std::string> actions;
    std::vector<std::string> props;
    std::vector<int> initial;  // sorted state ids, non-empty for valid models
    std::vector<Transition> transitions;
    std::vector<std::vector<int>> labels;  // per state, sorted prop ids

    int add_state(const std::string& name) {
        for (std::size_t i = 0; i < states.size(); ++i)
            if (states[i] == name) return static_cast<int>(i);
        states.push_back(name);
        labels.emplace_back();
        return static_cast<int>(states.size()) - 1;
    }

    int add_action(const std::string& name) {
        for (std::size_t i = 0; i < actions.size(); ++i)
            if (actions[i] == name) return static_cast<int>(i);
        actions.push_back(name);
        return static_cast<int>(actions.size()) - 1;
    }

    int add_prop(const std::string& name) {
        for (std::size_t i = 0; i < props.size(); ++i)
            if (props[i] == name) return static_cast<int>(i);
        props.push_back(name);
        return static_cast<int>(props.size()) - 1;
    }

    void add_label(int state, int prop) {
        auto& set = labels.at(static_cast<std::size_t>(state));
        auto it = std::lower_bound(set.begin(), set.end(), prop);
        if (it == set.end() || *it != prop) set.insert(it, prop);
    }

    bool has_label(int state, int prop) const {
        const auto& set = labels.at(static_cast<std::size_t>(state));
        return std::binary_search(set.begin(), set.end(), prop);
    }

    bool is_initial(int state) const {
        return std::binary_search(initial.begin(), initial.end(), state);
    }

    void mark_initial(int state) {
        auto it = std::lower_bound(initial.begin(), initial.end(), state);
        if (it == initial.end() || *it != state) initial.insert(it, state);
    }

    // States with no outgoing transition, in id order.
    std::vector<int> childless_states() const {
        std::vector<char> has_out(states.size(), 0);
        for (const Transition& t : transitions) has_out[static_cast<std::size_t>(t.src)] = 1;
        std::vector<int> out;
        for (std::size_t s = 0; s < states.size(); ++s)
            if (!has_out[s]) out.push_back(static_cast<int>(s));
        return out;
    }

    bool is_total() const { return childless_states().empty(); }
};

// ── Featured transition system ──────────────────────────────────────────────

struct Fts {
    Ts core;
    ConfigSpace space;
    std::vector<FeatExpr> guards;  // guards[i] belongs to core.transitions[i]

    // Appends a guarded transition; an existing (src, action, dst) triple is
    // merged by disjoining the guards.
    void add_transition(int src, int action, int dst, FeatExpr guard) {
        for (std::size_t i = 0; i < core.transitions.size(); ++i) {
            const Transition& t = core.transitions[i];
            if (t.src == src && t.action == action && t.dst == dst) {
                guards[i] = FeatExpr::disj(guards[i], std::move(guard));
                return;
            }
        }
        core.transitions.push_back(Transition{src, action, dst});
        guards.push_back(std::move(guard));
    }
};

// Structural well-formedness of a loaded family model. Throws
// std::invalid_argument with a description of the first violation.
inline void validate(const Fts& fts) {
    const Ts& ts = fts.core;
    if (ts.states.empty()) throw std::invalid_argument("model has no states");
    if (ts.initial.empty()) throw std::invalid_argument("model has no initial state");
    for (int s : ts.initial)
        if (s < 0 || s >= static_cast<int>(ts.states.size()))
            throw std::invalid_argument("initial state id out of range");
    if (fts.guards.size() != ts.transitions.size())
        throw std::invalid_argument("every transition needs exactly one guard");
    const int nfeat = static_cast<int>(fts.space.features().size());
    for (std::size_t i = 0; i < ts.transitions.size(); ++i) {
        const Transition& t = ts.transitions[i];
        if (t.src < 0 || t.src >= static_cast<int>(ts.states.size()) ||
            t.dst < 0 || t.dst >= static_cast<int>(ts.states.size()) ||
            t.action < 0 || t.action >= static_cast<int>(ts.actions.size()))
            throw std::invalid_argument("transition references an undeclared state or action");
        if (fts.guards[i].max_feature() >= nfeat)
            throw std::invalid_argument("guard of transition " + std::to_string(i) +
                                        " mentions a feature outside the space");
    }
    const std::vector<int> orphans = ts.childless_states();
    if (!orphans.empty())
        throw std::invalid_argument("transition relation is not total: state '" +
                                    ts.states[static_cast<std::size_t>(orphans.front())] +
                                    "' has no outgoing transition");
}

// ── Modal transition system ─────────────────────────────────────────────────
// core.transitions is the may relation; is_must flags the subset that is also
// required. must ⊆ may holds by representation.

struct Mts {
    Ts core;
    std::vector<char> is_must;  // parallel to core.transitions

    std::size_t may_count() const { return core.transitions.size(); }
    std::size_t must_count() const {
        std::size_t n = 0;
        for (char m : is_must) n += (m != 0);
        return n;
    }
};

// ── Projection and abstraction ──────────────────────────────────────────────

// Projection to one variant: keeps exactly the transitions whose guard the
// configuration satisfies.
inline Ts project(const Fts& fts, Config k) {
    if (!fts.space.contains(k))
        throw std::invalid_argument("configuration " + fts.space.config_to_string(k) +
                                    " is not in the model's configuration space");
    Ts out = fts.core;
    out.transitions.clear();
    for (std::size_t i = 0; i < fts.core.transitions.size(); ++i)
        if (evaluate(fts.guards[i], k)) out.transitions.push_back(fts.core.transitions[i]);
    return out;
}

// Projection to a subspace: keeps the transitions admitted by at least one of
// the subspace's configurations; guards restricted to the kept transitions.
inline Fts project(const Fts& fts, const ConfigSpace& sub) {
    if (!fts.space.contains_all(sub))
        throw std::invalid_argument("projection target is not a subspace of the model's space");
    Fts out;
    out.core = fts.core;
    out.core.transitions.clear();
    out.space = sub;
    for (std::size_t i = 0; i < fts.core.transitions.size(); ++i) {
        if (sat_exists(fts.guards[i], sub)) {
            out.core.transitions.push_back(fts.core.transitions[i]);
            out.guards.push_back(fts.guards[i]);
        }
    }
    return out;
}

// The join abstraction: one abstract variant whose may part collects the
// behaviour of some variant and whose must part keeps only the behaviour of
// every variant.
inline Mts abstract_join(const Fts& fts) {
    Mts out;
    out.core = fts.core;
    out.core.transitions.clear();
    for (std::size_t i = 0; i < fts.core.transitions.size(); ++i) {
        if (sat_exists(fts.guards[i], fts.space)) {
            out.core.transitions.push_back(fts.core.transitions[i]);
            out.is_must.push_back(sat_forall(fts.guards[i], fts.space) ? 1 : 0);
        }
    }
    return out;
}

}  // namespace famcheck
