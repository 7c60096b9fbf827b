// ============================================================================
// famcheck/game.hpp — the 3-valued model-checking game
// ============================================================================
//
// The game board pairs model states with closure formulas. Solving the game
// means coloring every reachable board node T, F or ? — the node's 3-valued
// truth value — and runs in three steps:
//
//   build_game_graph   BFS from the initial nodes I x {phi}. Terminals stop;
//                      and/or nodes fan out with auxiliary edges; until and
//                      release nodes take one auxiliary edge to their
//                      expansion; AX/EX nodes take one progress edge per may
//                      transition, flagged Must when the transition is also
//                      required. Nodes whose definite color is already known
//                      from an earlier refinement iteration (the reuse store)
//                      become terminals and are not expanded.
//
//   decompose          Partition into maximal SCCs over all edges, ordered so
//                      every edge leaves a component only to itself or to an
//                      earlier one. Each non-trivial component cycles through
//                      exactly one until/release formula — its witness.
//
//   color_graph        Process components bottom-up. Phase 1 applies the
//                      local rules to a fixpoint. If a component is left
//                      partly uncolored, Phase 2a marks ? every node whose
//                      losing color is no longer reachable (conditions set by
//                      the witness), and Phase 2b gives the rest the witness
//                      default (F for until, T for release).
//
// Rule sweeps run in descending discovery order so that ? spreads from the
// deepest source upward; an ancestor then sees an ?-child at its own coloring
// time and is not mistaken for a failure node. Each color assignment gets a
// timestamp; a failure node is an ?-node none of whose children were ? when
// it was colored, and its failure reason is the may-only edge that blocked a
// definite color. That edge's concrete guard drives refinement (verify.hpp).
//
// ============================================================================

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "famcheck/ctl.hpp"
#include "famcheck/models.hpp"

namespace famcheck {

// ── Colors and verdicts ─────────────────────────────────────────────────────

enum class Color : std::uint8_t { True, False, Unknown };

enum class Verdict : std::uint8_t { Satisfied, Violated, Indefinite };

inline const char* to_string(Color c) {
    switch (c) {
        case Color::True: return "T";
        case Color::False: return "F";
        case Color::Unknown: return "?";
    }
    return "?";
}

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Satisfied: return "satisfied";
        case Verdict::Violated: return "violated";
        case Verdict::Indefinite: return "indefinite";
    }
    return "indefinite";
}

// ── Reuse store ─────────────────────────────────────────────────────────────
// Definite colors carried between refinement iterations, keyed by
// (state id, formula id). Only T/F entries are admitted.

class ReuseStore {
public:
    static std::uint64_t key(int state, FormulaId formula) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(state)) << 32) |
               formula;
    }

    void remember(int state, FormulaId formula, Color color) {
        if (color == Color::Unknown)
            throw std::invalid_argument("reuse store holds definite colors only");
        map_[key(state, formula)] = color;
    }

    std::optional<Color> lookup(int state, FormulaId formula) const {
        auto it = map_.find(key(state, formula));
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const { return map_.size(); }
    bool empty() const { return map_.empty(); }

private:
    std::unordered_map<std::uint64_t, Color> map_;
};

// ── Game graph ──────────────────────────────────────────────────────────────

enum class NodeKind : std::uint8_t { Terminal, AndNode, OrNode, ANextNode, ENextNode };

// ProgressMay marks progress edges whose transition is allowed but not
// required; ProgressMust edges ride transitions present in every variant.
enum class EdgeFlavor : std::uint8_t { Auxiliary, ProgressMay, ProgressMust };

struct GameEdge {
    int target = -1;  // node index
    EdgeFlavor flavor = EdgeFlavor::Auxiliary;
    int action = -1;  // progress edges only
};

struct GameNode {
    int state = -1;
    FormulaId formula = kNoFormula;
    NodeKind kind = NodeKind::Terminal;
    bool reused = false;
    // Definite color of terminal nodes, fixed by the labeling (or, for reused
    // nodes, by the store) at construction time.
    Color terminal_color = Color::Unknown;
};

struct GameGraph {
    std::vector<GameNode> nodes;            // index order == BFS discovery order
    std::vector<std::vector<GameEdge>> adj; // construction order per node
    std::vector<int> initial;               // node indices of I x {phi}
    FormulaId phi = kNoFormula;

    std::size_t size() const { return nodes.size(); }

    std::size_t reused_count() const {
        std::size_t n = 0;
        for (const GameNode& node : nodes) n += node.reused ? 1 : 0;
        return n;
    }

    int find(int state, FormulaId formula) const {
        auto it = index_.find(ReuseStore::key(state, formula));
        return it == index_.end() ? -1 : it->second;
    }

    std::unordered_map<std::uint64_t, int> index_;
};

namespace detail {

inline NodeKind classify(const Formulas& fs, FormulaId id) {
    switch (fs.node(id).kind) {
        case FormulaKind::True:
        case FormulaKind::False:
        case FormulaKind::Lit: return NodeKind::Terminal;
        case FormulaKind::And: return NodeKind::AndNode;
        case FormulaKind::Or: return NodeKind::OrNode;
        case FormulaKind::ANext: return NodeKind::ANextNode;
        case FormulaKind::ENext: return NodeKind::ENextNode;
        // Until/release nodes are entered through their deterministic
        // expansion edge and behave like the expansion's top connective.
        case FormulaKind::AUntil:
        case FormulaKind::EUntil: return NodeKind::OrNode;
        case FormulaKind::ARelease:
        case FormulaKind::ERelease: return NodeKind::AndNode;
    }
    return NodeKind::Terminal;
}

inline Color terminal_color(const Ts& ts, const Formulas& fs, int state, FormulaId id) {
    const FormulaNode& n = fs.node(id);
    switch (n.kind) {
        case FormulaKind::True: return Color::True;
        case FormulaKind::False: return Color::False;
        case FormulaKind::Lit: {
            int prop = -1;
            for (std::size_t p = 0; p < ts.props.size(); ++p)
                if (ts.props[p] == n.atom) prop = static_cast<int>(p);
            const bool holds = prop >= 0 && ts.has_label(state, prop);
            return (holds != n.negated) ? Color::True : Color::False;
        }
        default:
            throw std::logic_error("terminal color requested for a non-terminal formula");
    }
}

}  // namespace detail

// BFS construction of the reachable board. Nodes found in the reuse store are
// added as pre-colored terminals and not expanded.
inline GameGraph build_game_graph(const Mts& mts, Formulas& fs, FormulaId phi,
                                  const ReuseStore& reuse = {}) {
    GameGraph g;
    g.phi = phi;

    std::vector<std::vector<int>> out(mts.core.states.size());
    for (std::size_t i = 0; i < mts.core.transitions.size(); ++i)
        out[static_cast<std::size_t>(mts.core.transitions[i].src)].push_back(
            static_cast<int>(i));

    std::queue<int> work;
    auto discover = [&](int state, FormulaId f) {
        const std::uint64_t k = ReuseStore::key(state, f);
        auto it = g.index_.find(k);
        if (it != g.index_.end()) return it->second;
        GameNode node;
        node.state = state;
        node.formula = f;
        if (auto stored = reuse.lookup(state, f)) {
            node.kind = NodeKind::Terminal;
            node.reused = true;
            node.terminal_color = *stored;
        } else {
            node.kind = detail::classify(fs, f);
            if (node.kind == NodeKind::Terminal)
                node.terminal_color = detail::terminal_color(mts.core, fs, state, f);
        }
        const int idx = static_cast<int>(g.nodes.size());
        g.nodes.push_back(node);
        g.adj.emplace_back();
        g.index_.emplace(k, idx);
        work.push(idx);
        return idx;
    };

    for (int s : mts.core.initial) g.initial.push_back(discover(s, phi));

    while (!work.empty()) {
        const int idx = work.front();
        work.pop();
        const GameNode node = g.nodes[static_cast<std::size_t>(idx)];
        if (node.reused) continue;

        const FormulaNode& f = fs.node(node.formula);
        switch (f.kind) {
            case FormulaKind::True:
            case FormulaKind::False:
            case FormulaKind::Lit:
                break;
            case FormulaKind::And:
            case FormulaKind::Or: {
                const int a = discover(node.state, f.lhs);
                const int b = discover(node.state, f.rhs);
                g.adj[static_cast<std::size_t>(idx)].push_back({a, EdgeFlavor::Auxiliary, -1});
                g.adj[static_cast<std::size_t>(idx)].push_back({b, EdgeFlavor::Auxiliary, -1});
                break;
            }
            case FormulaKind::AUntil:
            case FormulaKind::EUntil:
            case FormulaKind::ARelease:
            case FormulaKind::ERelease: {
                const int e = discover(node.state, expand(fs, node.formula));
                g.adj[static_cast<std::size_t>(idx)].push_back({e, EdgeFlavor::Auxiliary, -1});
                break;
            }
            case FormulaKind::ANext:
            case FormulaKind::ENext: {
                for (int ti : out[static_cast<std::size_t>(node.state)]) {
                    const Transition& t = mts.core.transitions[static_cast<std::size_t>(ti)];
                    const int child = discover(t.dst, f.lhs);
                    const EdgeFlavor flavor = mts.is_must[static_cast<std::size_t>(ti)]
                                                  ? EdgeFlavor::ProgressMust
                                                  : EdgeFlavor::ProgressMay;
                    g.adj[static_cast<std::size_t>(idx)].push_back({child, flavor, t.action});
                }
                break;
            }
        }
    }
    return g;
}

// ── May-MSCC partition ──────────────────────────────────────────────────────

struct MsccPartition {
    std::vector<std::vector<int>> components;  // bottom-up order, members ascending
    std::vector<int> component_of;             // node index -> component position
    std::vector<FormulaId> witness;            // per component; kNoFormula if trivial

    std::size_t size() const { return components.size(); }
};

// Maximal SCCs over auxiliary and may progress edges (must edges are may
// edges too, so this is the full edge set). Emission order: every edge leaves
// a component only to itself or to an earlier component; incomparable
// components are ordered by their smallest member node.
inline MsccPartition decompose(const GameGraph& g, const Formulas& fs) {
    const int n = static_cast<int>(g.size());

    // Tarjan, iterative.
    std::vector<int> index(static_cast<std::size_t>(n), -1);
    std::vector<int> lowlink(static_cast<std::size_t>(n), 0);
    std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
    std::vector<int> stack;
    std::vector<int> raw_comp(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<int>> raw_members;
    int next_index = 0;

    struct Frame {
        int node;
        std::size_t edge;
    };
    std::vector<Frame> frames;

    for (int start = 0; start < n; ++start) {
        if (index[static_cast<std::size_t>(start)] != -1) continue;
        frames.push_back({start, 0});
        index[static_cast<std::size_t>(start)] = lowlink[static_cast<std::size_t>(start)] =
            next_index++;
        stack.push_back(start);
        on_stack[static_cast<std::size_t>(start)] = 1;
        while (!frames.empty()) {
            Frame& fr = frames.back();
            const auto& edges = g.adj[static_cast<std::size_t>(fr.node)];
            if (fr.edge < edges.size()) {
                const int child = edges[fr.edge++].target;
                if (index[static_cast<std::size_t>(child)] == -1) {
                    index[static_cast<std::size_t>(child)] =
                        lowlink[static_cast<std::size_t>(child)] = next_index++;
                    stack.push_back(child);
                    on_stack[static_cast<std::size_t>(child)] = 1;
                    frames.push_back({child, 0});
                } else if (on_stack[static_cast<std::size_t>(child)]) {
                    lowlink[static_cast<std::size_t>(fr.node)] =
                        std::min(lowlink[static_cast<std::size_t>(fr.node)],
                                 index[static_cast<std::size_t>(child)]);
                }
            } else {
                const int done = fr.node;
                frames.pop_back();
                if (!frames.empty())
                    lowlink[static_cast<std::size_t>(frames.back().node)] =
                        std::min(lowlink[static_cast<std::size_t>(frames.back().node)],
                                 lowlink[static_cast<std::size_t>(done)]);
                if (lowlink[static_cast<std::size_t>(done)] ==
                    index[static_cast<std::size_t>(done)]) {
                    std::vector<int> members;
                    int m;
                    do {
                        m = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(m)] = 0;
                        raw_comp[static_cast<std::size_t>(m)] =
                            static_cast<int>(raw_members.size());
                        members.push_back(m);
                    } while (m != done);
                    std::sort(members.begin(), members.end());
                    raw_members.push_back(std::move(members));
                }
            }
        }
    }

    // Linearize the condensation from the sinks up; ties go to the component
    // with the smallest member node.
    const int nc = static_cast<int>(raw_members.size());
    std::vector<std::vector<int>> preds(static_cast<std::size_t>(nc));
    std::vector<int> pending(static_cast<std::size_t>(nc), 0);
    {
        std::vector<std::pair<int, int>> cedges;
        for (int v = 0; v < n; ++v)
            for (const GameEdge& e : g.adj[static_cast<std::size_t>(v)]) {
                const int a = raw_comp[static_cast<std::size_t>(v)];
                const int b = raw_comp[static_cast<std::size_t>(e.target)];
                if (a != b) cedges.emplace_back(a, b);
            }
        std::sort(cedges.begin(), cedges.end());
        cedges.erase(std::unique(cedges.begin(), cedges.end()), cedges.end());
        for (auto [a, b] : cedges) {
            preds[static_cast<std::size_t>(b)].push_back(a);
            ++pending[static_cast<std::size_t>(a)];
        }
    }

    auto min_member = [&](int c) { return raw_members[static_cast<std::size_t>(c)].front(); };
    std::priority_queue<std::pair<int, int>, std::vector<std::pair<int, int>>,
                        std::greater<>>
        ready;  // (min member, raw component)
    for (int c = 0; c < nc; ++c)
        if (pending[static_cast<std::size_t>(c)] == 0) ready.emplace(min_member(c), c);

    MsccPartition part;
    part.component_of.assign(static_cast<std::size_t>(n), -1);
    while (!ready.empty()) {
        const int c = ready.top().second;
        ready.pop();
        const int pos = static_cast<int>(part.components.size());
        for (int m : raw_members[static_cast<std::size_t>(c)])
            part.component_of[static_cast<std::size_t>(m)] = pos;
        part.components.push_back(raw_members[static_cast<std::size_t>(c)]);
        for (int p : preds[static_cast<std::size_t>(c)])
            if (--pending[static_cast<std::size_t>(p)] == 0) ready.emplace(min_member(p), p);
    }
    if (static_cast<int>(part.components.size()) != nc)
        throw std::logic_error("condensation linearization failed");

    // Witness: the unique until/release formula cycling through a non-trivial
    // component.
    part.witness.assign(static_cast<std::size_t>(nc), kNoFormula);
    for (std::size_t c = 0; c < part.components.size(); ++c) {
        if (part.components[c].size() < 2) continue;
        std::vector<FormulaId> distinct;
        for (int m : part.components[c]) {
            const FormulaId f = g.nodes[static_cast<std::size_t>(m)].formula;
            if (is_until_or_release(fs.node(f).kind) &&
                std::find(distinct.begin(), distinct.end(), f) == distinct.end())
                distinct.push_back(f);
        }
        if (distinct.size() != 1)
            throw std::logic_error(
                "malformed game: a non-trivial component must have exactly one witness, found " +
                std::to_string(distinct.size()));
        part.witness[c] = distinct.front();
    }
    return part;
}

// ── Coloring ────────────────────────────────────────────────────────────────

enum class ColorPhase : std::uint8_t { None, Reused, Phase1, Phase2a, Phase2b };

struct Coloring {
    std::vector<Color> color;
    std::vector<int> timestamp;      // strictly increasing assignment order, from 1
    std::vector<ColorPhase> phase;
    std::vector<int> cause_edge;     // adjacency position that fixed an ? in Phase 1, or -1

    bool colored(int node) const {
        return phase[static_cast<std::size_t>(node)] != ColorPhase::None;
    }
};

namespace detail {

struct RuleResult {
    Color color;
    int cause_edge = -1;
};

// Phase 1 rules. Children referenced by a rule must already be colored for
// the rule to fire; AX nodes without children are vacuously T, EX nodes F.
inline std::optional<RuleResult> phase1_rule(const GameGraph& g, const Coloring& c, int idx) {
    const GameNode& node = g.nodes[static_cast<std::size_t>(idx)];
    const auto& edges = g.adj[static_cast<std::size_t>(idx)];
    auto col = [&](const GameEdge& e) -> std::optional<Color> {
        if (!c.colored(e.target)) return std::nullopt;
        return c.color[static_cast<std::size_t>(e.target)];
    };

    switch (node.kind) {
        case NodeKind::Terminal:
            return RuleResult{node.terminal_color, -1};

        case NodeKind::AndNode: {
            bool all_true = true, any_unknown = false, all_true_or_unknown = true;
            for (const GameEdge& e : edges) {
                const auto k = col(e);
                if (k == Color::False) return RuleResult{Color::False, -1};
                if (k != Color::True) all_true = false;
                if (k == Color::Unknown) any_unknown = true;
                if (!(k == Color::True || k == Color::Unknown)) all_true_or_unknown = false;
            }
            if (all_true) return RuleResult{Color::True, -1};
            if (any_unknown && all_true_or_unknown) return RuleResult{Color::Unknown, -1};
            return std::nullopt;
        }

        case NodeKind::OrNode: {
            bool all_false = true, any_unknown = false, all_false_or_unknown = true;
            for (const GameEdge& e : edges) {
                const auto k = col(e);
                if (k == Color::True) return RuleResult{Color::True, -1};
                if (k != Color::False) all_false = false;
                if (k == Color::Unknown) any_unknown = true;
                if (!(k == Color::False || k == Color::Unknown)) all_false_or_unknown = false;
            }
            if (all_false) return RuleResult{Color::False, -1};
            if (any_unknown && all_false_or_unknown) return RuleResult{Color::Unknown, -1};
            return std::nullopt;
        }

        case NodeKind::ANextNode: {
            bool all_may_true = true, must_ok = true;
            int blocking = -1;
            for (std::size_t i = 0; i < edges.size(); ++i) {
                const auto k = col(edges[i]);
                if (k != Color::True) all_may_true = false;
                if (edges[i].flavor == EdgeFlavor::ProgressMust) {
                    if (k == Color::False) return RuleResult{Color::False, -1};
                    if (!(k == Color::True || k == Color::Unknown)) must_ok = false;
                }
                if (blocking < 0 && (k == Color::False || k == Color::Unknown))
                    blocking = static_cast<int>(i);
            }
            if (all_may_true) return RuleResult{Color::True, -1};
            if (must_ok && blocking >= 0) return RuleResult{Color::Unknown, blocking};
            return std::nullopt;
        }

        case NodeKind::ENextNode: {
            bool all_may_false = true, must_ok = true;
            int blocking = -1;
            for (std::size_t i = 0; i < edges.size(); ++i) {
                const auto k = col(edges[i]);
                if (k != Color::False) all_may_false = false;
                if (edges[i].flavor == EdgeFlavor::ProgressMust) {
                    if (k == Color::True) return RuleResult{Color::True, -1};
                    if (!(k == Color::False || k == Color::Unknown)) must_ok = false;
                }
                if (blocking < 0 && (k == Color::True || k == Color::Unknown))
                    blocking = static_cast<int>(i);
            }
            if (all_may_false) return RuleResult{Color::False, -1};
            if (must_ok && blocking >= 0) return RuleResult{Color::Unknown, blocking};
            return std::nullopt;
        }
    }
    return std::nullopt;
}

// Phase 2a: the witness rules every node for which the losing color is no
// longer possible.
inline bool phase2a_applies(const GameGraph& g, const Coloring& c, int idx, bool until_case) {
    const GameNode& node = g.nodes[static_cast<std::size_t>(idx)];
    const auto& edges = g.adj[static_cast<std::size_t>(idx)];
    auto ok = [&](const GameEdge& e, Color a, Color b) {
        if (!c.colored(e.target)) return false;
        const Color k = c.color[static_cast<std::size_t>(e.target)];
        return k == a || k == b;
    };

    if (until_case) {
        switch (node.kind) {
            case NodeKind::ANextNode:
                for (const GameEdge& e : edges)
                    if (e.flavor == EdgeFlavor::ProgressMust &&
                        !ok(e, Color::True, Color::Unknown))
                        return false;
                return true;
            case NodeKind::ENextNode:
                for (const GameEdge& e : edges)
                    if (ok(e, Color::True, Color::Unknown)) return true;
                return false;
            case NodeKind::AndNode:
                for (const GameEdge& e : edges)
                    if (!ok(e, Color::True, Color::Unknown)) return false;
                return true;
            case NodeKind::OrNode:
                for (const GameEdge& e : edges)
                    if (ok(e, Color::True, Color::Unknown)) return true;
                return false;
            case NodeKind::Terminal: return false;
        }
    } else {
        switch (node.kind) {
            case NodeKind::ANextNode:
                for (const GameEdge& e : edges)
                    if (ok(e, Color::False, Color::Unknown)) return true;
                return false;
            case NodeKind::ENextNode:
                for (const GameEdge& e : edges)
                    if (e.flavor == EdgeFlavor::ProgressMust &&
                        !ok(e, Color::False, Color::Unknown))
                        return false;
                return true;
            case NodeKind::AndNode:
                for (const GameEdge& e : edges)
                    if (ok(e, Color::False, Color::Unknown)) return true;
                return false;
            case NodeKind::OrNode:
                for (const GameEdge& e : edges)
                    if (!ok(e, Color::False, Color::Unknown)) return false;
                return true;
            case NodeKind::Terminal: return false;
        }
    }
    return false;
}

}  // namespace detail

// Total, timestamped coloring of the graph. Deterministic for fixed input.
inline Coloring color_graph(const GameGraph& g, const MsccPartition& part,
                            const Formulas& fs, const ReuseStore& reuse = {}) {
    const std::size_t n = g.size();
    Coloring c;
    c.color.assign(n, Color::Unknown);
    c.timestamp.assign(n, 0);
    c.phase.assign(n, ColorPhase::None);
    c.cause_edge.assign(n, -1);

    int clock = 0;
    auto assign = [&](int idx, Color color, ColorPhase phase, int cause) {
        if (c.colored(idx)) throw std::logic_error("node colored twice");
        c.color[static_cast<std::size_t>(idx)] = color;
        c.timestamp[static_cast<std::size_t>(idx)] = ++clock;
        c.phase[static_cast<std::size_t>(idx)] = phase;
        c.cause_edge[static_cast<std::size_t>(idx)] = cause;
    };

    // Nodes pruned at construction carry their color from the previous
    // iteration.
    for (std::size_t i = 0; i < n; ++i) {
        if (!g.nodes[i].reused) continue;
        const GameNode& node = g.nodes[i];
        const auto stored = reuse.lookup(node.state, node.formula);
        assign(static_cast<int>(i), stored.value_or(node.terminal_color), ColorPhase::Reused,
               -1);
    }

    for (std::size_t ci = 0; ci < part.components.size(); ++ci) {
        const std::vector<int>& members = part.components[ci];

        // All strictly smaller components must already be fully colored.
        for (int m : members)
            for (const GameEdge& e : g.adj[static_cast<std::size_t>(m)])
                if (part.component_of[static_cast<std::size_t>(e.target)] !=
                        static_cast<int>(ci) &&
                    !c.colored(e.target))
                    throw std::logic_error("component processed before its children");

        std::size_t uncolored = 0;
        for (int m : members) uncolored += c.colored(m) ? 0 : 1;

        // Phase 1, descending sweeps to fixpoint.
        bool changed = true;
        while (changed && uncolored > 0) {
            changed = false;
            for (auto it = members.rbegin(); it != members.rend(); ++it) {
                const int m = *it;
                if (c.colored(m)) continue;
                if (const auto r = detail::phase1_rule(g, c, m)) {
                    assign(m, r->color, ColorPhase::Phase1, r->cause_edge);
                    --uncolored;
                    changed = true;
                }
            }
        }
        if (uncolored == 0) continue;

        if (members.size() < 2 || part.witness[ci] == kNoFormula)
            throw std::logic_error("phase 2 reached without a witness");
        const bool until_case = is_until(fs.node(part.witness[ci]).kind);

        // Phase 2a: spread ? to every node whose losing color became
        // unreachable, deepest first.
        changed = true;
        while (changed && uncolored > 0) {
            changed = false;
            for (auto it = members.rbegin(); it != members.rend(); ++it) {
                const int m = *it;
                if (c.colored(m)) continue;
                if (detail::phase2a_applies(g, c, m, until_case)) {
                    assign(m, Color::Unknown, ColorPhase::Phase2a, -1);
                    --uncolored;
                    changed = true;
                }
            }
        }

        // Phase 2b: the witness default for whatever is left.
        for (int m : members) {
            if (c.colored(m)) continue;
            assign(m, until_case ? Color::False : Color::True, ColorPhase::Phase2b, -1);
            --uncolored;
        }
        if (uncolored != 0) throw std::logic_error("component left partially colored");
    }

    for (std::size_t i = 0; i < n; ++i)
        if (!c.colored(static_cast<int>(i)))
            throw std::logic_error("coloring is not total");
    return c;
}

// ── Result extraction ───────────────────────────────────────────────────────

inline Verdict evaluate_result(const GameGraph& g, const Coloring& c) {
    bool all_true = true;
    for (int idx : g.initial) {
        const Color k = c.color[static_cast<std::size_t>(idx)];
        if (k == Color::False) return Verdict::Violated;
        if (k != Color::True) all_true = false;
    }
    return all_true ? Verdict::Satisfied : Verdict::Indefinite;
}

// A failure node plus the may-only edge that is its failure reason.
struct Failure {
    int node = -1;
    int edge = -1;  // adjacency position within node

    const GameEdge& reason(const GameGraph& g) const {
        return g.adj[static_cast<std::size_t>(node)][static_cast<std::size_t>(edge)];
    }
};

namespace detail {

// The refinable edge out of a failure node: a may-only edge to the child that
// blocked a definite color. For nodes fixed in Phase 1 the recorded cause is
// it; for nodes first colored in Phase 2a the blocking child shows up later,
// so scan for a may-only child that ended up ? (or carries the definite color
// the node could not overrule).
inline int failure_reason_edge(const GameGraph& g, const Coloring& c, int idx) {
    const GameNode& node = g.nodes[static_cast<std::size_t>(idx)];
    const auto& edges = g.adj[static_cast<std::size_t>(idx)];
    const Color definite_block =
        node.kind == NodeKind::ANextNode ? Color::False : Color::True;

    if (c.phase[static_cast<std::size_t>(idx)] == ColorPhase::Phase1) {
        const int cause = c.cause_edge[static_cast<std::size_t>(idx)];
        if (cause >= 0 &&
            edges[static_cast<std::size_t>(cause)].flavor == EdgeFlavor::ProgressMay)
            return cause;
    }
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].flavor == EdgeFlavor::ProgressMay &&
            c.color[static_cast<std::size_t>(edges[i].target)] == Color::Unknown)
            return static_cast<int>(i);
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].flavor == EdgeFlavor::ProgressMay &&
            c.color[static_cast<std::size_t>(edges[i].target)] == definite_block)
            return static_cast<int>(i);
    return -1;
}

}  // namespace detail

// Locates a failure node: an ?-colored AX/EX node none of whose children were
// ? when it got colored. Among several, the one discovered first (closest to
// an initial node) wins. Requires an indefinite game result.
inline Failure find_failure(const GameGraph& g, const Coloring& c) {
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        if (c.color[idx] != Color::Unknown) continue;
        const NodeKind kind = g.nodes[idx].kind;
        if (kind != NodeKind::ANextNode && kind != NodeKind::ENextNode) continue;
        bool unknown_child_before = false;
        for (const GameEdge& e : g.adj[idx]) {
            if (c.color[static_cast<std::size_t>(e.target)] == Color::Unknown &&
                c.timestamp[static_cast<std::size_t>(e.target)] < c.timestamp[idx]) {
                unknown_child_before = true;
                break;
            }
        }
        if (unknown_child_before) continue;
        const int edge = detail::failure_reason_edge(g, c, static_cast<int>(idx));
        if (edge >= 0) return Failure{static_cast<int>(idx), edge};
    }
    throw std::logic_error("indefinite result without a failure node");
}

// ── DOT export ──────────────────────────────────────────────────────────────
// Green/red/white fills for T/F/?; F nodes get a dashed border; may-only
// progress edges are dashed, must and auxiliary edges solid.

inline void to_dot(std::ostream& os, const GameGraph& g, const Coloring& c, const Mts& mts,
                   const Formulas& fs) {
    auto escaped = [](const std::string& s) {
        std::string out;
        for (char ch : s) {
            if (ch == '"' || ch == '\\') out += '\\';
            out += ch;
        }
        return out;
    };
    os << "digraph game {\n";
    os << "  rankdir=TB;\n";
    os << "  node [shape=box];\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        const GameNode& node = g.nodes[i];
        const Color color = c.color[i];
        const char* fill = color == Color::True    ? "green"
                           : color == Color::False ? "red"
                                                   : "white";
        const char* style = color == Color::False ? "rounded,filled,dashed"
                                                  : "rounded,filled";
        os << "  n" << i << " [label=\"("
           << escaped(mts.core.states[static_cast<std::size_t>(node.state)]) << ", "
           << escaped(fs.to_string(node.formula)) << ")\", style=\"" << style
           << "\", fillcolor=" << fill << "];\n";
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (const GameEdge& e : g.adj[i]) {
            os << "  n" << i << " -> n" << e.target;
            const bool dashed = e.flavor == EdgeFlavor::ProgressMay;
            const bool progress = e.flavor != EdgeFlavor::Auxiliary;
            if (progress) {
                os << " [label=\""
                   << escaped(mts.core.actions[static_cast<std::size_t>(e.action)]) << "\"";
                if (dashed) os << ", style=dashed";
                os << "]";
            }
            os << ";\n";
        }
    }
    os << "}\n";
}

}  // namespace famcheck
