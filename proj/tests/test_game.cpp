#include "doctest.h"

#include <random>
#include <sstream>

#include "famcheck/bench.hpp"
#include "famcheck/game.hpp"
#include "famcheck/oracle.hpp"
#include "famcheck/verify.hpp"

using namespace famcheck;

namespace {

struct VmGame {
    Fts vm = vending_machine();
    Formulas fs;
    FormulaId phi1 = parse_formula("A[!r U r]", fs);
    FormulaId phi2 = parse_formula("E[!r U r]", fs);

    FeatExpr c = FeatExpr::var(0);
    FeatExpr f = FeatExpr::var(1);

    Fts restricted(const FeatExpr& e) const {
        return project(vm, satisfying_configs(e, vm.space));
    }
};

int node_of(const GameGraph& g, const Ts& ts, Formulas& fs, const std::string& state,
            const std::string& formula) {
    const FormulaId id = parse_formula(formula, fs);
    for (std::size_t s = 0; s < ts.states.size(); ++s)
        if (ts.states[s] == state) return g.find(static_cast<int>(s), id);
    return -1;
}

Color color_at(const GameGraph& g, const Coloring& c, const Ts& ts, Formulas& fs,
               const std::string& state, const std::string& formula) {
    const int idx = node_of(g, ts, fs, state, formula);
    REQUIRE(idx >= 0);
    return c.color[static_cast<std::size_t>(idx)];
}

}  // namespace

TEST_CASE("game board of the vending machine has 18 nodes") {
    VmGame t;
    const Mts m = abstract_join(t.vm);
    const GameGraph g = build_game_graph(m, t.fs, t.phi1);
    CHECK(g.size() == 18);  // 6 closure formulas x 3 reachable states
    CHECK(g.initial.size() == 1);
    CHECK(g.reused_count() == 0);
}

TEST_CASE("a terminal formula builds one node per initial state") {
    VmGame t;
    const Mts m = abstract_join(t.vm);
    const GameGraph g = build_game_graph(m, t.fs, t.fs.lit("r"));
    CHECK(g.size() == 1);
    CHECK(g.adj[0].empty());

    Fts two = t.vm;
    two.core.mark_initial(1);
    const GameGraph g2 = build_game_graph(abstract_join(two), t.fs, t.fs.lit("r"));
    CHECK(g2.size() == 2);
}

TEST_CASE("decomposition of the vending game") {
    VmGame t;
    const Mts m = abstract_join(t.vm);
    const GameGraph g = build_game_graph(m, t.fs, t.phi1);
    const MsccPartition part = decompose(g, t.fs);

    REQUIRE(part.size() == 7);
    for (int i = 0; i < 6; ++i) {
        CHECK(part.components[static_cast<std::size_t>(i)].size() == 1);
        const int n = part.components[static_cast<std::size_t>(i)].front();
        CHECK(g.nodes[static_cast<std::size_t>(n)].kind == NodeKind::Terminal);
    }
    CHECK(part.components[6].size() == 12);
    CHECK(part.witness[6] == t.phi1);

    // Every edge stays within its component or goes to an earlier one.
    for (std::size_t v = 0; v < g.size(); ++v)
        for (const GameEdge& e : g.adj[v])
            CHECK(part.component_of[static_cast<std::size_t>(e.target)] <=
                  part.component_of[v]);
}

TEST_CASE("decomposition order is a linearization on random games") {
    Formulas fs;
    std::mt19937 rng(41);
    const std::vector<std::string> props{"p", "q"};
    for (int seed = 0; seed < 40; ++seed) {
        const Fts fts = random_fts(6000 + static_cast<unsigned>(seed), 6, 3);
        const FormulaId phi = random_formula(fs, props, 3, rng);
        const GameGraph g = build_game_graph(abstract_join(fts), fs, phi);
        const MsccPartition part = decompose(g, fs);
        for (std::size_t v = 0; v < g.size(); ++v)
            for (const GameEdge& e : g.adj[v])
                REQUIRE(part.component_of[static_cast<std::size_t>(e.target)] <=
                        part.component_of[v]);
        // Partition is exact.
        std::size_t members = 0;
        for (const auto& comp : part.components) members += comp.size();
        REQUIRE(members == g.size());
    }
}

TEST_CASE("coloring the full vending abstraction leaves the root unknown") {
    VmGame t;
    const Mts m = abstract_join(t.vm);
    const GameGraph g = build_game_graph(m, t.fs, t.phi1);
    const Coloring col = color_graph(g, decompose(g, t.fs), t.fs);
    const Ts& ts = t.vm.core;

    CHECK(color_at(g, col, ts, t.fs, "s0", "!r") == Color::True);
    CHECK(color_at(g, col, ts, t.fs, "s1", "!r") == Color::True);
    CHECK(color_at(g, col, ts, t.fs, "s2", "r") == Color::True);
    CHECK(color_at(g, col, ts, t.fs, "s0", "r") == Color::False);
    CHECK(color_at(g, col, ts, t.fs, "s1", "r") == Color::False);
    CHECK(color_at(g, col, ts, t.fs, "s2", "!r") == Color::False);
    CHECK(color_at(g, col, ts, t.fs, "s0", "A[!r U r]") == Color::Unknown);
    CHECK(color_at(g, col, ts, t.fs, "s1", "AX A[!r U r]") == Color::Unknown);
    CHECK(color_at(g, col, ts, t.fs, "s2", "A[!r U r]") == Color::True);
    CHECK(color_at(g, col, ts, t.fs, "s2", "!r & AX A[!r U r]") == Color::False);

    CHECK(evaluate_result(g, col) == Verdict::Indefinite);

    const Failure fail = find_failure(g, col);
    const GameNode& node = g.nodes[static_cast<std::size_t>(fail.node)];
    CHECK(ts.states[static_cast<std::size_t>(node.state)] == "s1");
    CHECK(node.formula == t.fs.a_next(t.phi1));
    const GameEdge& reason = fail.reason(g);
    CHECK(ts.actions[static_cast<std::size_t>(reason.action)] == "cancel");
    CHECK(reason.flavor == EdgeFlavor::ProgressMay);
    const GameNode& target = g.nodes[static_cast<std::size_t>(reason.target)];
    CHECK(ts.states[static_cast<std::size_t>(target.state)] == "s0");
    CHECK(target.formula == t.phi1);
}

TEST_CASE("restricting to the cancel variants moves the failure to pay") {
    VmGame t;
    const Fts fc = t.restricted(t.c);
    const GameGraph g = build_game_graph(abstract_join(fc), t.fs, t.phi1);
    const Coloring col = color_graph(g, decompose(g, t.fs), t.fs);
    CHECK(evaluate_result(g, col) == Verdict::Indefinite);

    const Failure fail = find_failure(g, col);
    const GameNode& node = g.nodes[static_cast<std::size_t>(fail.node)];
    CHECK(t.vm.core.states[static_cast<std::size_t>(node.state)] == "s0");
    CHECK(node.formula == t.fs.a_next(t.phi1));
    CHECK(t.vm.core.actions[static_cast<std::size_t>(fail.reason(g).action)] == "pay");
}

TEST_CASE("definite subspaces color the root definitively") {
    VmGame t;

    const Fts not_c = t.restricted(FeatExpr::neg(t.c));
    const GameGraph g1 = build_game_graph(abstract_join(not_c), t.fs, t.phi1);
    const Coloring c1 = color_graph(g1, decompose(g1, t.fs), t.fs);
    CHECK(evaluate_result(g1, c1) == Verdict::Satisfied);

    const Fts c_not_f = t.restricted(FeatExpr::conj(t.c, FeatExpr::neg(t.f)));
    const GameGraph g2 = build_game_graph(abstract_join(c_not_f), t.fs, t.phi1);
    const Coloring c2 = color_graph(g2, decompose(g2, t.fs), t.fs);
    CHECK(evaluate_result(g2, c2) == Verdict::Violated);
    // The losing color arrives in Phase 2b: the whole component defaults to F.
    CHECK(c2.phase[static_cast<std::size_t>(g2.initial.front())] == ColorPhase::Phase2b);

    const Fts c_and_f = t.restricted(FeatExpr::conj(t.c, t.f));
    const GameGraph g3 = build_game_graph(abstract_join(c_and_f), t.fs, t.phi1);
    const Coloring c3 = color_graph(g3, decompose(g3, t.fs), t.fs);
    CHECK(evaluate_result(g3, c3) == Verdict::Satisfied);
}

TEST_CASE("existential property: failure is the free edge") {
    VmGame t;
    const GameGraph g = build_game_graph(abstract_join(t.vm), t.fs, t.phi2);
    const Coloring col = color_graph(g, decompose(g, t.fs), t.fs);
    CHECK(evaluate_result(g, col) == Verdict::Indefinite);
    CHECK(color_at(g, col, t.vm.core, t.fs, "s1", "E[!r U r]") == Color::True);
    CHECK(color_at(g, col, t.vm.core, t.fs, "s2", "EX E[!r U r]") == Color::Unknown);

    const Failure fail = find_failure(g, col);
    const GameNode& node = g.nodes[static_cast<std::size_t>(fail.node)];
    CHECK(t.vm.core.states[static_cast<std::size_t>(node.state)] == "s0");
    CHECK(node.formula == t.fs.e_next(t.phi2));
    CHECK(t.vm.core.actions[static_cast<std::size_t>(fail.reason(g).action)] == "free");
    const GameNode& target = g.nodes[static_cast<std::size_t>(fail.reason(g).target)];
    CHECK(t.vm.core.states[static_cast<std::size_t>(target.state)] == "s2");
}

TEST_CASE("single-state model refutes false immediately") {
    Fts one;
    one.space = ConfigSpace::full({"a"});
    one.core.add_state("s0");
    one.core.mark_initial(0);
    one.add_transition(0, one.core.add_action("loop"), 0, FeatExpr::tt());
    Formulas fs;
    const GameGraph g = build_game_graph(abstract_join(one), fs, fs.ff());
    const Coloring col = color_graph(g, decompose(g, fs), fs);
    CHECK(evaluate_result(g, col) == Verdict::Violated);
}

TEST_CASE("reuse prunes the rebuilt game-graph") {
    VmGame t;
    const GameGraph full = build_game_graph(abstract_join(t.vm), t.fs, t.phi1);
    const Coloring col = color_graph(full, decompose(full, t.fs), t.fs);

    ReuseStore store;
    for (std::size_t i = 0; i < full.size(); ++i)
        if (col.color[i] != Color::Unknown)
            store.remember(full.nodes[i].state, full.nodes[i].formula, col.color[i]);
    CHECK(store.size() == 9);

    const Fts fc = t.restricted(t.c);
    const GameGraph pruned = build_game_graph(abstract_join(fc), t.fs, t.phi1, store);
    CHECK(pruned.size() == 13);  // 8 live nodes + 5 reused terminals
    CHECK(pruned.reused_count() == 5);

    // Reused nodes are terminals; their former descendants stay absent.
    for (std::size_t i = 0; i < pruned.size(); ++i)
        if (pruned.nodes[i].reused) CHECK(pruned.adj[i].empty());
    const int gone = node_of(pruned, t.vm.core, t.fs, "s2", "r | (!r & AX A[!r U r])");
    CHECK(gone == -1);

    // Coloring with the store reproduces the pay failure.
    const Coloring pc = color_graph(pruned, decompose(pruned, t.fs), t.fs, store);
    CHECK(evaluate_result(pruned, pc) == Verdict::Indefinite);
    const Failure fail = find_failure(pruned, pc);
    CHECK(t.vm.core.actions[static_cast<std::size_t>(fail.reason(pruned).action)] == "pay");
}

TEST_CASE("childless next-nodes take their vacuous color") {
    // One state, two variants, and a sole transition that exists in only one
    // variant: projecting it away leaves the AX/EX nodes childless.
    Fts fam;
    fam.space = ConfigSpace::full({"a"});
    fam.core.add_state("s0");
    fam.core.mark_initial(0);
    fam.add_transition(0, fam.core.add_action("go"), 0, FeatExpr::var(0));

    const Fts off = project(fam, satisfying_configs(FeatExpr::neg(FeatExpr::var(0)), fam.space));
    const Mts m = abstract_join(off);
    REQUIRE(m.may_count() == 0);

    Formulas fs;
    const GameGraph ga = build_game_graph(m, fs, fs.a_next(fs.lit("p")));
    const Coloring ca = color_graph(ga, decompose(ga, fs), fs);
    CHECK(ca.color[static_cast<std::size_t>(ga.initial.front())] == Color::True);

    const GameGraph ge = build_game_graph(m, fs, fs.e_next(fs.lit("p")));
    const Coloring ce = color_graph(ge, decompose(ge, fs), fs);
    CHECK(ce.color[static_cast<std::size_t>(ge.initial.front())] == Color::False);
}

TEST_CASE("coloring invariants on random games") {
    Formulas fs;
    std::mt19937 rng(47);
    const std::vector<std::string> props{"p", "q"};
    for (int seed = 0; seed < 60; ++seed) {
        const Fts fts = random_fts(7000 + static_cast<unsigned>(seed), 6, 3);
        const FormulaId phi = random_formula(fs, props, 3, rng);
        const Mts m = abstract_join(fts);
        const GameGraph g = build_game_graph(m, fs, phi);
        const MsccPartition part = decompose(g, fs);
        const Coloring col = color_graph(g, part, fs);

        std::vector<int> stamps;
        for (std::size_t i = 0; i < g.size(); ++i) {
            REQUIRE(col.colored(static_cast<int>(i)));
            stamps.push_back(col.timestamp[i]);
        }
        std::sort(stamps.begin(), stamps.end());
        for (std::size_t i = 0; i < stamps.size(); ++i)
            REQUIRE(stamps[i] == static_cast<int>(i) + 1);

        for (std::size_t i = 0; i < g.size(); ++i) {
            const GameNode& node = g.nodes[i];
            if (node.kind == NodeKind::ANextNode) {
                for (const GameEdge& e : g.adj[i])
                    if (e.flavor == EdgeFlavor::ProgressMust &&
                        col.color[static_cast<std::size_t>(e.target)] == Color::False)
                        REQUIRE(col.color[i] == Color::False);
            }
            if (node.kind == NodeKind::ENextNode) {
                for (const GameEdge& e : g.adj[i])
                    if (e.flavor == EdgeFlavor::ProgressMust &&
                        col.color[static_cast<std::size_t>(e.target)] == Color::True)
                        REQUIRE(col.color[i] == Color::True);
            }
        }

        if (evaluate_result(g, col) == Verdict::Indefinite) {
            const Failure fail = find_failure(g, col);
            REQUIRE(fail.reason(g).flavor == EdgeFlavor::ProgressMay);
            REQUIRE(col.color[static_cast<std::size_t>(fail.node)] == Color::Unknown);
        }
    }
}

TEST_CASE("identical inputs produce identical games and colorings") {
    VmGame t1, t2;
    const GameGraph g1 = build_game_graph(abstract_join(t1.vm), t1.fs, t1.phi1);
    const GameGraph g2 = build_game_graph(abstract_join(t2.vm), t2.fs, t2.phi1);
    REQUIRE(g1.size() == g2.size());
    for (std::size_t i = 0; i < g1.size(); ++i) {
        CHECK(g1.nodes[i].state == g2.nodes[i].state);
        CHECK(g1.nodes[i].formula == g2.nodes[i].formula);
        REQUIRE(g1.adj[i].size() == g2.adj[i].size());
    }
    const Coloring c1 = color_graph(g1, decompose(g1, t1.fs), t1.fs);
    const Coloring c2 = color_graph(g2, decompose(g2, t2.fs), t2.fs);
    CHECK(c1.color == c2.color);
    CHECK(c1.timestamp == c2.timestamp);
    CHECK(find_failure(g1, c1).node == find_failure(g2, c2).node);
}

TEST_CASE("abstract verdicts transfer to every variant") {
    Formulas fs;
    std::mt19937 rng(53);
    const std::vector<std::string> props{"p", "q"};
    for (int seed = 0; seed < 60; ++seed) {
        const Fts fts = random_fts(8000 + static_cast<unsigned>(seed), 5, 3);
        const FormulaId phi = random_formula(fs, props, 3, rng);
        const GameRun run = solve_game(abstract_join(fts), fs, phi);
        if (run.verdict == Verdict::Indefinite) continue;
        for (const auto& [k, v] : check_variants(fts, fs, phi)) {
            if (run.verdict == Verdict::Satisfied) REQUIRE(v);
            if (run.verdict == Verdict::Violated) REQUIRE_FALSE(v);
        }
    }
}

TEST_CASE("DOT export carries the coloring legend") {
    VmGame t;
    const Mts m = abstract_join(t.vm);
    const GameGraph g = build_game_graph(m, t.fs, t.phi1);
    const Coloring col = color_graph(g, decompose(g, t.fs), t.fs);
    std::ostringstream os;
    to_dot(os, g, col, m, t.fs);
    const std::string dot = os.str();
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("fillcolor=green") != std::string::npos);
    CHECK(dot.find("fillcolor=red") != std::string::npos);
    CHECK(dot.find("fillcolor=white") != std::string::npos);
    CHECK(dot.find("style=dashed") != std::string::npos);
    CHECK(dot.find("label=\"cancel\"") != std::string::npos);
    CHECK(dot.find("(s0, A [!r U r])") != std::string::npos);

    std::ostringstream os2;
    to_dot(os2, g, col, m, t.fs);
    CHECK(dot == os2.str());
}
