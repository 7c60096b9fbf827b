// ============================================================================
// famcheck/verify.hpp — recursive abstraction-refinement driver
// ============================================================================
//
// verify() answers "[family |= phi]" with one verdict per variant, touching as
// few variants as possible:
//
//   1. Solve the game for the join abstraction of the current subspace.
//   2. A definite result settles the whole subspace.
//   3. Otherwise take the failure reason's concrete guard psi, split the
//      subspace into [[psi]] and [[!psi]], project the family model to each
//      half and recurse into both. The failure edge is may-only, so both
//      halves are non-empty and the recursion strictly shrinks.
//
// Definite node colors accumulate in a reuse store handed down both branches;
// the rebuilt game-graphs prune at reused nodes. Each recursion leaf
// contributes one verdict part; parts partition the original space.
//
// An engine call is one build+color of a game (the paper's Call measure); a
// binary recursion over s splits makes 2s+1 calls and s+1 leaf parts.
//
// ============================================================================

#pragma once

#include <algorithm>
#include <chrono>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "famcheck/ctl.hpp"
#include "famcheck/game.hpp"
#include "famcheck/models.hpp"

#include "json.hpp"

namespace famcheck {

// ── Report types ────────────────────────────────────────────────────────────

struct VerdictPart {
    ConfigSpace configs;
    bool satisfied = false;
};

struct VerifyStats {
    int calls = 0;            // engine invocations (one game build+color each)
    int splits = 0;           // calls that came back indefinite
    int max_depth = 0;        // recursion depth, root = 1
    long long nodes_built = 0;
    long long nodes_reused = 0;
    std::vector<double> iteration_ms;  // wall time per engine call
};

struct VerifyReport {
    std::vector<VerdictPart> parts;  // disjoint, union = checked space
    VerifyStats stats;
};

struct VerifyOptions {
    bool reuse = true;
    // Observer invoked after every engine call, e.g. for DOT dumps.
    std::function<void(int iteration, const Mts&, const GameGraph&, const Coloring&)>
        on_iteration;
};

// ── Single abstract check ───────────────────────────────────────────────────

struct GameRun {
    GameGraph graph;
    MsccPartition partition;
    Coloring coloring;
    Verdict verdict = Verdict::Indefinite;
};

inline GameRun solve_game(const Mts& mts, Formulas& fs, FormulaId phi,
                          const ReuseStore& reuse = {}) {
    GameRun run;
    run.graph = build_game_graph(mts, fs, phi, reuse);
    run.partition = decompose(run.graph, fs);
    run.coloring = color_graph(run.graph, run.partition, fs, reuse);
    run.verdict = evaluate_result(run.graph, run.coloring);
    return run;
}

// ── Driver ──────────────────────────────────────────────────────────────────

namespace detail {

inline void verify_rec(const Fts& fts, Formulas& fs, FormulaId phi,
                       const VerifyOptions& opt, const ReuseStore& reuse, int depth,
                       std::size_t whole_space, VerifyReport& report) {
    if (fts.space.empty())
        throw std::logic_error("refinement recursed into an empty configuration space");
    if (depth > static_cast<int>(whole_space))
        throw std::logic_error("refinement depth exceeded the configuration count");

    const auto t0 = std::chrono::steady_clock::now();
    const Mts abstraction = abstract_join(fts);
    const GameRun run = solve_game(abstraction, fs, phi, reuse);
    const auto t1 = std::chrono::steady_clock::now();

    report.stats.calls += 1;
    report.stats.max_depth = std::max(report.stats.max_depth, depth);
    report.stats.nodes_built += static_cast<long long>(run.graph.size());
    report.stats.nodes_reused += static_cast<long long>(run.graph.reused_count());
    report.stats.iteration_ms.push_back(
        std::chrono::duration<double, std::milli>(t1 - t0).count());
    if (opt.on_iteration)
        opt.on_iteration(report.stats.calls, abstraction, run.graph, run.coloring);

    if (run.verdict == Verdict::Satisfied) {
        report.parts.push_back(VerdictPart{fts.space, true});
        return;
    }
    if (run.verdict == Verdict::Violated) {
        report.parts.push_back(VerdictPart{fts.space, false});
        return;
    }

    report.stats.splits += 1;
    const Failure failure = find_failure(run.graph, run.coloring);
    const GameEdge& reason = failure.reason(run.graph);
    const GameNode& from = run.graph.nodes[static_cast<std::size_t>(failure.node)];
    const GameNode& to = run.graph.nodes[static_cast<std::size_t>(reason.target)];

    // Guard of the concrete transition under the failure may-edge.
    const FeatExpr* guard = nullptr;
    for (std::size_t i = 0; i < fts.core.transitions.size(); ++i) {
        const Transition& t = fts.core.transitions[i];
        if (t.src == from.state && t.action == reason.action && t.dst == to.state) {
            guard = &fts.guards[i];
            break;
        }
    }
    if (!guard) throw std::logic_error("failure edge has no concrete transition");

    const auto [sat_half, viol_half] = split_space(fts.space, *guard);
    if (sat_half.empty() || viol_half.empty())
        throw std::logic_error("failure guard did not split the configuration space");

    ReuseStore next = reuse;
    if (opt.reuse) {
        for (std::size_t i = 0; i < run.graph.size(); ++i) {
            const Color color = run.coloring.color[i];
            if (color == Color::Unknown) continue;
            const GameNode& node = run.graph.nodes[i];
            next.remember(node.state, node.formula, color);
        }
    }

    verify_rec(project(fts, sat_half), fs, phi, opt, next, depth + 1, whole_space, report);
    verify_rec(project(fts, viol_half), fs, phi, opt, next, depth + 1, whole_space, report);
}

}  // namespace detail

// Checks every variant of the family model against phi.
inline VerifyReport run_verify(const Fts& fts, Formulas& fs, FormulaId phi,
                               const VerifyOptions& opt = {}) {
    if (fts.space.empty())
        throw std::invalid_argument("cannot verify an empty configuration space");
    VerifyReport report;
    detail::verify_rec(fts, fs, phi, opt, ReuseStore{}, 1, fts.space.size(), report);
    return report;
}

// Checks the variants of a subspace only.
inline VerifyReport run_verify(const Fts& fts, const ConfigSpace& space, Formulas& fs,
                               FormulaId phi, const VerifyOptions& opt = {}) {
    return run_verify(project(fts, space), fs, phi, opt);
}

// ── Report combination and presentation ─────────────────────────────────────

// Concatenates reports over pairwise disjoint spaces and sums their stats.
inline VerifyReport combine_reports(const std::vector<VerifyReport>& reports) {
    VerifyReport out;
    for (const VerifyReport& r : reports) {
        for (const VerdictPart& p : r.parts) {
            for (const VerdictPart& q : out.parts)
                for (Config k : p.configs.configs())
                    if (q.configs.contains(k))
                        throw std::invalid_argument("combined reports overlap at " +
                                                    p.configs.config_to_string(k));
            out.parts.push_back(p);
        }
        out.stats.calls += r.stats.calls;
        out.stats.splits += r.stats.splits;
        out.stats.max_depth = std::max(out.stats.max_depth, r.stats.max_depth);
        out.stats.nodes_built += r.stats.nodes_built;
        out.stats.nodes_reused += r.stats.nodes_reused;
        out.stats.iteration_ms.insert(out.stats.iteration_ms.end(),
                                      r.stats.iteration_ms.begin(),
                                      r.stats.iteration_ms.end());
    }
    return out;
}

// Adjacent parts with equal verdicts collapsed (presentation form).
inline std::vector<VerdictPart> merged_verdicts(const VerifyReport& report) {
    std::vector<VerdictPart> out;
    for (const VerdictPart& p : report.parts) {
        if (!out.empty() && out.back().satisfied == p.satisfied) {
            std::vector<Config> u = out.back().configs.configs();
            const auto& more = p.configs.configs();
            u.insert(u.end(), more.begin(), more.end());
            out.back().configs = p.configs.with_configs(std::move(u));
        } else {
            out.push_back(p);
        }
    }
    return out;
}

inline std::vector<Config> configs_with_verdict(const VerifyReport& report, bool satisfied) {
    std::vector<Config> out;
    for (const VerdictPart& p : report.parts)
        if (p.satisfied == satisfied)
            out.insert(out.end(), p.configs.configs().begin(), p.configs.configs().end());
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<Config> satisfied_configs(const VerifyReport& r) {
    return configs_with_verdict(r, true);
}
inline std::vector<Config> violated_configs(const VerifyReport& r) {
    return configs_with_verdict(r, false);
}

// If the given configs are exactly the members of `whole` satisfying one
// conjunction of literals, returns that cube.
inline std::optional<std::string> cube_description(const std::vector<Config>& configs,
                                                   const ConfigSpace& whole) {
    if (configs.empty()) return std::nullopt;
    std::optional<FeatExpr> cube;
    for (const Feature& f : whole.features()) {
        bool always = true, never = true;
        for (Config k : configs) {
            if (k.has(f.id)) never = false;
            else always = false;
        }
        if (!always && !never) continue;
        FeatExpr literal = always ? FeatExpr::var(f.id) : FeatExpr::neg(FeatExpr::var(f.id));
        cube = cube ? FeatExpr::conj(*cube, literal) : literal;
    }
    const FeatExpr candidate = cube ? *cube : FeatExpr::tt();
    const ConfigSpace described = satisfying_configs(candidate, whole);
    if (described.configs() != configs) return std::nullopt;
    return to_string(candidate, whole.features());
}

namespace detail {

// Text reports list at most this many configurations per verdict; the
// structured report always carries the full list.
inline constexpr std::size_t kMaxListedConfigs = 32;

inline std::string config_list(const std::vector<Config>& configs, const ConfigSpace& space) {
    std::string out;
    const std::size_t shown = std::min(configs.size(), kMaxListedConfigs);
    for (std::size_t i = 0; i < shown; ++i) {
        if (i > 0) out += " ";
        out += space.config_to_string(configs[i]);
    }
    if (shown < configs.size())
        out += " ... " + std::to_string(configs.size() - shown) + " more";
    return out;
}

}  // namespace detail

// Human-readable verdict report. `space` is the space the check started from.
inline std::string render_text(const VerifyReport& report, const ConfigSpace& space,
                               bool with_stats = false) {
    std::ostringstream os;
    for (const bool satisfied : {true, false}) {
        const std::vector<Config> configs = configs_with_verdict(report, satisfied);
        os << (satisfied ? "satisfied" : "violated") << " (" << configs.size()
           << (configs.size() == 1 ? " variant" : " variants") << ")";
        if (!configs.empty()) {
            os << ": " << detail::config_list(configs, space);
            if (const auto cube = cube_description(configs, space)) os << "  = " << *cube;
        }
        os << "\n";
    }
    if (with_stats) {
        os << "parts: " << report.parts.size() << "\n";
        for (const VerdictPart& p : report.parts)
            os << "  " << (p.satisfied ? "sat " : "viol") << " "
               << detail::config_list(p.configs.configs(), space) << "\n";
        os << "calls: " << report.stats.calls << "\n";
        os << "splits: " << report.stats.splits << "\n";
        os << "depth: " << report.stats.max_depth << "\n";
        os << "nodes_built: " << report.stats.nodes_built << "\n";
        os << "nodes_reused: " << report.stats.nodes_reused << "\n";
        double total = 0;
        for (double ms : report.stats.iteration_ms) total += ms;
        os << "elapsed_ms: " << total << "\n";
    }
    return os.str();
}

// Structured report: one record per verdict subset plus a stats record.
inline std::string render_json(const VerifyReport& report, const ConfigSpace& space) {
    nlohmann::json doc;
    auto config_names = [&](Config k) {
        nlohmann::json names = nlohmann::json::array();
        for (const Feature& f : space.features())
            if (k.has(f.id)) names.push_back(f.name);
        return names;
    };
    doc["verdicts"] = nlohmann::json::array();
    for (const VerdictPart& p : report.parts) {
        nlohmann::json rec;
        rec["verdict"] = p.satisfied ? "sat" : "viol";
        rec["configs"] = nlohmann::json::array();
        for (Config k : p.configs.configs()) rec["configs"].push_back(config_names(k));
        doc["verdicts"].push_back(rec);
    }
    for (const bool satisfied : {true, false}) {
        nlohmann::json list = nlohmann::json::array();
        for (Config k : configs_with_verdict(report, satisfied))
            list.push_back(config_names(k));
        doc[satisfied ? "satisfied" : "violated"] = list;
    }
    double total = 0;
    for (double ms : report.stats.iteration_ms) total += ms;
    doc["stats"] = {{"calls", report.stats.calls},
                    {"splits", report.stats.splits},
                    {"depth", report.stats.max_depth},
                    {"nodes_built", report.stats.nodes_built},
                    {"nodes_reused", report.stats.nodes_reused},
                    {"elapsed_ms", total}};
    return doc.dump(2);
}

}  // namespace famcheck
