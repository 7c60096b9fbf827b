// ============================================================================
// famcheck/bench.hpp — built-in models, generators, and the benchmark runner
// ============================================================================

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "famcheck/ctl.hpp"
#include "famcheck/models.hpp"
#include "famcheck/verify.hpp"

namespace famcheck {

// ── Vending machine ─────────────────────────────────────────────────────────
// Three states, two optional features: c cancels a purchase, f makes drinks
// free. s2 is the served state.

inline Fts vending_machine() {
    Fts fts;
    fts.space = ConfigSpace::full({"c", "f"});
    const int s0 = fts.core.add_state("s0");
    const int s1 = fts.core.add_state("s1");
    const int s2 = fts.core.add_state("s2");
    fts.core.mark_initial(s0);
    fts.core.add_label(s2, fts.core.add_prop("r"));
    const int c = 0, f = 1;
    fts.add_transition(s0, fts.core.add_action("pay"), s1, FeatExpr::neg(FeatExpr::var(f)));
    fts.add_transition(s0, fts.core.add_action("free"), s2, FeatExpr::var(f));
    fts.add_transition(s1, fts.core.add_action("drink"), s2, FeatExpr::tt());
    fts.add_transition(s1, fts.core.add_action("cancel"), s0, FeatExpr::var(c));
    fts.add_transition(s2, fts.core.add_action("take"), s0, FeatExpr::tt());
    return fts;
}

// ── The M_n family ──────────────────────────────────────────────────────────
// A complete binary tree of depth n over features A1..An and a data variable
// x starting at 0. Level k branches on A_k: taking it adds 2^(k-1) to x, not
// taking it leaves x unchanged. Leaves idle on a self-loop. The leaf values
// enumerate 0 .. 2^n - 1, and the propositions x_ge_0 / x_ge_1 reflect the
// accumulated value.

inline Fts mn_family(int n) {
    if (n < 1) throw std::invalid_argument("mn_family needs n >= 1");
    if (n > 20) throw std::invalid_argument("mn_family capped at n = 20");

    Fts fts;
    std::vector<std::string> features;
    for (int k = 1; k <= n; ++k) features.push_back("A" + std::to_string(k));
    fts.space = ConfigSpace::full(features);

    const long long total = (1ll << (n + 1)) - 1;
    std::vector<long long> value(static_cast<std::size_t>(total), 0);
    fts.core.states.reserve(static_cast<std::size_t>(total));
    for (long long i = 0; i < total; ++i) {
        fts.core.states.push_back("s" + std::to_string(i));
        fts.core.labels.emplace_back();
    }
    fts.core.mark_initial(0);
    const int x_ge_0 = fts.core.add_prop("x_ge_0");
    const int x_ge_1 = fts.core.add_prop("x_ge_1");
    const int tau = fts.core.add_action("tau");

    // Level-order ids: level k starts at 2^k - 1 and holds 2^k states. The
    // tree shape cannot produce duplicate triples, so transitions are pushed
    // without the merge scan.
    auto push = [&fts](long long src, int action, long long dst, FeatExpr guard) {
        fts.core.transitions.push_back(
            Transition{static_cast<int>(src), action, static_cast<int>(dst)});
        fts.guards.push_back(std::move(guard));
    };
    long long next = 1;
    for (int k = 1; k <= n; ++k) {
        const long long level_start = (1ll << (k - 1)) - 1;
        const long long level_size = 1ll << (k - 1);
        for (long long p = level_start; p < level_start + level_size; ++p) {
            const long long enabled = next++;
            const long long disabled = next++;
            value[static_cast<std::size_t>(enabled)] =
                value[static_cast<std::size_t>(p)] + (1ll << (k - 1));
            value[static_cast<std::size_t>(disabled)] = value[static_cast<std::size_t>(p)];
            const FeatExpr ak = FeatExpr::var(k - 1);
            push(p, tau, enabled, ak);
            push(p, tau, disabled, FeatExpr::neg(ak));
        }
    }
    const long long leaves_start = (1ll << n) - 1;
    for (long long s = leaves_start; s < total; ++s) push(s, tau, s, FeatExpr::tt());

    for (long long s = 0; s < total; ++s) {
        fts.core.add_label(static_cast<int>(s), x_ge_0);
        if (value[static_cast<std::size_t>(s)] >= 1)
            fts.core.add_label(static_cast<int>(s), x_ge_1);
    }
    return fts;
}

// Accumulated x value per state, mirroring the tree layout. For tests.
inline std::vector<long long> mn_state_values(int n) {
    const long long total = (1ll << (n + 1)) - 1;
    std::vector<long long> value(static_cast<std::size_t>(total), 0);
    long long next = 1;
    for (int k = 1; k <= n; ++k) {
        const long long level_start = (1ll << (k - 1)) - 1;
        const long long level_size = 1ll << (k - 1);
        for (long long p = level_start; p < level_start + level_size; ++p) {
            const long long enabled = next++;
            const long long disabled = next++;
            value[static_cast<std::size_t>(enabled)] =
                value[static_cast<std::size_t>(p)] + (1ll << (k - 1));
            value[static_cast<std::size_t>(disabled)] = value[static_cast<std::size_t>(p)];
        }
    }
    return value;
}

// ── Random family models ────────────────────────────────────────────────────
// Seeded, deterministic, desk-scale. Every state gets a true-guarded
// self-loop, so every projection is total.

inline Fts random_fts(std::uint32_t seed, int state_count, int feature_count) {
    if (state_count < 1 || state_count > 8)
        throw std::invalid_argument("random_fts supports 1..8 states");
    if (feature_count < 1 || feature_count > 5)
        throw std::invalid_argument("random_fts supports 1..5 features");

    std::mt19937 rng(seed);
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint32_t>(n)); };

    Fts fts;
    std::vector<std::string> features;
    for (int i = 0; i < feature_count; ++i)
        features.push_back(std::string(1, static_cast<char>('a' + i)));

    // Non-empty random subset of 2^F.
    const std::uint32_t full = (1u << feature_count);
    std::vector<Config> configs;
    for (std::uint32_t m = 0; m < full; ++m)
        if (rng() % 100 < 60) configs.emplace_back(m);
    if (configs.empty()) configs.emplace_back(rng() % full);
    fts.space = ConfigSpace::from_names(features, std::move(configs));

    for (int s = 0; s < state_count; ++s) fts.core.add_state("s" + std::to_string(s));
    fts.core.mark_initial(0);
    for (int s = 1; s < state_count; ++s)
        if (rng() % 100 < 20) fts.core.mark_initial(s);

    const int p = fts.core.add_prop("p");
    const int q = fts.core.add_prop("q");
    for (int s = 0; s < state_count; ++s) {
        if (rng() % 2) fts.core.add_label(s, p);
        if (rng() % 2) fts.core.add_label(s, q);
    }

    auto random_cube = [&]() {
        FeatExpr e = FeatExpr::tt();
        for (int f = 0; f < feature_count; ++f) {
            const int roll = pick(3);
            if (roll == 0) continue;
            const FeatExpr literal =
                roll == 1 ? FeatExpr::var(f) : FeatExpr::neg(FeatExpr::var(f));
            e = FeatExpr::conj(e, literal);
        }
        return e;
    };

    const int act_a = fts.core.add_action("go");
    const int act_b = fts.core.add_action("alt");
    const int idle = fts.core.add_action("idle");
    for (int s = 0; s < state_count; ++s) {
        const int degree = 1 + pick(3);
        for (int d = 0; d < degree; ++d)
            fts.add_transition(s, d % 2 ? act_b : act_a, pick(state_count), random_cube());
        fts.add_transition(s, idle, s, FeatExpr::tt());
    }
    return fts;
}

// Random NNF formula over the given propositions; depth-bounded.
inline FormulaId random_formula(Formulas& fs, const std::vector<std::string>& props,
                                int depth, std::mt19937& rng) {
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint32_t>(n)); };
    auto literal = [&]() {
        const int roll = pick(10);
        if (roll == 0) return fs.tt();
        if (roll == 1) return fs.ff();
        return fs.lit(props[static_cast<std::size_t>(pick(static_cast<int>(props.size())))],
                      rng() % 2 == 0);
    };
    if (depth <= 0 || props.empty()) return literal();
    switch (pick(9)) {
        case 0: return literal();
        case 1: return fs.conj(random_formula(fs, props, depth - 1, rng),
                               random_formula(fs, props, depth - 1, rng));
        case 2: return fs.disj(random_formula(fs, props, depth - 1, rng),
                               random_formula(fs, props, depth - 1, rng));
        case 3: return fs.a_next(random_formula(fs, props, depth - 1, rng));
        case 4: return fs.e_next(random_formula(fs, props, depth - 1, rng));
        case 5: return fs.a_until(random_formula(fs, props, depth - 1, rng),
                                  random_formula(fs, props, depth - 1, rng));
        case 6: return fs.e_until(random_formula(fs, props, depth - 1, rng),
                                  random_formula(fs, props, depth - 1, rng));
        case 7: return fs.a_release(random_formula(fs, props, depth - 1, rng),
                                    random_formula(fs, props, depth - 1, rng));
        default: return fs.e_release(random_formula(fs, props, depth - 1, rng),
                                     random_formula(fs, props, depth - 1, rng));
    }
}

// ── Benchmark runner ────────────────────────────────────────────────────────

struct BenchTask {
    std::string model_name;
    Fts model;
    std::string formula;
};

struct BenchSpec {
    std::vector<BenchTask> tasks;
    int repeat = 1;           // timing repetitions, median reported
    bool compare_reuse = false;
};

struct BenchRow {
    std::string model_name;
    std::string formula;
    int calls = 0;
    long long nodes_built = 0;
    long long nodes_reused = 0;
    double ms = 0;
    long long nodes_no_reuse = 0;  // compare_reuse only
    double ms_no_reuse = 0;
};

inline BenchSpec default_bench_spec() {
    BenchSpec spec;
    spec.tasks.push_back({"vending", vending_machine(), "A[!r U r]"});
    spec.tasks.push_back({"vending", vending_machine(), "E[!r U r]"});
    for (int n : {2, 7, 10}) {
        const std::string name = "M_" + std::to_string(n);
        spec.tasks.push_back({name, mn_family(n), "AF x_ge_0"});
        spec.tasks.push_back({name, mn_family(n), "AF x_ge_1"});
    }
    return spec;
}

inline std::vector<BenchRow> run_bench(const BenchSpec& spec) {
    std::vector<BenchRow> rows;
    for (const BenchTask& task : spec.tasks) {
        BenchRow row;
        row.model_name = task.model_name;
        row.formula = task.formula;

        auto timed = [&](bool reuse, long long& nodes, long long& reused, int& calls) {
            std::vector<double> samples;
            const int repeat = std::max(1, spec.repeat);
            for (int i = 0; i < repeat; ++i) {
                Formulas fs;
                const FormulaId phi = parse_formula(task.formula, fs);
                VerifyOptions opt;
                opt.reuse = reuse;
                const auto t0 = std::chrono::steady_clock::now();
                const VerifyReport rep = run_verify(task.model, fs, phi, opt);
                const auto t1 = std::chrono::steady_clock::now();
                samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
                nodes = rep.stats.nodes_built;
                reused = rep.stats.nodes_reused;
                calls = rep.stats.calls;
            }
            std::sort(samples.begin(), samples.end());
            return samples[samples.size() / 2];
        };

        row.ms = timed(true, row.nodes_built, row.nodes_reused, row.calls);
        if (spec.compare_reuse) {
            long long reused_ignored = 0;
            int calls_ignored = 0;
            row.ms_no_reuse = timed(false, row.nodes_no_reuse, reused_ignored, calls_ignored);
        }
        rows.push_back(row);
    }
    return rows;
}

inline std::string render_bench_table(const std::vector<BenchRow>& rows, bool compare_reuse) {
    std::ostringstream os;
    os << std::left << std::setw(10) << "model" << std::setw(16) << "formula"
       << std::right << std::setw(7) << "calls" << std::setw(12) << "nodes"
       << std::setw(10) << "reused" << std::setw(12) << "ms";
    if (compare_reuse) os << std::setw(16) << "nodes(no-reuse)" << std::setw(14) << "ms(no-reuse)";
    os << "\n";
    for (const BenchRow& r : rows) {
        os << std::left << std::setw(10) << r.model_name << std::setw(16) << r.formula
           << std::right << std::setw(7) << r.calls << std::setw(12) << r.nodes_built
           << std::setw(10) << r.nodes_reused << std::setw(12) << std::fixed
           << std::setprecision(2) << r.ms;
        if (compare_reuse)
            os << std::setw(16) << r.nodes_no_reuse << std::setw(14) << std::fixed
               << std::setprecision(2) << r.ms_no_reuse;
        os << "\n";
    }
    return os.str();
}

inline std::string render_bench_csv(const std::vector<BenchRow>& rows, bool compare_reuse) {
    std::ostringstream os;
    os << "model,formula,calls,nodes_built,nodes_reused,ms";
    if (compare_reuse) os << ",nodes_no_reuse,ms_no_reuse";
    os << "\n";
    for (const BenchRow& r : rows) {
        os << r.model_name << ",\"" << r.formula << "\"," << r.calls << "," << r.nodes_built
           << "," << r.nodes_reused << "," << r.ms;
        if (compare_reuse) os << "," << r.nodes_no_reuse << "," << r.ms_no_reuse;
        os << "\n";
    }
    return os.str();
}

}  // namespace famcheck
