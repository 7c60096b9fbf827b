#include "doctest.h"

#include <map>
#include <random>

#include "famcheck/bench.hpp"
#include "famcheck/oracle.hpp"

using namespace famcheck;

TEST_CASE("vending machine variants against the until property") {
    const Fts vm = vending_machine();
    Formulas fs;
    const FormulaId phi1 = parse_formula("A[!r U r]", fs);
    const FormulaId phi2 = parse_formula("E[!r U r]", fs);

    CHECK(check_ts(project(vm, Config{0b00}), fs, phi1));
    CHECK(check_ts(project(vm, Config{0b00}), fs, fs.tt()));
    CHECK_FALSE(check_ts(project(vm, Config{0b01}), fs, phi1));  // cancel, no free drinks

    std::map<std::uint32_t, bool> phi1_verdicts;
    for (const auto& [k, v] : check_variants(vm, fs, phi1)) phi1_verdicts[k.bits] = v;
    CHECK(phi1_verdicts == std::map<std::uint32_t, bool>{
                               {0b00, true}, {0b01, false}, {0b10, true}, {0b11, true}});

    for (const auto& [k, v] : check_variants(vm, fs, phi2)) CHECK(v);
}

TEST_CASE("M_2 violates eventually-positive only when everything is disabled") {
    const Fts m2 = mn_family(2);
    Formulas fs;
    const FormulaId phi = parse_formula("AF x_ge_1", fs);
    for (const auto& [k, v] : check_variants(m2, fs, phi))
        CHECK(v == (k.bits != 0));
    const FormulaId base = parse_formula("AF x_ge_0", fs);
    for (const auto& [k, v] : check_variants(m2, fs, base)) CHECK(v);
}

TEST_CASE("oracle rejects non-total systems") {
    Ts ts;
    ts.add_state("s0");
    ts.add_state("s1");
    ts.mark_initial(0);
    ts.transitions.push_back({0, ts.add_action("go"), 1});
    Formulas fs;
    CHECK_THROWS_AS(check_ts(ts, fs, fs.tt()), std::invalid_argument);
}

TEST_CASE("release duality against an until check") {
    std::mt19937 rng(31);
    Formulas fs;
    const std::vector<std::string> props{"p", "q"};
    for (int seed = 0; seed < 40; ++seed) {
        Fts fts = random_fts(4000 + static_cast<unsigned>(seed), 5, 2);
        fts.core.initial = {0};
        const FormulaId lhs = random_formula(fs, props, 2, rng);
        const FormulaId rhs = random_formula(fs, props, 2, rng);
        const FormulaId release = fs.a_release(lhs, rhs);
        const FormulaId dual = fs.e_until(fs.negate(lhs), fs.negate(rhs));
        for (Config k : fts.space.configs()) {
            const Ts variant = project(fts, k);
            REQUIRE(check_ts(variant, fs, release) == !check_ts(variant, fs, dual));
        }
    }
}

TEST_CASE("brute-force checking commutes with subspace projection") {
    std::mt19937 rng(37);
    Formulas fs;
    const std::vector<std::string> props{"p", "q"};
    for (int seed = 0; seed < 30; ++seed) {
        const Fts fts = random_fts(5000 + static_cast<unsigned>(seed), 5, 3);
        const FormulaId phi = random_formula(fs, props, 3, rng);

        std::vector<Config> sub;
        for (Config k : fts.space.configs())
            if (rng() % 2) sub.push_back(k);
        if (sub.empty()) continue;
        const Fts projected = project(fts, fts.space.with_configs(sub));

        std::map<std::uint32_t, bool> whole;
        for (const auto& [k, v] : check_variants(fts, fs, phi)) whole[k.bits] = v;
        for (const auto& [k, v] : check_variants(projected, fs, phi))
            REQUIRE(whole.at(k.bits) == v);
    }
}

TEST_CASE("unknown propositions are simply never labeled") {
    const Fts vm = vending_machine();
    Formulas fs;
    CHECK_FALSE(check_ts(project(vm, Config{0}), fs, fs.lit("nonexistent")));
    CHECK(check_ts(project(vm, Config{0}), fs, fs.lit("nonexistent", true)));
}
