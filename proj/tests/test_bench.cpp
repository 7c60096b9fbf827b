#include "doctest.h"

#include <algorithm>
#include <set>

#include "famcheck/bench.hpp"
#include "famcheck/model_io.hpp"

using namespace famcheck;

TEST_CASE("vending machine shape") {
    const Fts vm = vending_machine();
    CHECK(vm.core.states.size() == 3);
    CHECK(vm.core.transitions.size() == 5);
    CHECK(vm.space.size() == 4);
    CHECK(vm.core.props == std::vector<std::string>{"r"});
    CHECK_NOTHROW(validate(vm));
}

TEST_CASE("mn_family shapes and values") {
    for (int n = 1; n <= 6; ++n) {
        const Fts m = mn_family(n);
        CHECK(m.core.states.size() == (1u << (n + 1)) - 1);
        CHECK(m.space.size() == (1u << n));
        CHECK_NOTHROW(validate(m));

        std::size_t self_loops = 0;
        for (const Transition& t : m.core.transitions) self_loops += t.src == t.dst;
        CHECK(self_loops == (1u << n));

        const std::vector<long long> values = mn_state_values(n);
        const long long leaves_start = (1ll << n) - 1;
        std::set<long long> leaf_values(values.begin() + leaves_start, values.end());
        CHECK(leaf_values.size() == (1u << n));  // bijective onto 0..2^n-1
        CHECK(*leaf_values.begin() == 0);
        CHECK(*leaf_values.rbegin() == (1ll << n) - 1);

        // Labels reflect the accumulated value.
        const int ge1 = 1;
        for (std::size_t s = 0; s < values.size(); ++s) {
            CHECK(m.core.has_label(static_cast<int>(s), 0));  // x_ge_0 everywhere
            CHECK(m.core.has_label(static_cast<int>(s), ge1) == (values[s] >= 1));
        }
    }

    const std::vector<long long> m2 = mn_state_values(2);
    CHECK(std::vector<long long>(m2.begin() + 3, m2.end()) ==
          std::vector<long long>{3, 1, 2, 0});
    const std::vector<long long> m1 = mn_state_values(1);
    CHECK(m1 == std::vector<long long>{0, 1, 0});

    CHECK_THROWS_AS(mn_family(0), std::invalid_argument);
}

TEST_CASE("random families are deterministic, valid, and total everywhere") {
    for (unsigned seed = 0; seed < 30; ++seed) {
        const Fts a = random_fts(seed, 6, 3);
        const Fts b = random_fts(seed, 6, 3);
        REQUIRE(save_model(a) == save_model(b));
        CHECK_NOTHROW(validate(a));
        for (Config k : a.space.configs()) CHECK(project(a, k).is_total());
    }
    CHECK_THROWS_AS(random_fts(1, 9, 3), std::invalid_argument);
    CHECK_THROWS_AS(random_fts(1, 4, 6), std::invalid_argument);
}

TEST_CASE("bench runner") {
    CHECK(run_bench(BenchSpec{}).empty());

    BenchSpec spec;
    spec.compare_reuse = true;
    spec.tasks.push_back({"vending", vending_machine(), "A[!r U r]"});
    spec.tasks.push_back({"M_2", mn_family(2), "AF x_ge_0"});
    spec.tasks.push_back({"M_2", mn_family(2), "AF x_ge_1"});
    const std::vector<BenchRow> rows = run_bench(spec);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].calls == 5);
    CHECK(rows[1].calls == 1);
    CHECK(rows[2].calls == 5);
    for (const BenchRow& r : rows) CHECK(r.nodes_built <= r.nodes_no_reuse);
    CHECK(rows[0].nodes_built < rows[0].nodes_no_reuse);

    const std::string table = render_bench_table(rows, true);
    CHECK(table.find("vending") != std::string::npos);
    const std::string csv = render_bench_csv(rows, true);
    CHECK(csv.find("model,formula,calls") != std::string::npos);
}
