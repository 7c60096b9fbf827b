// famcheck — family-based CTL checking of featured transition systems.
//
//   famcheck check MODEL FORMULA    verify every variant, report the partition
//   famcheck oracle MODEL FORMULA   brute-force per-variant table
//   famcheck game MODEL FORMULA DOT colored game-graph of the join abstraction
//   famcheck bench                  built-in model/formula matrix
//   famcheck gen KIND               emit a model file (vending, mn, random)
//
// Exit codes: 0 all variants satisfy, 1 some variant violates, 2 bad input.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "famcheck/bench.hpp"
#include "famcheck/model_io.hpp"
#include "famcheck/oracle.hpp"
#include "famcheck/verify.hpp"

namespace {

using namespace famcheck;

int cmd_check(const std::string& model_path, const std::string& formula_text, bool no_reuse,
              bool stats, const std::string& dot_dir, const std::string& report_format) {
    const Fts fts = load_model(model_path);
    Formulas fs;
    const FormulaId phi = parse_formula(formula_text, fs);

    VerifyOptions opt;
    opt.reuse = !no_reuse;
    if (!dot_dir.empty()) {
        std::filesystem::create_directories(dot_dir);
        opt.on_iteration = [&fs, dot_dir](int iteration, const Mts& mts, const GameGraph& g,
                                          const Coloring& c) {
            std::ostringstream name;
            name << "iter_" << std::setfill('0') << std::setw(3) << iteration << ".dot";
            std::ofstream out(std::filesystem::path(dot_dir) / name.str());
            to_dot(out, g, c, mts, fs);
        };
    }

    const VerifyReport report = run_verify(fts, fs, phi, opt);
    if (report_format == "structured")
        std::cout << render_json(report, fts.space) << "\n";
    else
        std::cout << render_text(report, fts.space, stats);
    return violated_configs(report).empty() ? 0 : 1;
}

int cmd_oracle(const std::string& model_path, const std::string& formula_text) {
    const Fts fts = load_model(model_path);
    Formulas fs;
    const FormulaId phi = parse_formula(formula_text, fs);
    for (const auto& [k, verdict] : check_variants(fts, fs, phi))
        std::cout << std::left << std::setw(24) << fts.space.config_to_string(k)
                  << (verdict ? "tt" : "ff") << "\n";
    return 0;
}

int cmd_game(const std::string& model_path, const std::string& formula_text,
             const std::string& dot_path) {
    const Fts fts = load_model(model_path);
    Formulas fs;
    const FormulaId phi = parse_formula(formula_text, fs);
    const Mts mts = abstract_join(fts);
    const GameRun run = solve_game(mts, fs, phi);

    std::ofstream out(dot_path);
    if (!out) throw std::runtime_error("cannot write DOT file: " + dot_path);
    to_dot(out, run.graph, run.coloring, mts, fs);
    std::cout << "abstract check: " << to_string(run.verdict) << ", " << run.graph.size()
              << " nodes -> " << dot_path << "\n";
    return 0;
}

int cmd_bench(const std::vector<int>& sizes, int repeat, bool csv, bool compare_reuse) {
    BenchSpec spec;
    spec.repeat = repeat;
    spec.compare_reuse = compare_reuse;
    if (sizes.empty()) {
        spec = default_bench_spec();
        spec.repeat = repeat;
        spec.compare_reuse = compare_reuse;
    } else {
        spec.tasks.push_back({"vending", vending_machine(), "A[!r U r]"});
        spec.tasks.push_back({"vending", vending_machine(), "E[!r U r]"});
        for (int n : sizes) {
            const std::string name = "M_" + std::to_string(n);
            spec.tasks.push_back({name, mn_family(n), "AF x_ge_0"});
            spec.tasks.push_back({name, mn_family(n), "AF x_ge_1"});
        }
    }
    const std::vector<BenchRow> rows = run_bench(spec);
    std::cout << (csv ? render_bench_csv(rows, compare_reuse)
                      : render_bench_table(rows, compare_reuse));
    return 0;
}

int cmd_gen(const std::string& kind, int n, unsigned seed, int states, int features,
            const std::string& out_path) {
    Fts fts;
    if (kind == "vending")
        fts = vending_machine();
    else if (kind == "mn")
        fts = mn_family(n);
    else if (kind == "random")
        fts = random_fts(seed, states, features);
    else
        throw std::invalid_argument("unknown model kind: " + kind);

    const std::string text = save_model(fts);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write model file: " + out_path);
        out << text;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"family-based CTL checking of featured transition systems"};
    app.require_subcommand(1);

    std::string model_path, formula_text, dot_path, dot_dir, report_format = "text";
    bool no_reuse = false, stats = false;

    CLI::App* check = app.add_subcommand("check", "verify all variants");
    check->add_option("model", model_path, "model file")->required();
    check->add_option("formula", formula_text, "CTL formula")->required();
    check->add_flag("--no-reuse", no_reuse, "disable incremental game-graph reuse");
    check->add_flag("--stats", stats, "print per-run statistics");
    check->add_option("--dot-dir", dot_dir, "write one colored game-graph per iteration");
    check->add_option("--report", report_format, "output format: text or structured")
        ->check(CLI::IsMember({"text", "structured"}));

    CLI::App* oracle = app.add_subcommand("oracle", "brute-force per-variant verdicts");
    oracle->add_option("model", model_path, "model file")->required();
    oracle->add_option("formula", formula_text, "CTL formula")->required();

    CLI::App* game = app.add_subcommand("game", "export the colored game-graph");
    game->add_option("model", model_path, "model file")->required();
    game->add_option("formula", formula_text, "CTL formula")->required();
    game->add_option("dot", dot_path, "output DOT file")->required();

    std::vector<int> bench_sizes;
    int repeat = 1;
    bool csv = false, compare_reuse = false;
    CLI::App* bench = app.add_subcommand("bench", "run the benchmark matrix");
    bench->add_option("--n", bench_sizes, "tree-family sizes (default: 2 7 10)");
    bench->add_option("--repeat", repeat, "timing repetitions, median reported");
    bench->add_flag("--csv", csv, "emit CSV");
    bench->add_flag("--compare-reuse", compare_reuse, "also run with reuse disabled");

    std::string gen_kind, gen_out;
    int gen_n = 2, gen_states = 5, gen_features = 3;
    unsigned gen_seed = 1;
    CLI::App* gen = app.add_subcommand("gen", "emit a model file");
    gen->add_option("kind", gen_kind, "vending | mn | random")->required();
    gen->add_option("--n", gen_n, "tree depth for mn");
    gen->add_option("--seed", gen_seed, "seed for random");
    gen->add_option("--states", gen_states, "state count for random");
    gen->add_option("--features", gen_features, "feature count for random");
    gen->add_option("-o,--out", gen_out, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed())
            return cmd_check(model_path, formula_text, no_reuse, stats, dot_dir,
                             report_format);
        if (oracle->parsed()) return cmd_oracle(model_path, formula_text);
        if (game->parsed()) return cmd_game(model_path, formula_text, dot_path);
        if (bench->parsed()) return cmd_bench(bench_sizes, repeat, csv, compare_reuse);
        if (gen->parsed())
            return cmd_gen(gen_kind, gen_n, gen_seed, gen_states, gen_features, gen_out);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
