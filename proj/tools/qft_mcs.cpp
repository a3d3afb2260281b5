// qft-mcs: fault-tree validation, classical MCS enumeration, amplitude
// amplification sweeps and sample-cost comparison.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "qftmcs/commands.hpp"

int main(int argc, char **argv) {
    qftmcs::RunConfig cfg;
    CLI::App app{"Quantum fault-tree minimal cut set sampling"};
    app.set_version_flag("--version", std::string(qftmcs::kToolVersion));
    app.require_subcommand(1);

    std::string input;
    std::string variant;
    unsigned j = 0;
    unsigned j_naive = 0;
    unsigned j_proposed = 0;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--input", input, "Fault-tree file")->required();
        sub->add_option("--out", cfg.out_dir, "Output directory")->default_val(".");
        sub->add_option("--seed", cfg.seed, "Base RNG seed")->default_val(1);
    };

    auto *validate = app.add_subcommand("validate", "Parse and check a fault-tree file");
    validate->add_option("--input", input, "Fault-tree file")->required();

    auto *enumerate = app.add_subcommand("enumerate", "Brute-force cut sets and minimal cut sets");
    add_common(enumerate);

    const std::map<std::string, qftmcs::Variant> variants{{"naive", qftmcs::Variant::Naive},
                                                          {"proposed", qftmcs::Variant::Proposed}};
    auto *sweep = app.add_subcommand("sweep", "Probability of sampling an MCS for j = 0..j_max");
    add_common(sweep);
    sweep->add_option("--variant", variant, "naive | proposed")->required()->check(CLI::IsMember({"naive", "proposed"}));
    auto *j_opt = sweep->add_option("--j", j, "Single iteration count");
    sweep->add_option("--j-max", cfg.j_max, "Largest iteration count")->default_val(10)->excludes(j_opt);
    sweep->add_option("--shots", cfg.shots, "Samples per row")->default_val(1024)->check(CLI::PositiveNumber);
    sweep->add_flag("--exact-only", cfg.exact_only, "Report exact probabilities only");
    sweep->add_flag("--literal-shots", cfg.literal_shots, "Re-evolve the circuit for every shot");
    sweep->add_option("--max-qubits", cfg.max_qubits, "Statevector size cap")->default_val(qftmcs::kDefaultMaxQubits);

    auto *compare = app.add_subcommand("compare", "Expected samples to collect every MCS");
    add_common(compare);
    auto *jn_opt = compare->add_option("--j-naive", j_naive, "Naive iteration count (default: best in 0..12)");
    auto *jp_opt = compare->add_option("--j-proposed", j_proposed, "Proposed iteration count (default: best in 0..12)");
    compare->add_option("--trials", cfg.trials, "Coupon-collection trials per method (0 = closed form only)")
        ->default_val(200);
    compare->add_option("--max-qubits", cfg.max_qubits, "Statevector size cap")->default_val(qftmcs::kDefaultMaxQubits);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return qftmcs::kExitInvalidInput;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    cfg.input = input;
    if (!variant.empty()) cfg.variant = variants.at(variant);
    if (*j_opt) cfg.j = j;
    if (*jn_opt) cfg.j_naive = j_naive;
    if (*jp_opt) cfg.j_proposed = j_proposed;
    return qftmcs::run_command(cfg, std::cout, std::cerr);
}
