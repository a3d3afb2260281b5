#pragma once

// Command implementations behind the qft-mcs executable. Each command takes
// a RunConfig, writes artifacts under cfg.out_dir, prints a short summary to
// `out` and diagnostics to `err`, and returns a process exit code.
//
// Every artifact begins with `#` lines recording tool version, command
// parameters, seed and the SHA-256 of the input file. Nothing time- or
// host-dependent is written, so identical configs give identical bytes.
//
// Requires OpenSSL libcrypto at link time.

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qftmcs/analytics.hpp"
#include "qftmcs/capacity.hpp"
#include "qftmcs/classical.hpp"
#include "qftmcs/fault_tree.hpp"
#include "qftmcs/qaa.hpp"

namespace qftmcs {

inline constexpr const char *kToolVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitInvalidInput = 1, kExitIo = 2, kExitCapacity = 3 };

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::filesystem::path input;
    std::optional<Variant> variant;
    /// Single iteration count; overrides j_max for sweep.
    std::optional<unsigned> j;
    unsigned j_max = 10;
    std::optional<unsigned> j_naive;
    std::optional<unsigned> j_proposed;
    std::size_t shots = 1024;
    /// Skip sampling; report exact probabilities only.
    bool exact_only = false;
    bool literal_shots = false;
    std::uint64_t seed = 1;
    std::size_t trials = 200;
    std::filesystem::path out_dir = ".";
    unsigned max_qubits = kDefaultMaxQubits;
};

inline std::string sha256_hex(const std::string &bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 computation failed");
    std::ostringstream os;
    os << std::hex << std::setfill('0');
    for (unsigned i = 0; i < len; ++i) os << std::setw(2) << static_cast<unsigned>(md[i]);
    return os.str();
}

namespace detail {

inline std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open input file '" + p.string() + "'");
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error reading '" + p.string() + "'");
    return s;
}

struct LoadedTree {
    FaultTree tree;
    std::string digest;
};

inline LoadedTree load_tree(const RunConfig &cfg) {
    const std::string text = read_file(cfg.input);
    return {parse_fault_tree(std::string_view(text)), sha256_hex(text)};
}

inline std::string header(const RunConfig &cfg, const std::string &digest, const std::string &params) {
    std::ostringstream os;
    os << "# tool=qft-mcs " << kToolVersion << '\n'
       << "# command=" << cfg.command << (params.empty() ? "" : " ") << params << '\n'
       << "# seed=" << cfg.seed << '\n'
       << "# input=" << cfg.input.filename().string() << " sha256=" << digest << '\n';
    return os.str();
}

inline void write_artifact(const RunConfig &cfg, const std::string &name, const std::string &content) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.out_dir.string() + "': " + ec.message());
    const auto path = cfg.out_dir / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write '" + path.string() + "'");
    f << content;
    f.close();
    if (!f) throw IoError("error writing '" + path.string() + "'");
}

inline std::size_t effective_shots(const RunConfig &cfg) { return cfg.exact_only ? 0 : cfg.shots; }

}  // namespace detail

inline int cmd_validate(const RunConfig &cfg, std::ostream &out) {
    const auto loaded = detail::load_tree(cfg);
    const auto &t = loaded.tree;
    out << "valid: N_BE=" << t.n_be() << " N_IE=" << t.n_ie() << " top=" << t.definition().top << '\n';
    return kExitOk;
}

/// Writes enumeration.csv: one row per configuration.
inline int cmd_enumerate(const RunConfig &cfg, std::ostream &out) {
    const auto loaded = detail::load_tree(cfg);
    const auto e = enumerate_mcs(loaded.tree);
    std::ostringstream csv;
    csv << detail::header(cfg, loaded.digest, "");
    write_enumeration_csv(csv, loaded.tree, e);
    detail::write_artifact(cfg, "enumeration.csv", csv.str());
    out << "cut_sets=" << e.cut_sets << " mcs=" << e.mcs_masks.size() << " configs=" << e.configs << '\n';
    for (auto m : e.mcs_masks) out << "  " << Config::from_mask(m, loaded.tree.n_be()).to_string() << '\n';
    return kExitOk;
}

/// Writes sweep_<variant>.csv with one row per iteration count.
inline int cmd_sweep(const RunConfig &cfg, std::ostream &out) {
    if (!cfg.variant) throw std::invalid_argument("sweep needs --variant naive|proposed");
    const auto loaded = detail::load_tree(cfg);
    const Variant v = *cfg.variant;
    check_qubit_capacity(required_qubits(loaded.tree, v), cfg.max_qubits);

    RunOptions opt;
    opt.shots = detail::effective_shots(cfg);
    opt.seed = cfg.seed;
    opt.literal_shots = cfg.literal_shots;
    opt.max_qubits = cfg.max_qubits;

    std::vector<AmplifiedRun> runs;
    if (cfg.j) {
        auto r = run_variant(loaded.tree, v, *cfg.j, opt);
        r.samples.clear();
        runs.push_back(std::move(r));
    } else {
        runs = sweep(loaded.tree, v, cfg.j_max, opt);
    }

    std::ostringstream params;
    params << "variant=" << to_string(v) << ' '
           << (cfg.j ? "j=" + std::to_string(*cfg.j) : "j_max=" + std::to_string(cfg.j_max)) << " shots=" << opt.shots
           << " literal_shots=" << (cfg.literal_shots ? 1 : 0);
    std::ostringstream csv;
    csv << detail::header(cfg, loaded.digest, params.str());
    write_runs_csv(csv, runs);
    const std::string name = "sweep_" + std::string(to_string(v)) + ".csv";
    detail::write_artifact(cfg, name, csv.str());

    for (const auto &r : runs)
        out << "j=" << r.j << " flag=" << detail::fixed(r.exact_flag_probability, 6)
            << " mcs=" << detail::fixed(r.exact_mcs_probability, 6) << '\n';
    return kExitOk;
}

/// Writes compare.csv and compare.txt.
inline int cmd_compare(const RunConfig &cfg, std::ostream &out) {
    const auto loaded = detail::load_tree(cfg);
    check_qubit_capacity(required_qubits(loaded.tree, Variant::Proposed), cfg.max_qubits);
    CompareOptions opt;
    opt.j_naive = cfg.j_naive;
    opt.j_proposed = cfg.j_proposed;
    opt.trials = cfg.trials;
    opt.seed = cfg.seed;
    opt.max_qubits = cfg.max_qubits;
    const auto report = compare_methods(loaded.tree, opt);

    std::ostringstream params;
    params << "j_naive=" << (cfg.j_naive ? std::to_string(*cfg.j_naive) : "auto")
           << " j_proposed=" << (cfg.j_proposed ? std::to_string(*cfg.j_proposed) : "auto")
           << " trials=" << cfg.trials;
    const std::string head = detail::header(cfg, loaded.digest, params.str());
    std::ostringstream csv, table;
    csv << head;
    write_report_csv(csv, report);
    table << head;
    write_report_table(table, report);
    detail::write_artifact(cfg, "compare.csv", csv.str());
    detail::write_artifact(cfg, "compare.txt", table.str());
    write_report_table(out, report);
    return kExitOk;
}

/// Dispatches on cfg.command and maps failures to exit codes.
inline int run_command(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    try {
        if (cfg.command == "validate") return cmd_validate(cfg, out);
        if (cfg.command == "enumerate") return cmd_enumerate(cfg, out);
        if (cfg.command == "sweep") return cmd_sweep(cfg, out);
        if (cfg.command == "compare") return cmd_compare(cfg, out);
        err << "error: unknown command '" << cfg.command << "'\n";
        return kExitInvalidInput;
    } catch (const FaultTreeError &e) {
        err << "error: " << cfg.input.string() << ": " << e.what() << '\n';
        for (const auto &v : e.violations()) err << "  " << v.message << '\n';
        return kExitInvalidInput;
    } catch (const IoError &e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const CapacityError &e) {
        err << "error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const std::bad_alloc &) {
        err << "error: out of memory\n";
        return kExitCapacity;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    }
}

}  // namespace qftmcs
