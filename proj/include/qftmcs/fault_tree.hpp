#pragma once

// Coherent fault-tree model: basic events with Bernoulli failure
// probabilities, AND/OR gates, a single TOP gate. Includes the text parser,
// structural validation and the canonical serializer.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qftmcs {

enum class GateOp { And, Or };

inline std::string_view to_string(GateOp op) { return op == GateOp::And ? "AND" : "OR"; }

struct BasicEvent {
    std::string id;
    double p = 0.0;

    bool operator==(const BasicEvent &) const = default;
};

struct GateEvent {
    std::string id;
    GateOp op = GateOp::And;
    std::vector<std::string> inputs;

    bool operator==(const GateEvent &) const = default;
};

/// Unchecked description of a tree, exactly as written by a user or a
/// generator. `gate_events` holds every gate including the TOP gate.
struct TreeDefinition {
    std::vector<BasicEvent> basic_events;
    std::vector<GateEvent> gate_events;
    std::string top;

    bool operator==(const TreeDefinition &) const = default;
};

enum class FaultKind {
    Syntax,
    Empty,
    DuplicateId,
    UnknownEvent,
    ProbabilityRange,
    Arity,
    DuplicateInput,
    NonCoherent,
    MissingTop,
    TopNotGate,
    Cycle,
    Orphan,
    Ordering,
};

struct Violation {
    FaultKind kind;
    std::string event;
    std::string message;
};

class FaultTreeError : public std::runtime_error {
  public:
    FaultTreeError(FaultKind kind, std::string message, std::size_t line = 0, std::size_t column = 0,
                   std::vector<Violation> violations = {})
        : std::runtime_error(format(message, line, column)),
          kind_(kind),
          line_(line),
          column_(column),
          violations_(std::move(violations)) {}

    FaultKind kind() const noexcept { return kind_; }
    /// 1-based; 0 when the error is not tied to a source position.
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::vector<Violation> &violations() const noexcept { return violations_; }

  private:
    static std::string format(const std::string &message, std::size_t line, std::size_t column) {
        if (line == 0) return message;
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
    }

    FaultKind kind_;
    std::size_t line_;
    std::size_t column_;
    std::vector<Violation> violations_;
};

inline bool is_valid_identifier(std::string_view s) {
    if (s.empty()) return false;
    auto head = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
    if (!head(s.front())) return false;
    return std::all_of(s.begin() + 1, s.end(), [&](char c) { return head(c) || (c >= '0' && c <= '9'); });
}

namespace detail {

struct EventIndex {
    // value: (is_gate, position)
    std::unordered_map<std::string, std::pair<bool, std::size_t>> by_id;

    explicit EventIndex(const TreeDefinition &def) {
        for (std::size_t i = 0; i < def.basic_events.size(); ++i) by_id.try_emplace(def.basic_events[i].id, false, i);
        for (std::size_t i = 0; i < def.gate_events.size(); ++i) by_id.try_emplace(def.gate_events[i].id, true, i);
    }

    const std::pair<bool, std::size_t> *find(const std::string &id) const {
        auto it = by_id.find(id);
        return it == by_id.end() ? nullptr : &it->second;
    }
};

}  // namespace detail

/// Reports every structural problem in `def`. An empty result means the
/// definition can be turned into a FaultTree without reordering.
inline std::vector<Violation> validate(const TreeDefinition &def) {
    std::vector<Violation> out;
    auto report = [&](FaultKind k, const std::string &ev, std::string msg) { out.push_back({k, ev, std::move(msg)}); };

    if (def.basic_events.empty()) report(FaultKind::Empty, "", "tree has no basic events");

    std::unordered_map<std::string, int> seen;
    for (const auto &be : def.basic_events) {
        if (!is_valid_identifier(be.id)) report(FaultKind::Syntax, be.id, "invalid identifier '" + be.id + "'");
        if (++seen[be.id] == 2) report(FaultKind::DuplicateId, be.id, "duplicate id " + be.id);
        if (!(be.p >= 0.0 && be.p <= 1.0))
            report(FaultKind::ProbabilityRange, be.id, "probability out of range for " + be.id + ": " + std::to_string(be.p));
    }
    for (const auto &g : def.gate_events) {
        if (!is_valid_identifier(g.id)) report(FaultKind::Syntax, g.id, "invalid identifier '" + g.id + "'");
        if (++seen[g.id] == 2) report(FaultKind::DuplicateId, g.id, "duplicate id " + g.id);
    }

    const detail::EventIndex index(def);
    bool refs_ok = true;
    for (const auto &g : def.gate_events) {
        if (g.inputs.size() < 2)
            report(FaultKind::Arity, g.id, "gate " + g.id + " has " + std::to_string(g.inputs.size()) + " input(s); at least 2 required");
        std::vector<std::string> sorted = g.inputs;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            report(FaultKind::DuplicateInput, g.id, "gate " + g.id + " lists the same input twice");
        for (const auto &in : g.inputs) {
            if (!index.find(in)) {
                refs_ok = false;
                report(FaultKind::UnknownEvent, g.id, "gate " + g.id + " references unknown event " + in);
            }
        }
    }

    const auto *top = def.top.empty() ? nullptr : index.find(def.top);
    if (def.top.empty()) {
        report(FaultKind::MissingTop, "", "no top event declared");
    } else if (!top) {
        report(FaultKind::UnknownEvent, def.top, "top references unknown event " + def.top);
    } else if (!top->first) {
        report(FaultKind::TopNotGate, def.top, "top event " + def.top + " must be a gate");
    }
    if (!refs_ok) return out;

    // Cycle detection over gate -> gate edges.
    const std::size_t n = def.gate_events.size();
    std::vector<int> colour(n, 0);
    bool cyclic = false;
    std::vector<std::pair<std::size_t, std::size_t>> stack;
    for (std::size_t root = 0; root < n; ++root) {
        if (colour[root] != 0) continue;
        stack.push_back({root, 0});
        colour[root] = 1;
        while (!stack.empty()) {
            auto &[g, next] = stack.back();
            const auto &inputs = def.gate_events[g].inputs;
            if (next == inputs.size()) {
                colour[g] = 2;
                stack.pop_back();
                continue;
            }
            const auto *ref = index.find(inputs[next++]);
            if (!ref->first) continue;
            if (colour[ref->second] == 1) {
                cyclic = true;
                const auto &id = def.gate_events[ref->second].id;
                report(FaultKind::Cycle, id, "cycle at " + id);
            } else if (colour[ref->second] == 0) {
                colour[ref->second] = 1;
                stack.push_back({ref->second, 0});
            }
        }
    }

    if (top && top->first) {
        std::vector<char> reach_basic(def.basic_events.size(), 0), reach_gate(n, 0);
        std::vector<std::size_t> todo{top->second};
        reach_gate[top->second] = 1;
        while (!todo.empty()) {
            std::size_t g = todo.back();
            todo.pop_back();
            for (const auto &in : def.gate_events[g].inputs) {
                const auto *ref = index.find(in);
                if (!ref->first) {
                    reach_basic[ref->second] = 1;
                } else if (!reach_gate[ref->second]) {
                    reach_gate[ref->second] = 1;
                    todo.push_back(ref->second);
                }
            }
        }
        for (std::size_t i = 0; i < def.basic_events.size(); ++i)
            if (!reach_basic[i]) report(FaultKind::Orphan, def.basic_events[i].id, "event " + def.basic_events[i].id + " does not lead to the top event");
        for (std::size_t i = 0; i < n; ++i)
            if (!reach_gate[i]) report(FaultKind::Orphan, def.gate_events[i].id, "event " + def.gate_events[i].id + " does not lead to the top event");
    }

    if (!cyclic) {
        for (std::size_t j = 0; j < n; ++j) {
            for (const auto &in : def.gate_events[j].inputs) {
                const auto *ref = index.find(in);
                if (ref->first && ref->second >= j)
                    report(FaultKind::Ordering, def.gate_events[j].id,
                           "gate " + def.gate_events[j].id + " is defined before its input " + in);
            }
        }
        if (top && top->first && top->second + 1 != n)
            report(FaultKind::Ordering, def.top, "top gate " + def.top + " must be the last gate");
    }
    return out;
}

/// Stable topological order of the gates (earliest-defined ready gate
/// first), TOP last. Input lists are untouched. Definitions with cycles or
/// dangling references are returned unchanged.
inline TreeDefinition sort_topologically(TreeDefinition def) {
    const detail::EventIndex index(def);
    const std::size_t n = def.gate_events.size();
    std::vector<std::vector<std::size_t>> deps(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (const auto &in : def.gate_events[j].inputs) {
            const auto *ref = index.find(in);
            if (!ref) return def;
            if (ref->first) deps[j].push_back(ref->second);
        }
    }
    const auto *top = index.find(def.top);
    const std::size_t top_pos = (top && top->first) ? top->second : n;

    std::vector<char> placed(n, 0);
    std::vector<std::size_t> order;
    order.reserve(n);
    while (order.size() + (top_pos < n ? 1 : 0) < n) {
        bool progressed = false;
        for (std::size_t j = 0; j < n; ++j) {
            if (placed[j] || j == top_pos) continue;
            if (std::all_of(deps[j].begin(), deps[j].end(), [&](std::size_t d) { return placed[d] != 0; })) {
                placed[j] = 1;
                order.push_back(j);
                progressed = true;
                break;
            }
        }
        if (!progressed) return def;
    }
    if (top_pos < n) order.push_back(top_pos);

    std::vector<GateEvent> sorted;
    sorted.reserve(n);
    for (std::size_t j : order) sorted.push_back(std::move(def.gate_events[j]));
    def.gate_events = std::move(sorted);
    return def;
}

/// Input of a gate, resolved to a position in basic_events() or gate_events().
struct EventRef {
    bool is_gate = false;
    std::size_t index = 0;

    bool operator==(const EventRef &) const = default;
};

/// Validated, topologically ordered fault tree. Immutable once built.
class FaultTree {
  public:
    /// Sorts gates topologically, validates, and resolves input references.
    /// Throws FaultTreeError carrying every violation on failure.
    static FaultTree build(TreeDefinition def) {
        def = sort_topologically(std::move(def));
        auto violations = validate(def);
        if (!violations.empty()) {
            FaultKind kind = violations.front().kind;
            std::string msg = violations.front().message;
            for (std::size_t i = 1; i < violations.size(); ++i) msg += "; " + violations[i].message;
            throw FaultTreeError(kind, msg, 0, 0, std::move(violations));
        }
        return FaultTree(std::move(def));
    }

    const TreeDefinition &definition() const noexcept { return def_; }
    const std::vector<BasicEvent> &basic_events() const noexcept { return def_.basic_events; }
    /// Every gate in topological order; the TOP gate is last.
    const std::vector<GateEvent> &gate_events() const noexcept { return def_.gate_events; }
    std::span<const GateEvent> intermediate_events() const noexcept {
        return std::span<const GateEvent>(def_.gate_events).first(n_ie());
    }
    const GateEvent &top_gate() const noexcept { return def_.gate_events.back(); }

    std::size_t n_be() const noexcept { return def_.basic_events.size(); }
    std::size_t n_ie() const noexcept { return def_.gate_events.size() - 1; }
    /// Index of the TOP gate within gate_events().
    std::size_t top_index() const noexcept { return n_ie(); }

    std::span<const EventRef> inputs(std::size_t gate) const noexcept { return inputs_[gate]; }

    std::vector<double> probabilities() const {
        std::vector<double> p;
        p.reserve(n_be());
        for (const auto &be : def_.basic_events) p.push_back(be.p);
        return p;
    }

  private:
    explicit FaultTree(TreeDefinition def) : def_(std::move(def)) {
        const detail::EventIndex index(def_);
        inputs_.resize(def_.gate_events.size());
        for (std::size_t g = 0; g < def_.gate_events.size(); ++g)
            for (const auto &in : def_.gate_events[g].inputs) {
                const auto *ref = index.find(in);
                inputs_[g].push_back({ref->first, ref->second});
            }
    }

    TreeDefinition def_;
    std::vector<std::vector<EventRef>> inputs_;
};

inline std::vector<Violation> validate(const FaultTree &tree) { return validate(tree.definition()); }

/// Shortest decimal text that parses back to exactly `value`.
inline std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

/// Canonical text: basics in input order, gates in topological order, then `top`.
inline std::string serialize(const FaultTree &tree) {
    std::string out;
    for (const auto &be : tree.basic_events()) out += "basic " + be.id + " p=" + format_double(be.p) + "\n";
    for (const auto &g : tree.gate_events()) {
        out += "gate " + g.id + " " + std::string(to_string(g.op));
        for (const auto &in : g.inputs) out += " " + in;
        out += "\n";
    }
    out += "top " + tree.definition().top + "\n";
    return out;
}

namespace detail {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size()) break;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        tokens.push_back({line.substr(start, i - start), start + 1});
    }
    return tokens;
}

}  // namespace detail

/// Parses the line-oriented tree format:
///
///     basic <id> p=<float>
///     gate <id> <AND|OR> <id> <id>...
///     top <id>
///
/// `#` starts a comment. Gates may appear in any order; they are re-sorted.
inline FaultTree parse_fault_tree(std::istream &in) {
    TreeDefinition def;
    std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> where;
    std::size_t top_line = 0, top_column = 0;
    std::string raw;
    std::size_t line_no = 0;

    auto check_id = [&](const detail::Token &tok) {
        std::string id(tok.text);
        if (!is_valid_identifier(id))
            throw FaultTreeError(FaultKind::Syntax, "invalid identifier '" + id + "'", line_no, tok.column);
        return id;
    };
    auto declare = [&](const detail::Token &tok) {
        std::string id = check_id(tok);
        if (!where.try_emplace(id, line_no, tok.column).second)
            throw FaultTreeError(FaultKind::DuplicateId, "duplicate id " + id, line_no, tok.column);
        return id;
    };

    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tokens = detail::tokenize(line);
        if (tokens.empty()) continue;
        const auto &kw = tokens[0];

        if (kw.text == "basic") {
            if (tokens.size() != 3)
                throw FaultTreeError(FaultKind::Syntax, "expected 'basic <id> p=<float>'", line_no, kw.column);
            std::string id = declare(tokens[1]);
            std::string_view pv = tokens[2].text;
            if (pv.substr(0, 2) != "p=")
                throw FaultTreeError(FaultKind::Syntax, "expected 'p=<float>'", line_no, tokens[2].column);
            pv.remove_prefix(2);
            double p = 0.0;
            auto res = std::from_chars(pv.data(), pv.data() + pv.size(), p);
            if (res.ec != std::errc() || res.ptr != pv.data() + pv.size() || !std::isfinite(p))
                throw FaultTreeError(FaultKind::Syntax, "malformed probability '" + std::string(pv) + "'", line_no,
                                     tokens[2].column + 2);
            if (p < 0.0 || p > 1.0)
                throw FaultTreeError(FaultKind::ProbabilityRange,
                                     "probability out of range for " + id + ": " + std::string(pv), line_no,
                                     tokens[2].column + 2);
            def.basic_events.push_back({std::move(id), p});
        } else if (kw.text == "gate") {
            if (tokens.size() < 3)
                throw FaultTreeError(FaultKind::Syntax, "expected 'gate <id> <AND|OR> <inputs...>'", line_no, kw.column);
            std::string id = declare(tokens[1]);
            GateOp op;
            if (tokens[2].text == "AND") {
                op = GateOp::And;
            } else if (tokens[2].text == "OR") {
                op = GateOp::Or;
            } else {
                throw FaultTreeError(FaultKind::NonCoherent,
                                     "non-coherent tree unsupported: operator '" + std::string(tokens[2].text) + "'",
                                     line_no, tokens[2].column);
            }
            if (tokens.size() < 5)
                throw FaultTreeError(FaultKind::Arity, "gate " + id + " needs at least 2 inputs", line_no, tokens[1].column);
            GateEvent g{std::move(id), op, {}};
            for (std::size_t t = 3; t < tokens.size(); ++t) g.inputs.push_back(check_id(tokens[t]));
            def.gate_events.push_back(std::move(g));
        } else if (kw.text == "top") {
            if (tokens.size() != 2) throw FaultTreeError(FaultKind::Syntax, "expected 'top <id>'", line_no, kw.column);
            if (!def.top.empty())
                throw FaultTreeError(FaultKind::DuplicateId, "top declared twice", line_no, kw.column);
            def.top = check_id(tokens[1]);
            top_line = line_no;
            top_column = tokens[1].column;
        } else {
            throw FaultTreeError(FaultKind::Syntax, "unknown directive '" + std::string(kw.text) + "'", line_no, kw.column);
        }
    }

    const std::string top_id = def.top;
    try {
        return FaultTree::build(std::move(def));
    } catch (const FaultTreeError &e) {
        const auto &v = e.violations().front();
        std::size_t line = 0, col = 0;
        if (auto it = where.find(v.event); it != where.end()) {
            line = it->second.first;
            col = it->second.second;
        } else if (v.kind == FaultKind::MissingTop || v.event == top_id) {
            line = top_line;
            col = top_column;
        }
        throw FaultTreeError(e.kind(), std::string(e.what()), line, col, e.violations());
    }
}

inline FaultTree parse_fault_tree(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_fault_tree(in);
}

}  // namespace qftmcs
