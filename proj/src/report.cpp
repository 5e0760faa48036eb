#include "tydp/report.hpp"

#include <chrono>

#include <json.hpp>

namespace tydp {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Diagnostic from_parse_error(const ParseError& e) {
    std::string msg = e.detail();
    if (!e.expected().empty()) {
        msg += " (expected ";
        for (std::size_t i = 0; i < e.expected().size(); ++i) msg += (i ? ", '" : "'") + e.expected()[i] + "'";
        msg += ")";
    }
    return {"E-PARSE", msg, e.pos(), {}, {}};
}

json diag_json(const Diagnostic& d) {
    json j = {{"code", d.code}, {"message", d.message}, {"subject", d.subject}};
    j["line"] = d.pos.known() ? json(d.pos.line) : json(nullptr);
    j["column"] = d.pos.known() ? json(d.pos.column) : json(nullptr);
    j["rule"] = d.rule ? json(*d.rule) : json(nullptr);
    return j;
}

json patterns_json(const std::vector<Pattern>& ps) {
    json out = json::array();
    for (const auto& p : ps) out.push_back(p.str());
    return out;
}

std::vector<Diagnostic> all_diagnostics(const LoadedSystem& loaded) {
    if (loaded.parse_error) return {*loaded.parse_error};
    return loaded.validation.diagnostics;
}

json symbols_json(const LoadedSystem& loaded) {
    json out = json::array();
    if (!loaded.system) return out;
    for (const auto& s : loaded.system->symbols)
        out.push_back({{"name", s.name},
                       {"type", s.type.str()},
                       {"recursive", s.recursive},
                       {"quantifiers", quantifier_count(s.type)}});
    return out;
}

json rules_json(const LoadedSystem& loaded) {
    json out = json::array();
    if (!loaded.system) return out;
    const auto& rules = loaded.system->rules;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        json r = {{"index", i}, {"text", print_rule(rules[i])}};
        const auto& v = i < loaded.validation.rules.size() ? loaded.validation.rules[i] : std::nullopt;
        r["ok"] = v.has_value();
        json ctx = json::array();
        if (v) {
            for (const auto& [x, t] : v->typing.context.entries())
                ctx.push_back({{"variable", x}, {"type", t.str()}});
            r["lhsType"] = v->typing.lhs_type.str();
            r["recursivePatterns"] = patterns_json(v->typing.recursive_patterns);
        } else {
            r["lhsType"] = nullptr;
            r["recursivePatterns"] = json::array();
        }
        r["context"] = ctx;
        out.push_back(r);
    }
    return out;
}

json indices_json(const IndexAssignment& iota) {
    json out = json::object();
    for (const auto& [f, i] : iota) out[f] = i;
    return out;
}

std::string nodes_str(const std::vector<std::size_t>& nodes) {
    std::string out = "{";
    for (std::size_t i = 0; i < nodes.size(); ++i) out += (i ? "," : "") + std::to_string(nodes[i]);
    return out + "}";
}

std::string indices_str(const IndexAssignment& iota) {
    std::string out;
    for (const auto& [f, i] : iota) out += (out.empty() ? "" : ", ") + f + "=" + std::to_string(i);
    return out;
}

} // namespace

const char* to_string(CheckOutcome o) {
    switch (o) {
        case CheckOutcome::Terminating: return "TERMINATING";
        case CheckOutcome::Unknown: return "UNKNOWN";
        case CheckOutcome::Invalid: return "INVALID";
        case CheckOutcome::ParseError: return "PARSE_ERROR";
    }
    return "?";
}

LoadedSystem load_system(std::string_view text) {
    auto start = Clock::now();
    LoadedSystem out;
    try {
        out.system = parse_system(text);
        out.validation = validate_system(*out.system);
    } catch (const ParseError& e) {
        out.system.reset();
        out.parse_error = from_parse_error(e);
    }
    out.load_ms = ms_since(start);
    return out;
}

CheckResult run_check(const LoadedSystem& loaded, const CheckOptions& options) {
    CheckResult r;
    Timings t;
    t.load_ms = loaded.load_ms;
    if (!loaded.parsed()) {
        r.outcome = CheckOutcome::ParseError;
    } else if (!loaded.valid()) {
        r.outcome = CheckOutcome::Invalid;
    } else {
        auto start = Clock::now();
        r.verdict = check_criterion(*loaded.validation.system);
        t.analysis_ms = ms_since(start);
        r.outcome = r.verdict->terminating() ? CheckOutcome::Terminating : CheckOutcome::Unknown;
        if (options.oracle) {
            start = Clock::now();
            r.oracle = ground_sweep(*loaded.system, RuleSet(*loaded.system), options.oracle_depth, options.fuel);
            t.oracle_ms = ms_since(start);
        }
    }
    if (options.timing) r.timing = t;
    return r;
}

std::string diagnostics_text(const LoadedSystem& loaded) {
    std::string out;
    for (const auto& d : all_diagnostics(loaded)) out += d.str() + "\n";
    return out;
}

std::string check_text(const LoadedSystem& loaded, const CheckResult& result) {
    std::string out = result.outcome == CheckOutcome::ParseError ? "PARSE ERROR\n"
                                                                  : std::string(to_string(result.outcome)) + "\n";
    if (!result.verdict) return out + diagnostics_text(loaded);

    const Verdict& v = *result.verdict;
    out += "dependency pairs: " + std::to_string(v.graph.size()) + "\n";
    for (std::size_t i = 0; i < v.graph.size(); ++i) out += "  [" + std::to_string(i) + "] " + v.graph.nodes[i].str() + "\n";
    auto edges = v.graph.edges();
    out += "edges: " + std::to_string(edges.size()) + "\n";
    for (const auto& [a, b] : edges) out += "  " + std::to_string(a) + " -> " + std::to_string(b) + "\n";
    std::size_t nontrivial = 0;
    for (const auto& c : v.components) nontrivial += is_nontrivial(c, v.graph);
    out += "nontrivial SCCs: " + std::to_string(nontrivial) + "\n";
    for (const auto& c : v.certificates)
        out += "  SCC " + nodes_str(c.nodes) + ": iota " + indices_str(c.indices) + "; strict " +
               nodes_str(c.strict_nodes) + "\n";
    for (const auto& f : v.failures) out += "  SCC " + nodes_str(f.nodes) + ": no index: " + f.reason.diagnosis + "\n";
    if (result.oracle) {
        out += "oracle: ground trees of depth <= " + std::to_string(result.oracle->depth) + ", fuel " +
               std::to_string(result.oracle->fuel) + "\n";
        for (const auto& e : result.oracle->symbols)
            out += "  " + e.symbol + ": " + std::to_string(e.calls) + " calls, " + std::to_string(e.normalized) +
                   " normalized, " + std::to_string(e.exhausted) + " exhausted\n";
    }
    if (result.timing) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "timing: load %.3f ms, analysis %.3f ms, oracle %.3f ms\n",
                      result.timing->load_ms, result.timing->analysis_ms, result.timing->oracle_ms);
        out += buf;
    }
    return out;
}

std::string check_json(const LoadedSystem& loaded, const CheckResult& result) {
    json j;
    j["schemaVersion"] = 1;
    j["command"] = "check";
    j["outcome"] = to_string(result.outcome);
    json diags = json::array();
    for (const auto& d : all_diagnostics(loaded)) diags.push_back(diag_json(d));
    j["diagnostics"] = diags;
    j["symbols"] = symbols_json(loaded);
    j["rules"] = rules_json(loaded);

    json dps = json::array(), edges = json::array(), comps = json::array(), certs = json::array();
    json failure = nullptr;
    if (result.verdict) {
        const Verdict& v = *result.verdict;
        for (std::size_t i = 0; i < v.graph.size(); ++i) {
            const auto& dp = v.graph.nodes[i];
            dps.push_back({{"id", i},
                           {"lhsSymbol", dp.lhs_symbol},
                           {"lhsArgs", patterns_json(dp.lhs_args)},
                           {"rhsSymbol", dp.rhs_symbol},
                           {"rhsArgs", patterns_json(dp.rhs_args)},
                           {"rules", dp.rules},
                           {"text", dp.str()}});
        }
        for (const auto& [a, b] : v.graph.edges()) edges.push_back({a, b});
        for (const auto& c : v.components) comps.push_back({{"nodes", c}, {"nontrivial", is_nontrivial(c, v.graph)}});
        for (const auto& c : v.certificates) {
            json decreases = json::array();
            auto r = check_scc(c.nodes, v.graph, c.indices);
            for (const auto& [node, d] : r.classes) decreases.push_back({{"node", node}, {"decrease", to_string(d)}});
            certs.push_back({{"nodes", c.nodes},
                             {"indices", indices_json(c.indices)},
                             {"strictNodes", c.strict_nodes},
                             {"decreases", decreases}});
        }
        if (!v.failures.empty()) {
            const auto& f = v.failures.front();
            const auto& nm = f.reason.near_miss_result;
            failure = {{"nodes", f.nodes},
                       {"diagnosis", f.reason.diagnosis},
                       {"searchSpace", f.reason.search_space},
                       {"nearMiss", f.reason.near_miss ? indices_json(*f.reason.near_miss) : json(nullptr)},
                       {"failingNode", nm.failing_node ? json(*nm.failing_node) : json(nullptr)},
                       {"cycle", nm.cycle}};
        }
    }
    j["dependencyPairs"] = dps;
    j["edges"] = edges;
    j["sccs"] = comps;
    j["certificates"] = certs;
    j["failure"] = failure;

    if (result.oracle) {
        json syms = json::array();
        for (const auto& e : result.oracle->symbols)
            syms.push_back({{"symbol", e.symbol},
                            {"calls", e.calls},
                            {"normalized", e.normalized},
                            {"exhausted", e.exhausted}});
        j["oracle"] = {{"depth", result.oracle->depth},
                       {"fuel", result.oracle->fuel},
                       {"symbols", syms},
                       {"totalExhausted", result.oracle->total_exhausted()}};
    } else {
        j["oracle"] = nullptr;
    }
    if (result.timing)
        j["timing"] = {{"loadMs", result.timing->load_ms},
                       {"analysisMs", result.timing->analysis_ms},
                       {"oracleMs", result.timing->oracle_ms}};
    else
        j["timing"] = nullptr;
    return j.dump(2) + "\n";
}

std::string typecheck_text(const LoadedSystem& loaded) {
    if (!loaded.parsed()) return "PARSE ERROR\n" + diagnostics_text(loaded);
    std::string out;
    for (const auto& d : loaded.validation.diagnostics)
        if (!d.rule) out += "signature: " + d.str() + "\n";
    const auto& rules = loaded.system->rules;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        out += "rule " + std::to_string(i) + ": " + rules[i].lhs().str() + " -> " + rules[i].rhs.str() + "\n";
        if (const auto& v = loaded.validation.rules[i]) {
            const auto& ctx = v->typing.context;
            out += "  context: " + (ctx.empty() ? std::string("(empty)") : ctx.str()) + "\n";
            out += "  lhs type: " + v->typing.lhs_type.str() + "\n";
            out += "  rhs: ok\n";
        } else {
            for (const auto& d : loaded.validation.diagnostics)
                if (d.rule == i) out += "  error: " + d.str() + "\n";
        }
    }
    return out;
}

std::string typecheck_json(const LoadedSystem& loaded) {
    json j;
    j["schemaVersion"] = 1;
    j["command"] = "typecheck";
    j["outcome"] = !loaded.parsed() ? "PARSE_ERROR" : loaded.valid() ? "OK" : "INVALID";
    json diags = json::array();
    for (const auto& d : all_diagnostics(loaded)) diags.push_back(diag_json(d));
    j["diagnostics"] = diags;
    j["symbols"] = symbols_json(loaded);
    j["rules"] = rules_json(loaded);
    return j.dump(2) + "\n";
}

ReduceResult run_reduce(const LoadedSystem& loaded, std::string_view term, std::size_t fuel) {
    ReduceResult r;
    if (!loaded.parsed()) {
        r.status = ReduceStatus::SystemError;
        r.error = loaded.parse_error;
        return r;
    }
    r.warnings = loaded.validation.diagnostics;
    try {
        r.term = parse_erased_term(term, *loaded.system);
    } catch (const ParseError& e) {
        r.status = ReduceStatus::TermError;
        r.error = from_parse_error(e);
        return r;
    }
    r.outcome = normalize(*r.term, RuleSet(*loaded.system), {.fuel = fuel});
    r.status = r.outcome.exhausted ? ReduceStatus::FuelExhausted : ReduceStatus::Normalized;
    return r;
}

std::string reduce_text(const ReduceResult& result, bool all) {
    std::string out;
    for (const auto& w : result.warnings) out += "warning: " + w.str() + "\n";
    switch (result.status) {
        case ReduceStatus::SystemError: return out + "PARSE ERROR\n" + result.error->str() + "\n";
        case ReduceStatus::TermError: return out + "TERM ERROR\n" + result.error->str() + "\n";
        case ReduceStatus::FuelExhausted: {
            const auto& o = result.outcome;
            out += "FUEL EXHAUSTED after " + std::to_string(o.states) + " states\n";
            if (o.cycle_detected) {
                out += "cycle:";
                for (std::size_t i = 0; i < o.cycle.size(); ++i) out += (i ? " -> " : " ") + o.cycle[i].str();
                out += "\n";
            } else {
                out += "frontier: " + std::to_string(o.frontier.size()) + " terms\n";
            }
            return out;
        }
        case ReduceStatus::Normalized: {
            const auto& nfs = result.outcome.normal_forms;
            if (all) {
                for (const auto& n : nfs) out += n.str() + "\n";
            } else if (!nfs.empty()) {
                out += nfs.front().str() + "\n";
            }
            return out;
        }
    }
    return out;
}

std::string reduce_json(const ReduceResult& result, bool all) {
    json j;
    j["schemaVersion"] = 1;
    j["command"] = "reduce";
    switch (result.status) {
        case ReduceStatus::Normalized: j["outcome"] = "NORMALIZED"; break;
        case ReduceStatus::FuelExhausted: j["outcome"] = "FUEL_EXHAUSTED"; break;
        case ReduceStatus::TermError: j["outcome"] = "TERM_ERROR"; break;
        case ReduceStatus::SystemError: j["outcome"] = "PARSE_ERROR"; break;
    }
    j["term"] = result.term ? json(result.term->str()) : json(nullptr);
    json nfs = json::array();
    for (const auto& n : result.outcome.normal_forms) nfs.push_back(n.str());
    j["normalForms"] = nfs;
    j["all"] = all;
    j["states"] = result.outcome.states;
    j["cycleDetected"] = result.outcome.cycle_detected;
    json cycle = json::array();
    for (const auto& c : result.outcome.cycle) cycle.push_back(c.str());
    j["cycle"] = cycle;
    j["frontierSize"] = result.outcome.frontier.size();
    json warnings = json::array();
    for (const auto& w : result.warnings) warnings.push_back(diag_json(w));
    j["warnings"] = warnings;
    j["error"] = result.error ? diag_json(*result.error) : json(nullptr);
    return j.dump(2) + "\n";
}

} // namespace tydp
