// Command-line front end. Talks to the checker only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "tydp/tydp.h"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;

int exit_code(tydp_status s) {
    switch (s) {
        case TYDP_OK: return 0;
        case TYDP_UNKNOWN:
        case TYDP_FUEL_EXHAUSTED: return 1;
        case TYDP_INVALID: return 2;
        case TYDP_PARSE_ERROR:
        case TYDP_IO_ERROR: return 3;
        case TYDP_BAD_ARGUMENT: return kExitUsage;
        default: return kExitInternal;
    }
}

struct SystemDeleter {
    void operator()(tydp_system* s) const { tydp_system_free(s); }
};
using SystemPtr = std::unique_ptr<tydp_system, SystemDeleter>;

struct StringDeleter {
    void operator()(char* s) const { tydp_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

// Loads `path`; on failure to read, reports and returns null with `status` set.
SystemPtr open_system(const std::string& path, tydp_status& status) {
    tydp_system* raw = nullptr;
    status = tydp_load_file(path.c_str(), &raw);
    if (status == TYDP_IO_ERROR) std::cerr << "tydp: cannot read '" << path << "'\n";
    return SystemPtr(raw);
}

void print(const OwnedString& s, std::ostream& os = std::cout) {
    if (s) os << s.get();
}

bool write_file(const std::string& path, const char* contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << contents;
    return static_cast<bool>(out);
}

void print_diagnostics(const tydp_system* sys) {
    char* text = nullptr;
    if (tydp_diagnostics_text(sys, &text) == TYDP_OK) std::cerr << text;
    tydp_string_free(text);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Termination checker for higher-order rewrite systems with pattern-refinement types"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tydp_version()));

    std::string file, dot_path, term;
    std::size_t fuel = 10000;
    bool as_json = false, oracle = false, timing = false, all = false;

    auto* check = app.add_subcommand("check", "Run the termination criterion");
    check->add_option("FILE", file, "System file")->required();
    check->add_option("--fuel", fuel, "Reduction budget for --oracle, in expanded states")->check(CLI::PositiveNumber);
    check->add_flag("--json", as_json, "Print the JSON report");
    check->add_option("--dot", dot_path, "Write the dependency graph in DOT format");
    check->add_flag("--oracle", oracle, "Also normalize every symbol on ground trees");
    check->add_flag("--timing", timing, "Report phase timings");

    auto* graph = app.add_subcommand("graph", "Export the dependency graph");
    graph->add_option("FILE", file, "System file")->required();
    graph->add_option("--dot", dot_path, "Output path (default: standard output)");

    auto* reduce = app.add_subcommand("reduce", "Normalize an erased term");
    reduce->add_option("FILE", file, "System file")->required();
    reduce->add_option("--term", term, "Term to normalize, e.g. \"f (Node Leaf Leaf)\"")->required();
    reduce->add_option("--fuel", fuel, "Budget in expanded states")->check(CLI::PositiveNumber);
    reduce->add_flag("--all", all, "Print every normal form");
    reduce->add_flag("--json", as_json, "Print a JSON report");

    auto* typecheck = app.add_subcommand("typecheck", "Print the typing of every rule");
    typecheck->add_option("FILE", file, "System file")->required();
    typecheck->add_flag("--json", as_json, "Print the JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    tydp_status load = TYDP_OK;
    SystemPtr sys = open_system(file, load);
    if (!sys) return exit_code(load);

    if (check->parsed()) {
        tydp_check_options opts{fuel, timing ? 1 : 0, oracle ? 1 : 0};
        char *text = nullptr, *json = nullptr;
        tydp_status s = tydp_check(sys.get(), &opts, &text, &json);
        OwnedString t(text), j(json);
        print(as_json ? j : t);
        if (!dot_path.empty() && (s == TYDP_OK || s == TYDP_UNKNOWN)) {
            char* dot = nullptr;
            tydp_graph_dot(sys.get(), &dot);
            OwnedString d(dot);
            if (!d || !write_file(dot_path, d.get())) {
                std::cerr << "tydp: cannot write '" << dot_path << "'\n";
                return 3;
            }
        }
        return exit_code(s);
    }

    if (graph->parsed()) {
        char* dot = nullptr;
        tydp_status s = tydp_graph_dot(sys.get(), &dot);
        OwnedString d(dot);
        if (s != TYDP_OK) {
            print_diagnostics(sys.get());
            return exit_code(s);
        }
        if (dot_path.empty()) {
            print(d);
        } else if (!write_file(dot_path, d.get())) {
            std::cerr << "tydp: cannot write '" << dot_path << "'\n";
            return 3;
        }
        return 0;
    }

    if (reduce->parsed()) {
        char *text = nullptr, *json = nullptr;
        tydp_status s = tydp_reduce(sys.get(), term.c_str(), fuel, all ? 1 : 0, &text, &json);
        OwnedString t(text), j(json);
        print(as_json ? j : t);
        return exit_code(s);
    }

    char *text = nullptr, *json = nullptr;
    tydp_status s = tydp_typecheck(sys.get(), &text, &json);
    OwnedString t(text), j(json);
    print(as_json ? j : t);
    return exit_code(s);
}
