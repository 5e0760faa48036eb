#include <doctest.h>

#include <cstring>
#include <string>

#include <json.hpp>

#include "fixtures.hpp"
#include "tydp/tydp.h"

namespace {

struct Owned {
    char* s = nullptr;
    ~Owned() { tydp_string_free(s); }
    std::string str() const { return s ? s : ""; }
};

struct System {
    tydp_system* p = nullptr;
    ~System() { tydp_system_free(p); }
};

tydp_status load(const std::string& text, System& sys) { return tydp_load(text.data(), text.size(), &sys.p); }

} // namespace

TEST_CASE("status names and version") {
    CHECK(std::strcmp(tydp_status_name(TYDP_OK), "OK") == 0);
    CHECK(std::strcmp(tydp_status_name(TYDP_FUEL_EXHAUSTED), "FUEL_EXHAUSTED") == 0);
    CHECK(std::strcmp(tydp_status_name(static_cast<tydp_status>(42)), "UNRECOGNIZED") == 0);
    CHECK(std::strcmp(tydp_version(), "0.1.0") == 0);
}

TEST_CASE("null arguments are rejected") {
    CHECK(tydp_load("x", 1, nullptr) == TYDP_BAD_ARGUMENT);
    tydp_system* sys = nullptr;
    CHECK(tydp_load(nullptr, 3, &sys) == TYDP_BAD_ARGUMENT);
    CHECK(sys == nullptr);
    CHECK(tydp_load_file(nullptr, &sys) == TYDP_BAD_ARGUMENT);
    char* out = reinterpret_cast<char*>(1);
    CHECK(tydp_check(nullptr, nullptr, &out, nullptr) == TYDP_BAD_ARGUMENT);
    CHECK(out == nullptr);
    CHECK(tydp_graph_dot(nullptr, &out) == TYDP_BAD_ARGUMENT);
    CHECK(tydp_typecheck(nullptr, nullptr, nullptr) == TYDP_BAD_ARGUMENT);
    CHECK(tydp_reduce(nullptr, "Leaf", 0, 0, nullptr, nullptr) == TYDP_BAD_ARGUMENT);
    CHECK(tydp_diagnostics_text(nullptr, &out) == TYDP_BAD_ARGUMENT);
    tydp_system_free(nullptr);
    tydp_string_free(nullptr);
}

TEST_CASE("missing files") {
    tydp_system* sys = nullptr;
    CHECK(tydp_load_file("/nonexistent/file.trs", &sys) == TYDP_IO_ERROR);
    CHECK(sys == nullptr);
}

TEST_CASE("check through the C interface") {
    System sys;
    REQUIRE(load(fixtures::read("fgih.trs"), sys) == TYDP_OK);
    Owned text, js;
    CHECK(tydp_check(sys.p, nullptr, &text.s, &js.s) == TYDP_OK);
    CHECK(text.str().rfind("TERMINATING", 0) == 0);
    auto j = nlohmann::json::parse(js.str());
    CHECK(j["schemaVersion"] == 1);
    CHECK(j["outcome"] == "TERMINATING");
    CHECK(j["dependencyPairs"].size() == 9);
    CHECK(j["timing"].is_null());

    Owned dot;
    CHECK(tydp_graph_dot(sys.p, &dot.s) == TYDP_OK);
    CHECK(dot.str().rfind("digraph", 0) == 0);
}

TEST_CASE("invalid and unparsable systems keep their diagnostics") {
    System bad;
    CHECK(load(fixtures::read("nonminimal.trs"), bad) == TYDP_INVALID);
    REQUIRE(bad.p);
    Owned diag;
    CHECK(tydp_diagnostics_text(bad.p, &diag.s) == TYDP_OK);
    CHECK(diag.str().find("E-MIN-PATTERN-MISMATCH") != std::string::npos);
    Owned dot;
    CHECK(tydp_graph_dot(bad.p, &dot.s) == TYDP_INVALID);
    CHECK(dot.s == nullptr);

    System broken;
    CHECK(load("symbol", broken) == TYDP_PARSE_ERROR);
    REQUIRE(broken.p);
    Owned js;
    CHECK(tydp_check(broken.p, nullptr, nullptr, &js.s) == TYDP_PARSE_ERROR);
    CHECK(nlohmann::json::parse(js.str())["diagnostics"][0]["code"] == "E-PARSE");
}

TEST_CASE("reduce through the C interface") {
    System sys;
    load(fixtures::read("nonminimal.trs"), sys);
    Owned text;
    CHECK(tydp_reduce(sys.p, "f Leaf Leaf", 100, 0, &text.s, nullptr) == TYDP_FUEL_EXHAUSTED);
    CHECK(text.str().find("FUEL EXHAUSTED") != std::string::npos);
    Owned leaf;
    CHECK(tydp_reduce(sys.p, "Leaf", 0, 1, &leaf.s, nullptr) == TYDP_OK);
    // Invalid systems still reduce, after a warning.
    CHECK(leaf.str().find("warning") == 0);
    CHECK(leaf.str().ends_with("\nLeaf\n"));
    Owned err;
    CHECK(tydp_reduce(sys.p, "f[leaf]", 0, 0, &err.s, nullptr) == TYDP_PARSE_ERROR);
}

TEST_CASE("empty input") {
    System sys;
    CHECK(tydp_load(nullptr, 0, &sys.p) == TYDP_OK);
    Owned text, dot;
    CHECK(tydp_typecheck(sys.p, &text.s, nullptr) == TYDP_OK);
    CHECK(tydp_graph_dot(sys.p, &dot.s) == TYDP_OK);
    CHECK(dot.str() == "digraph dependency_graph {\n}\n");
}
