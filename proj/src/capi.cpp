#include "tydp/tydp.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>

#include "tydp/report.hpp"

struct tydp_system {
    tydp::LoadedSystem loaded;
};

namespace {

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

void set(char** slot, const std::string& s) {
    if (slot) *slot = dup(s);
}

void clear(char** slot) {
    if (slot) *slot = nullptr;
}

tydp_status load_status(const tydp::LoadedSystem& l) {
    if (!l.parsed()) return TYDP_PARSE_ERROR;
    return l.valid() ? TYDP_OK : TYDP_INVALID;
}

template <typename F>
tydp_status guarded(F&& body) {
    try {
        return body();
    } catch (const std::bad_alloc&) {
        return TYDP_INTERNAL_ERROR;
    } catch (...) {
        return TYDP_INTERNAL_ERROR;
    }
}

} // namespace

extern "C" {

const char* tydp_version(void) { return "0.1.0"; }

const char* tydp_status_name(tydp_status status) {
    switch (status) {
        case TYDP_OK: return "OK";
        case TYDP_UNKNOWN: return "UNKNOWN";
        case TYDP_INVALID: return "INVALID";
        case TYDP_PARSE_ERROR: return "PARSE_ERROR";
        case TYDP_FUEL_EXHAUSTED: return "FUEL_EXHAUSTED";
        case TYDP_IO_ERROR: return "IO_ERROR";
        case TYDP_BAD_ARGUMENT: return "BAD_ARGUMENT";
        case TYDP_INTERNAL_ERROR: return "INTERNAL_ERROR";
    }
    return "UNRECOGNIZED";
}

tydp_status tydp_load(const char* text, size_t length, tydp_system** out) {
    if (!out) return TYDP_BAD_ARGUMENT;
    *out = nullptr;
    if (!text && length) return TYDP_BAD_ARGUMENT;
    return guarded([&] {
        auto* sys = new tydp_system{tydp::load_system(std::string_view(text ? text : "", length))};
        *out = sys;
        return load_status(sys->loaded);
    });
}

tydp_status tydp_load_file(const char* path, tydp_system** out) {
    if (!out || !path) return TYDP_BAD_ARGUMENT;
    *out = nullptr;
    std::ifstream in(path, std::ios::binary);
    if (!in) return TYDP_IO_ERROR;
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) return TYDP_IO_ERROR;
    std::string text = buf.str();
    return tydp_load(text.data(), text.size(), out);
}

void tydp_system_free(tydp_system* sys) { delete sys; }

tydp_status tydp_diagnostics_text(const tydp_system* sys, char** text) {
    clear(text);
    if (!sys || !text) return TYDP_BAD_ARGUMENT;
    return guarded([&] {
        set(text, tydp::diagnostics_text(sys->loaded));
        return TYDP_OK;
    });
}

tydp_status tydp_check(const tydp_system* sys, const tydp_check_options* options, char** text, char** json) {
    clear(text);
    clear(json);
    if (!sys) return TYDP_BAD_ARGUMENT;
    return guarded([&] {
        tydp::CheckOptions opts;
        if (options) {
            if (options->fuel) opts.fuel = options->fuel;
            opts.timing = options->timing != 0;
            opts.oracle = options->oracle != 0;
        }
        auto result = tydp::run_check(sys->loaded, opts);
        set(text, tydp::check_text(sys->loaded, result));
        set(json, tydp::check_json(sys->loaded, result));
        switch (result.outcome) {
            case tydp::CheckOutcome::Terminating: return TYDP_OK;
            case tydp::CheckOutcome::Unknown: return TYDP_UNKNOWN;
            case tydp::CheckOutcome::Invalid: return TYDP_INVALID;
            case tydp::CheckOutcome::ParseError: return TYDP_PARSE_ERROR;
        }
        return TYDP_INTERNAL_ERROR;
    });
}

tydp_status tydp_graph_dot(const tydp_system* sys, char** dot) {
    clear(dot);
    if (!sys || !dot) return TYDP_BAD_ARGUMENT;
    if (auto s = load_status(sys->loaded); s != TYDP_OK) return s;
    return guarded([&] {
        auto verdict = tydp::check_criterion(*sys->loaded.validation.system);
        set(dot, tydp::to_dot(verdict.graph, &verdict));
        return TYDP_OK;
    });
}

tydp_status tydp_typecheck(const tydp_system* sys, char** text, char** json) {
    clear(text);
    clear(json);
    if (!sys) return TYDP_BAD_ARGUMENT;
    return guarded([&] {
        set(text, tydp::typecheck_text(sys->loaded));
        set(json, tydp::typecheck_json(sys->loaded));
        return load_status(sys->loaded);
    });
}

tydp_status tydp_reduce(const tydp_system* sys, const char* term, size_t fuel, int all, char** text, char** json) {
    clear(text);
    clear(json);
    if (!sys || !term) return TYDP_BAD_ARGUMENT;
    return guarded([&] {
        auto result = tydp::run_reduce(sys->loaded, term, fuel ? fuel : 10000);
        set(text, tydp::reduce_text(result, all != 0));
        set(json, tydp::reduce_json(result, all != 0));
        switch (result.status) {
            case tydp::ReduceStatus::Normalized: return TYDP_OK;
            case tydp::ReduceStatus::FuelExhausted: return TYDP_FUEL_EXHAUSTED;
            case tydp::ReduceStatus::TermError:
            case tydp::ReduceStatus::SystemError: return TYDP_PARSE_ERROR;
        }
        return TYDP_INTERNAL_ERROR;
    });
}

void tydp_string_free(char* s) { std::free(s); }

} // extern "C"
