#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tydp/analysis.hpp"
#include "tydp/oracle.hpp"
#include "tydp/rewrite.hpp"

namespace tydp {

/// A parsed and validated input file. Parsing failures leave `system` empty
/// and record the error as a diagnostic with code E-PARSE.
struct LoadedSystem {
    std::optional<RewriteSystem> system;
    std::optional<Diagnostic> parse_error;
    SystemValidation validation;
    double load_ms = 0;

    bool parsed() const { return system.has_value(); }
    bool valid() const { return parsed() && validation.ok(); }
};

LoadedSystem load_system(std::string_view text);

struct CheckOptions {
    std::size_t fuel = 10000;
    bool timing = false;
    bool oracle = false;
    int oracle_depth = 3;
};

enum class CheckOutcome { Terminating, Unknown, Invalid, ParseError };
const char* to_string(CheckOutcome o);

struct Timings {
    double load_ms = 0;
    double analysis_ms = 0;
    double oracle_ms = 0;
};

struct CheckResult {
    CheckOutcome outcome = CheckOutcome::ParseError;
    std::optional<Verdict> verdict;
    std::optional<GroundSweep> oracle;
    std::optional<Timings> timing;
};

CheckResult run_check(const LoadedSystem& loaded, const CheckOptions& options = {});

std::string check_text(const LoadedSystem& loaded, const CheckResult& result);
/// Stable JSON, schema version 1.
std::string check_json(const LoadedSystem& loaded, const CheckResult& result);

std::string typecheck_text(const LoadedSystem& loaded);
std::string typecheck_json(const LoadedSystem& loaded);

enum class ReduceStatus { Normalized, FuelExhausted, TermError, SystemError };

struct ReduceResult {
    ReduceStatus status = ReduceStatus::SystemError;
    std::optional<ErasedTerm> term;
    ReductionOutcome outcome;
    std::optional<Diagnostic> error;
    /// Validation findings; reduction still runs on an invalid system.
    std::vector<Diagnostic> warnings;
};

ReduceResult run_reduce(const LoadedSystem& loaded, std::string_view term, std::size_t fuel);

/// With `all`, every normal form; otherwise the first by canonical order.
std::string reduce_text(const ReduceResult& result, bool all);
std::string reduce_json(const ReduceResult& result, bool all);

std::string diagnostics_text(const LoadedSystem& loaded);

} // namespace tydp
