#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tydp/rewrite.hpp"

namespace tydp {

// Executable versions of the semantic constructions behind the soundness
// argument. Nothing here feeds the verdict; the test suites use them to
// cross-check the analysis.

/// Pattern variable -> non-empty set of closed patterns.
using Valuation = std::map<std::string, std::set<Pattern>>;

/// `bot` for neutral terms, `leaf`, `node(..)` for trees, `_` otherwise.
/// With `rules`, throws std::logic_error unless `v` is a normal form.
Pattern pattern_form(const ErasedTerm& v, const RuleSet* rules = nullptr);

/// `v` matches the closed pattern `p`. Throws std::invalid_argument on open `p`.
bool term_matches(const ErasedTerm& v, const Pattern& p);

/// Set semantics of `p` under `theta`, choosing independently at each
/// occurrence. Throws std::invalid_argument when a variable is unmapped.
std::set<Pattern> apply_valuation(const Pattern& p, const Valuation& theta);

/// Every element of `lower` is below some element of `upper`.
bool set_below(const std::set<Pattern>& lower, const std::set<Pattern>& upper);

struct MatchResult {
    enum class Status { Defined, Undefined, FuelExhausted };

    Status status = Status::Undefined;
    Valuation valuation;

    bool defined() const { return status == Status::Defined; }
};

/// Type matching of terms against minimal patterns. A variable is valued
/// by the pattern forms of all normal forms of its term.
MatchResult match_patterns(const std::vector<ErasedTerm>& ts, const std::vector<Pattern>& ps, const RuleSet& rules,
                           std::size_t fuel = 10000);

/// Embedding on normal forms.
bool term_embeds_strict(const ErasedTerm& v1, const ErasedTerm& v2);
bool term_embeds_weak(const ErasedTerm& v1, const ErasedTerm& v2);

/// Number of `Node` constructors along the tree spine.
std::size_t term_size(const ErasedTerm& v);

/// All closed trees built from `Leaf` and `Node` of height at most
/// `max_depth` (`Leaf` has height 0), ordered by key.
std::vector<ErasedTerm> ground_trees(int max_depth);

struct SweepEntry {
    std::string symbol;
    std::size_t calls = 0;
    std::size_t normalized = 0;
    std::size_t exhausted = 0;
};

/// Each symbol applied to every tuple of ground trees for its recursive
/// arguments, then normalized.
struct GroundSweep {
    int depth = 0;
    std::size_t fuel = 0;
    std::vector<SweepEntry> symbols;

    std::size_t total_exhausted() const;
};

GroundSweep ground_sweep(const RewriteSystem& sys, const RuleSet& rules, int depth, std::size_t fuel,
                         std::size_t max_calls_per_symbol = 2000);

} // namespace tydp
