#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tydp/syntax.hpp"

namespace tydp {

struct ErasedRule {
    std::string head;
    ErasedTerm lhs;
    ErasedTerm rhs;
    std::size_t rule_index = 0;
};

/// Erased rules indexed by head symbol. Built from any parsed system;
/// validation is the caller's business.
class RuleSet {
public:
    RuleSet() = default;
    explicit RuleSet(const RewriteSystem& sys);

    const std::vector<ErasedRule>& rules() const { return rules_; }
    /// Rules whose head is `symbol`, in source order.
    std::vector<const ErasedRule*> for_head(const std::string& symbol) const;

private:
    std::vector<ErasedRule> rules_;
    std::map<std::string, std::vector<std::size_t>> by_head_;
};

/// Syntactic matching of an erased lhs against `t`. Repeated lhs variables
/// must capture alpha-equal subterms. Lambdas never occur in a valid lhs and
/// never match.
std::optional<TermSubstitution> match_lhs(const ErasedTerm& lhs, const ErasedTerm& t);

/// All one-step reducts at every position, deduplicated and sorted by key.
std::vector<ErasedTerm> step(const ErasedTerm& t, const RuleSet& rules);

struct NormalizeOptions {
    std::size_t fuel = 10000;
    /// Visit successors in reverse key order; the result set must not change.
    bool reverse_order = false;
};

struct ReductionOutcome {
    /// Fuel ran out or a reduction cycle was found.
    bool exhausted = false;
    /// Sorted by key; complete only when !exhausted.
    std::vector<ErasedTerm> normal_forms;
    /// Discovered but unexpanded states at the point of exhaustion.
    std::vector<ErasedTerm> frontier;
    std::size_t states = 0;
    bool cycle_detected = false;
    /// t0 -> t1 -> ... -> t0, the repeated term included at both ends.
    std::vector<ErasedTerm> cycle;

    bool ok() const { return !exhausted; }
};

ReductionOutcome normalize(const ErasedTerm& t, const RuleSet& rules, const NormalizeOptions& options = {});

/// Lambda, `Node t u` or `Leaf`.
bool is_value(const ErasedTerm& t);
bool is_neutral(const ErasedTerm& t);

} // namespace tydp
