#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tydp/typing.hpp"

namespace tydp {

/// `f#(p1..pk) -> g#(q1..ql)`: the lhs carries the recursive patterns of a
/// rule for f, the rhs the full pattern-argument list of a call to g.
struct DependencyPair {
    std::string lhs_symbol;
    std::vector<Pattern> lhs_args;
    std::string rhs_symbol;
    std::vector<Pattern> rhs_args;
    std::size_t rule_index = 0;
    /// Every rule that produced this pair (duplicates are collapsed).
    std::vector<std::size_t> rules;

    /// ASCII form, `f#(node(a,b)) -> g#(a)`.
    std::string str() const;
    /// Display form with the sharp sign and arrow, `f♯(node(a,b))→g♯(a)`.
    std::string label() const;
};

std::vector<DependencyPair> extract_dps(const ValidatedSystem& sys);

/// Most general unifier over {leaf, node, bot}, with occurs-check. The
/// result is idempotent. Wildcards must have been removed by the caller.
std::optional<PatternSubstitution> unify_patterns(const Pattern& p, const Pattern& q);

/// Replace every variable and wildcard occurrence by a distinct fresh
/// variable, then unify.
bool pattern_unifiable(const Pattern& p, const Pattern& q);

struct DependencyGraph {
    std::vector<DependencyPair> nodes;
    /// Sorted successor lists.
    std::vector<std::vector<std::size_t>> successors;

    std::size_t size() const { return nodes.size(); }
    bool has_edge(std::size_t from, std::size_t to) const;
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;
};

/// Edge a -> b when the call in a targets b's symbol and the call's first
/// |lhs_args(b)| pattern arguments unify componentwise with lhs_args(b).
DependencyGraph build_graph(std::vector<DependencyPair> dps);

using Scc = std::vector<std::size_t>;

/// Tarjan. Each component is sorted; components are ordered by smallest node.
std::vector<Scc> sccs(const DependencyGraph& g);
bool is_nontrivial(const Scc& scc, const DependencyGraph& g);

bool embeds_strict(const Pattern& p, const Pattern& q);
bool embeds_weak(const Pattern& p, const Pattern& q);

/// Symbol -> 1-based recursive argument position.
using IndexAssignment = std::map<std::string, int>;

enum class Decrease { Strict, Weak, None };
const char* to_string(Decrease d);

struct SccResult {
    bool ok = false;
    std::map<std::size_t, Decrease> classes;
    std::vector<std::size_t> strict_nodes;
    /// First node without even a weak decrease.
    std::optional<std::size_t> failing_node;
    /// A cycle through non-strict nodes, first node repeated at the end.
    std::vector<std::size_t> cycle;
    std::string explanation;
};

SccResult check_scc(const Scc& scc, const DependencyGraph& g, const IndexAssignment& iota);

/// Index of a node's decrease at fixed positions; used by the search and
/// by tests that need the raw per-node relation.
Decrease classify(const DependencyPair& dp, int lhs_index, int rhs_index);

struct IndexNotFound {
    std::size_t search_space = 0;
    std::string diagnosis;
    /// Assignment that left the fewest nodes without decrease, if any.
    std::optional<IndexAssignment> near_miss;
    SccResult near_miss_result;
};

std::variant<IndexAssignment, IndexNotFound> find_indices(const Scc& scc, const DependencyGraph& g,
                                                          const Signature& sig);

struct SccCertificate {
    Scc nodes;
    IndexAssignment indices;
    std::vector<std::size_t> strict_nodes;
};

struct SccFailure {
    Scc nodes;
    IndexNotFound reason;
};

struct Verdict {
    enum class Outcome { Terminating, Unknown };

    Outcome outcome = Outcome::Terminating;
    DependencyGraph graph;
    std::vector<Scc> components;
    std::vector<SccCertificate> certificates;
    /// Every nontrivial SCC without an index; the first one is reported.
    std::vector<SccFailure> failures;

    bool terminating() const { return outcome == Outcome::Terminating; }
};

Verdict check_criterion(const ValidatedSystem& sys);

std::string to_dot(const DependencyGraph& g, const Verdict* verdict = nullptr);

} // namespace tydp
