#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <string>

namespace tydp {

/// First-order tree pattern over the binary-tree datatype:
/// a pattern variable, `leaf`, `node(p,q)`, the wildcard `_` or `bot`.
///
/// Patterns are immutable; copies share structure.
class Pattern {
public:
    enum class Kind { Var, Leaf, Node, Wildcard, Bottom };

    static Pattern var(std::string name);
    static Pattern leaf();
    static Pattern node(Pattern left, Pattern right);
    static Pattern wildcard();
    static Pattern bottom();

    Kind kind() const;
    bool is_var() const { return kind() == Kind::Var; }
    bool is_leaf() const { return kind() == Kind::Leaf; }
    bool is_node() const { return kind() == Kind::Node; }
    bool is_wildcard() const { return kind() == Kind::Wildcard; }
    bool is_bottom() const { return kind() == Kind::Bottom; }

    // Only meaningful for the matching kind.
    const std::string& name() const;
    const Pattern& left() const;
    const Pattern& right() const;

    /// No wildcard and no bottom anywhere.
    bool is_minimal() const;
    /// No pattern variable anywhere.
    bool is_closed() const;
    bool has_wildcard() const;

    std::set<std::string> vars() const;
    void collect_vars(std::set<std::string>& out) const;

    /// Number of `node` constructors.
    std::size_t node_count() const;
    /// Height, with every non-node pattern at depth 0.
    int depth() const;

    Pattern substitute(const std::map<std::string, Pattern>& subst) const;
    Pattern rename(const std::map<std::string, std::string>& renaming) const;

    std::string str() const;

    friend bool operator==(const Pattern& a, const Pattern& b);
    friend std::strong_ordering operator<=>(const Pattern& a, const Pattern& b);

private:
    struct Rep;
    explicit Pattern(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
    std::shared_ptr<const Rep> rep_;
};

std::ostream& operator<<(std::ostream& os, const Pattern& p);

using PatternSubstitution = std::map<std::string, Pattern>;

} // namespace tydp
