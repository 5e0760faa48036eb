#include "tydp/pattern.hpp"

#include <algorithm>
#include <cassert>
#include <vector>

namespace tydp {

struct Pattern::Rep {
    Kind kind;
    std::string name;
    std::vector<Pattern> children;
};

Pattern Pattern::var(std::string name) {
    return Pattern(std::make_shared<const Rep>(Rep{Kind::Var, std::move(name), {}}));
}

Pattern Pattern::leaf() {
    static const auto rep = std::make_shared<const Rep>(Rep{Kind::Leaf, {}, {}});
    return Pattern(rep);
}

Pattern Pattern::wildcard() {
    static const auto rep = std::make_shared<const Rep>(Rep{Kind::Wildcard, {}, {}});
    return Pattern(rep);
}

Pattern Pattern::bottom() {
    static const auto rep = std::make_shared<const Rep>(Rep{Kind::Bottom, {}, {}});
    return Pattern(rep);
}

Pattern Pattern::node(Pattern left, Pattern right) {
    return Pattern(std::make_shared<const Rep>(
        Rep{Kind::Node, {}, {std::move(left), std::move(right)}}));
}

Pattern::Kind Pattern::kind() const { return rep_->kind; }

const std::string& Pattern::name() const {
    assert(is_var());
    return rep_->name;
}

const Pattern& Pattern::left() const {
    assert(is_node());
    return rep_->children[0];
}

const Pattern& Pattern::right() const {
    assert(is_node());
    return rep_->children[1];
}

bool Pattern::is_minimal() const {
    switch (kind()) {
        case Kind::Var:
        case Kind::Leaf: return true;
        case Kind::Node: return left().is_minimal() && right().is_minimal();
        default: return false;
    }
}

bool Pattern::is_closed() const {
    switch (kind()) {
        case Kind::Var: return false;
        case Kind::Node: return left().is_closed() && right().is_closed();
        default: return true;
    }
}

bool Pattern::has_wildcard() const {
    switch (kind()) {
        case Kind::Wildcard: return true;
        case Kind::Node: return left().has_wildcard() || right().has_wildcard();
        default: return false;
    }
}

std::set<std::string> Pattern::vars() const {
    std::set<std::string> out;
    collect_vars(out);
    return out;
}

void Pattern::collect_vars(std::set<std::string>& out) const {
    if (is_var()) {
        out.insert(name());
    } else if (is_node()) {
        left().collect_vars(out);
        right().collect_vars(out);
    }
}

std::size_t Pattern::node_count() const {
    return is_node() ? 1 + left().node_count() + right().node_count() : 0;
}

int Pattern::depth() const {
    return is_node() ? 1 + std::max(left().depth(), right().depth()) : 0;
}

Pattern Pattern::substitute(const std::map<std::string, Pattern>& subst) const {
    switch (kind()) {
        case Kind::Var: {
            auto it = subst.find(name());
            return it == subst.end() ? *this : it->second;
        }
        case Kind::Node: return node(left().substitute(subst), right().substitute(subst));
        default: return *this;
    }
}

Pattern Pattern::rename(const std::map<std::string, std::string>& renaming) const {
    switch (kind()) {
        case Kind::Var: {
            auto it = renaming.find(name());
            return it == renaming.end() ? *this : var(it->second);
        }
        case Kind::Node: return node(left().rename(renaming), right().rename(renaming));
        default: return *this;
    }
}

std::string Pattern::str() const {
    switch (kind()) {
        case Kind::Var: return name();
        case Kind::Leaf: return "leaf";
        case Kind::Node: return "node(" + left().str() + "," + right().str() + ")";
        case Kind::Wildcard: return "_";
        case Kind::Bottom: return "bot";
    }
    return {};
}

bool operator==(const Pattern& a, const Pattern& b) {
    return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Pattern& a, const Pattern& b) {
    if (a.rep_ == b.rep_) return std::strong_ordering::equal;
    if (auto c = a.kind() <=> b.kind(); c != 0) return c;
    switch (a.kind()) {
        case Pattern::Kind::Var: return a.name() <=> b.name();
        case Pattern::Kind::Node:
            if (auto c = a.left() <=> b.left(); c != 0) return c;
            return a.right() <=> b.right();
        default: return std::strong_ordering::equal;
    }
}

std::ostream& operator<<(std::ostream& os, const Pattern& p) { return os << p.str(); }

} // namespace tydp
