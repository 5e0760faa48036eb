#include "tydp/oracle.hpp"

#include <algorithm>
#include <stdexcept>

#include "tydp/typing.hpp"

namespace tydp {

Pattern pattern_form(const ErasedTerm& v, const RuleSet* rules) {
    if (rules && !step(v, *rules).empty())
        throw std::logic_error("pattern_form: '" + v.str() + "' is not a normal form");
    if (is_neutral(v)) return Pattern::bottom();
    if (v.is_leaf()) return Pattern::leaf();
    if (v.is_tree_node()) return Pattern::node(pattern_form(v.tree_left()), pattern_form(v.tree_right()));
    return Pattern::wildcard();
}

bool term_matches(const ErasedTerm& v, const Pattern& p) {
    if (!p.is_closed()) throw std::invalid_argument("term_matches: pattern '" + p.str() + "' is not closed");
    if (p.is_wildcard() || is_neutral(v)) return true;
    if (p.is_node())
        return v.is_tree_node() && term_matches(v.tree_left(), p.left()) && term_matches(v.tree_right(), p.right());
    if (p.is_leaf()) return v.is_leaf();
    return false;
}

std::set<Pattern> apply_valuation(const Pattern& p, const Valuation& theta) {
    switch (p.kind()) {
        case Pattern::Kind::Var: {
            auto it = theta.find(p.name());
            if (it == theta.end()) throw std::invalid_argument("apply_valuation: '" + p.name() + "' is unmapped");
            return it->second;
        }
        case Pattern::Kind::Node: {
            auto ls = apply_valuation(p.left(), theta);
            auto rs = apply_valuation(p.right(), theta);
            std::set<Pattern> out;
            for (const auto& l : ls)
                for (const auto& r : rs) out.insert(Pattern::node(l, r));
            return out;
        }
        default: return {p};
    }
}

bool set_below(const std::set<Pattern>& lower, const std::set<Pattern>& upper) {
    for (const auto& p : lower) {
        bool found = false;
        for (const auto& q : upper)
            if ((found = pattern_sub(p, q))) break;
        if (!found) return false;
    }
    return true;
}

MatchResult match_patterns(const std::vector<ErasedTerm>& ts, const std::vector<Pattern>& ps, const RuleSet& rules,
                           std::size_t fuel) {
    MatchResult out;
    if (ts.size() != ps.size()) return out;

    // Decompose constructors until only variables remain.
    std::vector<std::pair<ErasedTerm, Pattern>> work;
    for (std::size_t i = 0; i < ts.size(); ++i) work.emplace_back(ts[i], ps[i]);
    std::map<std::string, ErasedTerm> bound;
    while (!work.empty()) {
        auto [t, p] = work.back();
        work.pop_back();
        switch (p.kind()) {
            case Pattern::Kind::Var: {
                auto [it, fresh] = bound.try_emplace(p.name(), t);
                if (!fresh && !(it->second == t)) return out;
                break;
            }
            case Pattern::Kind::Leaf:
                if (!t.is_leaf()) return out;
                break;
            case Pattern::Kind::Node:
                if (!t.is_tree_node()) return out;
                work.emplace_back(t.tree_right(), p.right());
                work.emplace_back(t.tree_left(), p.left());
                break;
            default: return out;
        }
    }

    for (const auto& [alpha, t] : bound) {
        auto r = normalize(t, rules, {.fuel = fuel});
        if (r.exhausted) {
            out.status = MatchResult::Status::FuelExhausted;
            out.valuation.clear();
            return out;
        }
        auto& forms = out.valuation[alpha];
        for (const auto& v : r.normal_forms) forms.insert(pattern_form(v));
    }
    out.status = MatchResult::Status::Defined;
    return out;
}

bool term_embeds_strict(const ErasedTerm& v1, const ErasedTerm& v2) {
    if (!v1.is_tree_node()) return false;
    const auto& t1 = v1.tree_left();
    const auto& t2 = v1.tree_right();
    if (term_embeds_weak(t1, v2) || term_embeds_weak(t2, v2)) return true;
    if (!v2.is_tree_node()) return false;
    const auto& u1 = v2.tree_left();
    const auto& u2 = v2.tree_right();
    return (term_embeds_strict(t1, u1) && term_embeds_weak(t2, u2)) ||
           (term_embeds_weak(t1, u1) && term_embeds_strict(t2, u2));
}

bool term_embeds_weak(const ErasedTerm& v1, const ErasedTerm& v2) {
    if (v1.is_leaf() && v2.is_leaf()) return true;
    if (is_neutral(v1) && is_neutral(v2)) return true;
    return term_embeds_strict(v1, v2);
}

std::size_t term_size(const ErasedTerm& v) {
    if (!v.is_tree_node()) return 0;
    return term_size(v.tree_left()) + term_size(v.tree_right()) + 1;
}

std::vector<ErasedTerm> ground_trees(int max_depth) {
    std::set<ErasedTerm> level{ErasedTerm::leaf_con()};
    for (int d = 1; d <= max_depth; ++d) {
        std::vector<ErasedTerm> prev(level.begin(), level.end());
        for (const auto& l : prev)
            for (const auto& r : prev) level.insert(ErasedTerm::tree(l, r));
    }
    return {level.begin(), level.end()};
}

std::size_t GroundSweep::total_exhausted() const {
    std::size_t n = 0;
    for (const auto& e : symbols) n += e.exhausted;
    return n;
}

GroundSweep ground_sweep(const RewriteSystem& sys, const RuleSet& rules, int depth, std::size_t fuel,
                         std::size_t max_calls_per_symbol) {
    GroundSweep out{depth, fuel, {}};
    const auto trees = ground_trees(depth);
    for (const auto& decl : sys.symbols) {
        SweepEntry entry{decl.name, 0, 0, 0};
        std::vector<std::size_t> pick(static_cast<std::size_t>(std::max(decl.recursive, 0)), 0);
        do {
            ErasedTerm call = ErasedTerm::symbol(decl.name);
            for (auto i : pick) call = ErasedTerm::app(call, trees[i]);
            ++entry.calls;
            if (normalize(call, rules, {.fuel = fuel}).exhausted)
                ++entry.exhausted;
            else
                ++entry.normalized;
            std::size_t pos = pick.size();
            while (pos > 0 && ++pick[pos - 1] == trees.size()) pick[--pos] = 0;
            if (pos == 0) break;
        } while (entry.calls < max_calls_per_symbol);
        out.symbols.push_back(entry);
    }
    return out;
}

} // namespace tydp
