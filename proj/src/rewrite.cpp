#include "tydp/rewrite.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace tydp {

RuleSet::RuleSet(const RewriteSystem& sys) {
    for (std::size_t i = 0; i < sys.rules.size(); ++i) {
        const auto& r = sys.rules[i];
        ErasedTerm lhs = ErasedTerm::symbol(r.head);
        for (const auto& a : r.args) lhs = ErasedTerm::app(lhs, erase(a));
        by_head_[r.head].push_back(rules_.size());
        rules_.push_back({r.head, lhs, erase(r.rhs), i});
    }
}

std::vector<const ErasedRule*> RuleSet::for_head(const std::string& symbol) const {
    std::vector<const ErasedRule*> out;
    if (auto it = by_head_.find(symbol); it != by_head_.end())
        for (auto i : it->second) out.push_back(&rules_[i]);
    return out;
}

namespace {

bool match_into(const ErasedTerm& l, const ErasedTerm& t, TermSubstitution& sigma) {
    switch (l.kind()) {
        case ErasedTerm::Kind::Var: {
            auto [it, fresh] = sigma.try_emplace(l.name(), t);
            return fresh || it->second == t;
        }
        case ErasedTerm::Kind::Symbol: return t.is_symbol() && t.name() == l.name();
        case ErasedTerm::Kind::LeafCon:
        case ErasedTerm::Kind::NodeCon: return t.kind() == l.kind();
        case ErasedTerm::Kind::App:
            return t.is_app() && match_into(l.fun(), t.fun(), sigma) && match_into(l.arg(), t.arg(), sigma);
        case ErasedTerm::Kind::Lam: return false;
    }
    return false;
}

const ErasedTerm& spine_head(const ErasedTerm& t) {
    const ErasedTerm* h = &t;
    while (h->is_app()) h = &h->fun();
    return *h;
}

void collect_reducts(const ErasedTerm& t, const RuleSet& rules, std::set<ErasedTerm>& out) {
    if (t.is_app() && t.fun().is_lam())
        out.insert(substitute(t.fun().body(), {{t.fun().name(), t.arg()}}));
    if (const auto& head = spine_head(t); head.is_symbol()) {
        for (const auto* r : rules.for_head(head.name()))
            if (auto sigma = match_lhs(r->lhs, t)) out.insert(substitute(r->rhs, *sigma));
    }
    if (t.is_app()) {
        std::set<ErasedTerm> sub;
        collect_reducts(t.fun(), rules, sub);
        for (const auto& f : sub) out.insert(ErasedTerm::app(f, t.arg()));
        sub.clear();
        collect_reducts(t.arg(), rules, sub);
        for (const auto& a : sub) out.insert(ErasedTerm::app(t.fun(), a));
    } else if (t.is_lam()) {
        std::set<ErasedTerm> sub;
        collect_reducts(t.body(), rules, sub);
        for (const auto& b : sub) out.insert(ErasedTerm::lam(t.name(), b));
    }
}

} // namespace

std::optional<TermSubstitution> match_lhs(const ErasedTerm& lhs, const ErasedTerm& t) {
    TermSubstitution sigma;
    if (!match_into(lhs, t, sigma)) return std::nullopt;
    return sigma;
}

std::vector<ErasedTerm> step(const ErasedTerm& t, const RuleSet& rules) {
    std::set<ErasedTerm> out;
    collect_reducts(t, rules, out);
    return {out.begin(), out.end()};
}

ReductionOutcome normalize(const ErasedTerm& t, const RuleSet& rules, const NormalizeOptions& options) {
    enum class Color { Gray, Black };
    struct Frame {
        ErasedTerm term;
        std::vector<ErasedTerm> successors;
        std::size_t next = 0;
    };

    ReductionOutcome out;
    std::unordered_map<std::string, Color> color;
    std::set<ErasedTerm> normal_forms;
    std::vector<Frame> stack;

    auto stop = [&](const std::vector<ErasedTerm>& pending) {
        out.exhausted = true;
        std::set<ErasedTerm> frontier(pending.begin(), pending.end());
        for (const auto& f : stack)
            for (std::size_t i = f.next; i < f.successors.size(); ++i)
                if (!color.contains(f.successors[i].key())) frontier.insert(f.successors[i]);
        out.frontier.assign(frontier.begin(), frontier.end());
    };

    // False when fuel is gone.
    auto expand = [&](const ErasedTerm& u) {
        if (out.states >= options.fuel) return false;
        ++out.states;
        color[u.key()] = Color::Gray;
        auto succ = step(u, rules);
        if (succ.empty()) normal_forms.insert(u);
        if (options.reverse_order) std::reverse(succ.begin(), succ.end());
        stack.push_back({u, std::move(succ), 0});
        return true;
    };

    if (!expand(t)) {
        stop({t});
        return out;
    }
    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.next == top.successors.size()) {
            color[top.term.key()] = Color::Black;
            stack.pop_back();
            continue;
        }
        ErasedTerm next = top.successors[top.next++];
        auto it = color.find(next.key());
        if (it == color.end()) {
            if (!expand(next)) {
                stop({next});
                break;
            }
        } else if (it->second == Color::Gray) {
            out.cycle_detected = true;
            auto start = std::find_if(stack.begin(), stack.end(), [&](const Frame& f) { return f.term == next; });
            for (auto f = start; f != stack.end(); ++f) out.cycle.push_back(f->term);
            out.cycle.push_back(next);
            stop({});
            break;
        }
    }
    out.normal_forms.assign(normal_forms.begin(), normal_forms.end());
    return out;
}

bool is_value(const ErasedTerm& t) { return t.is_lam() || t.is_leaf() || t.is_tree_node(); }

bool is_neutral(const ErasedTerm& t) { return !is_value(t); }

} // namespace tydp
