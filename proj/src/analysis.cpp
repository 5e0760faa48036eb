#include "tydp/analysis.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>
#include <tuple>

namespace tydp {

namespace {

std::string join_patterns(const std::vector<Pattern>& ps) {
    std::string out;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (i) out += ",";
        out += ps[i].str();
    }
    return out;
}

} // namespace

std::string DependencyPair::str() const {
    return lhs_symbol + "#(" + join_patterns(lhs_args) + ") -> " + rhs_symbol + "#(" + join_patterns(rhs_args) + ")";
}

std::string DependencyPair::label() const {
    return lhs_symbol + "♯(" + join_patterns(lhs_args) + ")→" + rhs_symbol + "♯(" +
           join_patterns(rhs_args) + ")";
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

// Variables renamed in order of first occurrence, so pairs that differ only
// in variable names share a key.
std::string canonical_key(const DependencyPair& dp) {
    std::map<std::string, std::string> renaming;
    auto visit = [&](const std::vector<Pattern>& ps) {
        for (const auto& p : ps) {
            std::function<void(const Pattern&)> go = [&](const Pattern& q) {
                if (q.is_var() && !renaming.contains(q.name()))
                    renaming.emplace(q.name(), "#" + std::to_string(renaming.size()));
                if (q.is_node()) {
                    go(q.left());
                    go(q.right());
                }
            };
            go(p);
        }
    };
    visit(dp.lhs_args);
    visit(dp.rhs_args);
    DependencyPair copy = dp;
    for (auto& p : copy.lhs_args) p = p.rename(renaming);
    for (auto& p : copy.rhs_args) p = p.rename(renaming);
    return copy.str();
}

class DpCollector {
public:
    DpCollector(const ValidatedRule& rule, const Signature& sig, std::vector<DependencyPair>& out)
        : rule_(rule), sig_(sig), out_(out), used_(rule.typing.pattern_vars) {}

    void walk(const Term& t, const std::map<std::string, std::string>& renaming) {
        switch (t.kind()) {
            case Term::Kind::Symbol:
            case Term::Kind::PatApp: {
                std::vector<Pattern> args;
                const Term* head = &t;
                while (head->kind() == Term::Kind::PatApp) {
                    args.push_back(head->pattern_arg().rename(renaming));
                    head = &head->fun();
                }
                if (head->kind() != Term::Kind::Symbol) {
                    walk(*head, renaming);
                    return;
                }
                std::reverse(args.begin(), args.end());
                if (const auto* e = sig_.find(head->name()); e && args.size() > e->quantifiers)
                    args.erase(args.begin() + static_cast<std::ptrdiff_t>(e->quantifiers), args.end());
                out_.push_back({rule_.rule.head, rule_.typing.recursive_patterns, head->name(), std::move(args),
                                rule_.index, {rule_.index}});
                return;
            }
            case Term::Kind::App:
                walk(t.fun(), renaming);
                walk(t.arg(), renaming);
                return;
            case Term::Kind::Lam: walk(t.body(), renaming); return;
            case Term::Kind::PatLam: {
                // Abstracted pattern variables are unrelated to the lhs ones.
                std::string name = used_.contains(t.name()) ? fresh_name(t.name(), used_) : t.name();
                used_.insert(name);
                auto inner = renaming;
                inner[t.name()] = name;
                walk(t.body(), inner);
                return;
            }
            default: return;
        }
    }

private:
    const ValidatedRule& rule_;
    const Signature& sig_;
    std::vector<DependencyPair>& out_;
    std::set<std::string> used_;
};

} // namespace

std::vector<DependencyPair> extract_dps(const ValidatedSystem& sys) {
    std::vector<DependencyPair> raw;
    for (const auto& rule : sys.rules) DpCollector(rule, sys.signature, raw).walk(rule.rule.rhs, {});

    std::vector<DependencyPair> out;
    std::map<std::string, std::size_t> seen;
    for (auto& dp : raw) {
        auto [it, fresh] = seen.try_emplace(canonical_key(dp), out.size());
        if (fresh) {
            out.push_back(std::move(dp));
        } else {
            auto& rules = out[it->second].rules;
            if (std::find(rules.begin(), rules.end(), dp.rule_index) == rules.end()) rules.push_back(dp.rule_index);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Unification

namespace {

class Unifier {
public:
    bool unify(const Pattern& a0, const Pattern& b0) {
        Pattern a = walk(a0);
        Pattern b = walk(b0);
        if (a.is_wildcard() || b.is_wildcard()) throw std::invalid_argument("unify_patterns: wildcard in input");
        if (a.is_var() && b.is_var() && a.name() == b.name()) return true;
        if (a.is_var()) return bind(a.name(), b);
        if (b.is_var()) return bind(b.name(), a);
        if (a.kind() != b.kind()) return false;
        if (a.is_node()) return unify(a.left(), b.left()) && unify(a.right(), b.right());
        return true;
    }

    PatternSubstitution solved() const {
        PatternSubstitution out;
        for (const auto& [v, p] : bindings_) out.emplace(v, resolve(p));
        return out;
    }

private:
    Pattern walk(Pattern p) const {
        while (p.is_var()) {
            auto it = bindings_.find(p.name());
            if (it == bindings_.end()) break;
            p = it->second;
        }
        return p;
    }

    Pattern resolve(const Pattern& p) const {
        Pattern w = walk(p);
        if (w.is_node()) return Pattern::node(resolve(w.left()), resolve(w.right()));
        return w;
    }

    bool occurs(const std::string& v, const Pattern& p) const {
        Pattern w = walk(p);
        if (w.is_var()) return w.name() == v;
        if (w.is_node()) return occurs(v, w.left()) || occurs(v, w.right());
        return false;
    }

    bool bind(const std::string& v, const Pattern& p) {
        if (occurs(v, p)) return false;
        bindings_.insert_or_assign(v, p);
        return true;
    }

    PatternSubstitution bindings_;
};

Pattern freshen(const Pattern& p, std::size_t& counter) {
    switch (p.kind()) {
        case Pattern::Kind::Var:
        case Pattern::Kind::Wildcard: return Pattern::var("%" + std::to_string(counter++));
        case Pattern::Kind::Node: {
            Pattern l = freshen(p.left(), counter);
            return Pattern::node(l, freshen(p.right(), counter));
        }
        default: return p;
    }
}

} // namespace

std::optional<PatternSubstitution> unify_patterns(const Pattern& p, const Pattern& q) {
    Unifier u;
    if (!u.unify(p, q)) return std::nullopt;
    return u.solved();
}

bool pattern_unifiable(const Pattern& p, const Pattern& q) {
    std::size_t counter = 0;
    Pattern fp = freshen(p, counter);
    Pattern fq = freshen(q, counter);
    return unify_patterns(fp, fq).has_value();
}

// ---------------------------------------------------------------------------
// Graph and components

bool DependencyGraph::has_edge(std::size_t from, std::size_t to) const {
    const auto& s = successors.at(from);
    return std::binary_search(s.begin(), s.end(), to);
}

std::vector<std::pair<std::size_t, std::size_t>> DependencyGraph::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < successors.size(); ++a)
        for (auto b : successors[a]) out.emplace_back(a, b);
    return out;
}

DependencyGraph build_graph(std::vector<DependencyPair> dps) {
    DependencyGraph g;
    g.nodes = std::move(dps);
    g.successors.resize(g.nodes.size());
    for (std::size_t a = 0; a < g.nodes.size(); ++a) {
        const auto& call = g.nodes[a];
        for (std::size_t b = 0; b < g.nodes.size(); ++b) {
            const auto& target = g.nodes[b];
            if (call.rhs_symbol != target.lhs_symbol || call.rhs_args.size() < target.lhs_args.size()) continue;
            bool ok = true;
            for (std::size_t i = 0; ok && i < target.lhs_args.size(); ++i)
                ok = pattern_unifiable(call.rhs_args[i], target.lhs_args[i]);
            if (ok) g.successors[a].push_back(b);
        }
    }
    return g;
}

std::vector<Scc> sccs(const DependencyGraph& g) {
    const std::size_t n = g.size();
    constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<Scc> out;
    std::size_t counter = 0;

    std::function<void(std::size_t)> connect = [&](std::size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (auto w : g.successors[v]) {
            if (index[w] == unvisited) {
                connect(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            Scc comp;
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            std::sort(comp.begin(), comp.end());
            out.push_back(std::move(comp));
        }
    };
    for (std::size_t v = 0; v < n; ++v)
        if (index[v] == unvisited) connect(v);
    std::sort(out.begin(), out.end(), [](const Scc& a, const Scc& b) { return a.front() < b.front(); });
    return out;
}

bool is_nontrivial(const Scc& scc, const DependencyGraph& g) {
    if (scc.size() > 1) return true;
    return !scc.empty() && g.has_edge(scc[0], scc[0]);
}

// ---------------------------------------------------------------------------
// Embedding

namespace {

bool strict_rec(const Pattern& p, const Pattern& q);

bool weak_rec(const Pattern& p, const Pattern& q) { return p == q || strict_rec(p, q); }

bool strict_rec(const Pattern& p, const Pattern& q) {
    if (!p.is_node()) return false;
    if (weak_rec(p.left(), q) || weak_rec(p.right(), q)) return true;
    if (!q.is_node()) return false;
    return (strict_rec(p.left(), q.left()) && weak_rec(p.right(), q.right())) ||
           (weak_rec(p.left(), q.left()) && strict_rec(p.right(), q.right()));
}

} // namespace

bool embeds_strict(const Pattern& p, const Pattern& q) {
    if (p.has_wildcard() || q.has_wildcard()) return false;
    return strict_rec(p, q);
}

bool embeds_weak(const Pattern& p, const Pattern& q) { return p == q || embeds_strict(p, q); }

// ---------------------------------------------------------------------------
// Decrease criterion

const char* to_string(Decrease d) {
    switch (d) {
        case Decrease::Strict: return "strict";
        case Decrease::Weak: return "weak";
        case Decrease::None: return "none";
    }
    return "?";
}

Decrease classify(const DependencyPair& dp, int lhs_index, int rhs_index) {
    if (lhs_index < 1 || rhs_index < 1 || static_cast<std::size_t>(lhs_index) > dp.lhs_args.size() ||
        static_cast<std::size_t>(rhs_index) > dp.rhs_args.size())
        return Decrease::None;
    const Pattern& p = dp.lhs_args[lhs_index - 1];
    const Pattern& q = dp.rhs_args[rhs_index - 1];
    if (embeds_strict(p, q)) return Decrease::Strict;
    if (embeds_weak(p, q)) return Decrease::Weak;
    return Decrease::None;
}

namespace {

// Cycle among `allowed` nodes, first node repeated at the end; empty if none.
std::vector<std::size_t> find_cycle(const DependencyGraph& g, const std::set<std::size_t>& allowed) {
    enum class Color { White, Gray, Black };
    std::map<std::size_t, Color> color;
    std::vector<std::size_t> path;
    std::vector<std::size_t> cycle;

    std::function<bool(std::size_t)> dfs = [&](std::size_t v) {
        color[v] = Color::Gray;
        path.push_back(v);
        for (auto w : g.successors[v]) {
            if (!allowed.contains(w)) continue;
            if (color[w] == Color::Gray) {
                auto it = std::find(path.begin(), path.end(), w);
                cycle.assign(it, path.end());
                cycle.push_back(w);
                return true;
            }
            if (color[w] == Color::White && dfs(w)) return true;
        }
        path.pop_back();
        color[v] = Color::Black;
        return false;
    };
    for (auto v : allowed) color[v] = Color::White;
    for (auto v : allowed)
        if (color[v] == Color::White && dfs(v)) return cycle;
    return {};
}

std::string describe_cycle(const DependencyGraph& g, const std::vector<std::size_t>& cycle) {
    std::string out;
    for (std::size_t i = 0; i + 1 < cycle.size(); ++i) {
        if (i) out += " => ";
        out += "[" + std::to_string(cycle[i]) + "] " + g.nodes[cycle[i]].str();
    }
    return out;
}

std::string describe_assignment(const IndexAssignment& iota) {
    std::string out;
    for (const auto& [f, i] : iota) {
        if (!out.empty()) out += ", ";
        out += f + "=" + std::to_string(i);
    }
    return out;
}

SccResult evaluate(const Scc& scc, const DependencyGraph& g, const std::function<Decrease(std::size_t)>& cls) {
    SccResult r;
    std::set<std::size_t> members(scc.begin(), scc.end());
    std::set<std::size_t> non_strict;
    for (auto v : scc) {
        Decrease d = cls(v);
        r.classes[v] = d;
        if (d == Decrease::Strict)
            r.strict_nodes.push_back(v);
        else
            non_strict.insert(v);
        if (d == Decrease::None && !r.failing_node) r.failing_node = v;
    }
    if (r.failing_node) {
        r.explanation = "node [" + std::to_string(*r.failing_node) + "] " + g.nodes[*r.failing_node].str() +
                        " has no weak decrease at the chosen indices";
        return r;
    }
    r.cycle = find_cycle(g, non_strict);
    if (!r.cycle.empty()) {
        r.explanation = "cycle without strict decrease: " + describe_cycle(g, r.cycle);
        return r;
    }
    r.ok = true;
    return r;
}

} // namespace

SccResult check_scc(const Scc& scc, const DependencyGraph& g, const IndexAssignment& iota) {
    return evaluate(scc, g, [&](std::size_t v) {
        const auto& dp = g.nodes[v];
        auto li = iota.find(dp.lhs_symbol);
        auto ri = iota.find(dp.rhs_symbol);
        if (li == iota.end() || ri == iota.end()) return Decrease::None;
        return classify(dp, li->second, ri->second);
    });
}

std::variant<IndexAssignment, IndexNotFound> find_indices(const Scc& scc, const DependencyGraph& g,
                                                          const Signature& sig) {
    std::set<std::string> symbol_set;
    for (auto v : scc) {
        symbol_set.insert(g.nodes[v].lhs_symbol);
        symbol_set.insert(g.nodes[v].rhs_symbol);
    }
    std::vector<std::string> symbols(symbol_set.begin(), symbol_set.end());
    std::vector<int> bounds;
    std::size_t space = 1;
    for (const auto& f : symbols) {
        int k = sig.recursive_count(f);
        if (k <= 0) {
            IndexNotFound nf;
            nf.search_space = 0;
            nf.diagnosis = "symbol '" + f + "' has no recursive argument, so no index can be chosen";
            return nf;
        }
        bounds.push_back(k);
        space = space > std::numeric_limits<std::size_t>::max() / k ? std::numeric_limits<std::size_t>::max()
                                                                     : space * static_cast<std::size_t>(k);
    }

    std::map<std::tuple<std::size_t, int, int>, Decrease> memo;
    std::vector<int> current(symbols.size(), 1);
    std::optional<IndexAssignment> best;
    std::size_t best_failures = std::numeric_limits<std::size_t>::max();
    // Odometer over 1..k per symbol, last symbol fastest.
    auto advance = [&] {
        for (std::size_t pos = current.size(); pos-- > 0;) {
            if (current[pos] < bounds[pos]) {
                ++current[pos];
                return true;
            }
            current[pos] = 1;
        }
        return false;
    };

    while (true) {
        IndexAssignment iota;
        for (std::size_t i = 0; i < symbols.size(); ++i) iota[symbols[i]] = current[i];
        std::size_t failures = 0;
        auto result = evaluate(scc, g, [&](std::size_t v) {
            const auto& dp = g.nodes[v];
            auto key = std::make_tuple(v, iota.at(dp.lhs_symbol), iota.at(dp.rhs_symbol));
            auto it = memo.find(key);
            if (it == memo.end()) it = memo.emplace(key, classify(dp, std::get<1>(key), std::get<2>(key))).first;
            if (it->second == Decrease::None) ++failures;
            return it->second;
        });
        if (result.ok) return iota;
        if (failures < best_failures) {
            best_failures = failures;
            best = iota;
        }

        if (!advance()) break;
    }

    IndexNotFound nf;
    nf.search_space = space;
    nf.near_miss = best;
    if (best) {
        nf.near_miss_result = check_scc(scc, g, *best);
        nf.diagnosis = "no recursive index among " + std::to_string(space) + " candidates; closest (" +
                       describe_assignment(*best) + "): " + nf.near_miss_result.explanation;
    } else {
        nf.diagnosis = "empty component";
    }
    return nf;
}

Verdict check_criterion(const ValidatedSystem& sys) {
    Verdict v;
    v.graph = build_graph(extract_dps(sys));
    v.components = sccs(v.graph);
    for (const auto& scc : v.components) {
        if (!is_nontrivial(scc, v.graph)) continue;
        auto found = find_indices(scc, v.graph, sys.signature);
        if (auto* iota = std::get_if<IndexAssignment>(&found)) {
            auto r = check_scc(scc, v.graph, *iota);
            v.certificates.push_back({scc, *iota, r.strict_nodes});
        } else {
            v.failures.push_back({scc, std::get<IndexNotFound>(found)});
        }
    }
    v.outcome = v.failures.empty() ? Verdict::Outcome::Terminating : Verdict::Outcome::Unknown;
    return v;
}

// ---------------------------------------------------------------------------
// DOT

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

} // namespace

std::string to_dot(const DependencyGraph& g, const Verdict* verdict) {
    std::string out = "digraph dependency_graph {\n";
    if (g.size() == 0) return out + "}\n";
    out += "  node [shape=box, fontname=\"monospace\"];\n";

    std::set<std::size_t> strict;
    std::vector<std::pair<Scc, std::string>> clusters;
    if (verdict) {
        for (const auto& c : verdict->certificates) {
            strict.insert(c.strict_nodes.begin(), c.strict_nodes.end());
            clusters.emplace_back(c.nodes, "iota: " + describe_assignment(c.indices));
        }
        for (const auto& f : verdict->failures) clusters.emplace_back(f.nodes, "no index");
        std::sort(clusters.begin(), clusters.end());
    }

    for (std::size_t i = 0; i < clusters.size(); ++i) {
        out += "  subgraph cluster_" + std::to_string(i) + " {\n";
        out += "    label=\"" + dot_escape(clusters[i].second) + "\";\n";
        out += "    style=dashed;\n";
        for (auto v : clusters[i].first) {
            out += "    n" + std::to_string(v) + ";\n";
        }
        out += "  }\n";
    }
    for (std::size_t v = 0; v < g.size(); ++v) {
        out += "  n" + std::to_string(v) + " [label=\"" + dot_escape(g.nodes[v].label()) + "\"";
        if (strict.contains(v)) out += ", penwidth=2, color=\"darkgreen\"";
        out += "];\n";
    }
    for (const auto& [a, b] : g.edges()) out += "  n" + std::to_string(a) + " -> n" + std::to_string(b) + ";\n";
    return out + "}\n";
}

} // namespace tydp
