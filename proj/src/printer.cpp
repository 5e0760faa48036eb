#include "tydp/syntax.hpp"

namespace tydp {

std::string print_symbol(const SymbolDecl& decl) {
    return "symbol " + decl.name + " : " + decl.type.str() + " recursive " + std::to_string(decl.recursive) + ";";
}

std::string print_rule(const RewriteRule& rule) {
    return "rule " + rule.lhs().str() + " -> " + rule.rhs.str() + ";";
}

std::string print_system(const RewriteSystem& sys) {
    std::string out;
    for (const auto& s : sys.symbols) out += print_symbol(s) + "\n";
    if (!sys.symbols.empty() && !sys.rules.empty()) out += "\n";
    for (const auto& r : sys.rules) out += print_rule(r) + "\n";
    return out;
}

bool systems_equal(const RewriteSystem& a, const RewriteSystem& b) {
    if (a.symbols.size() != b.symbols.size() || a.rules.size() != b.rules.size()) return false;
    for (std::size_t i = 0; i < a.symbols.size(); ++i) {
        const auto& x = a.symbols[i];
        const auto& y = b.symbols[i];
        if (x.name != y.name || x.recursive != y.recursive || !alpha_equal(x.type, y.type)) return false;
    }
    for (std::size_t i = 0; i < a.rules.size(); ++i) {
        const auto& x = a.rules[i];
        const auto& y = b.rules[i];
        if (x.head != y.head || x.pattern_args != y.pattern_args || x.args.size() != y.args.size()) return false;
        for (std::size_t j = 0; j < x.args.size(); ++j)
            if (!(x.args[j] == y.args[j])) return false;
        if (!(x.rhs == y.rhs)) return false;
    }
    return true;
}

} // namespace tydp
