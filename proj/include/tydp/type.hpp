#pragma once

#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "tydp/pattern.hpp"

namespace tydp {

/// Refinement type: `B(p)`, `T -> U`, or `forall a. T`.
///
/// `forall` binds a pattern variable in its body. Equality is
/// alpha-equivalence.
class Type {
public:
    enum class Kind { Base, Arrow, Forall };

    static Type base(Pattern p);
    static Type arrow(Type domain, Type codomain);
    static Type forall(std::string binder, Type body);
    static Type forall(const std::vector<std::string>& binders, Type body);

    Kind kind() const;
    bool is_base() const { return kind() == Kind::Base; }
    bool is_arrow() const { return kind() == Kind::Arrow; }
    bool is_forall() const { return kind() == Kind::Forall; }

    const Pattern& pattern() const;
    const Type& domain() const;
    const Type& codomain() const;
    const std::string& binder() const;
    const Type& body() const;

    /// Free pattern variables.
    std::set<std::string> free_vars() const;
    /// Every variable name occurring, bound or free.
    void collect_all_names(std::set<std::string>& out) const;

    std::string str() const;

    friend bool operator==(const Type& a, const Type& b);

private:
    struct Rep;
    explicit Type(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
    std::shared_ptr<const Rep> rep_;
};

std::ostream& operator<<(std::ostream& os, const Type& t);

bool alpha_equal(const Type& a, const Type& b);

/// Capture-avoiding `t[var := p]`.
Type subst_pattern(const Type& t, const std::string& var, const Pattern& p);

/// Rename every bound variable to a name outside `avoid`.
Type rename_binders_away(const Type& t, const std::set<std::string>& avoid);

/// Number of leading `forall` binders.
std::size_t quantifier_count(const Type& t);

/// `base` decorated with primes until it is not in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

} // namespace tydp
