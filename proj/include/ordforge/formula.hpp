#ifndef ORDFORGE_FORMULA_HPP
#define ORDFORGE_FORMULA_HPP

// First-order formulas over {∈, =} and their Tarskian evaluation in a finite
// model.  Quantifiers range over the carrier; the bounded forms ∃x∈y and ∀x∈y
// range over the internal members of y and exist only as a fast path.

#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ordforge/model.hpp"

namespace ordforge {

class Formula {
public:
    enum class Kind { True, False, In, Eq, Not, And, Or, Implies, Exists, Forall, ExistsIn, ForallIn };

    static Formula truth() { return Formula(Kind::True); }
    static Formula falsity() { return Formula(Kind::False); }
    static Formula in(std::string x, std::string y) { return atom(Kind::In, std::move(x), std::move(y)); }
    static Formula eq(std::string x, std::string y) { return atom(Kind::Eq, std::move(x), std::move(y)); }
    static Formula negate(Formula a) { return compound(Kind::Not, {std::move(a)}); }
    static Formula conj(Formula a, Formula b) { return compound(Kind::And, {std::move(a), std::move(b)}); }
    static Formula disj(Formula a, Formula b) { return compound(Kind::Or, {std::move(a), std::move(b)}); }
    static Formula implies(Formula a, Formula b) { return compound(Kind::Implies, {std::move(a), std::move(b)}); }
    static Formula exists(std::string x, Formula body) { return binder(Kind::Exists, std::move(x), {}, std::move(body)); }
    static Formula forall(std::string x, Formula body) { return binder(Kind::Forall, std::move(x), {}, std::move(body)); }
    /// ∃x ∈ y φ, equivalent to ∃x (x ∈ y ∧ φ).
    static Formula exists_in(std::string x, std::string y, Formula body) {
        return binder(Kind::ExistsIn, std::move(x), std::move(y), std::move(body));
    }
    /// ∀x ∈ y φ, equivalent to ∀x (x ∈ y → φ).
    static Formula forall_in(std::string x, std::string y, Formula body) {
        return binder(Kind::ForallIn, std::move(x), std::move(y), std::move(body));
    }

    Kind kind() const { return node_->kind; }
    const std::string& var() const { return node_->a; }
    const std::string& other() const { return node_->b; }
    const std::vector<Formula>& children() const { return node_->kids; }

    /// Variables occurring free.
    std::set<std::string> free_variables() const {
        std::set<std::string> out;
        collect_free(out, {});
        return out;
    }

    std::string str() const {
        std::ostringstream os;
        print(os);
        return os.str();
    }

    void print(std::ostream& os) const {
        const Node& n = *node_;
        switch (n.kind) {
            case Kind::True: os << "true"; return;
            case Kind::False: os << "false"; return;
            case Kind::In: os << n.a << " in " << n.b; return;
            case Kind::Eq: os << n.a << " = " << n.b; return;
            case Kind::Not: os << "not "; paren(os, n.kids[0]); return;
            case Kind::And:
            case Kind::Or:
            case Kind::Implies: {
                const char* op = n.kind == Kind::And ? " and " : n.kind == Kind::Or ? " or " : " -> ";
                paren(os, n.kids[0]);
                os << op;
                paren(os, n.kids[1]);
                return;
            }
            case Kind::Exists: os << "exists " << n.a << ". "; paren(os, n.kids[0]); return;
            case Kind::Forall: os << "forall " << n.a << ". "; paren(os, n.kids[0]); return;
            case Kind::ExistsIn: os << "exists " << n.a << " in " << n.b << ". "; paren(os, n.kids[0]); return;
            case Kind::ForallIn: os << "forall " << n.a << " in " << n.b << ". "; paren(os, n.kids[0]); return;
        }
    }

private:
    struct Node {
        Kind kind;
        std::string a, b;
        std::vector<Formula> kids;
    };

    explicit Formula(Kind k) : node_(std::make_shared<Node>(Node{k, {}, {}, {}})) {}
    static Formula atom(Kind k, std::string x, std::string y) {
        Formula f(k);
        auto n = std::make_shared<Node>(Node{k, std::move(x), std::move(y), {}});
        f.node_ = std::move(n);
        return f;
    }
    static Formula compound(Kind k, std::vector<Formula> kids) {
        Formula f(k);
        f.node_ = std::make_shared<Node>(Node{k, {}, {}, std::move(kids)});
        return f;
    }
    static Formula binder(Kind k, std::string x, std::string y, Formula body) {
        Formula f(k);
        f.node_ = std::make_shared<Node>(Node{k, std::move(x), std::move(y), {std::move(body)}});
        return f;
    }

    static bool atomic_or_constant(const Formula& f) {
        Kind k = f.kind();
        return k == Kind::True || k == Kind::False || k == Kind::In || k == Kind::Eq;
    }
    static void paren(std::ostream& os, const Formula& f) {
        if (atomic_or_constant(f)) {
            f.print(os);
        } else {
            os << "(";
            f.print(os);
            os << ")";
        }
    }

    void collect_free(std::set<std::string>& out, std::set<std::string> bound) const {
        const Node& n = *node_;
        auto note = [&](const std::string& v) {
            if (!bound.count(v)) out.insert(v);
        };
        switch (n.kind) {
            case Kind::True:
            case Kind::False: return;
            case Kind::In:
            case Kind::Eq: note(n.a); note(n.b); return;
            case Kind::Not:
            case Kind::And:
            case Kind::Or:
            case Kind::Implies:
                for (const Formula& k : n.kids) k.collect_free(out, bound);
                return;
            case Kind::ExistsIn:
            case Kind::ForallIn: note(n.b); [[fallthrough]];
            case Kind::Exists:
            case Kind::Forall:
                bound.insert(n.a);
                n.kids[0].collect_free(out, bound);
                return;
        }
    }

    std::shared_ptr<const Node> node_;
};

inline std::ostream& operator<<(std::ostream& os, const Formula& f) {
    f.print(os);
    return os;
}

using Assignment = std::map<std::string, SetTerm>;

namespace detail {

inline bool eval_rec(const Formula& f, const EpsilonModel& m, Assignment& env) {
    using K = Formula::Kind;
    auto lookup = [&](const std::string& v) -> const SetTerm& {
        auto it = env.find(v);
        if (it == env.end()) throw Error("eval_formula: unbound variable '" + v + "'");
        return it->second;
    };
    auto quantify = [&](const std::vector<SetTerm>& range, bool existential) {
        const std::string& v = f.var();
        auto saved = env.find(v);
        std::optional<SetTerm> old;
        if (saved != env.end()) old = saved->second;
        bool result = !existential;
        for (const SetTerm& t : range) {
            env[v] = t;
            if (eval_rec(f.children()[0], m, env) == existential) {
                result = existential;
                break;
            }
        }
        if (old) env[v] = *old; else env.erase(v);
        return result;
    };
    switch (f.kind()) {
        case K::True: return true;
        case K::False: return false;
        case K::In: {
            const SetTerm& a = lookup(f.var());
            const SetTerm& b = lookup(f.other());
            return b.has_member(a);
        }
        case K::Eq: return lookup(f.var()) == lookup(f.other());
        case K::Not: return !eval_rec(f.children()[0], m, env);
        case K::And: return eval_rec(f.children()[0], m, env) && eval_rec(f.children()[1], m, env);
        case K::Or: return eval_rec(f.children()[0], m, env) || eval_rec(f.children()[1], m, env);
        case K::Implies: return !eval_rec(f.children()[0], m, env) || eval_rec(f.children()[1], m, env);
        case K::Exists:
        case K::Forall: {
            std::vector<SetTerm> all(m.elements().begin(), m.elements().end());
            return quantify(all, f.kind() == K::Exists);
        }
        case K::ExistsIn:
        case K::ForallIn: return quantify(m.members_in(lookup(f.other())), f.kind() == K::ExistsIn);
    }
    return false;
}

}  // namespace detail

/// Truth of phi in (M, ∈ ∩ M²) under the given assignment, whose values must
/// lie in M.
inline bool eval_formula(const Formula& phi, const EpsilonModel& m, const Assignment& assignment = {}) {
    for (const std::string& v : phi.free_variables())
        if (!assignment.count(v)) throw Error("eval_formula: unbound variable '" + v + "'");
    for (const auto& [v, t] : assignment)
        if (!m.contains(t)) throw Error("eval_formula: value of '" + v + "' is not in the model");
    Assignment env = assignment;
    return detail::eval_rec(phi, m, env);
}

// Common definable relations.

/// x ⊆ y
inline Formula subset_formula(const std::string& x, const std::string& y, const std::string& z = "_z") {
    return Formula::forall_in(z, x, Formula::in(z, y));
}

/// z = x ∪ y
inline Formula union_formula(const std::string& x, const std::string& y, const std::string& z,
                             const std::string& w = "_w") {
    return Formula::forall(w, Formula::conj(
        Formula::implies(Formula::in(w, z), Formula::disj(Formula::in(w, x), Formula::in(w, y))),
        Formula::implies(Formula::disj(Formula::in(w, x), Formula::in(w, y)), Formula::in(w, z))));
}

/// x = {a, b}
inline Formula pair_set_formula(const std::string& x, const std::string& a, const std::string& b,
                                const std::string& w = "_w") {
    return Formula::conj(
        Formula::conj(Formula::in(a, x), Formula::in(b, x)),
        Formula::forall_in(w, x, Formula::disj(Formula::eq(w, a), Formula::eq(w, b))));
}

}  // namespace ordforge

#endif  // ORDFORGE_FORMULA_HPP
