#pragma once

// Reference implementations used only to cross-check the library.  They are
// written directly from the definitions, favour clarity over speed and share
// no code paths with the implementations they check.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "ordforge/formula.hpp"

namespace ordforge::oracle {

/// x ∩ M computed by scanning the carrier and asking real membership.
inline std::vector<SetTerm> inside(const EpsilonModel& m, const SetTerm& x) {
    std::vector<SetTerm> out;
    for (const SetTerm& t : m.elements())
        if (x.has_member(t)) out.push_back(t);
    return out;
}

/// Internal ordinal, decided by the formula evaluator.
inline bool internal_ordinal(const EpsilonModel& m, const SetTerm& x) {
    using F = Formula;
    F transitive = F::forall_in("y", "x", F::forall_in("z", "y", F::in("z", "x")));
    F linear = F::forall_in("y", "x", F::forall_in("z", "x",
        F::disj(F::in("y", "z"), F::disj(F::eq("y", "z"), F::in("z", "y")))));
    return eval_formula(F::conj(transitive, linear), m, {{"x", x}});
}

inline bool ord_absolute(const EpsilonModel& m) {
    for (const SetTerm& x : m.elements())
        if (!x.is_ord() && internal_ordinal(m, x)) return false;
    return true;
}

inline bool extensional(const EpsilonModel& m) {
    auto es = m.elements();
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = i + 1; j < es.size(); ++j)
            if (inside(m, es[i]) == inside(m, es[j])) return false;
    return true;
}

/// Plain recursion i(x) = {i(t) : t ∈ x ∩ M}, ordinal atoms fixed when
/// fix_ordinals is set.
inline SetTerm collapse_of(const EpsilonModel& m, const SetTerm& x, bool fix_ordinals) {
    if (fix_ordinals && x.is_ord()) return x;
    std::vector<SetTerm> es;
    for (const SetTerm& t : inside(m, x)) es.push_back(collapse_of(m, t, fix_ordinals));
    return SetTerm::node(es);
}

inline std::set<SetTerm> collapse_image(const EpsilonModel& m, bool fix_ordinals) {
    std::set<SetTerm> out;
    for (const SetTerm& x : m.elements()) out.insert(collapse_of(m, x, fix_ordinals));
    return out;
}

/// ordclos by fixpoint iteration on the defining equation.
inline std::set<SetTerm> ordclos(const SetTerm& x) {
    std::set<SetTerm> s;
    if (x.is_ord()) return s;
    for (const SetTerm& e : x.elements()) s.insert(e);
    for (bool grew = true; grew;) {
        grew = false;
        for (const SetTerm& t : std::vector<SetTerm>(s.begin(), s.end())) {
            if (t.is_ord()) continue;
            for (const SetTerm& e : t.elements()) grew |= s.insert(e).second;
        }
    }
    return s;
}

/// Being a P-name, read with real membership.
inline bool is_name_V(const SetTerm& t, const std::vector<SetTerm>& conds) {
    if (t.is_ord()) return true;
    for (const SetTerm& r : t.elements()) {
        auto sp = decode_pair(r);
        if (!sp || std::find(conds.begin(), conds.end(), sp->second) == conds.end()) return false;
        if (!is_name_V(sp->first, conds)) return false;
    }
    return true;
}

}  // namespace ordforge::oracle
