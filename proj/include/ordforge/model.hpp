#ifndef ORDFORGE_MODEL_HPP
#define ORDFORGE_MODEL_HPP

// Finite epsilon-structures and the structural predicates on them.
//
// A model M is a finite set of terms with membership restricted to M.  Its
// internal view of an element x is members(x) ∩ M; for an ordinal atom ord(n)
// that is the set of ordinal atoms of M below n.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ordforge/term.hpp"

namespace ordforge {

class EpsilonModel {
public:
    EpsilonModel() = default;
    explicit EpsilonModel(std::vector<SetTerm> elements) : elems_(sorted(std::move(elements))) {
        index_.reserve(elems_.size());
        for (const SetTerm& t : elems_) index_.insert(t);
    }

    std::span<const SetTerm> elements() const { return elems_; }
    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    bool contains(const SetTerm& t) const { return index_.count(t) != 0; }

    /// ON^M: the ordinal atoms of M, ascending.  Canonical order puts them first.
    std::vector<SetTerm> ordinals() const {
        std::vector<SetTerm> out;
        for (const SetTerm& t : elems_) {
            if (!t.is_ord()) break;
            out.push_back(t);
        }
        return out;
    }

    /// Internal members of x: members(x) ∩ M.
    std::vector<SetTerm> members_in(const SetTerm& x) const {
        std::vector<SetTerm> out;
        if (x.is_ord()) {
            for (const SetTerm& t : elems_) {
                if (!t.is_ord() || t.ordinal() >= x.ordinal()) break;
                out.push_back(t);
            }
            return out;
        }
        for (const SetTerm& e : x.elements())
            if (contains(e)) out.push_back(e);
        return out;
    }

    SetTerm as_term() const { return SetTerm::node(elems_); }

    EpsilonModel with(std::span<const SetTerm> extra) const {
        std::vector<SetTerm> all(elems_.begin(), elems_.end());
        all.insert(all.end(), extra.begin(), extra.end());
        return EpsilonModel(std::move(all));
    }

    friend bool operator==(const EpsilonModel& a, const EpsilonModel& b) { return a.elems_ == b.elems_; }

private:
    std::vector<SetTerm> elems_;
    TermSet index_;
};

inline std::ostream& operator<<(std::ostream& os, const EpsilonModel& m) {
    os << "{";
    bool first = true;
    for (const SetTerm& t : m.elements()) {
        if (!first) os << ", ";
        first = false;
        os << t;
    }
    return os << "}";
}

/// Every real member of every element lies in M.
inline bool is_transitive(const EpsilonModel& m) {
    for (const SetTerm& x : m.elements())
        for (const SetTerm& y : x.members())
            if (!m.contains(y)) return false;
    return true;
}

/// Distinct elements have distinct internal member sets.
inline bool is_extensional(const EpsilonModel& m) {
    std::map<std::vector<SetTerm>, SetTerm> seen;
    for (const SetTerm& x : m.elements()) {
        auto [it, fresh] = seen.emplace(m.members_in(x), x);
        if (!fresh) return false;
    }
    return true;
}

/// M thinks x is an ordinal: x ∩ M is transitive in M and linearly ordered by ∈.
inline bool is_internal_ordinal(const EpsilonModel& m, const SetTerm& x) {
    const std::vector<SetTerm> xs = m.members_in(x);
    auto in_x = [&](const SetTerm& t) { return std::binary_search(xs.begin(), xs.end(), t); };
    for (const SetTerm& y : xs)
        for (const SetTerm& z : m.members_in(y))
            if (!in_x(z)) return false;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
            if (!xs[i].has_member(xs[j]) && !xs[j].has_member(xs[i])) return false;
    return true;
}

/// The internal ordinals of M that are not ordinal atoms.
inline std::vector<SetTerm> ordinal_impostors(const EpsilonModel& m) {
    std::vector<SetTerm> out;
    for (const SetTerm& x : m.elements())
        if (x.is_node() && is_internal_ordinal(m, x)) out.push_back(x);
    return out;
}

/// ON^M ⊆ ON, and ord(0..base-1) ∈ M (finite stand-in for ω ⊆ M).
inline bool is_ord_absolute(const EpsilonModel& m, std::uint32_t base = 0) {
    for (std::uint32_t k = 0; k < base; ++k)
        if (!m.contains(SetTerm::ord(k))) return false;
    for (const SetTerm& x : m.elements())
        if (x.is_node() && is_internal_ordinal(m, x)) return false;
    return true;
}

/// Every node element has all its members in M.
inline bool is_ord_closed(const EpsilonModel& m) {
    for (const SetTerm& x : m.elements()) {
        if (x.is_ord()) continue;
        for (const SetTerm& y : x.elements())
            if (!m.contains(y)) return false;
    }
    return true;
}

inline bool is_ord_transitive(const EpsilonModel& m, std::uint32_t base = 0) {
    return is_ord_absolute(m, base) && is_ord_closed(m);
}

/// ordclos(x) = x ∪ ⋃{ordclos(t) : t ∈ x∖ON}.  Ordinal atoms are opaque, so
/// ordclos(ord(n)) is empty.
inline std::vector<SetTerm> ordclos(const SetTerm& x) {
    if (x.is_ord()) return {};
    TermSet seen;
    std::vector<SetTerm> out;
    std::vector<SetTerm> stack(x.elements().begin(), x.elements().end());
    while (!stack.empty()) {
        SetTerm t = stack.back();
        stack.pop_back();
        if (!seen.insert(t).second) continue;
        out.push_back(t);
        for (const SetTerm& e : t.elements()) stack.push_back(e);
    }
    return sorted(std::move(out));
}

inline EpsilonModel ordclos(const EpsilonModel& m) { return EpsilonModel(ordclos(m.as_term())); }

/// Desk-scale hco(α): rank(x) < α and |ordclos(x)| ≤ bound.
inline bool hco_check(const SetTerm& x, std::uint32_t alpha, std::size_t bound) {
    return x.rank() < alpha && ordclos(x).size() <= bound;
}

using RankMap = std::unordered_map<SetTerm, std::uint32_t, SetTermHash>;

/// Rank of each element in the internal structure (M, ∈ ∩ M²).
inline RankMap internal_ranks(const EpsilonModel& m) {
    RankMap rank;
    // Canonical order lists ordinal atoms ascending and nodes by real rank,
    // and real rank bounds internal rank, so one ascending pass suffices.
    for (const SetTerm& x : m.elements()) {
        std::uint32_t r = 0;
        for (const SetTerm& y : m.members_in(x)) r = std::max(r, rank.at(y) + 1);
        rank[x] = r;
    }
    return rank;
}

/// M ⊨ "a = b + 1" for elements of M: a ∩ M = (b ∩ M) ∪ {b}.
inline bool internal_successor_of(const EpsilonModel& m, const SetTerm& a, const SetTerm& b) {
    std::vector<SetTerm> want = m.members_in(b);
    want.push_back(b);
    return m.members_in(a) == sorted(std::move(want));
}

/// "α is successor" and "α = β+1" agree between M and V on the ordinals of M.
/// Every nonzero atom is a successor in V, so this holds exactly when ON^M is
/// an initial segment of the atoms.
inline bool is_successor_absolute(const EpsilonModel& m) {
    const std::vector<SetTerm> on = m.ordinals();
    for (const SetTerm& a : on) {
        bool internal_succ = false;
        for (const SetTerm& b : on) {
            bool in_m = internal_successor_of(m, a, b);
            bool in_v = a.ordinal() == b.ordinal() + 1;
            if (in_m != in_v) return false;
            internal_succ = internal_succ || in_m;
        }
        if (internal_succ != (a.ordinal() > 0)) return false;
    }
    return true;
}

}  // namespace ordforge

#endif  // ORDFORGE_MODEL_HPP
