#ifndef ORDFORGE_POSET_HPP
#define ORDFORGE_POSET_HPP

// Finite preorders, their set encoding, and the view a model has of an
// encoded poset.
//
// A poset is encoded as the Kuratowski pair (C, R) where C is the set of
// conditions and R the set of pairs (q, p) with q ≤ p.  Stronger conditions
// are smaller.

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ordforge/formula.hpp"
#include "ordforge/model.hpp"

namespace ordforge {

/// Set of condition indices.  Posets are limited to 32 conditions.
using Mask = std::uint32_t;

inline constexpr std::size_t kMaxConditions = 32;

inline Mask bit(std::size_t i) { return Mask{1} << i; }
inline bool has(Mask m, std::size_t i) { return (m >> i) & 1u; }

/// Relation data shared by the V-side poset and a model's view of it.
/// below[i] holds every j with j ≤ i.
class Preorder {
public:
    Preorder() = default;
    Preorder(std::vector<SetTerm> conds, std::vector<Mask> below)
        : conds_(std::move(conds)), below_(std::move(below)) {}

    std::size_t size() const { return conds_.size(); }
    const std::vector<SetTerm>& conditions() const { return conds_; }
    const SetTerm& condition(std::size_t i) const { return conds_[i]; }
    Mask all() const { return size() == 32 ? ~Mask{0} : bit(size()) - 1; }

    std::optional<std::size_t> index(const SetTerm& t) const {
        auto it = std::lower_bound(conds_.begin(), conds_.end(), t);
        if (it == conds_.end() || *it != t) return std::nullopt;
        return static_cast<std::size_t>(it - conds_.begin());
    }

    /// q ≤ p
    bool leq(std::size_t q, std::size_t p) const { return has(below_[p], q); }
    Mask below(std::size_t p) const { return below_[p]; }
    Mask above(std::size_t q) const {
        Mask m = 0;
        for (std::size_t p = 0; p < size(); ++p)
            if (leq(q, p)) m |= bit(p);
        return m;
    }
    bool compatible(std::size_t p, std::size_t q) const { return (below_[p] & below_[q]) != 0; }

    bool is_preorder() const {
        for (std::size_t p = 0; p < size(); ++p) {
            if (!leq(p, p)) return false;
            for (std::size_t q = 0; q < size(); ++q)
                if (leq(q, p) && (below_[q] & ~below_[p])) return false;
        }
        return true;
    }

    /// An element above every condition.
    std::optional<std::size_t> top() const {
        for (std::size_t p = 0; p < size(); ++p)
            if (below_[p] == all()) return p;
        return std::nullopt;
    }

    /// Conditions with nothing strictly below them (up to equivalence).
    Mask minimal() const {
        Mask m = 0;
        for (std::size_t p = 0; p < size(); ++p) {
            bool is_min = true;
            for (std::size_t q = 0; q < size(); ++q)
                if (leq(q, p) && !leq(p, q)) is_min = false;
            if (is_min) m |= bit(p);
        }
        return m;
    }

    /// Upward closure of a set of conditions.
    Mask up(Mask s) const {
        Mask out = 0;
        for (std::size_t q = 0; q < size(); ++q)
            if (has(s, q)) out |= above(q);
        return out;
    }

    Mask to_mask(const std::vector<SetTerm>& ts) const {
        Mask m = 0;
        for (const SetTerm& t : ts)
            if (auto i = index(t)) m |= bit(*i);
        return m;
    }

    std::vector<SetTerm> to_terms(Mask m) const {
        std::vector<SetTerm> out;
        for (std::size_t i = 0; i < size(); ++i)
            if (has(m, i)) out.push_back(conds_[i]);
        return out;
    }

    /// Nonempty, upward closed, and any two members have a common extension
    /// inside the set.
    bool is_filter(Mask g) const {
        if (g == 0) return false;
        for (std::size_t p = 0; p < size(); ++p) {
            if (!has(g, p)) continue;
            if (above(p) & ~g) return false;
            for (std::size_t q = p + 1; q < size(); ++q)
                if (has(g, q) && (below_[p] & below_[q] & g) == 0) return false;
        }
        return true;
    }

    bool is_dense(Mask d) const {
        for (std::size_t p = 0; p < size(); ++p)
            if ((below_[p] & d) == 0) return false;
        return true;
    }
    bool is_open(Mask d) const {
        for (std::size_t p = 0; p < size(); ++p)
            if (has(d, p) && (below_[p] & ~d)) return false;
        return true;
    }
    bool is_predense(Mask d) const {
        for (std::size_t p = 0; p < size(); ++p) {
            bool hit = false;
            for (std::size_t q = 0; q < size() && !hit; ++q) hit = has(d, q) && compatible(p, q);
            if (!hit) return false;
        }
        return true;
    }
    bool is_antichain(Mask a) const {
        for (std::size_t p = 0; p < size(); ++p)
            for (std::size_t q = p + 1; q < size(); ++q)
                if (has(a, p) && has(a, q) && compatible(p, q)) return false;
        return true;
    }
    bool is_maximal_antichain(Mask a) const { return is_antichain(a) && is_predense(a); }

protected:
    std::vector<SetTerm> conds_;
    std::vector<Mask> below_;
};

/// A poset given in V.  The relation is closed to a preorder on construction.
class Poset : public Preorder {
public:
    Poset() = default;
    Poset(std::vector<SetTerm> elems, const std::vector<std::pair<SetTerm, SetTerm>>& le) {
        conds_ = sorted(std::move(elems));
        if (conds_.size() > kMaxConditions) throw Error("poset: too many conditions");
        for (const SetTerm& c : conds_)
            if (c.is_ord()) throw Error("poset: conditions must not be ordinal atoms");
        below_.assign(conds_.size(), 0);
        for (std::size_t i = 0; i < conds_.size(); ++i) below_[i] = bit(i);
        for (const auto& [q, p] : le) {
            auto qi = index(q), pi = index(p);
            if (!qi || !pi) throw Error("poset: relation mentions a non-condition");
            below_[*pi] |= bit(*qi);
        }
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t p = 0; p < conds_.size(); ++p) {
                Mask next = below_[p];
                for (std::size_t q = 0; q < conds_.size(); ++q)
                    if (has(below_[p], q)) next |= below_[q];
                if (next != below_[p]) {
                    below_[p] = next;
                    changed = true;
                }
            }
        }
    }

    SetTerm carrier_term() const { return SetTerm::node(conds_); }
    SetTerm relation_term() const {
        std::vector<SetTerm> pairs;
        for (std::size_t p = 0; p < size(); ++p)
            for (std::size_t q = 0; q < size(); ++q)
                if (leq(q, p)) pairs.push_back(make_pair_term(conds_[q], conds_[p]));
        return SetTerm::node(std::move(pairs));
    }
    SetTerm encode() const { return make_pair_term(carrier_term(), relation_term()); }

    /// The encoding together with everything below it.  A model containing
    /// these terms contains P.
    std::vector<SetTerm> encoding_closure() const {
        std::vector<SetTerm> out = ordclos(encode());
        out.push_back(encode());
        return sorted(std::move(out));
    }
};

/// Pair decoding as seen by M: r ∩ M = {{a}, {a, b}} with all parts in M.
inline std::optional<std::pair<SetTerm, SetTerm>> internal_pair(const EpsilonModel& m, const SetTerm& r) {
    std::vector<SetTerm> rs = m.members_in(r);
    if (rs.empty() || rs.size() > 2) return std::nullopt;
    std::optional<SetTerm> a;
    for (const SetTerm& s : rs) {
        std::vector<SetTerm> ss = m.members_in(s);
        if (ss.size() == 1) {
            if (a && *a != ss[0]) return std::nullopt;
            a = ss[0];
        }
    }
    if (!a) return std::nullopt;
    if (rs.size() == 1) return std::make_pair(*a, *a);
    for (const SetTerm& s : rs) {
        std::vector<SetTerm> ss = m.members_in(s);
        if (ss.size() == 2 && (ss[0] == *a || ss[1] == *a)) return std::make_pair(*a, ss[0] == *a ? ss[1] : ss[0]);
    }
    return std::nullopt;
}

/// M's view of the poset encoded by p_term: the conditions are C ∩ M and the
/// order is read off the internal pairs of R, closed reflexively.
class PosetView : public Preorder {
public:
    PosetView() = default;
    PosetView(const EpsilonModel& m, const SetTerm& p_term) : term_(p_term) {
        if (!m.contains(p_term)) throw Error("poset is not represented in the model");
        auto cr = internal_pair(m, p_term);
        if (!cr) throw Error("poset encoding is not a pair inside the model");
        carrier_ = cr->first;
        relation_ = cr->second;
        conds_ = m.members_in(carrier_);
        if (conds_.size() > kMaxConditions) throw Error("poset: too many conditions");
        below_.assign(conds_.size(), 0);
        for (std::size_t i = 0; i < conds_.size(); ++i) below_[i] = bit(i);
        for (const SetTerm& r : m.members_in(relation_)) {
            auto qp = internal_pair(m, r);
            if (!qp) continue;
            auto qi = index(qp->first), pi = index(qp->second);
            if (qi && pi) below_[*pi] |= bit(*qi);
        }
    }

    const SetTerm& term() const { return term_; }
    const SetTerm& carrier() const { return carrier_; }
    const SetTerm& relation() const { return relation_; }

private:
    SetTerm term_, carrier_, relation_;
};

// Formulas about an encoded poset.  C and R are free variables naming the
// carrier and the relation.

namespace detail {

inline std::string fresh(const std::string& base, int depth) { return base + "_" + std::to_string(depth); }

/// r = (a, b)
inline Formula pair_formula(const std::string& r, const std::string& a, const std::string& b, int d) {
    using F = Formula;
    std::string s = fresh("s", d), t = fresh("t", d), u = fresh("u", d), w = fresh("w", d);
    F singleton = F::conj(F::in(a, s), F::forall_in(w, s, F::eq(w, a)));
    F doubleton = pair_set_formula(t, a, b, fresh("v", d));
    return F::exists_in(s, r, F::exists_in(t, r, F::conj(F::conj(singleton, doubleton),
                                                         F::forall_in(u, r, F::disj(F::eq(u, s), F::eq(u, t))))));
}

/// q ≤ p
inline Formula le_formula(const std::string& q, const std::string& p, int d) {
    std::string r = fresh("r", d);
    return Formula::exists_in(r, "R", pair_formula(r, q, p, d + 1));
}

inline Formula compatible_formula(const std::string& p, const std::string& q, int d) {
    std::string r = fresh("c", d);
    return Formula::exists_in(r, "C", Formula::conj(le_formula(r, p, d + 1), le_formula(r, q, d + 1)));
}

}  // namespace detail

enum class DenseKind { Dense, OpenDense, Predense, MaximalAntichain };

inline const char* to_string(DenseKind k) {
    switch (k) {
        case DenseKind::Dense: return "dense";
        case DenseKind::OpenDense: return "open-dense";
        case DenseKind::Predense: return "predense";
        case DenseKind::MaximalAntichain: return "maximal-antichain";
    }
    return "?";
}

/// "D ⊆ C and D is dense / open dense / predense / a maximal antichain".
inline Formula dense_formula(DenseKind kind) {
    using F = Formula;
    using namespace detail;
    F subset = F::forall_in("x", "D", F::in("x", "C"));
    F dense = F::forall_in("p", "C", F::exists_in("q", "D", le_formula("q", "p", 1)));
    F predense = F::forall_in("p", "C", F::exists_in("q", "D", compatible_formula("p", "q", 1)));
    switch (kind) {
        case DenseKind::Dense: return F::conj(subset, dense);
        case DenseKind::OpenDense: {
            F open = F::forall_in("p", "D", F::forall_in("q", "C", F::implies(le_formula("q", "p", 1), F::in("q", "D"))));
            return F::conj(subset, F::conj(dense, open));
        }
        case DenseKind::Predense: return F::conj(subset, predense);
        case DenseKind::MaximalAntichain: {
            F anti = F::forall_in("p", "D", F::forall_in("q", "D",
                F::implies(compatible_formula("p", "q", 1), F::eq("p", "q"))));
            return F::conj(subset, F::conj(anti, predense));
        }
    }
    return F::falsity();
}

/// The elements D of M with M ⊨ "D is <kind> in P", as condition masks of the
/// view.  Decided by the formula evaluator.
inline std::vector<std::pair<SetTerm, Mask>> internal_dense_family(const EpsilonModel& m, const PosetView& view,
                                                                   DenseKind kind) {
    Formula phi = dense_formula(kind);
    std::vector<std::pair<SetTerm, Mask>> out;
    for (const SetTerm& d : m.elements()) {
        Assignment a{{"D", d}, {"C", view.carrier()}, {"R", view.relation()}};
        if (eval_formula(phi, m, a)) out.emplace_back(d, view.to_mask(m.members_in(d)));
    }
    return out;
}

}  // namespace ordforge

#endif  // ORDFORGE_POSET_HPP
