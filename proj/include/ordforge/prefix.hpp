#ifndef ORDFORGE_PREFIX_HPP
#define ORDFORGE_PREFIX_HPP

// Conditions truncated to a finite prefix (c_0, ..., c_{L-1}) of creatures,
// with trunks, possibilities, wedges, a finite-horizon incompatibility
// verdict and the downward induction at the heart of pure decision.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ordforge/creature.hpp"

namespace ordforge {

/// A possibility: one value per position.
using Seq = std::vector<std::uint32_t>;

class ConditionPrefix {
public:
    ConditionPrefix() = default;

    ConditionPrefix(GrowthProfile profile, std::vector<Creature> creatures)
        : profile_(std::move(profile)), creatures_(std::move(creatures)) {
        if (creatures_.size() > profile_.length()) throw Error("prefix is longer than its growth profile");
        for (std::size_t i = 0; i < creatures_.size(); ++i) {
            const Creature& c = creatures_[i];
            if (c.index() != i || c.width() != profile_.F(i))
                throw Error("creature " + std::to_string(i) + " does not match its position");
            if (auto v = validate(c)) throw Error("creature " + std::to_string(i) + " is invalid: " + v->describe());
        }
    }

    const GrowthProfile& profile() const { return profile_; }
    std::size_t length() const { return creatures_.size(); }
    const Creature& operator[](std::size_t i) const { return creatures_.at(i); }
    const std::vector<Creature>& creatures() const { return creatures_; }

    /// Values of the maximal initial run of singleton value sets.
    Seq trunk() const {
        Seq t;
        for (const Creature& c : creatures_) {
            if (c.val_size() != 1) break;
            t.push_back(elements_of(c.val()).front());
        }
        return t;
    }

    /// Largest m with m^k*(i) ≤ nor(c_i): the integer k*(i)-th root.
    std::uint64_t root_threshold(std::size_t i) const {
        const std::uint64_t k = profile_.kstar(i), nor = creatures_.at(i).nor();
        std::uint64_t m = 0;
        while (GrowthProfile::sat_pow(m + 1, k) <= nor) ++m;
        return m;
    }

    std::vector<std::uint64_t> root_thresholds() const {
        std::vector<std::uint64_t> out;
        for (std::size_t i = 0; i < length(); ++i) out.push_back(root_threshold(i));
        return out;
    }

    friend bool operator==(const ConditionPrefix&, const ConditionPrefix&) = default;

    friend std::ostream& operator<<(std::ostream& os, const ConditionPrefix& p) {
        os << "prefix F=(";
        for (std::size_t i = 0; i < p.profile_.length(); ++i) os << (i ? "," : "") << p.profile_.F(i);
        os << ")";
        for (const Creature& c : p.creatures_) os << "\n  " << c;
        return os;
    }

private:
    GrowthProfile profile_;
    std::vector<Creature> creatures_;
};

/// Pointwise strengthening on prefixes of equal length.
inline bool le(const ConditionPrefix& q, const ConditionPrefix& p) {
    if (q.length() != p.length()) return false;
    for (std::size_t i = 0; i < p.length(); ++i)
        if (!stronger(q[i], p[i])) return false;
    return true;
}

/// Pointwise join, or nullopt when some position has disjoint value sets.
inline std::optional<ConditionPrefix> meet(const ConditionPrefix& p, const ConditionPrefix& q) {
    if (p.length() != q.length() || !(p.profile() == q.profile())) throw Error("meet: prefixes differ in shape");
    std::vector<Creature> cs;
    for (std::size_t i = 0; i < p.length(); ++i) {
        auto j = join(p[i], q[i]);
        if (!j) return std::nullopt;
        cs.push_back(std::move(*j));
    }
    return ConditionPrefix(p.profile(), std::move(cs));
}

inline bool compatible(const ConditionPrefix& p, const ConditionPrefix& q) { return meet(p, q).has_value(); }

/// ∏_{i<n} val(p(i)) in lexicographic order.
inline std::vector<Seq> pos(const ConditionPrefix& p, std::size_t n) {
    if (n > p.length()) throw Error("pos: n exceeds the prefix length");
    std::vector<Seq> out{Seq{}};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Seq> next;
        for (const Seq& s : out)
            for (std::uint32_t x : elements_of(p[i].val())) {
                Seq t = s;
                t.push_back(x);
                next.push_back(std::move(t));
            }
        out = std::move(next);
    }
    return out;
}

inline bool in_pos(const ConditionPrefix& p, const Seq& s) {
    if (s.size() > p.length()) return false;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] >= 64 || !((p[i].val() >> s[i]) & 1)) return false;
    return true;
}

/// p ∧ s: the first |s| creatures cut down to the singletons of s.
inline ConditionPrefix wedge(const ConditionPrefix& p, const Seq& s) {
    if (!in_pos(p, s)) throw Error("wedge: s is not a possibility of p");
    std::vector<Creature> cs = p.creatures();
    for (std::size_t i = 0; i < s.size(); ++i) cs[i] = cs[i].restrict(SubsetMask{1} << s[i]);
    return ConditionPrefix(p.profile(), std::move(cs));
}

enum class HorizonKind { DisjointVal, Witnessed, NoWitness };

inline const char* to_string(HorizonKind k) {
    switch (k) {
        case HorizonKind::DisjointVal: return "disjoint-val";
        case HorizonKind::Witnessed: return "witnessed-incompatible";
        case HorizonKind::NoWitness: return "no-witness-at-horizon";
    }
    return "?";
}

struct HorizonLevel {
    std::uint64_t M = 0;
    /// Positions with nor(p(n) ∧ q(n)) < M^k*(n).
    std::vector<std::size_t> low;
    /// The low positions where both p(n) and q(n) reach M^k*(n).
    std::vector<std::size_t> witnesses;
};

/// Finite-horizon approximation of incompatibility.  The infinite criterion
/// asks for infinitely many positions where the join stays below M^k*(n)
/// while both conditions grow past every such bound; within the horizon a
/// position counts as a witness when the threshold separates the join from
/// both conditions.
struct HorizonVerdict {
    HorizonKind kind = HorizonKind::NoWitness;
    std::vector<std::size_t> disjoint;
    std::vector<HorizonLevel> levels;
    bool approximation = true;
};

inline HorizonVerdict incompat_horizon(const ConditionPrefix& p, const ConditionPrefix& q, std::uint64_t m_bound) {
    if (p.length() != q.length() || !(p.profile() == q.profile()))
        throw Error("incompat_horizon: prefixes differ in shape");
    HorizonVerdict v;
    std::vector<std::optional<Creature>> joins;
    for (std::size_t n = 0; n < p.length(); ++n) {
        joins.push_back(join(p[n], q[n]));
        if (!joins.back()) v.disjoint.push_back(n);
    }
    for (std::uint64_t M = 1; M <= m_bound; ++M) {
        HorizonLevel lvl{M, {}, {}};
        for (std::size_t n = 0; n < p.length(); ++n) {
            if (!joins[n]) continue;
            const std::uint64_t bound = GrowthProfile::sat_pow(M, p.profile().kstar(n));
            if (joins[n]->nor() >= bound) continue;
            lvl.low.push_back(n);
            if (p[n].nor() >= bound && q[n].nor() >= bound) lvl.witnesses.push_back(n);
        }
        v.levels.push_back(std::move(lvl));
    }
    if (!v.disjoint.empty()) {
        v.kind = HorizonKind::DisjointVal;
    } else {
        for (const auto& l : v.levels)
            if (!l.witnesses.empty()) v.kind = HorizonKind::Witnessed;
    }
    return v;
}

/// r ≤ p with r ⊥ half(p) and val(r(n)) ⊆ val(half(p)(n)).
struct HalvingPair {
    ConditionPrefix q;  // half(p), pointwise
    ConditionPrefix r;
    /// a_n with q(n)(a_n) = 2, where one exists.
    std::vector<std::optional<SubsetMask>> a;
};

inline HalvingPair halving_incompatible(const ConditionPrefix& p) {
    std::vector<Creature> qs, rs;
    std::vector<std::optional<SubsetMask>> as;
    for (const Creature& c : p.creatures()) {
        Creature h = half(c);
        std::optional<SubsetMask> a;
        // Least subset by size, then by value, on which half(p(n)) is 2.
        for (SubsetMask b : h.subsets())
            if (h(b) == 2 && (!a || popcount(b) < popcount(*a) || (popcount(b) == popcount(*a) && b < *a))) a = b;
        rs.push_back(a ? unhalve(h.restrict(*a), c) : c);
        qs.push_back(std::move(h));
        as.push_back(a);
    }
    return {ConditionPrefix(p.profile(), std::move(qs)), ConditionPrefix(p.profile(), std::move(rs)), std::move(as)};
}

/// One step of the downward induction: φ_{n,h} and Λ_{n,h}.
struct DecisionLevel {
    std::size_t h = 0;
    Creature phi;
    std::set<Seq> lambda;
    /// Number of bigness refinements applied at this level.
    std::size_t refinements = 0;
};

struct PureDecision {
    std::size_t h0 = 0, n = 0;
    std::set<Seq> lambda_n;
    std::vector<DecisionLevel> levels;  // h = h0, ..., n-1

    const std::set<Seq>& lambda(std::size_t h) const {
        if (h == n) return lambda_n;
        return levels.at(h - h0).lambda;
    }
};

/// For h = n-1 down to h0, shrink p(h) one colouring at a time until every
/// s ∈ pos(p, h) has either all or none of its φ-compatible one-step
/// extensions in Λ_{n,h+1}; Λ_{n,h} collects the "all" cases.
inline PureDecision pure_decision_core(const ConditionPrefix& p, std::size_t h0, std::size_t n,
                                       const std::set<Seq>& lambda_n) {
    if (h0 > n || n > p.length()) throw Error("pure_decision_core: need h0 <= n <= length");
    for (const Seq& s : lambda_n)
        if (s.size() != n || !in_pos(p, s)) throw Error("pure_decision_core: Lambda_n is not inside pos(p, n)");
    PureDecision out{h0, n, lambda_n, {}};
    out.levels.resize(n - h0);
    const std::set<Seq>* above = &lambda_n;
    for (std::size_t h = n; h-- > h0;) {
        DecisionLevel& lvl = out.levels[h - h0];
        lvl.h = h;
        lvl.phi = p[h];
        for (const Seq& s : pos(p, h)) {
            SubsetMask ones = 0;
            for (std::uint32_t x : elements_of(lvl.phi.val())) {
                Seq t = s;
                t.push_back(x);
                if (above->count(t)) ones |= SubsetMask{1} << x;
            }
            if (ones != 0 && ones != lvl.phi.val()) {
                lvl.phi = refine_by_colouring(lvl.phi, ones);
                ++lvl.refinements;
            }
        }
        for (const Seq& s : pos(p, h)) {
            bool all = true;
            for (std::uint32_t x : elements_of(lvl.phi.val())) {
                Seq t = s;
                t.push_back(x);
                all = all && above->count(t);
            }
            if (all) lvl.lambda.insert(s);
        }
        above = &lvl.lambda;
    }
    return out;
}

}  // namespace ordforge

#endif  // ORDFORGE_PREFIX_HPP
