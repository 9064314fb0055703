#ifndef ORDFORGE_CREATURE_HPP
#define ORDFORGE_CREATURE_HPP

// Finite norms on subsets of a value set: creatures, halving, the weakest
// common strengthening and bigness refinement.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ordforge/term.hpp"

namespace ordforge {

/// Subset of {0, ..., 63}.
using SubsetMask = std::uint64_t;

/// Largest value set a norm table may range over.
inline constexpr std::size_t kMaxVal = 20;

inline std::size_t popcount(SubsetMask m) { return static_cast<std::size_t>(std::popcount(m)); }
inline bool subset_of(SubsetMask a, SubsetMask b) { return (a & ~b) == 0; }
inline SubsetMask range_mask(std::uint32_t n) { return n >= 64 ? ~SubsetMask{0} : (SubsetMask{1} << n) - 1; }

inline std::vector<std::uint32_t> elements_of(SubsetMask m) {
    std::vector<std::uint32_t> out;
    for (; m; m &= m - 1) out.push_back(static_cast<std::uint32_t>(std::countr_zero(m)));
    return out;
}

inline SubsetMask mask_of(const std::vector<std::uint32_t>& xs) {
    SubsetMask m = 0;
    for (std::uint32_t x : xs) {
        if (x >= 64) throw Error("subset element out of range");
        m |= SubsetMask{1} << x;
    }
    return m;
}

inline std::string subset_str(SubsetMask m) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (std::uint32_t x : elements_of(m)) {
        if (!first) os << ',';
        os << x;
        first = false;
    }
    os << '}';
    return os.str();
}

/// The sizes F(0..L-1) and the products k*(i) = F(0)···F(i-1).
class GrowthProfile {
public:
    GrowthProfile() = default;
    explicit GrowthProfile(std::vector<std::uint32_t> f) : f_(std::move(f)) {
        for (std::uint32_t v : f_)
            if (v == 0 || v > 64) throw Error("growth profile values must lie in 1..64");
    }

    std::size_t length() const { return f_.size(); }
    std::uint32_t F(std::size_t i) const { return f_.at(i); }
    const std::vector<std::uint32_t>& values() const { return f_; }

    /// Saturates at the largest uint64 value.
    std::uint64_t kstar(std::size_t i) const {
        std::uint64_t k = 1;
        for (std::size_t j = 0; j < i; ++j) k = sat_mul(k, f_.at(j));
        return k;
    }

    /// F(i) > 2^(i^k*(i)).  Advisory only.
    bool fast_growth_at(std::size_t i) const {
        std::uint64_t e = sat_pow(i, kstar(i));
        if (e >= 63) return false;
        return f_.at(i) > (std::uint64_t{1} << e);
    }

    std::vector<std::size_t> fast_growth_lint() const {
        std::vector<std::size_t> bad;
        for (std::size_t i = 0; i < f_.size(); ++i)
            if (!fast_growth_at(i)) bad.push_back(i);
        return bad;
    }

    static std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
        if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
            return std::numeric_limits<std::uint64_t>::max();
        return a * b;
    }

    static std::uint64_t sat_pow(std::uint64_t base, std::uint64_t e) {
        std::uint64_t r = 1;
        for (std::uint64_t k = 0; k < e; ++k) {
            r = sat_mul(r, base);
            if (r == 0 || r == std::numeric_limits<std::uint64_t>::max()) return r;
            if (base == 1) return 1;
        }
        return r;
    }

    friend bool operator==(const GrowthProfile&, const GrowthProfile&) = default;

private:
    std::vector<std::uint32_t> f_;
};

/// An i-creature: a norm on the subsets of val ⊆ {0..width-1}.  The table is
/// indexed by subsets of val written in val's own coordinates.
class Creature {
public:
    Creature() = default;

    Creature(std::uint32_t index, std::uint32_t width, SubsetMask val, std::vector<std::uint32_t> table)
        : index_(index), width_(width), val_(val), table_(std::move(table)) {
        if (width > 64) throw Error("creature width exceeds 64");
        if (!subset_of(val, range_mask(width))) throw Error("creature value set exceeds its width");
        if (popcount(val) > kMaxVal) throw Error("creature value set too large for a dense norm table");
        if (table_.size() != (std::size_t{1} << popcount(val))) throw Error("norm table has the wrong size");
    }

    static Creature from_function(std::uint32_t index, std::uint32_t width, SubsetMask val,
                                  const std::function<std::uint32_t(SubsetMask)>& phi) {
        if (popcount(val) > kMaxVal) throw Error("creature value set too large for a dense norm table");
        std::vector<std::uint32_t> t(std::size_t{1} << popcount(val));
        for (std::size_t k = 0; k < t.size(); ++k) t[k] = phi(expand(k, val));
        return Creature(index, width, val, std::move(t));
    }

    std::uint32_t index() const { return index_; }
    std::uint32_t width() const { return width_; }
    SubsetMask val() const { return val_; }
    std::size_t val_size() const { return popcount(val_); }
    const std::vector<std::uint32_t>& table() const { return table_; }

    std::uint32_t operator()(SubsetMask b) const {
        if (!subset_of(b, val_)) throw Error("norm queried outside the value set");
        return table_[compress(b, val_)];
    }

    std::uint32_t nor() const { return table_.back(); }

    /// All subsets of val, in increasing order of their local index.
    std::vector<SubsetMask> subsets() const {
        std::vector<SubsetMask> out(table_.size());
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = expand(k, val_);
        return out;
    }

    /// Same norm, value set cut down to b.
    Creature restrict(SubsetMask b) const {
        if (b == 0 || !subset_of(b, val_)) throw Error("restriction must be a nonempty subset of val");
        return from_function(index_, width_, b, [&](SubsetMask c) { return (*this)(c); });
    }

    static std::size_t compress(SubsetMask b, SubsetMask val) {
        std::size_t k = 0, pos = 0;
        for (SubsetMask v = val; v; v &= v - 1, ++pos)
            if (b & (v & -v)) k |= std::size_t{1} << pos;
        return k;
    }

    static SubsetMask expand(std::size_t k, SubsetMask val) {
        SubsetMask b = 0;
        for (SubsetMask v = val; v; v &= v - 1, k >>= 1)
            if (k & 1) b |= v & -v;
        return b;
    }

    friend bool operator==(const Creature&, const Creature&) = default;
    friend auto operator<=>(const Creature& a, const Creature& b) {
        return std::tie(a.index_, a.width_, a.val_, a.table_) <=> std::tie(b.index_, b.width_, b.val_, b.table_);
    }

    friend std::ostream& operator<<(std::ostream& os, const Creature& c) {
        os << "creature i=" << c.index_ << " val=" << subset_str(c.val_) << " phi={";
        auto subs = c.subsets();
        for (std::size_t k = 0; k < subs.size(); ++k) {
            if (k) os << ", ";
            os << subset_str(subs[k]) << ':' << c.table_[k];
        }
        return os << '}';
    }

private:
    std::uint32_t index_ = 0;
    std::uint32_t width_ = 1;
    SubsetMask val_ = 1;
    std::vector<std::uint32_t> table_{0, 0};
};

enum class CreatureClause { ValueSet, Monotone, Bigness, Base };

inline const char* to_string(CreatureClause c) {
    switch (c) {
        case CreatureClause::ValueSet: return "value-set";
        case CreatureClause::Monotone: return "monotone";
        case CreatureClause::Bigness: return "bigness";
        case CreatureClause::Base: return "base";
    }
    return "?";
}

struct CreatureViolation {
    CreatureClause clause;
    SubsetMask b = 0;
    SubsetMask c = 0;

    std::string describe() const {
        std::string s = to_string(clause);
        switch (clause) {
            case CreatureClause::ValueSet: return s + ": val is empty or exceeds F(i)";
            case CreatureClause::Monotone: return s + ": phi" + subset_str(b) + " > phi" + subset_str(c);
            case CreatureClause::Bigness:
                return s + ": phi(" + subset_str(b) + " u " + subset_str(c) + ") exceeds max + 1";
            case CreatureClause::Base: return s + ": phi" + subset_str(b) + " out of range";
        }
        return s;
    }
};

/// First failing clause, in the order value set, monotonicity, bigness, base
/// values.  Witnesses are the least failing subsets in local order.
inline std::optional<CreatureViolation> validate(const Creature& c) {
    if (c.val() == 0 || !subset_of(c.val(), range_mask(c.width()))) return CreatureViolation{CreatureClause::ValueSet};
    const auto subs = c.subsets();
    const auto& t = c.table();
    const std::size_t n = t.size();
    // Monotone iff every one-element extension is nondecreasing.
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t bit = 1; bit < n; bit <<= 1)
            if (!(k & bit) && t[k] > t[k | bit]) return CreatureViolation{CreatureClause::Monotone, subs[k], subs[k | bit]};
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x; y < n; ++y)
            if (t[x | y] > std::max(t[x], t[y]) + 1) return CreatureViolation{CreatureClause::Bigness, subs[x], subs[y]};
    if (t[0] != 0) return CreatureViolation{CreatureClause::Base, 0};
    for (std::size_t bit = 1; bit < n; bit <<= 1)
        if (t[bit] > 1) return CreatureViolation{CreatureClause::Base, subs[bit]};
    return std::nullopt;
}

inline bool is_valid(const Creature& c) { return !validate(c).has_value(); }

/// val(c1) ⊆ val(c0) and c1(b) ≤ c0(b) for all b ⊆ val(c1).
inline bool stronger(const Creature& c1, const Creature& c0) {
    if (c1.index() != c0.index()) throw Error("stronger: creatures have different indices");
    if (!subset_of(c1.val(), c0.val())) return false;
    for (SubsetMask b : c1.subsets())
        if (c1(b) > c0(b)) return false;
    return true;
}

/// Every valid i-creature with val ⊆ {0..width-1}, ordered by val and then
/// by norm table.
inline std::vector<Creature> enumerate_creatures(std::uint32_t index, std::uint32_t width) {
    if (width > 6) throw Error("enumerate_creatures: width above 6 is not enumerable");
    std::vector<Creature> out;
    for (SubsetMask val = 1; val <= range_mask(width); ++val) {
        const std::size_t k = popcount(val), n = std::size_t{1} << k;
        // Local indices sorted by size so every proper subset comes first.
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [](std::size_t a, std::size_t b) { return std::popcount(a) < std::popcount(b); });
        std::vector<std::uint32_t> t(n, 0);
        std::function<void(std::size_t)> fill = [&](std::size_t pos) {
            if (pos == n) {
                out.emplace_back(index, width, val, t);
                return;
            }
            const std::size_t b = order[pos];
            std::uint32_t lo = 0, hi = 0;
            if (std::popcount(b) == 1) {
                hi = 1;
            } else if (b != 0) {
                hi = std::numeric_limits<std::uint32_t>::max();
                for (std::size_t s = (b - 1) & b; s; s = (s - 1) & b) lo = std::max(lo, t[s]);
                for (std::size_t x = (b - 1) & b; x; x = (x - 1) & b) {
                    std::size_t y = b & ~x;
                    hi = std::min(hi, std::max(t[x], t[y]) + 1);
                }
            }
            for (std::uint32_t v = lo; v <= hi; ++v) {
                t[b] = v;
                fill(pos + 1);
            }
            t[b] = 0;
        };
        fill(0);
    }
    return out;
}

/// half(φ)(b) = max(0, φ(b) − ⌊nor(φ)/2⌋) on the same value set.
inline Creature half(const Creature& c) {
    const std::uint32_t shift = c.nor() / 2;
    std::vector<std::uint32_t> t = c.table();
    for (auto& v : t) v = v > shift ? v - shift : 0;
    return Creature(c.index(), c.width(), c.val(), std::move(t));
}

/// Given ψ ≤ half(φ) with positive norm, φ cut down to val(ψ).
inline Creature unhalve(const Creature& psi, const Creature& c) {
    if (!stronger(psi, half(c))) throw Error("unhalve: psi is not stronger than half(c)");
    if (psi.nor() == 0) throw Error("unhalve: psi has norm 0");
    return c.restrict(psi.val());
}

namespace detail {

/// ψ(b) on the intersection, computed by the recursion over X(b).  Returns
/// the table over the common value set.
inline std::vector<std::uint32_t> join_table(const Creature& c0, const Creature& c1, SubsetMask common) {
    const std::size_t n = std::size_t{1} << popcount(common);
    std::vector<std::uint32_t> phi0(n), phi1(n), psi(n);
    for (std::size_t k = 0; k < n; ++k) {
        SubsetMask b = Creature::expand(k, common);
        phi0[k] = c0(b);
        phi1[k] = c1(b);
    }
    // Proper subsets have smaller local indices.
    for (std::size_t b = 0; b < n; ++b) {
        std::uint32_t v = std::min(phi0[b], phi1[b]);
        if (std::popcount(b) > 1) {
            for (std::size_t b0 = (b - 1) & b;; b0 = (b0 - 1) & b) {
                const std::size_t rest = b & ~b0;
                for (std::size_t s = b0;; s = (s - 1) & b0) {
                    const std::size_t b1 = rest | s;
                    if (b1 != b) v = std::min(v, 1 + std::max(psi[b0], psi[b1]));
                    if (s == 0) break;
                }
                if (b0 == 0) break;
            }
        }
        psi[b] = v;
    }
    return psi;
}

}  // namespace detail

/// The weakest creature stronger than both, or nullopt when the value sets
/// are disjoint.
inline std::optional<Creature> join(const Creature& c0, const Creature& c1) {
    if (c0.index() != c1.index() || c0.width() != c1.width()) throw Error("join: creatures have different indices");
    const SubsetMask common = c0.val() & c1.val();
    if (common == 0) return std::nullopt;
    return Creature(c0.index(), c0.width(), common, detail::join_table(c0, c1, common));
}

/// b = b0 ∪ b1 with (φ0∧φ1)(b) ≥ max(φ0(b0), φ1(b1)), following the
/// induction on |b|.  `j` is the join of c0 and c1.
inline std::pair<SubsetMask, SubsetMask> split_decomposition(const Creature& c0, const Creature& c1, const Creature& j,
                                                             SubsetMask b) {
    if (!subset_of(b, j.val())) throw Error("split_decomposition: b is not inside the joined value set");
    const SubsetMask common = j.val();
    const auto& psi = j.table();
    auto go = [&](auto& self, std::size_t lb) -> std::pair<SubsetMask, SubsetMask> {
        const SubsetMask gb = Creature::expand(lb, common);
        if (psi[lb] == c0(gb)) return {gb, 0};
        if (psi[lb] == c1(gb)) return {0, gb};
        for (std::size_t x = (lb - 1) & lb;; x = (x - 1) & lb) {
            const std::size_t rest = lb & ~x;
            for (std::size_t s = x;; s = (s - 1) & x) {
                const std::size_t y = rest | s;
                if (y != lb && psi[lb] == 1 + std::max(psi[x], psi[y])) {
                    auto [d00, d10] = self(self, x);
                    auto [d01, d11] = self(self, y);
                    return {d00 | d01, d10 | d11};
                }
                if (s == 0) break;
            }
            if (x == 0) break;
        }
        throw Error("split_decomposition: no term of X(b) attains the join");
    };
    return go(go, Creature::compress(b, common));
}

inline std::pair<SubsetMask, SubsetMask> split_decomposition(const Creature& c0, const Creature& c1, SubsetMask b) {
    auto j = join(c0, c1);
    if (!j) throw Error("split_decomposition: b is not inside the joined value set");
    return split_decomposition(c0, c1, *j, b);
}

/// ψ ≤ φ on one colour class of val, chosen so that ψ keeps norm ≥ nor(φ) − 1.
/// Works for any norm; colour 1 is the set `ones`.
inline Creature refine_by_colouring(const Creature& c, SubsetMask ones) {
    const SubsetMask c1 = c.val() & ones, c0 = c.val() & ~ones;
    if (c1 == 0) return c;
    if (c0 == 0) return c;
    return c(c0) >= c(c1) ? c.restrict(c0) : c.restrict(c1);
}

/// The bigness lemma: for nor(φ) > 1 and a two-colouring of val, a ψ ≤ φ with
/// nor(ψ) ≥ nor(φ) − 1 on which the colouring is constant.
inline Creature bigness_refine(const Creature& c, SubsetMask ones) {
    if (c.nor() <= 1) throw Error("bigness_refine: norm too small");
    return refine_by_colouring(c, ones);
}

}  // namespace ordforge

#endif  // ORDFORGE_CREATURE_HPP
