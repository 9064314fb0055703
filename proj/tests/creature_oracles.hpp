#pragma once

// Brute-force references for the creature calculus.  Norms are queried only
// through Creature::operator(), never through the table layout.

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

#include "ordforge/prefix.hpp"

namespace ordforge::oracle {

inline std::vector<SubsetMask> subsets_of(SubsetMask a) {
    std::vector<SubsetMask> out;
    for (SubsetMask b = 0; b <= a; ++b)
        if (subset_of(b, a)) out.push_back(b);
    return out;
}

/// The four clauses, read literally.
inline bool valid_by_definition(const Creature& c) {
    if (c.val() == 0 || c.val() >= (SubsetMask{1} << c.width())) return false;
    auto subs = subsets_of(c.val());
    for (SubsetMask b : subs)
        for (SubsetMask d : subs) {
            if (subset_of(b, d) && c(b) > c(d)) return false;
            if (c(b | d) > std::max(c(b), c(d)) + 1) return false;
        }
    if (c(0) != 0) return false;
    for (SubsetMask b : subs)
        if (popcount(b) == 1 && c(b) > 1) return false;
    return true;
}

inline bool stronger_by_definition(const Creature& c1, const Creature& c0) {
    if (!subset_of(c1.val(), c0.val())) return false;
    for (SubsetMask b : subsets_of(c1.val()))
        if (c1(b) > c0(b)) return false;
    return true;
}

/// Every table with φ(b) ≤ |b|, filtered by the definition.
inline std::vector<Creature> brute_creatures(std::uint32_t index, std::uint32_t width) {
    std::vector<Creature> out;
    for (SubsetMask val = 1; val < (SubsetMask{1} << width); ++val) {
        auto subs = subsets_of(val);
        std::vector<std::uint32_t> values(subs.size(), 0);
        std::function<void(std::size_t)> go = [&](std::size_t k) {
            if (k == subs.size()) {
                Creature c = Creature::from_function(index, width, val, [&](SubsetMask b) {
                    return values[std::find(subs.begin(), subs.end(), b) - subs.begin()];
                });
                if (valid_by_definition(c)) out.push_back(c);
                return;
            }
            for (std::uint32_t v = 0; v <= popcount(subs[k]); ++v) {
                values[k] = v;
                go(k + 1);
            }
        };
        go(0);
    }
    return out;
}

inline bool split_exists(const Creature& c0, const Creature& c1, const Creature& j, SubsetMask b) {
    for (SubsetMask b0 : subsets_of(b))
        for (SubsetMask b1 : subsets_of(b))
            if ((b0 | b1) == b && j(b) >= std::max(c0(b0), c1(b1))) return true;
    return false;
}

/// All ψ ≤ c drawn from a full enumeration.
inline std::vector<Creature> shrinkings(const Creature& c, const std::vector<Creature>& all) {
    std::vector<Creature> out;
    for (const Creature& psi : all)
        if (stronger_by_definition(psi, c)) out.push_back(psi);
    return out;
}

/// Every full possibility of length n that extends s and stays inside the
/// value sets given by `vals` from position |s| on.
inline std::vector<Seq> extensions(const Seq& s, const std::vector<SubsetMask>& vals, std::size_t n) {
    std::vector<Seq> out;
    std::function<void(Seq&)> go = [&](Seq& t) {
        if (t.size() == n) {
            out.push_back(t);
            return;
        }
        for (std::uint32_t x : elements_of(vals[t.size()])) {
            t.push_back(x);
            go(t);
            t.pop_back();
        }
    };
    Seq t = s;
    go(t);
    return out;
}

}  // namespace ordforge::oracle
