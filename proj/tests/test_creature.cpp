#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "creature_oracles.hpp"
#include "ordforge/creature.hpp"

using namespace ordforge;

namespace {

// ⌊log2(max(1, |b|))⌋ on the full value set.
Creature log_creature(std::uint32_t index, std::uint32_t width) {
    return Creature::from_function(index, width, range_mask(width), [](SubsetMask b) {
        return static_cast<std::uint32_t>(std::bit_width(std::max<std::size_t>(1, popcount(b))) - 1);
    });
}

// ⌈log2 |b|⌉ + 1, the fastest-growing norm.
Creature steep_creature(std::uint32_t index, std::uint32_t width) {
    return Creature::from_function(index, width, range_mask(width), [](SubsetMask b) -> std::uint32_t {
        if (b == 0) return 0;
        return static_cast<std::uint32_t>(std::bit_width(popcount(b) - 1)) + 1;
    });
}

const std::vector<Creature>& all_of_width(std::uint32_t w) {
    static std::map<std::uint32_t, std::vector<Creature>> cache;
    auto it = cache.find(w);
    if (it == cache.end()) it = cache.emplace(w, enumerate_creatures(0, w)).first;
    return it->second;
}

}  // namespace

TEST(Profile, KstarIsTheProductOfEarlierSizes) {
    GrowthProfile f({3, 4, 5, 2});
    EXPECT_EQ(f.kstar(0), 1u);
    EXPECT_EQ(f.kstar(1), 3u);
    EXPECT_EQ(f.kstar(2), 12u);
    EXPECT_EQ(f.kstar(3), 60u);
    EXPECT_EQ(f.kstar(4), 120u);
    for (std::size_t i = 0; i + 1 < f.length(); ++i) EXPECT_LE(f.kstar(i), f.kstar(i + 1));
}

TEST(Profile, FastGrowthIsOnlyALint) {
    GrowthProfile f({2, 3, 64});
    EXPECT_TRUE(f.fast_growth_at(0));
    EXPECT_TRUE(f.fast_growth_at(1));
    EXPECT_FALSE(f.fast_growth_at(2));
    EXPECT_EQ(f.fast_growth_lint(), std::vector<std::size_t>{2});
    EXPECT_THROW(GrowthProfile({0}), Error);
}

TEST(Creature, PaperExampleIsValid) {
    for (std::uint32_t w = 1; w <= 10; ++w) {
        Creature c = log_creature(0, w);
        EXPECT_FALSE(validate(c).has_value()) << w;
        EXPECT_TRUE(oracle::valid_by_definition(c));
    }
    EXPECT_EQ(log_creature(0, 8).nor(), 3u);
}

TEST(Creature, CardinalityNormFailsBigness) {
    Creature c = Creature::from_function(0, 4, range_mask(4), [](SubsetMask b) {
        return static_cast<std::uint32_t>(popcount(b));
    });
    auto v = validate(c);
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(v->clause, CreatureClause::Bigness);
    EXPECT_GT(c(v->b | v->c), std::max(c(v->b), c(v->c)) + 1);
    EXPECT_EQ(popcount(v->b | v->c), 4u);
    EXPECT_FALSE(oracle::valid_by_definition(c));
}

TEST(Creature, SingletonWithNormOne) {
    Creature c(0, 3, 0b010, {0, 1});
    EXPECT_TRUE(is_valid(c));
    EXPECT_EQ(c.nor(), 1u);
}

TEST(Creature, ValidationReportsEachClause) {
    Creature mono(0, 2, 0b11, {0, 1, 1, 0});
    EXPECT_EQ(validate(mono)->clause, CreatureClause::Monotone);
    Creature base(0, 2, 0b11, {0, 2, 0, 2});
    EXPECT_EQ(validate(base)->clause, CreatureClause::Base);
    EXPECT_EQ(validate(base)->b, 0b01u);
    Creature empty_norm(0, 1, 0b1, {1, 1});
    EXPECT_EQ(validate(empty_norm)->clause, CreatureClause::Base);
    EXPECT_THROW(Creature(0, 2, 0b100, {0, 0}), Error);
}

TEST(Creature, EnumerationMatchesBruteForce) {
    for (std::uint32_t w = 1; w <= 3; ++w) {
        auto fast = enumerate_creatures(0, w);
        auto slow = oracle::brute_creatures(0, w);
        std::sort(fast.begin(), fast.end());
        std::sort(slow.begin(), slow.end());
        EXPECT_EQ(fast, slow) << w;
    }
}

TEST(Creature, EnumerationValidatesAndNormIsBoundedBySize) {
    const auto& all = all_of_width(4);
    EXPECT_EQ(all.size(), 3368u);
    for (const Creature& c : all) {
        ASSERT_TRUE(is_valid(c));
        for (SubsetMask b : c.subsets()) ASSERT_LE(c(b), popcount(b));
    }
    auto sorted = all;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
}

TEST(Stronger, ReflexiveAndSingletonRestriction) {
    Creature c = log_creature(1, 6);
    EXPECT_TRUE(stronger(c, c));
    for (std::uint32_t x = 0; x < 6; ++x) {
        Creature s = c.restrict(SubsetMask{1} << x);
        EXPECT_TRUE(is_valid(s));
        EXPECT_TRUE(stronger(s, c));
    }
    EXPECT_THROW(stronger(log_creature(0, 2), log_creature(1, 2)), Error);
}

TEST(Stronger, AgreesWithDefinitionOnAllPairs) {
    const auto& all = all_of_width(3);
    for (const Creature& a : all)
        for (const Creature& b : all) ASSERT_EQ(stronger(a, b), oracle::stronger_by_definition(a, b));
}

TEST(Half, NormFiveLosesTwo) {
    Creature c = steep_creature(0, 9);
    ASSERT_TRUE(is_valid(c));
    ASSERT_EQ(c.nor(), 5u);
    Creature h = half(c);
    EXPECT_TRUE(is_valid(h));
    EXPECT_EQ(h.nor(), 3u);
    for (SubsetMask b : c.subsets()) EXPECT_EQ(h(b), c(b) > 2 ? c(b) - 2 : 0);
}

TEST(Half, SmallNormsAreFixed) {
    for (const Creature& c : all_of_width(3))
        if (c.nor() <= 1) EXPECT_EQ(half(c), c);
}

TEST(Half, ExhaustiveBound) {
    for (std::uint32_t w = 1; w <= 4; ++w)
        for (const Creature& c : all_of_width(w)) {
            Creature h = half(c);
            ASSERT_TRUE(is_valid(h));
            ASSERT_TRUE(oracle::stronger_by_definition(h, c));
            ASSERT_GE(h.nor(), (c.nor() + 1) / 2);
        }
}

TEST(Unhalve, ExhaustiveChain) {
    std::size_t strict = 0, checked = 0;
    for (std::uint32_t w = 1; w <= 4; ++w) {
        const auto& all = all_of_width(w);
        for (const Creature& c : all) {
            Creature h = half(c);
            for (const Creature& psi : all) {
                if (psi.nor() == 0 || !oracle::stronger_by_definition(psi, h)) continue;
                Creature u = unhalve(psi, c);
                ++checked;
                ASSERT_TRUE(is_valid(u));
                ASSERT_EQ(u.val(), psi.val());
                ASSERT_TRUE(oracle::stronger_by_definition(u, c));
                ASSERT_GE(u.nor(), (c.nor() + 1) / 2);
                if (psi.val() != c.val()) ++strict;
            }
        }
    }
    EXPECT_GT(checked, 1000u);
    EXPECT_GT(strict, 0u);
}

TEST(Unhalve, OfHalfItselfGivesBackTheCreature) {
    Creature c = steep_creature(0, 6);
    EXPECT_EQ(unhalve(half(c), c), c);
}

TEST(Unhalve, StrictStrengthening) {
    Creature c = steep_creature(0, 8);  // norm 4
    Creature h = half(c);
    Creature psi = h.restrict(0b111);  // h({0,1,2}) = 3 − 2 = 1
    ASSERT_EQ(psi.nor(), 1u);
    Creature u = unhalve(psi, c);
    EXPECT_EQ(u.val(), 0b111u);
    EXPECT_EQ(u.nor(), 3u);
    EXPECT_GE(u.nor(), 2u);
}

TEST(Unhalve, PreconditionViolations) {
    Creature c = steep_creature(0, 4);
    EXPECT_THROW(unhalve(c, c), Error);
    EXPECT_THROW(unhalve(half(c).restrict(0b1), c), Error);
}

TEST(Join, IdempotentAndDisjoint) {
    for (const Creature& c : all_of_width(3)) EXPECT_EQ(join(c, c), c);
    EXPECT_FALSE(join(log_creature(0, 4).restrict(0b0011), log_creature(0, 4).restrict(0b1100)).has_value());
}

TEST(Join, WeakestCommonStrengtheningByBruteForce) {
    const auto& all = all_of_width(3);
    for (const Creature& a : all)
        for (const Creature& b : all) {
            auto j = join(a, b);
            if ((a.val() & b.val()) == 0) {
                ASSERT_FALSE(j.has_value());
                continue;
            }
            ASSERT_TRUE(j.has_value());
            ASSERT_TRUE(oracle::valid_by_definition(*j));
            ASSERT_TRUE(oracle::stronger_by_definition(*j, a));
            ASSERT_TRUE(oracle::stronger_by_definition(*j, b));
            for (const Creature& psi : all)
                if (oracle::stronger_by_definition(psi, a) && oracle::stronger_by_definition(psi, b))
                    ASSERT_TRUE(oracle::stronger_by_definition(psi, *j)) << psi << "\n" << *j;
        }
}

TEST(Join, CommutativeAndAssociative) {
    const auto& all = all_of_width(2);
    for (const Creature& a : all)
        for (const Creature& b : all) {
            EXPECT_EQ(join(a, b), join(b, a));
            for (const Creature& c : all) {
                auto ab = join(a, b), bc = join(b, c);
                std::optional<Creature> left = ab ? join(*ab, c) : std::nullopt;
                std::optional<Creature> right = bc ? join(a, *bc) : std::nullopt;
                EXPECT_EQ(left, right);
            }
        }
}

TEST(Join, RecursiveClauseStrictlyActive) {
    // Both norms reach 2 on {0,1} while every singleton is 0 under one of them.
    Creature a(0, 2, 0b11, {0, 1, 0, 2});
    Creature b(0, 2, 0b11, {0, 0, 1, 2});
    ASSERT_TRUE(is_valid(a));
    ASSERT_TRUE(is_valid(b));
    auto j = join(a, b);
    ASSERT_TRUE(j.has_value());
    EXPECT_EQ((*j)(0b11), 1u);
    EXPECT_LT((*j)(0b11), std::min(a(0b11), b(0b11)));

    bool found = false;
    for (const Creature& x : all_of_width(3))
        for (const Creature& y : all_of_width(3)) {
            auto k = join(x, y);
            if (!k) continue;
            for (SubsetMask s : k->subsets()) found |= (*k)(s) < std::min(x(s), y(s));
        }
    EXPECT_TRUE(found);
}

TEST(Split, SingletonGoesToOneSide) {
    Creature a = log_creature(0, 3), b = steep_creature(0, 3);
    for (std::uint32_t x = 0; x < 3; ++x) {
        auto [b0, b1] = split_decomposition(a, b, SubsetMask{1} << x);
        EXPECT_EQ(b0 | b1, SubsetMask{1} << x);
        EXPECT_TRUE(b0 == 0 || b1 == 0);
    }
}

TEST(Split, ExhaustiveCertificatesAndExistence) {
    const auto& all = all_of_width(3);
    for (const Creature& a : all)
        for (const Creature& b : all) {
            auto j = join(a, b);
            if (!j) continue;
            for (SubsetMask s : j->subsets()) {
                auto [b0, b1] = split_decomposition(a, b, s);
                ASSERT_EQ(b0 | b1, s);
                ASSERT_GE((*j)(s), std::max(a(b0), b(b1)));
                ASSERT_TRUE(oracle::split_exists(a, b, *j, s));
            }
        }
}

TEST(Bigness, ConstantColouringKeepsTheCreature) {
    Creature c = log_creature(0, 8);
    EXPECT_EQ(bigness_refine(c, 0), c);
    EXPECT_EQ(bigness_refine(c, c.val()), c);
}

TEST(Bigness, BalancedColouringOnTheLogExample) {
    Creature c = log_creature(0, 8);  // norm 3
    Creature psi = bigness_refine(c, 0b01010101);
    EXPECT_TRUE(stronger(psi, c));
    EXPECT_GE(psi.nor(), 2u);
    EXPECT_TRUE(psi.val() == 0b01010101u || psi.val() == 0b10101010u);
    EXPECT_THROW(bigness_refine(log_creature(0, 3), 0b1), Error);
}

TEST(Bigness, ExhaustiveLossAtMostOne) {
    for (std::uint32_t w = 1; w <= 4; ++w)
        for (const Creature& c : all_of_width(w)) {
            if (c.nor() <= 1) continue;
            for (SubsetMask ones = 0; ones < (SubsetMask{1} << w); ++ones) {
                Creature psi = bigness_refine(c, ones);
                ASSERT_TRUE(oracle::stronger_by_definition(psi, c));
                ASSERT_GE(psi.nor() + 1, c.nor());
                ASSERT_TRUE(subset_of(psi.val(), ones) || subset_of(psi.val(), ~ones));
            }
        }
}

TEST(Bigness, IteratedColouringsLoseAtMostOneEach) {
    Creature c = steep_creature(0, 9);
    const std::vector<SubsetMask> colourings{0b101010101, 0b000111000, 0b110011001};
    Creature psi = c;
    for (std::size_t k = 0; k < colourings.size(); ++k) {
        psi = refine_by_colouring(psi, colourings[k]);
        EXPECT_GE(psi.nor() + k + 1, c.nor());
        EXPECT_TRUE(stronger(psi, c));
    }
    for (SubsetMask ones : colourings) EXPECT_TRUE(subset_of(psi.val(), ones) || subset_of(psi.val(), ~ones));
}
