#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "ordforge/forcing.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ordforge;
using namespace ordforge::testing;

namespace {

SetTerm cond(std::uint32_t k) { return N({O(k)}); }

// top ≥ a, top ≥ b, a ⊥ b
Poset fan() {
    return Poset({cond(2), cond(4), cond(6)}, {{cond(4), cond(2)}, {cond(6), cond(2)}});
}

std::vector<std::uint32_t> evens(std::uint32_t n) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t k = 0; k < n; ++k) out.push_back(2 * k);
    return out;
}

std::vector<std::uint32_t> range(std::uint32_t n) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t k = 0; k < n; ++k) out.push_back(k);
    return out;
}

// Density read off the view directly, without the formula evaluator.
std::vector<Mask> structural_family(const EpsilonModel& m, const PosetView& v, DenseKind kind) {
    std::vector<Mask> out;
    for (const SetTerm& d : m.elements()) {
        std::vector<SetTerm> ms = m.members_in(d);
        Mask mask = v.to_mask(ms);
        if (static_cast<std::size_t>(std::popcount(mask)) != ms.size()) continue;
        bool ok = false;
        switch (kind) {
            case DenseKind::Dense: ok = v.is_dense(mask); break;
            case DenseKind::OpenDense: ok = v.is_dense(mask) && v.is_open(mask); break;
            case DenseKind::Predense: ok = v.is_predense(mask); break;
            case DenseKind::MaximalAntichain: ok = v.is_maximal_antichain(mask); break;
        }
        if (ok) out.push_back(mask);
    }
    return out;
}

std::vector<Mask> masks_of(const std::vector<std::pair<SetTerm, Mask>>& family) {
    std::vector<Mask> out;
    for (const auto& [d, m] : family) out.push_back(m);
    return out;
}

EpsilonModel with_all_subsets(const Poset& p, const std::vector<std::uint32_t>& ords) {
    std::vector<SetTerm> extra;
    for (Mask s = 1; s <= p.all(); ++s) extra.push_back(N(p.to_terms(s)));
    return forcing_model(p, ords, extra);
}

}  // namespace

TEST(Poset, ClosureAndEncoding) {
    Poset p = fan();
    EXPECT_TRUE(p.is_preorder());
    EXPECT_EQ(p.top(), std::optional<std::size_t>(0));
    EXPECT_FALSE(p.compatible(1, 2));
    EXPECT_TRUE(p.compatible(0, 1));
    EXPECT_EQ(p.minimal(), bit(1) | bit(2));
    auto cr = decode_pair(p.encode());
    ASSERT_TRUE(cr);
    EXPECT_EQ(cr->first, N({cond(2), cond(4), cond(6)}));
    EXPECT_EQ(cr->second.elements().size(), 5u);
    EXPECT_THROW(Poset({O(1)}, {}), Error);
}

TEST(Poset, ViewMatchesPosetOnOrdTransitiveModel) {
    Poset p = fan();
    EpsilonModel m = forcing_model(p, evens(4));
    PosetView v(m, p.encode());
    ASSERT_EQ(v.conditions(), p.conditions());
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) EXPECT_EQ(v.leq(i, j), p.leq(i, j));
    EXPECT_THROW(PosetView(M({O(0)}), p.encode()), Error);
}

TEST(Genericity, FanExamples) {
    Poset p = fan();
    EpsilonModel m = forcing_model(p, evens(8));
    SetTerm pt = p.encode();
    EXPECT_TRUE(is_generic({cond(4), cond(2)}, m, pt));
    EXPECT_FALSE(is_generic({cond(4), cond(6)}, m, pt));
    EXPECT_FALSE(is_generic({cond(4), cond(6), cond(2)}, m, pt));
    // {a, b} is in M and dense, so {top} misses it.
    ASSERT_TRUE(m.contains(N({cond(4), cond(6)})));
    EXPECT_FALSE(is_generic({cond(2)}, m, pt));
    auto gens = enumerate_generics(m, pt);
    ASSERT_EQ(gens.size(), 2u);
    EXPECT_EQ(gens[0], (std::vector<SetTerm>{cond(2), cond(4)}));
    EXPECT_EQ(gens[1], (std::vector<SetTerm>{cond(2), cond(6)}));
}

TEST(Genericity, UpwardClosureOfMinimalIsGenericOverAnyModel) {
    Poset p = fan();
    EpsilonModel full = with_all_subsets(p, evens(4));
    EpsilonModel bare = forcing_model(p, evens(4));
    for (const EpsilonModel& m : {full, bare}) {
        EXPECT_TRUE(is_generic({cond(2), cond(4)}, m, p.encode()));
        EXPECT_TRUE(is_generic({cond(2), cond(6)}, m, p.encode()));
    }
}

TEST(Genericity, SingletonPoset) {
    Poset p({cond(2)}, {});
    EpsilonModel m = forcing_model(p, evens(4));
    EXPECT_EQ(enumerate_generics(m, p.encode()).size(), 1u);
}

TEST(Genericity, NotRequiredToBeInsideP) {
    Poset p = fan();
    EpsilonModel m = forcing_model(p, evens(4));
    EXPECT_TRUE(is_generic({cond(2), cond(4), O(2), N()}, m, p.encode()));
}

TEST(Genericity, WithoutTheDenseSetTopAloneIsGeneric) {
    // M sees only the trivial dense set C, so {top} is a filter meeting it.
    Poset p = fan();
    std::vector<SetTerm> es;
    for (std::uint32_t k : evens(4)) es.push_back(O(k));
    for (const SetTerm& t : p.encoding_closure()) es.push_back(t);
    EpsilonModel m(es);
    ForcingInstance inst(m, p.encode());
    EXPECT_TRUE(inst.is_generic(bit(0)));
    EXPECT_EQ(inst.generics().size(), 2u);
    EXPECT_FALSE(is_forcing_ready(inst));
}

TEST(Genericity, FormulaFamiliesMatchStructuralOracle) {
    Poset chain({cond(2), cond(4), cond(6)}, {{cond(6), cond(4)}, {cond(4), cond(2)}});
    for (const Poset& p : {fan(), chain}) {
        EpsilonModel m = with_all_subsets(p, evens(4));
        PosetView v(m, p.encode());
        for (DenseKind k : {DenseKind::Dense, DenseKind::OpenDense, DenseKind::Predense, DenseKind::MaximalAntichain}) {
            auto got = masks_of(internal_dense_family(m, v, k));
            EXPECT_EQ(got, structural_family(m, v, k)) << to_string(k);
        }
    }
}

TEST(Genericity, VariantsAgreeWhenAllSubsetsPresent) {
    Poset diamond({cond(2), cond(4), cond(6), cond(8)},
                  {{cond(4), cond(2)}, {cond(6), cond(2)}, {cond(8), cond(4)}, {cond(8), cond(6)}});
    Poset split({cond(2), cond(4), cond(6), cond(8)},
                {{cond(4), cond(2)}, {cond(6), cond(2)}, {cond(8), cond(4)}});
    for (const Poset& p : {fan(), diamond, split}) {
        EpsilonModel m = with_all_subsets(p, evens(4));
        ForcingInstance inst(m, p.encode());
        for (Mask g = 1; g <= p.all(); ++g) {
            bool d = inst.is_generic(g, DenseKind::Dense);
            EXPECT_EQ(d, inst.is_generic(g, DenseKind::OpenDense));
            EXPECT_EQ(d, inst.is_generic(g, DenseKind::Predense));
            EXPECT_EQ(d, inst.is_generic(g, DenseKind::MaximalAntichain));
        }
    }
}

TEST(Genericity, MaximalAntichainIsNotAbsolute) {
    Poset p = fan();
    SetTerm t = cond(2), a = cond(4);
    SetTerm c = p.carrier_term(), r = p.relation_term();
    SetTerm anti = N({a});
    std::vector<SetTerm> es{O(0), O(2), O(4), t, a, N({t}), N({a}), N({a, t}),
                            make_pair_term(a, a), make_pair_term(t, t), make_pair_term(a, t),
                            c, r, N({c}), N({c, r}), p.encode(), anti};
    EpsilonModel m1(es);
    EpsilonModel m2 = forcing_model(p, evens(4), {anti});
    auto in_family = [&](const EpsilonModel& m) {
        PosetView v(m, p.encode());
        for (const auto& [d, mask] : internal_dense_family(m, v, DenseKind::MaximalAntichain))
            if (d == anti) return true;
        return false;
    };
    EXPECT_TRUE(in_family(m1));
    EXPECT_FALSE(in_family(m2));
}

TEST(Names, StandardNameEvaluatesToItself) {
    Poset p = fan();
    SetTerm top = cond(2);
    for (const SetTerm& x : {N({O(4)}), N({O(0), N({O(2)})}), N({N({O(2)}), N({O(4)})})}) {
        EXPECT_EQ(eval_name_V(check_name(x, top), {top}), x);
        EXPECT_EQ(eval_name_V(check_name(x, top), {top, cond(6)}), x);
    }
    EXPECT_EQ(eval_name_V(check_name(O(3), top), {top}), O(3));
}

TEST(Names, ClassicalExamples) {
    SetTerm a = cond(4), b = cond(6);
    SetTerm x = N({O(7)}), y = N({O(9)});
    SetTerm tau = N({make_pair_term(check_name(x, cond(2)), a), make_pair_term(check_name(y, cond(2)), b)});
    EXPECT_EQ(eval_name_V(tau, {cond(2), a}), N({x}));
    EXPECT_EQ(eval_name_V(N(), {a}), O(0));
    EXPECT_EQ(eval_name_V(N({make_pair_term(O(0), a)}), {a}), O(1));
}

TEST(Names, InternalNamesMatchV_WhenSmallOrdinalsPresent) {
    Poset p = fan();
    SetTerm top = cond(2);
    std::vector<SetTerm> extra{check_name(N({O(4)}), top), N({make_pair_term(O(1), cond(4))}),
                               N({O(2), N({O(0), N({O(0), O(1)})})})};
    EpsilonModel m = forcing_model(p, range(8), extra);
    ForcingInstance inst(m, p.encode());
    for (const SetTerm& t : m.elements()) {
        bool v_name = oracle::is_name_V(t, p.conditions());
        EXPECT_EQ(inst.is_name(t), v_name) << t;
    }
}

TEST(Names, PairDecodingIsNotAbsoluteForSparseOrdinals) {
    // ord(2) has the single member ord(0) inside M, so M reads r as (ord(0), x).
    SetTerm x = cond(4);
    SetTerm r = N({O(2), N({O(0), x})});
    EpsilonModel m = M({O(0), O(2), O(4), x, N({O(0), x}), r});
    auto internal = internal_pair(m, r);
    ASSERT_TRUE(internal);
    EXPECT_EQ(internal->first, O(0));
    EXPECT_EQ(internal->second, x);
    EXPECT_FALSE(decode_pair(r));
}

TEST(Forcing, DivergenceOfEvaluations) {
    // Under G = up(b), M computes tau as {least, ord(2)}, which M takes to be
    // the ordinal ord(4).  In V the same name is the non-ordinal {ord(0), ord(2)}.
    Poset p = fan();
    SetTerm top = cond(2), a = cond(4), b = cond(6);
    SetTerm empty_under_b = N({make_pair_term(O(2), a)});
    SetTerm tau = N({make_pair_term(empty_under_b, top), make_pair_term(O(2), top)});
    EpsilonModel m = forcing_model(p, evens(10), {tau});
    ForcingInstance inst(m, p.encode());
    ASSERT_TRUE(is_forcing_ready(inst)) << forcing_ready_violation(inst);
    std::vector<SetTerm> g{top, b};
    std::size_t bi = *inst.poset().index(b);
    EXPECT_EQ(inst.forced_value(bi, tau), std::optional<SetTerm>(O(4)));
    EXPECT_EQ(inst.eval(tau, g), O(4));
    EXPECT_EQ(eval_name_V(tau, g), N({O(0), O(2)}));
    EXPECT_EQ(eval_name_via_collapse(tau, g, m), O(4));
}

TEST(Forcing, EvaluationDependsOnTheModel) {
    Poset p = fan();
    SetTerm top = cond(2);
    SetTerm empty_under_b = N({make_pair_term(O(2), cond(4))});
    SetTerm tau = N({make_pair_term(empty_under_b, top), make_pair_term(O(2), top)});
    std::vector<std::uint32_t> o1 = evens(10);
    std::vector<std::uint32_t> o2 = o1;
    o2.push_back(3);
    EpsilonModel m1 = forcing_model(p, o1, {tau});
    EpsilonModel m2 = forcing_model(p, o2, {tau});
    std::vector<SetTerm> g{top, cond(6)};
    EXPECT_EQ(eval_name_M(tau, g, m1, p.encode()), O(4));
    EXPECT_EQ(eval_name_M(tau, g, m2, p.encode()), O(3));
}

TEST(Forcing, StandardNamesAndEmptyName) {
    Poset p = fan();
    SetTerm top = cond(2);
    SetTerm x = N({O(4), N({O(6)})});
    EpsilonModel pre = forcing_model(p, evens(10), {x});
    SetTerm xc = internal_check_name(pre, x, top);
    EpsilonModel m = forcing_model(p, evens(10), {x, xc, N()});
    ForcingInstance inst(m, p.encode());
    for (Mask g : inst.generics()) {
        EXPECT_EQ(inst.eval(xc, g), x);
        EXPECT_EQ(inst.eval(O(6), g), O(6));
    }
    EXPECT_THROW(inst.eval(xc, bit(0)), Error);
    EXPECT_THROW(inst.eval(N({O(4)}), inst.generics()[0]), Error);
}

TEST(Forcing, SemanticForcingExamples) {
    Poset p = fan();
    SetTerm top = cond(2), a = cond(4), b = cond(6);
    SetTerm x = N({O(4)});
    EpsilonModel pre = forcing_model(p, evens(10), {x});
    SetTerm xc = internal_check_name(pre, x, top);
    SetTerm tau = N({make_pair_term(xc, a)});
    SetTerm sx = N({make_pair_term(xc, top)});  // standard name of {x}
    EpsilonModel m = forcing_model(p, evens(10), {x, tau, sx});
    ForcingInstance inst(m, p.encode());
    ASSERT_TRUE(is_forcing_ready(inst)) << forcing_ready_violation(inst);
    std::size_t ai = *inst.poset().index(a), bi = *inst.poset().index(b), ti = *inst.poset().index(top);
    Formula eq = Formula::eq("v", "w");
    EXPECT_TRUE(inst.forces(ai, eq, {{"v", tau}, {"w", sx}}));
    EXPECT_FALSE(inst.forces(bi, eq, {{"v", tau}, {"w", sx}}));
    EXPECT_FALSE(inst.forces(ti, eq, {{"v", tau}, {"w", sx}}));
    EXPECT_TRUE(inst.forces(ti, Formula::in("v", "w"), {{"v", xc}, {"w", sx}}));
    for (std::size_t q = 0; q < inst.poset().size(); ++q)
        EXPECT_FALSE(inst.forces(q, Formula::conj(eq, Formula::negate(eq)), {{"v", tau}, {"w", sx}}));
    EXPECT_EQ(inst.forced_value(ai, tau), std::optional<SetTerm>(N({x})));
}

TEST(Forcing, IncompatibleConditionsAreSeparatedByAName) {
    Poset p = fan();
    EpsilonModel pre = forcing_model(p, evens(10));
    SetTerm tau = incompatibility_name(pre, cond(4));
    EpsilonModel m = forcing_model(p, evens(10), {tau});
    ForcingInstance inst(m, p.encode());
    auto w = incompatibility_witness(inst, 1, 2);
    ASSERT_TRUE(w);
    EXPECT_NE(*inst.forced_value(1, *w), *inst.forced_value(2, *w));
    EXPECT_FALSE(incompatibility_witness(ForcingInstance(pre, p.encode()), 0, 1));
}

TEST(Forcing, TransitiveModelsEvaluateClassically) {
    Poset p = fan();
    SetTerm top = cond(2);
    std::vector<SetTerm> extra{N({make_pair_term(O(1), cond(4)), make_pair_term(O(3), top)}),
                               N({make_pair_term(O(1), cond(6))})};
    EpsilonModel m = forcing_model(p, range(12), extra);
    ASSERT_TRUE(is_transitive(m));
    ForcingInstance inst(m, p.encode());
    ASSERT_TRUE(is_forcing_ready(inst)) << forcing_ready_violation(inst);
    for (Mask g : inst.generics())
        for (const SetTerm& tau : inst.names())
            EXPECT_EQ(inst.eval(tau, g), eval_name_V(tau, inst.poset().to_terms(g))) << tau;
}

TEST(Forcing, ExtensionBulletsOnFan) {
    Poset p = fan();
    SetTerm top = cond(2);
    EpsilonModel pre = forcing_model(p, evens(14));
    std::vector<SetTerm> extra{incompatibility_name(pre, cond(4)),
                               N({make_pair_term(N({make_pair_term(O(2), cond(4))}), top), make_pair_term(O(2), top)}),
                               N({make_pair_term(N({make_pair_term(O(2), cond(6))}), top)}),
                               N({make_pair_term(O(2), cond(6))})};
    EpsilonModel m = forcing_model(p, evens(14), extra);
    ForcingInstance inst(m, p.encode());
    ASSERT_TRUE(is_forcing_ready(inst)) << forcing_ready_violation(inst);
    auto [lm, j] = labeled_collapse_map(m);
    ForcingInstance image(lm.carrier, j.at(p.encode()));
    for (Mask g : inst.generics()) {
        const EpsilonModel& ext = inst.extension(g);
        EXPECT_TRUE(is_ord_transitive(ext)) << ext;
        EXPECT_EQ(ext.ordinals(), m.ordinals());
        for (const SetTerm& y : ext.elements())
            for (const SetTerm& x : m.elements())
                if (x.has_member(y)) EXPECT_TRUE(m.contains(y));
        // Commutation with the labeled collapse.
        std::vector<SetTerm> gj;
        for (const SetTerm& c : inst.poset().to_terms(g)) gj.push_back(j.at(c));
        std::vector<SetTerm> values;
        for (const SetTerm& tau : image.names()) values.push_back(eval_name_V(tau, gj));
        LabeledModel expected{EpsilonModel(values), lm.label, 0};
        EXPECT_EQ(labeled_collapse(ext), expected);
        for (const SetTerm& tau : inst.names())
            EXPECT_EQ(inst.eval(tau, g), eval_name_via_collapse(tau, inst.poset().to_terms(g), m));
    }
    EXPECT_EQ(inst.uniqueness_violations(), 0u);
}

TEST(Forcing, TruthTransfer) {
    Poset p = fan();
    EpsilonModel pre = forcing_model(p, evens(10));
    SetTerm tau = incompatibility_name(pre, cond(4));
    EpsilonModel m = forcing_model(p, evens(10), {tau});
    ForcingInstance inst(m, p.encode());
    using F = Formula;
    std::vector<F> phis{F::exists_in("z", "v", F::truth()), F::eq("v", "w"), F::in("w", "v"),
                        F::forall_in("z", "v", F::in("z", "w"))};
    std::vector<std::map<std::string, SetTerm>> envs{{{"v", tau}, {"w", O(0)}}, {{"v", tau}, {"w", O(2)}}};
    for (Mask g : inst.generics())
        for (const F& phi : phis)
            for (const auto& env : envs) {
                bool truth = inst.holds_in_extension(g, phi, env);
                bool forced = false;
                for (std::size_t q = 0; q < inst.poset().size(); ++q)
                    if (has(g, q)) forced = forced || inst.forces(q, phi, env);
                EXPECT_EQ(truth, forced) << phi;
            }
}

TEST(Forcing, GenericityTransfer) {
    Poset p = fan();
    EpsilonModel m = forcing_model(p, evens(6), {N({cond(4), cond(6)})});
    std::mt19937_64 rng(7);
    std::vector<SetTerm> junk{N({O(4), O(6), N({O(17)})}), N({cond(4), O(6), N({O(11)})}), N({O(2), O(8), N({O(19)})})};
    std::size_t both_true = 0, both_false = 0, models = 0;
    for (int round = 0; round < 40; ++round) {
        // Greedily drop elements (keeping ord-absoluteness and
        // extensionality) and add a term with missing members.
        std::vector<SetTerm> keep(m.elements().begin(), m.elements().end());
        keep.push_back(junk[round % junk.size()]);
        std::vector<SetTerm> order = keep;
        std::shuffle(order.begin(), order.end(), rng);
        for (const SetTerm& t : order) {
            if (t == p.encode() || t.is_ord() || rng() % 3 != 0) continue;
            std::vector<SetTerm> trial;
            for (const SetTerm& u : keep)
                if (u != t) trial.push_back(u);
            EpsilonModel cand(trial);
            if (is_ord_absolute(cand) && is_extensional(cand) && internal_pair(cand, p.encode())) keep = trial;
        }
        EpsilonModel n(keep);
        if (!is_ord_absolute(n) || !is_extensional(n)) continue;
        ++models;
        for (Mask g = 1; g <= p.all(); ++g) {
            TransferResult r = genericity_transfer(n, p.encode(), p.to_terms(g));
            EXPECT_EQ(r.generic_over_n, r.generic_over_image);
            if (r.identity_applies) EXPECT_TRUE(r.identity_on_p);
            (r.generic_over_n ? both_true : both_false)++;
        }
    }
    EXPECT_GT(models, 20u);
    EXPECT_GT(both_true, 0u);
    EXPECT_GT(both_false, 0u);
}

TEST(Forcing, EvaluationIsAbsoluteForOuterModels) {
    Poset p = fan();
    EpsilonModel pre = forcing_model(p, evens(10));
    SetTerm tau = incompatibility_name(pre, cond(4));
    SetTerm sn = N({make_pair_term(N({make_pair_term(O(2), cond(4))}), cond(2)), make_pair_term(O(2), cond(2))});
    EpsilonModel m = forcing_model(p, evens(10), {tau, sn});
    ForcingInstance inst(m, p.encode());
    std::vector<SetTerm> outer(m.elements().begin(), m.elements().end());
    outer.push_back(m.as_term());
    for (Mask g : inst.generics()) outer.push_back(N(p.to_terms(g)));
    EpsilonModel n(outer);
    ASSERT_TRUE(is_ord_transitive(n));
    for (Mask g : inst.generics())
        for (const SetTerm& t : {tau, sn, O(4)}) {
            AbsolutenessResult r = eval_absoluteness_check(n, m, p.encode(), p.to_terms(g), t);
            EXPECT_TRUE(r.holds());
        }
    EXPECT_THROW(eval_absoluteness_check(m, m, p.encode(), p.to_terms(inst.generics()[0]), tau), Error);
}
