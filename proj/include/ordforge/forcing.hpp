#ifndef ORDFORGE_FORCING_HPP
#define ORDFORGE_FORCING_HPP

// Forcing over a finite poset that lives inside a finite model.
//
// Names are terms whose internal members are pairs (σ, p) with p a condition;
// ordinal atoms are names of themselves.  Values of names are written with
// ordinals as atoms: a set whose members are exactly ord(0..n-1) is the atom
// ord(n).
//
// The internal forcing relation is semantic: p ⊩ φ when φ holds in M[H] for
// every maximal generic H containing p.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ordforge/collapse.hpp"
#include "ordforge/formula.hpp"
#include "ordforge/poset.hpp"

namespace ordforge {

/// The value of a set with the given members.
inline SetTerm vset(std::vector<SetTerm> members) {
    members = sorted(std::move(members));
    for (std::size_t k = 0; k < members.size(); ++k)
        if (!members[k].is_ord() || members[k].ordinal() != k) return SetTerm::node(std::move(members));
    return SetTerm::ord(static_cast<std::uint32_t>(members.size()));
}

/// The standard name x̌ = {(y̌, top) : y ∈ x}; ordinal atoms name themselves.
inline SetTerm check_name(const SetTerm& x, const SetTerm& top) {
    if (x.is_ord()) return x;
    std::vector<SetTerm> pairs;
    for (const SetTerm& y : x.elements()) pairs.push_back(make_pair_term(check_name(y, top), top));
    return SetTerm::node(std::move(pairs));
}

/// What M believes is the standard name of x: built from x ∩ M.
inline SetTerm internal_check_name(const EpsilonModel& m, const SetTerm& x, const SetTerm& top) {
    std::vector<SetTerm> pairs;
    for (const SetTerm& y : m.members_in(x))
        pairs.push_back(make_pair_term(y.is_ord() ? y : internal_check_name(m, y, top), top));
    return SetTerm::node(std::move(pairs));
}

/// Classical evaluation τ[G] = {σ[G] : (σ, p) ∈ τ, p ∈ G}.
inline SetTerm eval_name_V(const SetTerm& tau, const std::vector<SetTerm>& g) {
    const std::vector<SetTerm> gs = sorted(g);
    TermMap memo;
    auto rec = [&](auto&& self, const SetTerm& t) -> SetTerm {
        if (t.is_ord()) return t;
        if (auto it = memo.find(t); it != memo.end()) return it->second;
        std::vector<SetTerm> members;
        for (const SetTerm& r : t.elements()) {
            auto sp = decode_pair(r);
            if (sp && std::binary_search(gs.begin(), gs.end(), sp->second)) members.push_back(self(self, sp->first));
        }
        SetTerm v = vset(std::move(members));
        memo.emplace(t, v);
        return v;
    };
    return rec(rec, tau);
}

/// A model together with a poset it contains.  Caches the dense sets, the
/// generic filters, the names and their values; not safe for concurrent use.
class ForcingInstance {
public:
    /// generic_universe, when given, replaces the maximal generic filters of V
    /// as the range of the forcing quantifier.
    ForcingInstance(EpsilonModel m, const SetTerm& p_term,
                    std::optional<std::vector<Mask>> generic_universe = std::nullopt)
        : model_(std::move(m)), view_(model_, p_term) {
        dense_ = internal_dense_family(model_, view_, DenseKind::Dense);
        if (view_.size() > 20) throw Error("forcing: too many conditions to enumerate filters");
        std::vector<Mask> candidates;
        if (generic_universe) {
            candidates = *generic_universe;
        } else {
            for (Mask g = 1; g != 0 && g <= view_.all(); ++g) candidates.push_back(g);
        }
        generics_ = maximal_generics(std::move(candidates));
        build_ids();
        build_names();
    }

    const EpsilonModel& model() const { return model_; }
    const PosetView& poset() const { return view_; }

    const std::vector<std::pair<SetTerm, Mask>>& dense_sets() const { return dense_; }

    /// G ∩ P ∩ M is a filter of the view meeting every set M thinks is
    /// `kind` (dense by default).
    bool is_generic(Mask g, DenseKind kind = DenseKind::Dense) const {
        if (!view_.is_filter(g)) return false;
        const auto& family = kind == DenseKind::Dense ? dense_ : family_cache(kind);
        for (const auto& [d, mask] : family)
            if ((mask & g) == 0) return false;
        return true;
    }
    bool is_generic(const std::vector<SetTerm>& g, DenseKind kind = DenseKind::Dense) const {
        return is_generic(view_.to_mask(g), kind);
    }

    /// The ⊆-maximal generic filters (among the supplied universe, if any),
    /// ascending.
    const std::vector<Mask>& generics() const { return generics_; }

    bool is_name(const SetTerm& t) const { return name_pairs_.count(t) != 0; }
    /// The elements of M that M thinks are P-names.
    const std::vector<SetTerm>& names() const { return names_; }

    /// x ∈ M with p ⊩ τ = x̌, if any.  Compared through internal extensional
    /// identity, so the answer does not depend on how x is written.
    std::optional<SetTerm> forced_value(std::size_t p, const SetTerm& tau) const {
        require_name(tau);
        std::optional<int> v;
        for (std::size_t h = 0; h < generics_.size(); ++h) {
            if (!has(generics_[h], p)) continue;
            int w = value_id(tau, h);
            if (v && *v != w) return std::nullopt;
            v = w;
        }
        if (!v) return std::nullopt;
        auto it = element_of_id_.find(*v);
        if (it == element_of_id_.end()) return std::nullopt;
        return it->second;
    }

    /// Every x ∈ M that some p ∈ G forces to equal τ.  Extensionality makes
    /// this at most one element on forcing-ready instances.
    std::vector<SetTerm> clause_one_candidates(const SetTerm& tau, Mask g) const {
        std::vector<SetTerm> out;
        for (std::size_t p = 0; p < view_.size(); ++p)
            if (has(g, p))
                if (auto x = forced_value(p, tau)) out.push_back(*x);
        return sorted(std::move(out));
    }

    /// τ[G]^M: the forced x̌ if some p ∈ G forces one, otherwise
    /// {σ[G]^M : (σ, p) ∈ τ ∩ M, p ∈ G}.
    SetTerm eval(const SetTerm& tau, Mask g) const {
        require_name(tau);
        if (!is_generic(g)) throw Error("eval_name_M: filter is not generic over the model");
        return eval_rec(tau, g);
    }
    SetTerm eval(const SetTerm& tau, const std::vector<SetTerm>& g) const { return eval(tau, view_.to_mask(g)); }

    /// M[G] = {τ[G]^M : τ ∈ M a name}.
    const EpsilonModel& extension(Mask g) const {
        if (auto it = extension_cache_.find(g); it != extension_cache_.end()) return it->second;
        std::vector<SetTerm> values;
        for (const SetTerm& tau : names_) values.push_back(eval(tau, g));
        return extension_cache_.emplace(g, EpsilonModel(std::move(values))).first->second;
    }

    /// p ⊩ φ(τ⃗): φ holds in M[H] at the values of the names, for every generic
    /// H in the quantifier range that contains p.
    bool forces(std::size_t p, const Formula& phi, const std::map<std::string, SetTerm>& names) const {
        for (Mask h : generics_) {
            if (!has(h, p)) continue;
            if (!holds_in_extension(h, phi, names)) return false;
        }
        return true;
    }

    bool holds_in_extension(Mask g, const Formula& phi, const std::map<std::string, SetTerm>& names) const {
        Assignment a;
        for (const auto& [v, tau] : names) a.emplace(v, eval(tau, g));
        return eval_formula(phi, extension(g), a);
    }

    std::size_t uniqueness_violations() const { return uniqueness_violations_; }

private:
    const std::vector<std::pair<SetTerm, Mask>>& family_cache(DenseKind kind) const {
        auto it = families_.find(kind);
        if (it == families_.end()) it = families_.emplace(kind, internal_dense_family(model_, view_, kind)).first;
        return it->second;
    }

    std::vector<Mask> maximal_generics(std::vector<Mask> candidates) const {
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        std::vector<Mask> gen;
        for (Mask g : candidates)
            if (is_generic(g)) gen.push_back(g);
        std::vector<Mask> out;
        for (Mask g : gen) {
            bool maximal = true;
            for (Mask h : gen)
                if (h != g && (g & h) == g) maximal = false;
            if (maximal) out.push_back(g);
        }
        return out;
    }

    int intern(std::vector<int> members) const {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        auto [it, fresh] = ids_.emplace(std::move(members), static_cast<int>(ids_.size()));
        return it->second;
    }

    void build_ids() {
        for (const SetTerm& x : model_.elements()) {
            std::vector<int> ms;
            for (const SetTerm& y : model_.members_in(x)) ms.push_back(id_of_.at(y));
            int id = intern(std::move(ms));
            id_of_.emplace(x, id);
            element_of_id_.emplace(id, x);
        }
    }

    void build_names() {
        // Members precede containers in canonical order.
        for (const SetTerm& t : model_.elements()) {
            if (t.is_ord()) {
                name_pairs_.emplace(t, std::vector<std::pair<SetTerm, std::size_t>>{});
                names_.push_back(t);
                continue;
            }
            std::vector<std::pair<SetTerm, std::size_t>> pairs;
            bool ok = true;
            for (const SetTerm& r : model_.members_in(t)) {
                auto sp = internal_pair(model_, r);
                std::optional<std::size_t> pi = sp ? view_.index(sp->second) : std::nullopt;
                if (!sp || !pi || !name_pairs_.count(sp->first)) {
                    ok = false;
                    break;
                }
                pairs.emplace_back(sp->first, *pi);
            }
            if (!ok) continue;
            name_pairs_.emplace(t, std::move(pairs));
            names_.push_back(t);
        }
    }

    void require_name(const SetTerm& tau) const {
        if (!is_name(tau)) throw Error("not a P-name in the model: " + tau.str());
    }

    int value_id(const SetTerm& tau, std::size_t h) const {
        if (tau.is_ord()) return id_of_.at(tau);
        auto key = std::make_pair(tau.raw(), h);
        if (auto it = value_ids_.find(key); it != value_ids_.end()) return it->second;
        std::vector<int> ms;
        for (const auto& [sigma, p] : name_pairs_.at(tau))
            if (has(generics_[h], p)) ms.push_back(value_id(sigma, h));
        int v = intern(std::move(ms));
        value_ids_.emplace(key, v);
        return v;
    }

    SetTerm eval_rec(const SetTerm& tau, Mask g) const {
        auto key = std::make_pair(tau.raw(), static_cast<std::size_t>(g));
        if (auto it = eval_memo_.find(key); it != eval_memo_.end()) return it->second;
        SetTerm v;
        std::vector<SetTerm> candidates = clause_one_candidates(tau, g);
        if (!candidates.empty()) {
            if (candidates.size() > 1) ++uniqueness_violations_;
            v = candidates.front();
        } else {
            std::vector<SetTerm> members;
            for (const auto& [sigma, p] : name_pairs_.at(tau))
                if (has(g, p)) members.push_back(eval_rec(sigma, g));
            v = SetTerm::node(std::move(members));
        }
        eval_memo_.emplace(key, v);
        return v;
    }

    struct KeyHash {
        std::size_t operator()(const std::pair<const detail::TermNode*, std::size_t>& k) const {
            return std::hash<const void*>()(k.first) ^ (k.second * 0x9e3779b97f4a7c15ULL);
        }
    };

    EpsilonModel model_;
    PosetView view_;
    std::vector<std::pair<SetTerm, Mask>> dense_;
    mutable std::map<DenseKind, std::vector<std::pair<SetTerm, Mask>>> families_;
    std::vector<Mask> generics_;
    mutable std::map<std::vector<int>, int> ids_;
    std::unordered_map<SetTerm, int, SetTermHash> id_of_;
    std::unordered_map<int, SetTerm> element_of_id_;
    std::unordered_map<SetTerm, std::vector<std::pair<SetTerm, std::size_t>>, SetTermHash> name_pairs_;
    std::vector<SetTerm> names_;
    mutable std::unordered_map<std::pair<const detail::TermNode*, std::size_t>, int, KeyHash> value_ids_;
    mutable std::unordered_map<std::pair<const detail::TermNode*, std::size_t>, SetTerm, KeyHash> eval_memo_;
    mutable std::map<Mask, EpsilonModel> extension_cache_;
    mutable std::size_t uniqueness_violations_ = 0;
};

/// G is P-generic over M in the sense of the model's view of P.
inline bool is_generic(const std::vector<SetTerm>& g, const EpsilonModel& m, const SetTerm& p_term,
                       DenseKind kind = DenseKind::Dense) {
    PosetView view(m, p_term);
    Mask gm = view.to_mask(g);
    if (!view.is_filter(gm)) return false;
    for (const auto& [d, mask] : internal_dense_family(m, view, kind))
        if ((mask & gm) == 0) return false;
    return true;
}

/// The maximal generic filters, each as an ascending list of conditions.
inline std::vector<std::vector<SetTerm>> enumerate_generics(const EpsilonModel& m, const SetTerm& p_term) {
    ForcingInstance inst(m, p_term);
    std::vector<std::vector<SetTerm>> out;
    for (Mask g : inst.generics()) out.push_back(inst.poset().to_terms(g));
    std::sort(out.begin(), out.end());
    return out;
}

inline SetTerm eval_name_M(const SetTerm& tau, const std::vector<SetTerm>& g, const EpsilonModel& m,
                           const SetTerm& p_term) {
    return ForcingInstance(m, p_term).eval(tau, g);
}

/// The smallest ord-transitive model holding the given ordinals, the poset
/// encoding, its set of minimal conditions, and the extra terms.
inline EpsilonModel forcing_model(const Poset& p, const std::vector<std::uint32_t>& ordinals,
                                  const std::vector<SetTerm>& extra = {}) {
    std::vector<SetTerm> es;
    for (std::uint32_t k : ordinals) es.push_back(SetTerm::ord(k));
    for (const SetTerm& t : p.encoding_closure()) es.push_back(t);
    std::vector<SetTerm> tops = extra;
    tops.push_back(SetTerm::node(p.to_terms(p.minimal())));
    for (const SetTerm& t : tops) {
        es.push_back(t);
        for (const SetTerm& u : ordclos(t)) es.push_back(u);
    }
    return EpsilonModel(std::move(es));
}

/// Empty when the instance is ready for forcing, otherwise the first failed
/// requirement.  These are the finite stand-ins for M being a model of set
/// theory that contains P: the extension then stays ord-transitive and adds
/// no ordinals.
inline std::string forcing_ready_violation(const ForcingInstance& inst) {
    const EpsilonModel& m = inst.model();
    const PosetView& p = inst.poset();
    if (!is_ord_transitive(m)) return "model is not ord-transitive";
    if (!is_extensional(m)) return "model is not extensional";
    if (p.size() == 0) return "poset is empty";
    for (const SetTerm& c : p.conditions())
        if (c.is_ord()) return "poset contains an ordinal atom";
    if (!p.is_preorder()) return "order is not a preorder inside the model";
    if (!p.top()) return "poset has no top element";
    if (!m.contains(SetTerm::node(p.to_terms(p.minimal())))) return "set of minimal conditions is not in the model";
    const std::size_t ordinals = m.ordinals().size();
    if (ordinals == 0) return "model has no ordinals";
    RankMap rank = internal_ranks(m);
    for (const SetTerm& tau : inst.names())
        if (rank.at(tau) >= ordinals) return "name " + tau.str() + " outranks the ordinals of the model";
    return {};
}

inline bool is_forcing_ready(const ForcingInstance& inst) { return forcing_ready_violation(inst).empty(); }

/// Name evaluation computed through the collapse: collapse M to its labeled model,
/// evaluate classically in the transitive carrier, and relabel the value.
inline SetTerm eval_name_via_collapse(const SetTerm& tau, const std::vector<SetTerm>& g, const EpsilonModel& m) {
    auto [lm, j] = labeled_collapse_map(m);
    std::vector<SetTerm> gj;
    for (const SetTerm& p : g)
        if (m.contains(p)) gj.push_back(j.at(p));
    return relabel(eval_name_V(j.at(tau), gj), lm.label);
}

/// A name in M that p and q force to different elements of M.
inline std::optional<SetTerm> incompatibility_witness(const ForcingInstance& inst, std::size_t p, std::size_t q) {
    for (const SetTerm& tau : inst.names()) {
        auto a = inst.forced_value(p, tau);
        auto b = inst.forced_value(q, tau);
        if (a && b && *a != *b) return tau;
    }
    return std::nullopt;
}

/// The name {(o, p)} for the second ordinal o of M: p forces it to be the
/// singleton {o}, and any condition incompatible with p forces it empty.  The
/// least ordinal is avoided because {least} is an ordinal impostor in M.
inline SetTerm incompatibility_name(const EpsilonModel& m, const SetTerm& p) {
    auto on = m.ordinals();
    if (on.size() < 2) throw Error("incompatibility_name: model needs two ordinals");
    return SetTerm::node({make_pair_term(on[1], p)});
}

struct TransferResult {
    bool generic_over_n = false;
    bool generic_over_image = false;
    bool identity_applies = false;  // ordclos of P lies inside N
    bool identity_on_p = false;
};

/// G is N-generic iff i[G] is i[N]-generic, i the ord-collapse of N.
inline TransferResult genericity_transfer(const EpsilonModel& n, const SetTerm& p_term, const std::vector<SetTerm>& g) {
    CollapseResult i = ord_collapse(n);
    if (!n.contains(p_term)) throw Error("poset is not represented in the model");
    std::vector<SetTerm> ig;
    for (const SetTerm& p : g)
        if (n.contains(p)) ig.push_back(i(p));
    TransferResult r;
    r.generic_over_n = is_generic(g, n, p_term);
    r.generic_over_image = is_generic(ig, i.image, i(p_term));
    std::vector<SetTerm> below = ordclos(p_term);
    r.identity_applies = std::all_of(below.begin(), below.end(), [&](const SetTerm& t) { return n.contains(t); });
    r.identity_on_p = i(p_term) == p_term;
    for (const SetTerm& t : below)
        if (n.contains(t) && i(t) != t) r.identity_on_p = false;
    return r;
}

struct AbsolutenessResult {
    bool generic_agrees = false;
    bool value_agrees = false;
    bool ord_transitive_agrees = false;
    bool holds() const { return generic_agrees && value_agrees && ord_transitive_agrees; }
};

/// Computes genericity, τ[G]^M and ord-transitivity of M once in V and once
/// inside N, where M is seen as the element m_term of N and the forcing
/// quantifier ranges over the filters that belong to N.
inline AbsolutenessResult eval_absoluteness_check(const EpsilonModel& n, const EpsilonModel& m, const SetTerm& p_term,
                                                  const std::vector<SetTerm>& g, const SetTerm& tau) {
    const SetTerm m_term = m.as_term();
    if (!n.contains(m_term)) throw Error("eval_absoluteness: M is not an element of N");
    if (!n.contains(SetTerm::node(g))) throw Error("eval_absoluteness: G is not an element of N");
    EpsilonModel m_in_n(n.members_in(m_term));

    ForcingInstance outside(m, p_term);
    std::vector<Mask> visible;
    for (Mask h = 1; h != 0 && h <= outside.poset().all(); ++h)
        if (n.contains(SetTerm::node(outside.poset().to_terms(h)))) visible.push_back(h);
    ForcingInstance inside(m_in_n, p_term, visible);

    AbsolutenessResult r;
    bool gen_v = outside.is_generic(g);
    r.generic_agrees = gen_v == inside.is_generic(g);
    r.value_agrees = gen_v && outside.eval(tau, g) == inside.eval(tau, g);
    r.ord_transitive_agrees = is_ord_transitive(m) == is_ord_transitive(m_in_n);
    return r;
}

}  // namespace ordforge

#endif  // ORDFORGE_FORCING_HPP
