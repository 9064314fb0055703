#ifndef ORDFORGE_SUITES_HPP
#define ORDFORGE_SUITES_HPP

// Invariant suites behind `suite NAME --size k --seed n`.  Each property
// becomes one summary entry: how many instances were checked and the first
// counterexample, if any.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "ordforge/collapse.hpp"
#include "ordforge/forcing.hpp"
#include "ordforge/prefix.hpp"
#include "ordforge/report.hpp"
#include "ordforge/tree.hpp"

namespace ordforge::suites {

struct Params {
    std::uint64_t size = 3;
    std::uint64_t seed = 0;
};

/// mt19937_64 is fully specified by the standard; reducing by modulo keeps
/// the draws identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : gen_() % n; }

private:
    std::mt19937_64 gen_;
};

class Tally {
public:
    explicit Tally(std::string suite) : suite_(std::move(suite)) {}

    void record(const std::string& property, bool ok, const std::function<std::string()>& witness) {
        auto& [checked, failed, first] = rows_[property];
        ++checked;
        if (!ok && failed++ == 0) first = witness();
    }

    void append_to(std::vector<Entry>& out) const {
        for (const auto& [property, row] : rows_) {
            const auto& [checked, failed, first] = row;
            Entry e;
            e.check = "suite " + suite_;
            e.instance = property;
            e.holds = failed == 0;
            e.result = "checked " + std::to_string(checked) + ", failed " + std::to_string(failed);
            if (failed) e.witness = first;
            out.push_back(std::move(e));
        }
    }

private:
    std::string suite_;
    std::map<std::string, std::tuple<std::size_t, std::size_t, std::string>> rows_;
};

inline std::vector<SetTerm> kernel_pool() {
    auto O = [](std::uint32_t k) { return SetTerm::ord(k); };
    auto N = [](std::vector<SetTerm> v) { return SetTerm::node(std::move(v)); };
    const SetTerm e = SetTerm::empty();
    return {O(0), O(1), O(2), O(3), O(4), e, N({e}), N({O(0)}), N({O(2)}), N({O(1), O(3)}), N({O(2), N({O(4)})}),
            N({e, N({e})}), N({N({O(2)})}), N({O(0), O(4)}), N({O(3)}), make_pair_term(O(1), O(3)),
            N({O(3), N({O(3)})})};
}

inline std::vector<SetTerm> draw(Rng& rng, const std::vector<SetTerm>& pool, std::size_t max_size) {
    std::vector<SetTerm> p = pool;
    for (std::size_t i = p.size(); i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
    p.resize(std::min<std::size_t>(1 + rng.below(max_size), p.size()));
    return p;
}

inline void kernel(const Params& prm, std::vector<Entry>& out) {
    Tally t("kernel");
    Rng rng(prm.seed);
    const auto pool = kernel_pool();
    const std::size_t carrier = std::max<std::uint64_t>(prm.size, 1);
    const std::size_t draws = 60 * carrier;
    for (std::size_t k = 0; k < draws; ++k) {
        std::vector<SetTerm> es = draw(rng, pool, carrier);
        const EpsilonModel m(es);
        auto show = [&] { std::ostringstream os; os << m; return os.str(); };
        if (is_ord_absolute(m) && is_extensional(m)) {
            CollapseResult i = ord_collapse(m);
            bool fixes = true, iso = true;
            for (const SetTerm& x : m.elements()) {
                if (x.is_ord() && i(x) != x) fixes = false;
                for (const SetTerm& y : m.elements()) {
                    const auto my = m.members_in(y), iy = i.image.members_in(i(y));
                    iso = iso && std::binary_search(my.begin(), my.end(), x) ==
                                     std::binary_search(iy.begin(), iy.end(), i(x));
                }
            }
            t.record("collapse-fixes-ordinals", fixes, show);
            t.record("collapse-is-isomorphism", iso && i.image.size() == m.size(), show);
            t.record("collapse-image-ord-transitive", is_ord_transitive(i.image), show);
            t.record("collapse-idempotent", ord_collapse(i.image).image == i.image, show);
        }
        // Closing a draw under ordclos makes it ord-transitive whenever it is
        // ord-absolute.
        std::vector<SetTerm> closed = es;
        for (const SetTerm& x : es)
            for (const SetTerm& y : ordclos(x)) closed.push_back(y);
        const EpsilonModel c(closed);
        t.record("ordclos-is-ord-closed", is_ord_closed(c), [&] { std::ostringstream os; os << c; return os.str(); });
        if (is_ord_transitive(c) && is_extensional(c)) {
            LabeledModel l = labeled_collapse(c);
            t.record("labeled-collapse-valid", is_valid_labeled(l), [&] { return labeled_model_violation(l); });
            t.record("uncollapse-round-trip", uncollapse(l) == c, [&] { std::ostringstream os; os << c; return os.str(); });
        }
    }
    t.append_to(out);
}

inline std::vector<Poset> small_posets() {
    auto cond = [](std::uint32_t k) { return SetTerm::node({SetTerm::ord(k)}); };
    const SetTerm top = cond(2), a = cond(4), b = cond(6), c = cond(8);
    return {
        Poset({top, a, b}, {{a, top}, {b, top}}),
        Poset({top, a}, {{a, top}}),
        Poset({top, a, b, c}, {{a, top}, {b, top}, {c, a}}),
        Poset({top, a, b, c}, {{a, top}, {b, top}, {c, a}, {c, b}}),
    };
}

inline void forcing(const Params& prm, std::vector<Entry>& out) {
    Tally t("forcing");
    Rng rng(prm.seed);
    const std::uint32_t max_ords = static_cast<std::uint32_t>(std::clamp<std::uint64_t>(prm.size, 1, 4));
    for (const Poset& p : small_posets()) {
        for (std::uint32_t ords = 1; ords <= max_ords; ++ords) {
            for (int variant = 0; variant < 3; ++variant) {
                std::vector<SetTerm> extra;
                for (int e = 0; e < variant; ++e) {
                    Mask s = 1 + rng.below(p.all());
                    extra.push_back(SetTerm::node(p.to_terms(s)));
                }
                std::vector<std::uint32_t> on;
                for (std::uint32_t k = 0; k < ords; ++k) on.push_back(k);
                EpsilonModel m = forcing_model(p, on, extra);
                auto show = [&] { std::ostringstream os; os << m; return os.str(); };
                ForcingInstance inst(m, p.encode());
                const bool ready = is_forcing_ready(inst);
                t.record("forcing-model-is-ready", ready, [&] { return forcing_ready_violation(inst); });
                if (!ready) continue;
                t.record("generic-filter-exists", !inst.generics().empty(), show);
                for (Mask g : inst.generics()) {
                    auto gs = inst.poset().to_terms(g);
                    t.record("generics-are-generic", is_generic(gs, m, p.encode()), show);
                    const EpsilonModel& ext = inst.extension(g);
                    t.record("extension-ord-transitive", is_ord_transitive(ext), show);
                    t.record("extension-adds-no-ordinals", ext.ordinals() == m.ordinals(), show);
                    std::size_t budget = 12;
                    for (const SetTerm& tau : inst.names()) {
                        if (budget-- == 0) break;
                        t.record("eval-matches-collapse-route", inst.eval(tau, g) == eval_name_via_collapse(tau, gs, m),
                                 [&] { return tau.str(); });
                    }
                }
            }
        }
    }
    t.append_to(out);
}

inline void creature(const Params& prm, std::vector<Entry>& out) {
    Tally t("creature");
    Rng rng(prm.seed);
    const std::uint32_t max_width = static_cast<std::uint32_t>(std::clamp<std::uint64_t>(prm.size, 1, 4));
    for (std::uint32_t w = 1; w <= max_width; ++w) {
        const auto all = enumerate_creatures(0, w);
        auto show = [](const Creature& c) { return [c] { std::ostringstream os; os << c; return os.str(); }; };
        for (const Creature& c : all) {
            t.record("enumerated-are-valid", is_valid(c), show(c));
            Creature h = half(c);
            t.record("half-is-stronger-and-valid", is_valid(h) && stronger(h, c), show(c));
            if (c.nor() > 1) {
                const SubsetMask ones = rng.below(SubsetMask{1} << w);
                Creature r = bigness_refine(c, ones);
                const SubsetMask v = r.val();
                t.record("bigness-loses-at-most-one", stronger(r, c) && r.nor() + 1 >= c.nor() &&
                                                           ((v & ones) == 0 || (v & ~ones) == 0),
                         show(c));
            }
        }
        const std::size_t pairs = std::min<std::size_t>(all.size() * all.size(), 4000);
        for (std::size_t k = 0; k < pairs; ++k) {
            const Creature& a = all[rng.below(all.size())];
            const Creature& b = all[rng.below(all.size())];
            auto j = join(a, b);
            auto show2 = [&] { std::ostringstream os; os << a << " / " << b; return os.str(); };
            t.record("join-none-iff-disjoint", j.has_value() == ((a.val() & b.val()) != 0), show2);
            if (!j) continue;
            t.record("join-stronger-than-both", is_valid(*j) && stronger(*j, a) && stronger(*j, b), show2);
            t.record("join-commutes", join(b, a) == j, show2);
            auto [b0, b1] = split_decomposition(a, b, j->val());
            t.record("split-certificate", (b0 | b1) == j->val() && j->nor() >= std::max(a(b0), b(b1)), show2);
        }
    }
    t.append_to(out);
}

inline void tree(const Params& prm, std::vector<Entry>& out) {
    Tally t("tree");
    Rng rng(prm.seed);
    const std::uint32_t max_depth = static_cast<std::uint32_t>(std::min<std::uint64_t>(prm.size, 4));
    for (std::uint32_t d = 0; d <= max_depth; ++d) {
        const auto trees = enumerate_trees(d);
        for (const FinTree& tr : trees) {
            auto show = [&] { std::ostringstream os; os << tr; return os.str(); };
            for (std::uint32_t n = 0; n <= d; ++n) {
                if (!has_splitting_front(tr, n)) continue;
                auto f = splitting_front(tr, n);
                t.record("front-is-maximal-antichain", is_antichain(f) && is_front(tr, f), show);
            }
        }
        const std::size_t samples = std::min<std::size_t>(trees.size(), 200);
        for (std::size_t k = 0; k < samples; ++k) {
            const FinTree& a = trees[rng.below(trees.size())];
            const FinTree& b = trees[rng.below(trees.size())];
            ProductCondition p({{0, a}, {1, b}});
            auto show = [&] { std::ostringstream os; os << a << " / " << b; return os.str(); };
            for (std::uint32_t n = 0; n <= d; ++n) {
                t.record("le-nu-reflexive", le_nu(p, p, n, {0, 1}), show);
                if (!has_splitting_front(a, n) || !has_splitting_front(b, n)) continue;
                std::size_t leaves = 0;
                bool below = true;
                for (const Eta& e : pos_u(p, n, {0, 1})) {
                    ProductCondition w = wedge_u(p, e);
                    below = below && le(w, p);
                    leaves += w[0].leaves().size() * w[1].leaves().size();
                }
                t.record("wedges-partition-the-leaves", below && leaves == a.leaves().size() * b.leaves().size(), show);
            }
        }
    }
    t.append_to(out);
}

inline const std::vector<std::string>& names() {
    static const std::vector<std::string> n = {"kernel", "forcing", "creature", "tree"};
    return n;
}

inline std::vector<Entry> run(const std::string& name, const Params& prm) {
    std::vector<Entry> out;
    if (name == "kernel" || name == "all") kernel(prm, out);
    if (name == "forcing" || name == "all") forcing(prm, out);
    if (name == "creature" || name == "all") creature(prm, out);
    if (name == "tree" || name == "all") tree(prm, out);
    if (out.empty() && name != "all") throw Error("unknown suite '" + name + "'");
    return out;
}

}  // namespace ordforge::suites

#endif  // ORDFORGE_SUITES_HPP
