#ifndef ORDFORGE_COLLAPSE_HPP
#define ORDFORGE_COLLAPSE_HPP

// Collapses of finite models: the ord-collapse (transitive collapse fixing the
// ordinal atoms), the plain Mostowski collapse, and the correspondence between
// ord-transitive models and labeled models.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ordforge/model.hpp"

namespace ordforge {

struct CollapseResult {
    EpsilonModel image;
    TermMap map;  // defined on the carrier of the source model

    SetTerm operator()(const SetTerm& t) const { return map.at(t); }
};

/// i(ord(n)) = ord(n), i({E}) = {i(t) : t ∈ E ∩ M}.
/// Requires M ord-absolute and extensional; otherwise the map can identify
/// distinct elements or send a node onto an ordinal.
inline CollapseResult ord_collapse(const EpsilonModel& m) {
    if (!is_ord_absolute(m)) throw Error("ord_collapse: model is not ord-absolute");
    if (!is_extensional(m)) throw Error("ord_collapse: model is not extensional");
    CollapseResult r;
    std::vector<SetTerm> image;
    image.reserve(m.size());
    // Canonical order visits every internal member before its container.
    for (const SetTerm& x : m.elements()) {
        SetTerm y = x;
        if (x.is_node()) {
            std::vector<SetTerm> es;
            for (const SetTerm& t : m.members_in(x)) es.push_back(r.map.at(t));
            y = SetTerm::node(std::move(es));
        }
        r.map.emplace(x, y);
        image.push_back(y);
    }
    r.image = EpsilonModel(std::move(image));
    return r;
}

/// j(t) = {j(s) : s ∈ t ∩ M} for every t, ordinal atoms included.
inline CollapseResult transitive_collapse(const EpsilonModel& m) {
    CollapseResult r;
    std::vector<SetTerm> image;
    for (const SetTerm& x : m.elements()) {
        std::vector<SetTerm> es;
        for (const SetTerm& t : m.members_in(x)) es.push_back(r.map.at(t));
        SetTerm y = SetTerm::node(std::move(es));
        r.map.emplace(x, y);
        image.push_back(y);
    }
    r.image = EpsilonModel(std::move(image));
    return r;
}

/// A transitive carrier whose ordinal atoms are ord(0..k-1), together with a
/// strictly monotone relabeling of those atoms that fixes [0, base).
struct LabeledModel {
    EpsilonModel carrier;
    std::vector<std::uint32_t> label;  // label[p] is the value of ord(p)
    std::uint32_t base = 0;

    friend bool operator==(const LabeledModel& a, const LabeledModel& b) {
        return a.carrier == b.carrier && a.label == b.label && a.base == b.base;
    }
};

/// Empty string when valid, otherwise the first violated clause.
inline std::string labeled_model_violation(const LabeledModel& l) {
    if (!is_transitive(l.carrier)) return "carrier is not transitive";
    if (!is_ord_absolute(l.carrier, l.base)) return "carrier is not ord-absolute";
    if (!is_extensional(l.carrier)) return "carrier is not extensional";
    const std::size_t k = l.carrier.ordinals().size();
    if (l.label.size() != k) return "label domain differs from the carrier ordinals";
    for (std::size_t p = 0; p < k; ++p) {
        if (p < l.base && l.label[p] != p) return "label does not fix the base segment";
        if (p > 0 && l.label[p] <= l.label[p - 1]) return "label is not strictly monotone";
    }
    return {};
}

inline bool is_valid_labeled(const LabeledModel& l) { return labeled_model_violation(l).empty(); }

/// Maps an ord-transitive model onto its labeled counterpart.  Collapsed
/// ordinals are written as the atoms ord(position).  Also returns the map j.
inline std::pair<LabeledModel, TermMap> labeled_collapse_map(const EpsilonModel& m, std::uint32_t base = 0) {
    if (!is_ord_transitive(m, base)) throw Error("labeled_collapse: model is not ord-transitive");
    if (!is_extensional(m)) throw Error("labeled_collapse: model is not extensional");
    LabeledModel l;
    l.base = base;
    TermMap j;
    std::vector<SetTerm> carrier;
    std::uint32_t position = 0;
    for (const SetTerm& x : m.elements()) {
        SetTerm y;
        if (x.is_ord()) {
            l.label.push_back(x.ordinal());
            y = SetTerm::ord(position++);
        } else {
            std::vector<SetTerm> es;
            for (const SetTerm& t : x.elements()) es.push_back(j.at(t));
            y = SetTerm::node(std::move(es));
        }
        j.emplace(x, y);
        carrier.push_back(y);
    }
    l.carrier = EpsilonModel(std::move(carrier));
    return {std::move(l), std::move(j)};
}

inline LabeledModel labeled_collapse(const EpsilonModel& m, std::uint32_t base = 0) {
    return labeled_collapse_map(m, base).first;
}

/// Applies i to an arbitrary term over the carrier's ordinals, for values
/// that live in an extension of the carrier.
inline SetTerm relabel(const SetTerm& t, const std::vector<std::uint32_t>& label) {
    if (t.is_ord()) {
        if (t.ordinal() >= label.size()) throw Error("relabel: ordinal outside the label domain");
        return SetTerm::ord(label[t.ordinal()]);
    }
    std::vector<SetTerm> es;
    for (const SetTerm& e : t.elements()) es.push_back(relabel(e, label));
    return SetTerm::node(std::move(es));
}

/// The map i of a labeled model: i(ord(p)) = ord(label(p)), i({E}) = {i(e)}.
inline CollapseResult uncollapse_map(const LabeledModel& l) {
    std::string why = labeled_model_violation(l);
    if (!why.empty()) throw Error("uncollapse: " + why);
    CollapseResult r;
    std::vector<SetTerm> image;
    for (const SetTerm& x : l.carrier.elements()) {
        SetTerm y;
        if (x.is_ord()) {
            y = SetTerm::ord(l.label.at(x.ordinal()));
        } else {
            std::vector<SetTerm> es;
            for (const SetTerm& e : x.elements()) es.push_back(r.map.at(e));
            y = SetTerm::node(std::move(es));
        }
        r.map.emplace(x, y);
        image.push_back(y);
    }
    r.image = EpsilonModel(std::move(image));
    return r;
}

inline EpsilonModel uncollapse(const LabeledModel& l) { return uncollapse_map(l).image; }

}  // namespace ordforge

#endif  // ORDFORGE_COLLAPSE_HPP
