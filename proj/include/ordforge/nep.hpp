#ifndef ORDFORGE_NEP_HPP
#define ORDFORGE_NEP_HPP

// Hereditary ordinal-indexed parameters and their versions inside a model.

#include <cstdint>
#include <map>
#include <ostream>
#include <vector>

#include "ordforge/model.hpp"

namespace ordforge {

/// A function from ordinal atoms to parameters.  Freshly built parameters
/// have initial-segment domains; restricting to a model can punch holes.
struct NepParameter {
    std::map<std::uint32_t, NepParameter> values;

    bool empty() const { return values.empty(); }
    friend bool operator==(const NepParameter&, const NepParameter&) = default;

    /// Builds the parameter with domain {0..n-1}, every value `v`.
    static NepParameter constant(std::uint32_t n, const NepParameter& v = {}) {
        NepParameter p;
        for (std::uint32_t k = 0; k < n; ++k) p.values.emplace(k, v);
        return p;
    }
};

/// Every domain, hereditarily, is an initial segment of the naturals.
inline bool is_nep_parameter(const NepParameter& p) {
    std::uint32_t expect = 0;
    for (const auto& [k, v] : p.values) {
        if (k != expect++) return false;
        if (!is_nep_parameter(v)) return false;
    }
    return true;
}

/// dom(p_M) = dom(p) ∩ M, values recursively replaced by their M-versions.
inline NepParameter m_version(const NepParameter& p, const EpsilonModel& m) {
    NepParameter out;
    for (const auto& [k, v] : p.values)
        if (m.contains(SetTerm::ord(k))) out.values.emplace(k, m_version(v, m));
    return out;
}

/// The parameter as a set of Kuratowski pairs (ord(k), value).
inline SetTerm to_term(const NepParameter& p) {
    std::vector<SetTerm> pairs;
    for (const auto& [k, v] : p.values) pairs.push_back(make_pair_term(SetTerm::ord(k), to_term(v)));
    return SetTerm::node(std::move(pairs));
}

inline std::ostream& operator<<(std::ostream& os, const NepParameter& p) {
    os << "[";
    bool first = true;
    for (const auto& [k, v] : p.values) {
        if (!first) os << ", ";
        first = false;
        os << k << ": " << v;
    }
    return os << "]";
}

}  // namespace ordforge

#endif  // ORDFORGE_NEP_HPP
