#ifndef ORDFORGE_TREE_HPP
#define ORDFORGE_TREE_HPP

// Perfect binary trees truncated at a finite depth, their splitting fronts,
// and finite-support products of such trees.
//
// Nodes are binary strings of length ≤ depth, stored as heap ids: the string
// s of length l has id 2^l + value(s), so the root is 1 and the children of t
// are 2t and 2t + 1.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "ordforge/term.hpp"

namespace ordforge {

using NodeId = std::uint32_t;

inline constexpr std::uint32_t kMaxTreeDepth = 5;

inline std::uint32_t node_length(NodeId t) { return static_cast<std::uint32_t>(std::bit_width(t)) - 1; }

inline NodeId node_from_string(const std::string& s) {
    if (s.size() > kMaxTreeDepth) throw Error("tree node longer than the maximal depth");
    NodeId t = 1;
    for (char ch : s) {
        if (ch != '0' && ch != '1') throw Error("tree node must be a binary string");
        t = 2 * t + static_cast<NodeId>(ch - '0');
    }
    return t;
}

inline std::string node_to_string(NodeId t) {
    std::string s(node_length(t), '0');
    for (std::size_t k = s.size(); k-- > 0; t >>= 1) s[k] = static_cast<char>('0' + (t & 1));
    return s;
}

/// s ⊆ t as strings.
inline bool is_prefix(NodeId s, NodeId t) {
    const std::uint32_t ls = node_length(s), lt = node_length(t);
    return ls <= lt && (t >> (lt - ls)) == s;
}

inline bool comparable(NodeId s, NodeId t) { return is_prefix(s, t) || is_prefix(t, s); }

class FinTree {
public:
    FinTree() = default;

    FinTree(std::uint32_t depth, std::uint64_t nodes) : depth_(depth), nodes_(nodes) {
        std::string why = violation();
        if (!why.empty()) throw Error("invalid tree: " + why);
    }

    static FinTree from_strings(std::uint32_t depth, const std::vector<std::string>& nodes) {
        std::uint64_t m = 0;
        for (const auto& s : nodes) m |= std::uint64_t{1} << node_from_string(s);
        return FinTree(depth, m);
    }

    static FinTree full(std::uint32_t depth) {
        if (depth > kMaxTreeDepth) throw Error("tree depth exceeds the maximum");
        const std::uint32_t ids = 1u << (depth + 1);
        const std::uint64_t all = ids == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << ids) - 1;
        return FinTree(depth, all & ~std::uint64_t{1});
    }

    std::uint32_t depth() const { return depth_; }
    std::uint64_t mask() const { return nodes_; }
    bool contains(NodeId t) const { return t < 64 && ((nodes_ >> t) & 1); }
    bool splitting(NodeId t) const { return contains(t) && contains(2 * t) && contains(2 * t + 1); }

    std::vector<NodeId> nodes() const {
        std::vector<NodeId> out;
        for (std::uint64_t m = nodes_; m; m &= m - 1) out.push_back(static_cast<NodeId>(std::countr_zero(m)));
        return out;
    }

    std::vector<NodeId> leaves() const {
        std::vector<NodeId> out;
        for (NodeId t : nodes())
            if (node_length(t) == depth_) out.push_back(t);
        return out;
    }

    std::vector<std::string> node_strings() const {
        std::vector<std::string> out;
        for (NodeId t : nodes()) out.push_back(node_to_string(t));
        return out;
    }

    /// Splitting proper prefixes of t.
    std::uint32_t splitting_below(NodeId t) const {
        std::uint32_t k = 0;
        for (NodeId s = t >> 1; s >= 1; s >>= 1) k += splitting(s);
        return k;
    }

    /// The nodes comparable with t.
    FinTree above(NodeId t) const {
        if (!contains(t)) throw Error("tree does not contain the node " + node_to_string(t));
        std::uint64_t m = 0;
        for (NodeId s : nodes())
            if (comparable(s, t)) m |= std::uint64_t{1} << s;
        return FinTree(depth_, m);
    }

    /// Ids of the nodes of length exactly depth.
    std::uint64_t leaf_mask() const {
        const std::uint64_t below = (std::uint64_t{1} << (1u << depth_)) - 1;
        return nodes_ & ~below;
    }

    bool subtree_of(const FinTree& o) const { return depth_ == o.depth_ && (nodes_ & ~o.nodes_) == 0; }

    /// Empty when the tree is prefix-closed, contains the root, and every
    /// node below the depth has a successor.
    std::string violation() const {
        if (depth_ > kMaxTreeDepth) return "depth exceeds the maximum";
        if (!contains(1)) return "root missing";
        if (nodes_ & 1) return "id 0 is not a node";
        if (depth_ < kMaxTreeDepth && (nodes_ >> (1u << (depth_ + 1))) != 0) return "node longer than the depth";
        for (NodeId t : nodes()) {
            if (t > 1 && !contains(t >> 1)) return "not prefix-closed at " + node_to_string(t);
            if (node_length(t) < depth_ && !contains(2 * t) && !contains(2 * t + 1))
                return "dead end at " + node_to_string(t);
        }
        return {};
    }

    friend bool operator==(const FinTree&, const FinTree&) = default;
    friend auto operator<=>(const FinTree&, const FinTree&) = default;

    friend std::ostream& operator<<(std::ostream& os, const FinTree& t) {
        os << "tree depth=" << t.depth_ << " nodes={";
        bool first = true;
        for (const auto& s : t.node_strings()) {
            os << (first ? "" : ", ") << '"' << s << '"';
            first = false;
        }
        return os << '}';
    }

private:
    std::uint32_t depth_ = 0;
    std::uint64_t nodes_ = 0b10;
};

/// Splitting nodes with exactly n splitting nodes strictly below them.
inline std::vector<NodeId> splitting_level(const FinTree& t, std::uint32_t n) {
    std::vector<NodeId> out;
    for (NodeId s : t.nodes())
        if (t.splitting(s) && t.splitting_below(s) == n) out.push_back(s);
    return out;
}

/// Whether every maximal branch passes through the set.
inline bool is_front(const FinTree& t, const std::vector<NodeId>& f) {
    for (NodeId leaf : t.leaves()) {
        bool met = false;
        for (NodeId s : f) met = met || is_prefix(s, leaf);
        if (!met) return false;
    }
    return true;
}

inline bool is_antichain(const std::vector<NodeId>& f) {
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j)
            if (comparable(f[i], f[j])) return false;
    return true;
}

/// F^T_n.  Throws when some branch has fewer than n + 1 splitting nodes.
inline std::vector<NodeId> splitting_front(const FinTree& t, std::uint32_t n) {
    auto f = splitting_level(t, n);
    if (!is_front(t, f)) throw Error("splitting_front: not enough splitting levels");
    return f;
}

inline bool has_splitting_front(const FinTree& t, std::uint32_t n) { return is_front(t, splitting_level(t, n)); }

/// Every tree of the given depth, in increasing order of node masks.
inline std::vector<FinTree> enumerate_trees(std::uint32_t depth) {
    if (depth > 4) throw Error("enumerate_trees: depth above 4 is not enumerable");
    std::vector<std::uint64_t> masks;
    // Each open node below the depth keeps its left child, its right child,
    // or both.
    std::function<void(std::uint64_t, std::vector<NodeId>)> grow = [&](std::uint64_t m, std::vector<NodeId> open) {
        if (open.empty()) {
            masks.push_back(m);
            return;
        }
        const NodeId t = open.back();
        open.pop_back();
        if (node_length(t) == depth) {
            grow(m, std::move(open));
            return;
        }
        for (int choice = 1; choice <= 3; ++choice) {
            std::uint64_t mm = m;
            std::vector<NodeId> next = open;
            for (NodeId c : {2 * t, 2 * t + 1}) {
                if (!(choice & (c == 2 * t ? 1 : 2))) continue;
                mm |= std::uint64_t{1} << c;
                next.push_back(c);
            }
            grow(mm, std::move(next));
        }
    };
    grow(0b10, {1});
    std::sort(masks.begin(), masks.end());
    std::vector<FinTree> out;
    out.reserve(masks.size());
    for (std::uint64_t m : masks) out.emplace_back(depth, m);
    return out;
}

/// Finite support product: index ↦ tree, all of one depth.
class ProductCondition {
public:
    ProductCondition() = default;
    explicit ProductCondition(std::map<std::uint32_t, FinTree> trees) : trees_(std::move(trees)) {
        std::optional<std::uint32_t> d;
        for (const auto& [i, t] : trees_) {
            if (d && *d != t.depth()) throw Error("product trees must share their depth");
            d = t.depth();
        }
    }

    const std::map<std::uint32_t, FinTree>& trees() const { return trees_; }
    bool in_domain(std::uint32_t i) const { return trees_.count(i) > 0; }
    const FinTree& operator[](std::uint32_t i) const { return trees_.at(i); }
    std::set<std::uint32_t> domain() const {
        std::set<std::uint32_t> d;
        for (const auto& [i, t] : trees_) d.insert(i);
        return d;
    }

    friend bool operator==(const ProductCondition&, const ProductCondition&) = default;

private:
    std::map<std::uint32_t, FinTree> trees_;
};

/// dom(q) ⊇ dom(p) and q(i) ⊆ p(i) on dom(p).
inline bool le(const ProductCondition& q, const ProductCondition& p) {
    for (const auto& [i, t] : p.trees())
        if (!q.in_domain(i) || !q[i].subtree_of(t)) return false;
    return true;
}

/// q ≤ p and the n-th splitting levels agree on u.
inline bool le_nu(const ProductCondition& q, const ProductCondition& p, std::uint32_t n,
                  const std::set<std::uint32_t>& u) {
    for (std::uint32_t i : u)
        if (!p.in_domain(i)) throw Error("le_nu: u is not inside dom(p)");
    if (!le(q, p)) return false;
    for (std::uint32_t i : u)
        if (splitting_level(q[i], n) != splitting_level(p[i], n)) return false;
    return true;
}

/// Trees share a leaf on every common coordinate.
inline bool compatible(const ProductCondition& p, const ProductCondition& q) {
    for (const auto& [i, t] : p.trees())
        if (q.in_domain(i) && (t.leaf_mask() & q[i].leaf_mask()) == 0)
            return false;
    return true;
}

using Eta = std::map<std::uint32_t, NodeId>;

/// ∏_{i∈u} F_n^{p(i)}, ordered lexicographically by index.
inline std::vector<Eta> pos_u(const ProductCondition& p, std::uint32_t n, const std::set<std::uint32_t>& u) {
    std::vector<Eta> out{Eta{}};
    for (std::uint32_t i : u) {
        if (!p.in_domain(i)) throw Error("pos_u: u is not inside dom(p)");
        auto f = splitting_front(p[i], n);
        std::vector<Eta> next;
        for (const Eta& e : out)
            for (NodeId t : f) {
                Eta x = e;
                x[i] = t;
                next.push_back(std::move(x));
            }
        out = std::move(next);
    }
    return out;
}

/// Each tree on dom(η) cut down to the nodes comparable with η(i).
inline ProductCondition wedge_u(const ProductCondition& p, const Eta& eta) {
    auto trees = p.trees();
    for (const auto& [i, t] : eta) {
        if (!p.in_domain(i)) throw Error("wedge_u: index outside dom(p)");
        trees[i] = p[i].above(t);
    }
    return ProductCondition(std::move(trees));
}

}  // namespace ordforge

#endif  // ORDFORGE_TREE_HPP
