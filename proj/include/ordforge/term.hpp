#ifndef ORDFORGE_TERM_HPP
#define ORDFORGE_TERM_HPP

// Hereditarily finite set terms with ordinal atoms.
//
// A term is either an ordinal atom ord(n) or a node {t1, ..., tk}.  Terms are
// hash-consed: structurally equal terms share one interned node, so equality
// is pointer equality.  Interned nodes live for the lifetime of the process.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace ordforge {

/// Raised for violated preconditions of kernel operations.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
struct TermNode;
}

class SetTerm {
public:
    /// The empty node {}.
    SetTerm();

    static SetTerm ord(std::uint32_t n);
    static SetTerm node(std::vector<SetTerm> elements);
    static SetTerm empty() { return SetTerm(); }

    bool is_ord() const;
    bool is_node() const { return !is_ord(); }
    /// Value of an ordinal atom.  Throws for nodes.
    std::uint32_t ordinal() const;

    /// Elements of a node, in canonical order.  Empty for ordinal atoms.
    std::span<const SetTerm> elements() const;

    /// Real members: the elements of a node, or ord(0..n-1) for ord(n).
    std::vector<SetTerm> members() const;
    bool has_member(const SetTerm& s) const;
    std::size_t member_count() const;

    /// rank(ord(n)) = n, rank({}) = 0, rank({E}) = sup{rank(e)+1}.
    std::uint32_t rank() const;
    std::size_t hash() const;

    const detail::TermNode* raw() const { return node_; }

    friend bool operator==(const SetTerm& a, const SetTerm& b) { return a.node_ == b.node_; }
    friend bool operator!=(const SetTerm& a, const SetTerm& b) { return a.node_ != b.node_; }
    /// Canonical (content based, run independent) total order.
    friend bool operator<(const SetTerm& a, const SetTerm& b);

    std::string str() const;

private:
    explicit SetTerm(const detail::TermNode* n) : node_(n) {}
    const detail::TermNode* node_;
};

int compare(const SetTerm& a, const SetTerm& b);

namespace detail {

struct TermNode {
    bool is_ord = false;
    std::uint32_t ordinal = 0;
    std::vector<SetTerm> elems;
    std::uint32_t rank = 0;
    std::size_t hash = 0;
};

inline std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

struct KeyHash {
    std::size_t operator()(const TermNode* n) const { return n->hash; }
};
struct KeyEq {
    bool operator()(const TermNode* a, const TermNode* b) const {
        if (a->is_ord != b->is_ord || a->hash != b->hash) return false;
        if (a->is_ord) return a->ordinal == b->ordinal;
        return a->elems == b->elems;
    }
};

/// Process-wide interning table.  Insertion is serialized; lookups of
/// existing terms never touch it (terms are immutable once built).
class Interner {
public:
    static Interner& instance() {
        static Interner table;
        return table;
    }

    const TermNode* intern(TermNode candidate) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = table_.find(&candidate);
        if (it != table_.end()) return *it;
        storage_.push_back(std::move(candidate));
        const TermNode* stored = &storage_.back();
        table_.insert(stored);
        return stored;
    }

    std::size_t size() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return storage_.size();
    }

private:
    mutable std::mutex mutex_;
    std::deque<TermNode> storage_;
    std::unordered_set<const TermNode*, KeyHash, KeyEq> table_;
};

inline const TermNode* make_ord(std::uint32_t n) {
    TermNode t;
    t.is_ord = true;
    t.ordinal = n;
    t.rank = n;
    t.hash = mix(0x51ed27f3a1b2c3d4ULL, n);
    return Interner::instance().intern(std::move(t));
}

}  // namespace detail

inline int compare(const SetTerm& a, const SetTerm& b) {
    if (a == b) return 0;
    const detail::TermNode* x = a.raw();
    const detail::TermNode* y = b.raw();
    if (x->is_ord != y->is_ord) return x->is_ord ? -1 : 1;
    if (x->is_ord) return x->ordinal < y->ordinal ? -1 : 1;
    if (x->rank != y->rank) return x->rank < y->rank ? -1 : 1;
    if (x->elems.size() != y->elems.size()) return x->elems.size() < y->elems.size() ? -1 : 1;
    for (std::size_t i = 0; i < x->elems.size(); ++i) {
        int c = compare(x->elems[i], y->elems[i]);
        if (c != 0) return c;
    }
    return 0;
}

inline bool operator<(const SetTerm& a, const SetTerm& b) { return compare(a, b) < 0; }

inline SetTerm::SetTerm() {
    static const detail::TermNode* empty_node = [] {
        detail::TermNode t;
        t.hash = detail::mix(0x2545f4914f6cdd1dULL, 0);
        return detail::Interner::instance().intern(std::move(t));
    }();
    node_ = empty_node;
}

inline SetTerm SetTerm::ord(std::uint32_t n) { return SetTerm(detail::make_ord(n)); }

inline SetTerm SetTerm::node(std::vector<SetTerm> elements) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    detail::TermNode t;
    std::size_t h = 0x2545f4914f6cdd1dULL;
    h = detail::mix(h, elements.size());
    std::uint32_t rank = 0;
    for (const SetTerm& e : elements) {
        h = detail::mix(h, e.hash());
        rank = std::max(rank, e.rank() + 1);
    }
    t.rank = rank;
    t.hash = h;
    t.elems = std::move(elements);
    return SetTerm(detail::Interner::instance().intern(std::move(t)));
}

inline bool SetTerm::is_ord() const { return node_->is_ord; }

inline std::uint32_t SetTerm::ordinal() const {
    if (!node_->is_ord) throw Error("ordinal() called on a node term");
    return node_->ordinal;
}

inline std::span<const SetTerm> SetTerm::elements() const { return node_->elems; }

inline std::vector<SetTerm> SetTerm::members() const {
    if (!node_->is_ord) return node_->elems;
    std::vector<SetTerm> out;
    out.reserve(node_->ordinal);
    for (std::uint32_t k = 0; k < node_->ordinal; ++k) out.push_back(ord(k));
    return out;
}

inline bool SetTerm::has_member(const SetTerm& s) const {
    if (node_->is_ord) return s.is_ord() && s.ordinal() < node_->ordinal;
    return std::binary_search(node_->elems.begin(), node_->elems.end(), s);
}

inline std::size_t SetTerm::member_count() const {
    return node_->is_ord ? node_->ordinal : node_->elems.size();
}

inline std::uint32_t SetTerm::rank() const { return node_->rank; }
inline std::size_t SetTerm::hash() const { return node_->hash; }

inline std::ostream& operator<<(std::ostream& os, const SetTerm& t) {
    if (t.is_ord()) return os << "ord(" << t.ordinal() << ")";
    os << "{";
    bool first = true;
    for (const SetTerm& e : t.elements()) {
        if (!first) os << ", ";
        first = false;
        os << e;
    }
    return os << "}";
}

inline std::string SetTerm::str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

struct SetTermHash {
    std::size_t operator()(const SetTerm& t) const { return t.hash(); }
};

using TermSet = std::unordered_set<SetTerm, SetTermHash>;
using TermMap = std::unordered_map<SetTerm, SetTerm, SetTermHash>;

inline std::vector<SetTerm> sorted(std::vector<SetTerm> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Kuratowski pairs: (a, b) = {{a}, {a, b}}.
inline SetTerm make_pair_term(const SetTerm& a, const SetTerm& b) {
    return SetTerm::node({SetTerm::node({a}), SetTerm::node({a, b})});
}

/// Decodes a Kuratowski pair using real membership.
inline std::optional<std::pair<SetTerm, SetTerm>> decode_pair(const SetTerm& t) {
    if (!t.is_node()) return std::nullopt;
    auto es = t.elements();
    if (es.size() == 1) {
        // (a, a) = {{a}}
        const SetTerm& u = es[0];
        if (!u.is_node() || u.elements().size() != 1) return std::nullopt;
        return std::make_pair(u.elements()[0], u.elements()[0]);
    }
    if (es.size() != 2) return std::nullopt;
    for (int k = 0; k < 2; ++k) {
        const SetTerm& single = es[k];
        const SetTerm& dbl = es[1 - k];
        if (!single.is_node() || single.elements().size() != 1) continue;
        if (!dbl.is_node() || dbl.elements().size() != 2) continue;
        const SetTerm& a = single.elements()[0];
        if (!dbl.has_member(a)) continue;
        const SetTerm& b = dbl.elements()[0] == a ? dbl.elements()[1] : dbl.elements()[0];
        return std::make_pair(a, b);
    }
    return std::nullopt;
}

}  // namespace ordforge

template <>
struct std::hash<ordforge::SetTerm> {
    std::size_t operator()(const ordforge::SetTerm& t) const { return t.hash(); }
};

#endif  // ORDFORGE_TERM_HPP
