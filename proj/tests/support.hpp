#pragma once

// Shared test populations: term universes, subset enumeration, random models.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "ordforge/model.hpp"

namespace ordforge::testing {

inline SetTerm O(std::uint32_t n) { return SetTerm::ord(n); }
inline SetTerm N(std::vector<SetTerm> es = {}) { return SetTerm::node(std::move(es)); }
inline EpsilonModel M(std::vector<SetTerm> es) { return EpsilonModel(std::move(es)); }

/// Terms of small rank mixing ordinal atoms and pure nodes.  The full universe
/// has 48 terms; `small` keeps the first 16 for quick unit tests.
inline std::vector<SetTerm> kernel_universe(bool small = false) {
    const SetTerm e = N();
    std::vector<SetTerm> u;
    for (std::uint32_t k = 0; k <= 5; ++k) u.push_back(O(k));
    u.push_back(e);
    u.push_back(N({e}));
    u.push_back(N({O(0)}));
    u.push_back(N({O(2)}));
    u.push_back(N({O(2), N({O(5)})}));
    u.push_back(N({O(1), O(3)}));
    u.push_back(N({O(5)}));
    u.push_back(N({e, N({e})}));
    u.push_back(N({N({O(2)})}));
    u.push_back(N({O(0), O(4)}));
    if (small) return u;
    for (std::uint32_t k : {1u, 3u, 4u}) u.push_back(N({O(k)}));
    for (std::uint32_t a = 0; a < 5; ++a)
        for (std::uint32_t b = a + 1; b <= 5; b += 2)
            if (!(a == 1 && b == 3) && !(a == 0 && b == 4)) u.push_back(N({O(a), O(b)}));
    for (std::uint32_t k : {0u, 1u, 3u, 5u}) u.push_back(N({N({O(k)})}));
    u.push_back(N({N({e})}));
    u.push_back(N({e, O(1)}));
    u.push_back(N({O(3), N({O(3)})}));
    u.push_back(N({O(2), N({O(2)})}));
    u.push_back(make_pair_term(O(1), O(3)));
    u.push_back(make_pair_term(O(2), O(2)));
    u.push_back(N({N({O(0), O(4)}), O(4)}));
    u.push_back(N({N({N({O(5)})})}));
    u.push_back(N({O(1), N({O(1), N({O(1)})})}));
    u.push_back(N({O(2), N({O(4)}), N({O(2), O(4)})}));
    return sorted(std::move(u));
}

/// Calls fn on every subset of u with at most max_size elements.
inline void for_each_subset(const std::vector<SetTerm>& u, std::size_t max_size,
                            const std::function<void(const std::vector<SetTerm>&)>& fn) {
    std::vector<SetTerm> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        fn(cur);
        if (cur.size() == max_size) return;
        for (std::size_t i = start; i < u.size(); ++i) {
            cur.push_back(u[i]);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

inline EpsilonModel random_model(std::mt19937_64& rng, const std::vector<SetTerm>& u, std::size_t max_size) {
    std::uniform_int_distribution<std::size_t> size_dist(1, max_size);
    std::vector<SetTerm> pool = u;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(std::min(size_dist(rng), pool.size()));
    return EpsilonModel(std::move(pool));
}

}  // namespace ordforge::testing
