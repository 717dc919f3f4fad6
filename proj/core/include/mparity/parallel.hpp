#pragma once

#include <cstdint>
#include <future>
#include <utility>

namespace mparity::parallel {

/// Pairwise reduction over [lo, hi) with a fixed combination tree.
///
/// The tree shape depends only on (lo, hi, leaf_size): ranges split at the
/// midpoint until they are at most leaf_size wide, leaves evaluate in index
/// order, and parents always combine left-then-right.  The thread budget only
/// decides which subtrees run concurrently, so floating-point results are
/// bit-identical for every thread count.
template <class T, class Leaf, class Combine>
T reduce(std::int64_t lo, std::int64_t hi, std::int64_t leaf_size, int threads,
         Leaf&& leaf, Combine&& combine) {
    struct Runner {
        std::int64_t leaf_size;
        Leaf& leaf;
        Combine& combine;

        T run(std::int64_t a, std::int64_t b, int budget) {
            if (b - a <= leaf_size) {
                return leaf(a, b);
            }
            const std::int64_t mid = a + (b - a) / 2;
            if (budget > 1) {
                auto right = std::async(std::launch::async, [&] {
                    return run(mid, b, budget / 2);
                });
                T left = run(a, mid, budget - budget / 2);
                return combine(std::move(left), right.get());
            }
            T left = run(a, mid, 1);
            T right = run(mid, b, 1);
            return combine(std::move(left), std::move(right));
        }
    };
    Runner r{leaf_size < 1 ? 1 : leaf_size, leaf, combine};
    return r.run(lo, hi, threads < 1 ? 1 : threads);
}

}  // namespace mparity::parallel
