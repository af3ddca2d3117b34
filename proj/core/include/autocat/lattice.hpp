#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "autocat/network.hpp"

namespace autocat {

/// Binomial coefficient C(n, k). Throws ResourceCapError on uint64 overflow.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// |E_n| = C(n + d - 1, d - 1): count vectors in N^d with total n.
std::uint64_t simplex_size(int dimension, Count total);

/// Number of count vectors in N^d with total <= max_total: C(N + d, d).
std::uint64_t ball_size(int dimension, Count max_total);

/// Steps `a` to the next point of its simplex in ascending lexicographic
/// order. Returns false (leaving `a` untouched) after the last point.
bool next_simplex_point(std::span<Count> a);

/// Position of `a` within its simplex in the order of next_simplex_point.
std::uint64_t simplex_rank(std::span<const Count> a);

/// Calls fn(std::span<const Count>) on every point of E_n, in rank order.
template <class Fn>
void for_each_simplex_point(int dimension, Count total, Fn&& fn) {
  std::vector<Count> a(static_cast<std::size_t>(dimension), 0);
  a.back() = total;
  do {
    fn(std::span<const Count>(a));
  } while (next_simplex_point(a));
}

std::vector<State> simplex_points(int dimension, Count total);

}  // namespace autocat
