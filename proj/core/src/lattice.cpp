#include "autocat/lattice.hpp"

#include <limits>
#include <numeric>

#include "autocat/error.hpp"

namespace autocat {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is exact at every step; divide out the gcd
    // first so the product stays in range as long as the answer does.
    const std::uint64_t num = n - k + i;
    const std::uint64_t g = std::gcd(result, i);
    const std::uint64_t r = result / g;
    const std::uint64_t d = i / g;
    const std::uint64_t m = num / d;  // d divides num once r and d are coprime
    if (m != 0 && r > std::numeric_limits<std::uint64_t>::max() / m) {
      throw ResourceCapError("binomial coefficient overflows 64 bits");
    }
    result = r * m;
  }
  return result;
}

std::uint64_t simplex_size(int dimension, Count total) {
  if (dimension < 1 || total < 0) return 0;
  return binomial(static_cast<std::uint64_t>(total) + dimension - 1,
                  static_cast<std::uint64_t>(dimension) - 1);
}

std::uint64_t ball_size(int dimension, Count max_total) {
  if (dimension < 1 || max_total < 0) return 0;
  return binomial(static_cast<std::uint64_t>(max_total) + dimension,
                  static_cast<std::uint64_t>(dimension));
}

bool next_simplex_point(std::span<Count> a) {
  const std::size_t d = a.size();
  if (d < 2) return false;
  // Rightmost position k <= d-2 with mass to its right.
  Count tail = a[d - 1];
  for (std::size_t k = d - 1; k-- > 0;) {
    if (tail > 0) {
      a[k] += 1;
      const Count moved = tail - 1;
      for (std::size_t l = k + 1; l + 1 < d; ++l) a[l] = 0;
      a[d - 1] = moved;
      return true;
    }
    tail += a[k];
  }
  return false;
}

std::uint64_t simplex_rank(std::span<const Count> a) {
  const std::size_t d = a.size();
  Count remaining = std::accumulate(a.begin(), a.end(), Count{0});
  std::uint64_t rank = 0;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    // Points whose prefix matches a[0..k) but with a smaller k-th entry:
    // sum_{v < a_k} |E_{remaining - v}| in d-k-1 parts (hockey stick).
    const auto parts = static_cast<std::uint64_t>(d - k - 1);
    const auto rem = static_cast<std::uint64_t>(remaining);
    const auto after = static_cast<std::uint64_t>(remaining - a[k]);
    rank += binomial(rem + parts, parts) - binomial(after + parts, parts);
    remaining -= a[k];
  }
  return rank;
}

std::vector<State> simplex_points(int dimension, Count total) {
  std::vector<State> out;
  out.reserve(static_cast<std::size_t>(simplex_size(dimension, total)));
  for_each_simplex_point(dimension, total, [&](std::span<const Count> a) {
    out.emplace_back(std::vector<Count>(a.begin(), a.end()));
  });
  return out;
}

}  // namespace autocat
