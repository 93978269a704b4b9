#include "qpw/combinatorics.hpp"

#include <algorithm>
#include <limits>

namespace qpw {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    const auto num = static_cast<std::uint64_t>(n - k + i);
    if (result > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = result * num / static_cast<std::uint64_t>(i);
  }
  return result;
}

Index combination_rank(std::span<const int> sorted) {
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    rank += binomial(sorted[i], static_cast<int>(i) + 1);
  }
  return static_cast<Index>(rank);
}

std::vector<Tuple> combinations(int n, int k) {
  const auto total = binomial(n, k);
  std::vector<Tuple> out(static_cast<std::size_t>(total));
  if (k == 0) {
    out.assign(1, Tuple{});
    return out;
  }
  Tuple current(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) current[static_cast<std::size_t>(i)] = i;
  while (true) {
    out[static_cast<std::size_t>(combination_rank(current))] = current;
    int i = k - 1;
    while (i >= 0 && current[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++current[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

int sort_with_sign(Tuple& tuple) {
  int sign = 1;
  // Insertion sort; tuples are short.
  for (std::size_t i = 1; i < tuple.size(); ++i) {
    for (std::size_t j = i; j > 0 && tuple[j - 1] > tuple[j]; --j) {
      std::swap(tuple[j - 1], tuple[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < tuple.size(); ++i) {
    if (tuple[i] == tuple[i - 1]) return 0;
  }
  return sign;
}

Tuple occupied_indices(Determinant det) {
  Tuple out;
  while (det != 0) {
    out.push_back(std::countr_zero(det));
    det &= det - 1;
  }
  return out;
}

}  // namespace qpw
