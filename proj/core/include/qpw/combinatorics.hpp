#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "qpw/types.hpp"

namespace qpw {

/// Occupation bitstring over spin-orbitals (bit p set = spin-orbital p occupied).
using Determinant = std::uint64_t;

/// Strictly increasing list of spin-orbital (or coordinate) indices.
using Tuple = std::vector<int>;

inline constexpr int kMaxSpinOrbitals = 64;

/// Binomial coefficient; saturates at UINT64_MAX on overflow.
std::uint64_t binomial(int n, int k);

/// Colexicographic rank of a strictly increasing tuple among all k-subsets.
Index combination_rank(std::span<const int> sorted);

/// All k-subsets of {0, ..., n-1}, in colexicographic order.
std::vector<Tuple> combinations(int n, int k);

/// Sorts `tuple` in place and returns the permutation parity (+1 / -1), or 0
/// when an index repeats (the antisymmetric amplitude vanishes).
int sort_with_sign(Tuple& tuple);

/// Applies a_p to |det>. Returns the fermionic sign and clears bit p; returns
/// 0 (det untouched) when p is empty.
inline int annihilate(Determinant& det, int p) {
  const Determinant bit = Determinant{1} << p;
  if ((det & bit) == 0) return 0;
  const int below = std::popcount(det & (bit - 1));
  det &= ~bit;
  return (below % 2 == 0) ? 1 : -1;
}

/// Applies a_p^dagger to |det>; returns 0 when p is already occupied.
inline int create(Determinant& det, int p) {
  const Determinant bit = Determinant{1} << p;
  if ((det & bit) != 0) return 0;
  const int below = std::popcount(det & (bit - 1));
  det |= bit;
  return (below % 2 == 0) ? 1 : -1;
}

Tuple occupied_indices(Determinant det);

}  // namespace qpw
