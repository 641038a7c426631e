#pragma once

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace moddec::gf2 {

using Row = boost::dynamic_bitset<std::uint64_t>;

/// Basis of {x : A x = 0} where A has `rows` as its rows, each of length `cols`.
/// The returned basis vectors come from reduced row-echelon form, one per free column.
inline std::vector<Row> kernel(std::vector<Row> rows, std::size_t cols) {
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && !rows[pivot].test(col)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && rows[r].test(col)) rows[r] ^= rows[rank];
    pivot_cols.push_back(col);
    ++rank;
  }
  std::vector<char> is_pivot(cols, 0);
  for (auto c : pivot_cols) is_pivot[c] = 1;
  std::vector<Row> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Row v(cols);
    v.set(free);
    for (std::size_t r = 0; r < rank; ++r)
      if (rows[r].test(free)) v.set(pivot_cols[r]);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Greedy pairwise reduction towards low-weight basis vectors. The span is
/// unchanged; `weight` scores a vector (lower is sparser).
template <class Weight>
void sparsify(std::vector<Row>& basis, Weight&& weight) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        if (i == j) continue;
        Row candidate = basis[i] ^ basis[j];
        if (weight(candidate) < weight(basis[i])) {
          basis[i] = std::move(candidate);
          changed = true;
        }
      }
    }
  }
  std::sort(basis.begin(), basis.end(), [&](const Row& a, const Row& b) {
    auto wa = weight(a);
    auto wb = weight(b);
    if (wa != wb) return wa < wb;
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a.test(k) != b.test(k)) return a.test(k);
    return false;
  });
}

}  // namespace moddec::gf2
