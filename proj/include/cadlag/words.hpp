#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

// Words over the alphabet {0,...,d-1} and the bijection onto the flat,
// lexicographic-by-level coefficient layout used by TruncatedTensor.
// Level k occupies d^k slots starting at level_offset(d,k); within a level the
// first letter is the most significant digit.

namespace cadlag {

using Word = std::vector<int>;

inline std::int64_t level_size(int d, int k) {
  std::int64_t s = 1;
  for (int i = 0; i < k; ++i) s *= d;
  return s;
}

inline std::int64_t level_offset(int d, int k) {
  if (d == 1) return k;
  std::int64_t s = 0, p = 1;
  for (int i = 0; i < k; ++i) { s += p; p *= d; }
  return s;
}

inline std::int64_t total_size(int d, int level) { return level_offset(d, level + 1); }

inline std::int64_t word_rank(int d, const Word& w) {
  std::int64_t r = 0;
  for (int letter : w) {
    if (letter < 0 || letter >= d) throw std::invalid_argument("word letter out of alphabet");
    r = r * d + letter;
  }
  return r;
}

inline std::int64_t flat_index(int d, const Word& w) {
  return level_offset(d, static_cast<int>(w.size())) + word_rank(d, w);
}

inline Word word_from_rank(int d, int k, std::int64_t rank) {
  Word w(static_cast<std::size_t>(k));
  for (int i = k - 1; i >= 0; --i) {
    w[static_cast<std::size_t>(i)] = static_cast<int>(rank % d);
    rank /= d;
  }
  return w;
}

inline Word concat(const Word& a, const Word& b) {
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

} // namespace cadlag
