#pragma once

#include <map>
#include <span>
#include <vector>

#include "cadlag/words.hpp"

// Arithmetic in the truncated tensor algebra T^N(R^d) and the group
// G^N(R^d) = exp of the free step-N nilpotent Lie algebra. Coefficients are
// stored densely, all levels concatenated in the word order of words.hpp.
// Everything here is a pure function over immutable values.

namespace cadlag {

struct TruncatedTensor {
  int d = 1;
  int level = 0;
  std::vector<double> coeffs;

  TruncatedTensor() : coeffs(1, 0.0) {}
  TruncatedTensor(int d_, int level_)
      : d(d_), level(level_), coeffs(static_cast<std::size_t>(total_size(d_, level_)), 0.0) {
    if (d_ < 1 || level_ < 0) throw std::invalid_argument("bad tensor shape");
  }

  static TruncatedTensor unit(int d, int level) {
    TruncatedTensor t(d, level);
    t.coeffs[0] = 1.0;
    return t;
  }
  static TruncatedTensor basis(int d, int level, const Word& w) {
    if (static_cast<int>(w.size()) > level) throw std::invalid_argument("basis word too long");
    TruncatedTensor t(d, level);
    t.coeffs[static_cast<std::size_t>(flat_index(d, w))] = 1.0;
    return t;
  }

  double at(const Word& w) const {
    if (static_cast<int>(w.size()) > level) return 0.0;
    return coeffs[static_cast<std::size_t>(flat_index(d, w))];
  }
  double& at(const Word& w) {
    return coeffs[static_cast<std::size_t>(flat_index(d, w))];
  }
  double scalar() const { return coeffs[0]; }

  std::span<const double> block(int k) const {
    return {coeffs.data() + level_offset(d, k), static_cast<std::size_t>(level_size(d, k))};
  }
  std::span<double> block(int k) {
    return {coeffs.data() + level_offset(d, k), static_cast<std::size_t>(level_size(d, k))};
  }
};

// Element of G^N(R^d): scalar part 1; at level >= 2 the log has a Lie-algebra
// structure that is checked (antisymmetry of the level-2 log block) for N <= 2
// and guaranteed by construction above that.
class GroupElement {
 public:
  GroupElement() : value_(TruncatedTensor::unit(1, 0)) {}
  explicit GroupElement(TruncatedTensor v);

  const TruncatedTensor& tensor() const { return value_; }
  int d() const { return value_.d; }
  int level() const { return value_.level; }

  static GroupElement identity(int d, int level) { return GroupElement(TruncatedTensor::unit(d, level)); }

 private:
  TruncatedTensor value_;
};

// elementwise
TruncatedTensor add(const TruncatedTensor& a, const TruncatedTensor& b);
TruncatedTensor sub(const TruncatedTensor& a, const TruncatedTensor& b);
TruncatedTensor scaled(const TruncatedTensor& a, double c);
double max_abs(const TruncatedTensor& a);

// truncated tensor product; words beyond the common level are dropped
TruncatedTensor tensor_mul(const TruncatedTensor& a, const TruncatedTensor& b);

GroupElement group_mul(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& g);

GroupElement exp_trunc(const TruncatedTensor& b);     // requires pi_0 = 0
TruncatedTensor log_trunc(const GroupElement& g);

// shuffle product of two words: multiset of interleavings with multiplicities
std::map<Word, long long> shuffle(const Word& I, const Word& J);
// same, assembled as a tensor so it can be paired against group elements
TruncatedTensor shuffle_tensor(int d, int level, const Word& I, const Word& J);

// u^{(k)}: component at suffix word I (|I| = k) has coefficients u_{JI}
TruncatedTensor shift_component(const TruncatedTensor& u, const Word& I);
std::vector<TruncatedTensor> shift(const TruncatedTensor& u, int k);

// <u, g> = sum_I u_I g_I, truncated at the smaller level
double pair(const TruncatedTensor& u, const GroupElement& g);
double pair(const TruncatedTensor& u, const TruncatedTensor& x);

// max_n (n! * ||pi_n(log g)||_2)^(1/n); zero iff g is the identity
double homogeneous_norm(const GroupElement& g);
double group_distance(const GroupElement& a, const GroupElement& b);

// membership defect: deviation of log(g) from the free nilpotent Lie algebra.
// Decidable at level <= 2 (symmetric part of the level-2 block); higher
// levels are membership-by-construction and report only the scalar defect.
double group_defect(const GroupElement& g);

// scales level-n block of a logarithm by lambda^n
TruncatedTensor dilate(const TruncatedTensor& lie, double lambda);

// drops every word containing `letter` and relabels the remaining alphabet
TruncatedTensor project_out_letter(const TruncatedTensor& u, int letter);
// inverse direction: relabel letters i -> i+1 and leave letter 0 unused
TruncatedTensor embed_shift_letters(const TruncatedTensor& u);
// copy coefficients into a tensor of higher truncation level
TruncatedTensor pad_level(const TruncatedTensor& u, int level);
TruncatedTensor project_level(const TruncatedTensor& u, int level);

} // namespace cadlag
