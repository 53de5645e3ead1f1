#pragma once

#include <functional>

#include "cadlag/path.hpp"

// Marcus transformation: replaces every jump of a cadlag path by a log-linear
// bridge over an inserted time window of length r_k, then pulls the result
// back to [0,1] through an increasing bijection psi_R. The time maps
// tau(t) = t + sum r_k 1_{t_k <= t} and mu(t) = psi^{-1}(tau(t)) tie the
// transformed path to its origin.

namespace cadlag {

struct MarcusPair {
  std::vector<double> r;  // one entry per jump, in jump-time order
  PiecewiseLinear psi;    // increasing bijection [0,1] -> [0, 1 + sum r]

  double sigma() const {
    double s = 0.0;
    for (double v : r) s += v;
    return s;
  }
};

class MarcusTransform {
 public:
  MarcusTransform(GroupPath origin, MarcusPair pair, GroupPath transformed,
                  std::vector<double> jump_times, PiecewiseLinear psi_inv)
      : origin_(std::move(origin)), pair_(std::move(pair)), transformed_(std::move(transformed)),
        jump_times_(std::move(jump_times)), psi_inv_(std::move(psi_inv)) {}

  const GroupPath& origin() const { return origin_; }
  const GroupPath& transformed() const { return transformed_; }
  const MarcusPair& pair() const { return pair_; }

  double tau(double t) const;
  double tau_left(double t) const;
  double mu(double t) const { return psi_inv_(tau(t)); }
  double mu_left(double t) const { return psi_inv_(tau_left(t)); }

 private:
  GroupPath origin_;
  MarcusPair pair_;
  GroupPath transformed_;
  std::vector<double> jump_times_;
  PiecewiseLinear psi_inv_;
};

// Default pair: r_k = 2^{-k}/2 in decreasing-jump-norm order (ties broken by
// earlier time). psi_R straightens the letter-0 component to the identity
// whenever the origin carries a strictly increasing one (tracking-jumps
// extensions); otherwise it is linear. Continuous origins transform to
// themselves (identity convention).
MarcusPair default_marcus_pair(const GroupPath& x);
// A second deterministic pair for invariance probes: different r, linear psi.
MarcusPair alternate_marcus_pair(const GroupPath& x);

MarcusTransform marcus_transform(const GroupPath& x);
MarcusTransform marcus_transform(const GroupPath& x, const MarcusPair& pair);

// max over a probe grid of |F(mu^A_t, XA~) - F(mu^B_t, XB~)| for a functional
// given as a raw evaluator; Marcus canonical functionals return ~0
double pair_invariance_check(const std::function<double(double, const GroupPath&)>& F,
                             const GroupPath& x, const MarcusPair& a, const MarcusPair& b,
                             int probe_points = 10);

} // namespace cadlag
