#pragma once

#include "cadlag/path.hpp"

// Truncated signatures of piecewise log-linear cadlag paths. The minimal jump
// extension makes the level-N signature the ordered product of exp^(N) of the
// zero-padded piece logs, so signatures here are exact (no discretized
// integration; the Riemann-sum version lives in test oracles only).

namespace cadlag {

class SignaturePath {
 public:
  SignaturePath(const GroupPath& source, int N);

  int d() const { return d_; }
  int level() const { return N_; }
  const GroupPath& source() const { return source_; }

  GroupElement eval(double t) const;       // right-continuous
  GroupElement eval_left(double t) const;
  GroupElement increment(double s, double t) const;  // S_s^{-1} x S_t

 private:
  GroupPath source_;
  int d_;
  int N_;
  std::vector<double> times_;
  std::vector<GroupElement> left_;
  std::vector<GroupElement> right_;
  std::vector<TruncatedTensor> seg_log_;  // padded logs per interval
  std::vector<bool> seg_active_;
};

SignaturePath signature(const GroupPath& x, int N);

} // namespace cadlag
