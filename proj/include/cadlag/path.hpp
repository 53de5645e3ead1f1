#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cadlag/tensor.hpp"

// Cadlag paths into G^[p](R^d), [p] in {1,2}, stored as a finite sequence of
// log-linear pieces: segments carry the log of their group increment, jumps
// carry the log of the jump. The path starts at the identity. Between stored
// pieces the path is constant. Values are immutable after construction.

namespace cadlag {

struct PathPiece {
  enum class Kind { segment, jump };
  Kind kind = Kind::segment;
  double t0 = 0.0;
  double t1 = 0.0;                 // == t0 for jumps
  TruncatedTensor log_inc;         // scalar part zero; Lie element of g^level

  static PathPiece segment(double a, double b, TruncatedTensor log) {
    return {Kind::segment, a, b, std::move(log)};
  }
  static PathPiece jump(double t, TruncatedTensor log) {
    return {Kind::jump, t, t, std::move(log)};
  }
};

// strictly increasing piecewise-linear map, used for reparametrizations and
// the Marcus time maps
struct PiecewiseLinear {
  std::vector<double> xs;
  std::vector<double> ys;

  double operator()(double x) const;
  PiecewiseLinear inverse() const;
  static PiecewiseLinear identity() { return {{0.0, 1.0}, {0.0, 1.0}}; }
  static PiecewiseLinear linear(double x0, double x1, double y0, double y1) {
    return {{x0, x1}, {y0, y1}};
  }
};

class GroupPath {
 public:
  GroupPath(int d, int level, std::vector<PathPiece> pieces, bool time_extended = false);

  int d() const { return d_; }
  int level() const { return level_; }
  bool time_extended() const { return time_extended_; }

  const std::vector<double>& breakpoints() const { return times_; }
  const std::vector<PathPiece>& pieces() const { return pieces_; }

  GroupElement eval(double t) const;
  GroupElement eval_left(double t) const;
  GroupElement increment(double s, double t) const;
  GroupElement jump(double t) const;  // X_{t-}^{-1} X_t; identity when no jump

  std::vector<double> jump_times() const;
  bool is_continuous() const { return jump_times().empty(); }
  GroupElement terminal() const { return right_value_.back(); }

  // largest |level-2 block| of a jump log; 0 for level-1 paths (Marcus-like test)
  double marcus_like_defect() const;

  // pi_1 coordinates at a time, the common shortcut
  std::vector<double> point(double t) const;
  std::vector<double> point_left(double t) const;
  // jump blocks by value (pi_1 and, for level-2 paths, pi_2)
  std::vector<double> jump_delta(double t) const;
  std::vector<double> jump_delta2(double t) const;

 private:
  friend GroupPath stop(const GroupPath&, double);
  friend GroupPath stop_left(const GroupPath&, double);

  int d_;
  int level_;
  bool time_extended_;
  std::vector<PathPiece> pieces_;
  // normalized view
  std::vector<double> times_;            // distinct, includes 0 and 1
  std::vector<GroupElement> left_value_;  // left limit at times_[i]
  std::vector<GroupElement> right_value_; // value at times_[i]
  std::vector<TruncatedTensor> seg_log_;  // log increment over [times_[i], times_[i+1]]
  std::vector<bool> seg_active_;          // false when the interval is constant
  std::size_t locate(double t) const;
};

// builders
GroupPath constant_path(int d, int level);
// level-1 piecewise-linear path through points (t_i, x_i), lifted by zero-padding
// the segment logs when level > 1
GroupPath path_from_points(int level, const std::vector<double>& ts,
                           const std::vector<std::vector<double>>& xs);
// pads every piece log of a level-1 path with zero higher blocks (canonical lift)
GroupPath lift_to_level(const GroupPath& x, int level);

// operations
GroupPath stop(const GroupPath& x, double t);
GroupPath stop_left(const GroupPath& x, double t);  // freezes at the left limit
GroupPath reparametrize(const GroupPath& x, const PiecewiseLinear& phi);
GroupPath time_stretch(const GroupPath& x, double t);
GroupPath concat(const GroupPath& x, const GroupPath& y, double t);

struct PVarResult {
  double value = 0.0;
  bool exact = true;  // level-1 DP optimum; false for the level-2 grid bound
};
PVarResult p_variation(const GroupPath& x, double p, int refine_factor = 4);

GroupPath tracking_jumps_extend(const GroupPath& x);
// removes letter 0, undoing tracking_jumps_extend
GroupPath delete_letter0(const GroupPath& x);

struct PartitionSpec {
  enum class Mode { uniform, dyadic, explicit_list };
  Mode mode = Mode::uniform;
  int count = 16;  // interval count (uniform) or depth (dyadic)
  std::vector<double> times;

  static PartitionSpec uniform(int n) { return {Mode::uniform, n, {}}; }
  static PartitionSpec dyadic(int depth) { return {Mode::dyadic, depth, {}}; }
  static PartitionSpec explicit_times(std::vector<double> ts) {
    return {Mode::explicit_list, 0, std::move(ts)};
  }
  // partition of [0, t] containing 0 and t
  std::vector<double> make(double t) const;
};

} // namespace cadlag
