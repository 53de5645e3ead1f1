#include "cadlag/signature.hpp"

#include <algorithm>

namespace cadlag {

SignaturePath::SignaturePath(const GroupPath& source, int N)
    : source_(source), d_(source.d()), N_(N), times_(source.breakpoints()) {
  if (N <= source.level())
    throw std::invalid_argument("signature level must exceed the path level");

  const std::size_t m = times_.size() - 1;
  seg_log_.assign(m, TruncatedTensor(d_, N_));
  seg_active_.assign(m, false);

  // pad the piece logs; jumps enter as exp of the padded log (minimal jump
  // extension), segments likewise, so one left-to-right product suffices
  std::vector<std::optional<TruncatedTensor>> jump_log(times_.size());
  for (auto& pc : source.pieces()) {
    if (pc.kind == PathPiece::Kind::segment) {
      auto it = std::lower_bound(times_.begin(), times_.end(), pc.t0 - 1e-14);
      std::size_t i = static_cast<std::size_t>(it - times_.begin());
      seg_log_[i] = pad_level(pc.log_inc, N_);
      seg_active_[i] = true;
    } else {
      auto it = std::lower_bound(times_.begin(), times_.end(), pc.t0 - 1e-14);
      std::size_t i = static_cast<std::size_t>(it - times_.begin());
      jump_log[i] = pad_level(pc.log_inc, N_);
    }
  }

  left_.reserve(m + 1);
  right_.reserve(m + 1);
  GroupElement v = GroupElement::identity(d_, N_);
  left_.push_back(v);
  right_.push_back(v);
  for (std::size_t i = 1; i <= m; ++i) {
    GroupElement lv = seg_active_[i - 1]
                          ? group_mul(right_[i - 1], exp_trunc(seg_log_[i - 1]))
                          : right_[i - 1];
    left_.push_back(lv);
    right_.push_back(jump_log[i] ? group_mul(lv, exp_trunc(*jump_log[i])) : lv);
  }
}

GroupElement SignaturePath::eval(double t) const {
  if (t < 0.0 && t > -1e-9) t = 0.0;
  if (t > 1.0 && t < 1.0 + 1e-9) t = 1.0;
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("time outside [0,1]");
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
  if (t == times_[i] || i + 1 >= times_.size()) return right_[i];
  if (!seg_active_[i]) return right_[i];
  double theta = (t - times_[i]) / (times_[i + 1] - times_[i]);
  return group_mul(right_[i], exp_trunc(scaled(seg_log_[i], theta)));
}

GroupElement SignaturePath::eval_left(double t) const {
  if (t > 1.0 && t < 1.0 + 1e-9) t = 1.0;
  if (t == 0.0) return right_.front();
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
  if (t == times_[i]) return left_[i];
  return eval(t);
}

GroupElement SignaturePath::increment(double s, double t) const {
  if (s > t) throw std::invalid_argument("increment needs s <= t");
  return group_mul(inverse(eval(s)), eval(t));
}

SignaturePath signature(const GroupPath& x, int N) { return SignaturePath(x, N); }

} // namespace cadlag
