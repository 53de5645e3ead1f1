#include "cadlag/path.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cadlag {
namespace {

constexpr double kTimeMergeEps = 1e-14;

bool is_zero(const TruncatedTensor& t) { return max_abs(t) == 0.0; }

double clamp_unit(double t) {
  if (t > 1.0 && t < 1.0 + 1e-9) return 1.0;
  if (t < 0.0 && t > -1e-9) return 0.0;
  return t;
}

std::vector<double> merge_times(std::vector<double> ts) {
  std::sort(ts.begin(), ts.end());
  std::vector<double> out;
  for (double t : ts) {
    if (out.empty() || t - out.back() > kTimeMergeEps) out.push_back(t);
  }
  return out;
}

} // namespace

double PiecewiseLinear::operator()(double x) const {
  if (xs.size() < 2 || xs.size() != ys.size())
    throw std::invalid_argument("piecewise-linear map needs matching knots");
  if (x <= xs.front()) return ys.front() + (x - xs.front()) * (ys[1] - ys[0]) / (xs[1] - xs[0]);
  if (x >= xs.back()) {
    std::size_t n = xs.size();
    return ys.back() + (x - xs.back()) * (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
  }
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
  double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
  return ys[i] + w * (ys[i + 1] - ys[i]);
}

PiecewiseLinear PiecewiseLinear::inverse() const {
  for (std::size_t i = 0; i + 1 < ys.size(); ++i)
    if (ys[i + 1] <= ys[i]) throw std::invalid_argument("map is not strictly increasing");
  return {ys, xs};
}

GroupPath::GroupPath(int d, int level, std::vector<PathPiece> pieces, bool time_extended)
    : d_(d), level_(level), time_extended_(time_extended), pieces_(std::move(pieces)) {
  if (level_ < 1 || level_ > 2) throw std::invalid_argument("path level must be 1 or 2");
  std::stable_sort(pieces_.begin(), pieces_.end(), [](const PathPiece& a, const PathPiece& b) {
    if (a.t0 != b.t0) return a.t0 < b.t0;
    // a jump at t precedes a segment starting at t
    return a.kind == PathPiece::Kind::jump && b.kind == PathPiece::Kind::segment;
  });

  double prev_end = 0.0;
  std::map<double, TruncatedTensor> jump_at;
  for (auto& pc : pieces_) {
    if (pc.log_inc.d != d_ || pc.log_inc.level != level_)
      throw std::invalid_argument("piece log has wrong shape");
    if (std::abs(pc.log_inc.scalar()) > 1e-12)
      throw std::invalid_argument("piece log must have zero scalar part");
    if (pc.t0 < 0.0 || pc.t1 > 1.0) throw std::invalid_argument("piece outside [0,1]");
    if (pc.kind == PathPiece::Kind::segment) {
      if (!(pc.t0 < pc.t1)) throw std::invalid_argument("segment needs t0 < t1");
      if (pc.t0 < prev_end - kTimeMergeEps) throw std::invalid_argument("overlapping pieces");
      prev_end = pc.t1;
    } else {
      if (pc.t0 == 0.0) throw std::invalid_argument("jump at time 0 is not cadlag");
      if (pc.t0 < prev_end - kTimeMergeEps) throw std::invalid_argument("jump inside a segment");
      if (jump_at.count(pc.t0)) throw std::invalid_argument("duplicate jump time");
      jump_at.emplace(pc.t0, pc.log_inc);
      prev_end = std::max(prev_end, pc.t0);
    }
  }

  std::vector<double> ts{0.0, 1.0};
  for (auto& pc : pieces_) {
    ts.push_back(pc.t0);
    ts.push_back(pc.t1);
  }
  times_ = merge_times(std::move(ts));
  // piece boundaries within the merge tolerance of the endpoints must not
  // displace them: the path is defined on exactly [0,1]
  times_.front() = 0.0;
  times_.back() = 1.0;

  const std::size_t m = times_.size() - 1;
  seg_log_.assign(m, TruncatedTensor(d_, level_));
  seg_active_.assign(m, false);
  for (auto& pc : pieces_) {
    if (pc.kind != PathPiece::Kind::segment) continue;
    auto it = std::lower_bound(times_.begin(), times_.end(), pc.t0 - kTimeMergeEps);
    std::size_t i = static_cast<std::size_t>(it - times_.begin());
    seg_log_[i] = pc.log_inc;
    seg_active_[i] = true;
  }

  left_value_.reserve(m + 1);
  right_value_.reserve(m + 1);
  GroupElement v = GroupElement::identity(d_, level_);
  left_value_.push_back(v);
  right_value_.push_back(v);
  for (std::size_t i = 1; i <= m; ++i) {
    GroupElement lv = seg_active_[i - 1]
                          ? group_mul(right_value_[i - 1], exp_trunc(seg_log_[i - 1]))
                          : right_value_[i - 1];
    left_value_.push_back(lv);
    auto jt = jump_at.find(times_[i]);
    right_value_.push_back(jt == jump_at.end() ? lv : group_mul(lv, exp_trunc(jt->second)));
  }
}

std::size_t GroupPath::locate(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return static_cast<std::size_t>(it - times_.begin()) - 1;
}

GroupElement GroupPath::eval(double t) const {
  t = clamp_unit(t);
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("time outside [0,1]");
  std::size_t i = locate(t);
  if (t == times_[i] || i + 1 >= times_.size()) return right_value_[i];
  if (!seg_active_[i]) return right_value_[i];
  double theta = (t - times_[i]) / (times_[i + 1] - times_[i]);
  return group_mul(right_value_[i], exp_trunc(scaled(seg_log_[i], theta)));
}

GroupElement GroupPath::eval_left(double t) const {
  t = clamp_unit(t);
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("time outside [0,1]");
  if (t == 0.0) return right_value_.front();
  std::size_t i = locate(t);
  if (t == times_[i]) return left_value_[i];
  return eval(t);
}

GroupElement GroupPath::increment(double s, double t) const {
  if (s > t) throw std::invalid_argument("increment needs s <= t");
  return group_mul(inverse(eval(s)), eval(t));
}

GroupElement GroupPath::jump(double t) const {
  std::size_t i = locate(clamp_unit(t));
  if (times_[i] != t) return GroupElement::identity(d_, level_);
  return group_mul(inverse(left_value_[i]), right_value_[i]);
}

std::vector<double> GroupPath::jump_times() const {
  std::vector<double> out;
  for (auto& pc : pieces_)
    if (pc.kind == PathPiece::Kind::jump && !is_zero(pc.log_inc)) out.push_back(pc.t0);
  return out;
}

double GroupPath::marcus_like_defect() const {
  if (level_ < 2) return 0.0;
  double worst = 0.0;
  for (auto& pc : pieces_) {
    if (pc.kind != PathPiece::Kind::jump) continue;
    auto blk = pc.log_inc.block(2);
    for (double v : blk) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

std::vector<double> GroupPath::point(double t) const {
  auto g = eval(t);
  auto blk = g.tensor().block(1);
  return {blk.begin(), blk.end()};
}

std::vector<double> GroupPath::point_left(double t) const {
  auto g = eval_left(t);
  auto blk = g.tensor().block(1);
  return {blk.begin(), blk.end()};
}

std::vector<double> GroupPath::jump_delta(double t) const {
  auto g = jump(t);
  auto blk = g.tensor().block(1);
  return {blk.begin(), blk.end()};
}

std::vector<double> GroupPath::jump_delta2(double t) const {
  if (level_ < 2) throw std::invalid_argument("level-2 jump block needs a level-2 path");
  auto g = jump(t);
  auto blk = g.tensor().block(2);
  return {blk.begin(), blk.end()};
}

GroupPath constant_path(int d, int level) { return GroupPath(d, level, {}); }

GroupPath path_from_points(int level, const std::vector<double>& ts,
                           const std::vector<std::vector<double>>& xs) {
  if (ts.size() != xs.size() || ts.size() < 2)
    throw std::invalid_argument("need matching time/point lists");
  const int d = static_cast<int>(xs.front().size());
  std::vector<PathPiece> pieces;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    TruncatedTensor log(d, level);
    auto blk = log.block(1);
    for (int j = 0; j < d; ++j) blk[static_cast<std::size_t>(j)] = xs[i + 1][static_cast<std::size_t>(j)] - xs[i][static_cast<std::size_t>(j)];
    pieces.push_back(PathPiece::segment(ts[i], ts[i + 1], std::move(log)));
  }
  return GroupPath(d, level, std::move(pieces));
}

GroupPath lift_to_level(const GroupPath& x, int level) {
  if (level < x.level()) throw std::invalid_argument("lift cannot lower the level");
  std::vector<PathPiece> pieces;
  for (auto& pc : x.pieces()) {
    PathPiece np = pc;
    np.log_inc = pad_level(pc.log_inc, level);
    pieces.push_back(std::move(np));
  }
  return GroupPath(x.d(), level, std::move(pieces), x.time_extended());
}

GroupPath stop(const GroupPath& x, double t) {
  t = clamp_unit(t);
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("time outside [0,1]");
  std::vector<PathPiece> pieces;
  for (auto& pc : x.pieces()) {
    if (pc.kind == PathPiece::Kind::jump) {
      if (pc.t0 <= t && pc.t0 > 0.0) pieces.push_back(pc);
      continue;
    }
    if (pc.t1 <= t) {
      pieces.push_back(pc);
    } else if (pc.t0 < t) {
      double frac = (t - pc.t0) / (pc.t1 - pc.t0);
      pieces.push_back(PathPiece::segment(pc.t0, t, scaled(pc.log_inc, frac)));
    }
  }
  return GroupPath(x.d(), x.level(), std::move(pieces), x.time_extended());
}

GroupPath stop_left(const GroupPath& x, double t) {
  t = clamp_unit(t);
  std::vector<PathPiece> pieces;
  for (auto& pc : x.pieces()) {
    if (pc.kind == PathPiece::Kind::jump) {
      if (pc.t0 < t) pieces.push_back(pc);
      continue;
    }
    if (pc.t1 <= t) {
      pieces.push_back(pc);
    } else if (pc.t0 < t) {
      double frac = (t - pc.t0) / (pc.t1 - pc.t0);
      pieces.push_back(PathPiece::segment(pc.t0, t, scaled(pc.log_inc, frac)));
    }
  }
  return GroupPath(x.d(), x.level(), std::move(pieces), x.time_extended());
}

GroupPath reparametrize(const GroupPath& x, const PiecewiseLinear& phi) {
  if (std::abs(phi(0.0)) > 1e-12 || std::abs(phi(1.0) - 1.0) > 1e-12)
    throw std::invalid_argument("reparametrization must fix 0 and 1");
  PiecewiseLinear inv = phi.inverse();

  // work piece by piece so jump logs transfer verbatim; segments split at the
  // preimages of the phi knots to stay log-linear
  std::vector<PathPiece> pieces;
  for (auto& pc : x.pieces()) {
    if (pc.kind == PathPiece::Kind::jump) {
      pieces.push_back(PathPiece::jump(inv(pc.t0), pc.log_inc));
      continue;
    }
    double ua = inv(pc.t0), ub = inv(pc.t1);
    std::vector<double> cuts{ua};
    for (double kx : phi.xs)
      if (kx > ua + 1e-14 && kx < ub - 1e-14) cuts.push_back(kx);
    cuts.push_back(ub);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double frac = (phi(cuts[i + 1]) - phi(cuts[i])) / (pc.t1 - pc.t0);
      pieces.push_back(PathPiece::segment(cuts[i], cuts[i + 1], scaled(pc.log_inc, frac)));
    }
  }
  return GroupPath(x.d(), x.level(), std::move(pieces), x.time_extended());
}

GroupPath time_stretch(const GroupPath& x, double t) {
  if (!x.is_continuous()) throw std::invalid_argument("time_stretch is defined for continuous paths");
  t = clamp_unit(t);
  if (t <= 0.0 || t > 1.0) throw std::invalid_argument("stretch time must lie in (0,1]");

  // maximal non-constant intervals of [0,t]
  struct Moving { double a, b; };
  std::vector<Moving> moving;
  const auto& ts = x.breakpoints();
  GroupPath xt = stop(x, t);
  const auto& sts = xt.breakpoints();
  (void)ts;
  for (std::size_t i = 0; i + 1 < sts.size(); ++i) {
    double a = sts[i], b = sts[i + 1];
    if (a >= t) break;
    b = std::min(b, t);
    if (b <= a) continue;
    bool constant = group_distance(xt.eval(a), xt.eval(b)) == 0.0;
    if (constant) continue;
    if (!moving.empty() && moving.back().b == a)
      moving.back().b = b;
    else
      moving.push_back({a, b});
  }

  if (moving.empty()) return constant_path(x.d(), x.level());

  // window k stretches the k-th moving interval over the constant run that
  // follows it; a leading constant run is absorbed into the first window
  std::vector<PathPiece> pieces;
  for (std::size_t k = 0; k < moving.size(); ++k) {
    double wb = (k == 0) ? 0.0 : moving[k].a;
    double we = (k + 1 < moving.size()) ? moving[k + 1].a : t;
    double m0 = moving[k].a, m1 = moving[k].b;
    double rate = (m1 - m0) / (we - wb);
    for (auto& pc : x.pieces()) {
      if (pc.kind != PathPiece::Kind::segment) continue;
      double a = std::max(pc.t0, m0), b = std::min(pc.t1, m1);
      if (b <= a) continue;
      double frac = (b - a) / (pc.t1 - pc.t0);
      double ua = wb + (a - m0) / rate;
      double ub = wb + (b - m0) / rate;
      pieces.push_back(PathPiece::segment(ua, ub, scaled(pc.log_inc, frac)));
    }
  }
  return GroupPath(x.d(), x.level(), std::move(pieces), x.time_extended());
}

GroupPath concat(const GroupPath& x, const GroupPath& y, double t) {
  if (x.d() != y.d() || x.level() != y.level())
    throw std::invalid_argument("concatenation needs matching d and level");
  t = clamp_unit(t);
  GroupPath head = stop(x, t);
  std::vector<PathPiece> pieces = head.pieces();
  for (auto& pc : y.pieces()) {
    if (pc.kind == PathPiece::Kind::jump) {
      if (pc.t0 > t) pieces.push_back(pc);
      continue;
    }
    if (pc.t0 >= t) {
      pieces.push_back(pc);
    } else if (pc.t1 > t) {
      double frac = (pc.t1 - t) / (pc.t1 - pc.t0);
      pieces.push_back(PathPiece::segment(t, pc.t1, scaled(pc.log_inc, frac)));
    }
  }
  return GroupPath(x.d(), x.level(), std::move(pieces), x.time_extended());
}

PVarResult p_variation(const GroupPath& x, double p, int refine_factor) {
  if (p < 1.0) throw std::invalid_argument("p-variation needs p >= 1");
  std::vector<std::vector<double>> pts;      // level 1 coordinates
  std::vector<GroupElement> vals;            // level >= 2 values
  const bool exact = x.level() == 1;

  const auto& ts = x.breakpoints();
  if (exact) {
    pts.push_back(x.point(0.0));
    for (std::size_t i = 1; i < ts.size(); ++i) {
      pts.push_back(x.point_left(ts[i]));
      auto right = x.point(ts[i]);
      if (right != pts.back()) pts.push_back(right);
    }
  } else {
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      for (int r = 0; r < refine_factor; ++r) {
        double u = ts[i] + (ts[i + 1] - ts[i]) * r / refine_factor;
        if (i > 0 || r > 0) vals.push_back(x.eval_left(u));
        vals.push_back(x.eval(u));
      }
    }
    vals.push_back(x.eval_left(1.0));
    vals.push_back(x.eval(1.0));
  }

  const std::size_t n = exact ? pts.size() : vals.size();
  std::vector<double> dp(n, -1.0);
  dp[0] = 0.0;
  auto dist = [&](std::size_t i, std::size_t j) {
    if (exact) {
      double s = 0.0;
      for (std::size_t c = 0; c < pts[i].size(); ++c) {
        double dd = pts[j][c] - pts[i][c];
        s += dd * dd;
      }
      return std::sqrt(s);
    }
    return group_distance(vals[i], vals[j]);
  };
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (dp[i] < 0.0) continue;
      double cand = dp[i] + std::pow(dist(i, j), p);
      dp[j] = std::max(dp[j], cand);
    }
  }
  return {std::pow(dp[n - 1], 1.0 / p), exact};
}

GroupPath tracking_jumps_extend(const GroupPath& x) {
  struct JumpInfo { double t; double norm; std::size_t order; };
  std::vector<JumpInfo> jumps;
  for (double jt : x.jump_times())
    jumps.push_back({jt, homogeneous_norm(x.jump(jt)), 0});
  std::vector<std::size_t> idx(jumps.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (jumps[a].norm != jumps[b].norm) return jumps[a].norm > jumps[b].norm;
    return jumps[a].t < jumps[b].t;
  });
  std::map<double, double> z_jump;  // time -> Z jump size
  double raw_total = 0.0;
  std::vector<double> raw(jumps.size());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    raw[idx[r]] = std::pow(2.0, -static_cast<double>(r + 1));
    raw_total += raw[idx[r]];
  }
  const double jump_mass = jumps.empty() ? 0.0 : 0.5;
  for (std::size_t i = 0; i < jumps.size(); ++i)
    z_jump[jumps[i].t] = jump_mass * raw[i] / raw_total;
  const double slope = 1.0 - jump_mass;

  const int dext = x.d() + 1;
  std::vector<PathPiece> pieces;
  const auto& ts = x.breakpoints();
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    GroupElement inc = group_mul(inverse(x.eval(ts[i])), x.eval_left(ts[i + 1]));
    TruncatedTensor lg = embed_shift_letters(log_trunc(inc));
    lg = pad_level(lg, x.level());
    lg.at(Word{0}) += slope * (ts[i + 1] - ts[i]);
    pieces.push_back(PathPiece::segment(ts[i], ts[i + 1], std::move(lg)));
  }
  for (auto& [jt, zj] : z_jump) {
    TruncatedTensor lg = pad_level(embed_shift_letters(log_trunc(x.jump(jt))), x.level());
    lg.at(Word{0}) += zj;
    pieces.push_back(PathPiece::jump(jt, std::move(lg)));
  }
  return GroupPath(dext, x.level(), std::move(pieces), /*time_extended=*/true);
}

GroupPath delete_letter0(const GroupPath& x) {
  std::vector<PathPiece> pieces;
  for (auto& pc : x.pieces()) {
    TruncatedTensor lg = project_out_letter(pc.log_inc, 0);
    if (is_zero(lg)) continue;
    PathPiece np = pc;
    np.log_inc = std::move(lg);
    pieces.push_back(std::move(np));
  }
  return GroupPath(x.d() - 1, x.level(), std::move(pieces), false);
}

std::vector<double> PartitionSpec::make(double t) const {
  std::vector<double> out;
  switch (mode) {
    case Mode::uniform: {
      int n = std::max(1, count);
      for (int i = 0; i <= n; ++i) out.push_back(t * i / n);
      break;
    }
    case Mode::dyadic: {
      double h = std::pow(0.5, count);
      for (double u = 0.0; u < t; u += h) out.push_back(u);
      out.push_back(t);
      break;
    }
    case Mode::explicit_list: {
      out = times;
      out.push_back(0.0);
      out.push_back(t);
      std::erase_if(out, [&](double u) { return u < 0.0 || u > t; });
      break;
    }
  }
  return merge_times(std::move(out));
}

} // namespace cadlag
