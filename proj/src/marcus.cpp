#include "cadlag/marcus.hpp"

#include <algorithm>
#include <cmath>

namespace cadlag {
namespace {

std::vector<double> default_r(const GroupPath& x) {
  auto jts = x.jump_times();
  std::vector<double> norms(jts.size());
  for (std::size_t i = 0; i < jts.size(); ++i) norms[i] = homogeneous_norm(x.jump(jts[i]));
  std::vector<std::size_t> idx(jts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (norms[a] != norms[b]) return norms[a] > norms[b];
    return jts[a] < jts[b];
  });
  std::vector<double> r(jts.size());
  for (std::size_t rank = 0; rank < idx.size(); ++rank)
    r[idx[rank]] = std::pow(2.0, -static_cast<double>(rank + 1)) / 2.0;
  return r;
}

// letter-0 coordinate is strictly increasing across every piece and jump
bool letter0_strictly_increasing(const GroupPath& x) {
  if (x.d() < 2) return false;
  const auto& ts = x.breakpoints();
  double prev = 0.0;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    double lv = x.point_left(ts[i])[0];
    double rv = x.point(ts[i])[0];
    if (lv <= prev + 0.0 && ts[i] > ts[i - 1]) return false;  // flat run
    if (rv < lv) return false;
    prev = rv;
  }
  return prev > 0.0;
}

} // namespace

MarcusPair default_marcus_pair(const GroupPath& x) {
  MarcusPair pair;
  pair.r = default_r(x);
  if (pair.r.empty()) {
    pair.psi = PiecewiseLinear::identity();
    return pair;
  }
  const double sigma = pair.sigma();
  if (x.time_extended() && letter0_strictly_increasing(x)) {
    // knots of the uncompressed transformed letter-0 component zeta, so that
    // psi = zeta^{-1} makes the transformed tracking component the identity
    auto jts = x.jump_times();
    std::vector<double> s_knots{0.0};
    std::vector<double> z_knots{0.0};
    const auto& ts = x.breakpoints();
    double shift = 0.0;
    for (std::size_t i = 1; i < ts.size(); ++i) {
      double zl = x.point_left(ts[i])[0];
      double zr = x.point(ts[i])[0];
      s_knots.push_back(ts[i] + shift);
      z_knots.push_back(zl);
      if (zr != zl) {
        auto it = std::find(jts.begin(), jts.end(), ts[i]);
        double rk = pair.r[static_cast<std::size_t>(it - jts.begin())];
        shift += rk;
        s_knots.push_back(ts[i] + shift);
        z_knots.push_back(zr);
      }
    }
    pair.psi = PiecewiseLinear{z_knots, s_knots};  // psi: [0,1] -> [0,1+sigma]
  } else {
    pair.psi = PiecewiseLinear::linear(0.0, 1.0, 0.0, 1.0 + sigma);
  }
  return pair;
}

MarcusPair alternate_marcus_pair(const GroupPath& x) {
  MarcusPair pair;
  auto jts = x.jump_times();
  pair.r.resize(jts.size());
  for (std::size_t i = 0; i < jts.size(); ++i)
    pair.r[i] = 0.3 / static_cast<double>(i + 1) / static_cast<double>(jts.size());
  if (pair.r.empty()) {
    pair.psi = PiecewiseLinear::identity();
  } else {
    // a kinked bijection exercises the psi-dependence
    double sigma = pair.sigma();
    pair.psi = PiecewiseLinear{{0.0, 0.4, 1.0}, {0.0, 0.55 * (1.0 + sigma), 1.0 + sigma}};
  }
  return pair;
}

MarcusTransform marcus_transform(const GroupPath& x) {
  return marcus_transform(x, default_marcus_pair(x));
}

MarcusTransform marcus_transform(const GroupPath& x, const MarcusPair& pair) {
  auto jts = x.jump_times();
  if (jts.size() != pair.r.size())
    throw std::invalid_argument("Marcus pair has wrong jump count");
  for (double rk : pair.r)
    if (rk <= 0.0) throw std::invalid_argument("Marcus pair needs positive r_k");

  if (jts.empty()) {
    // identity convention for continuous paths
    return MarcusTransform(x, pair, x, {}, PiecewiseLinear::identity());
  }

  PiecewiseLinear psi_inv = pair.psi.inverse();

  // walk the origin in time order, inserting a bridge segment of length r_k at
  // each jump, tracking the cumulated shift; segments are cut at the psi knots
  // so the pulled-back pieces stay log-linear
  std::vector<PathPiece> pieces;
  auto emit = [&](double s0, double s1, const TruncatedTensor& lg) {
    std::vector<double> cuts{s0};
    for (double ks : pair.psi.ys)
      if (ks > s0 + 1e-14 && ks < s1 - 1e-14) cuts.push_back(ks);
    cuts.push_back(s1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double frac = (cuts[i + 1] - cuts[i]) / (s1 - s0);
      pieces.push_back(PathPiece::segment(psi_inv(cuts[i]), psi_inv(cuts[i + 1]), scaled(lg, frac)));
    }
  };
  double shift = 0.0;
  for (auto& pc : x.pieces()) {
    if (pc.kind == PathPiece::Kind::segment) {
      emit(pc.t0 + shift, pc.t1 + shift, pc.log_inc);
    } else {
      auto it = std::find(jts.begin(), jts.end(), pc.t0);
      if (it == jts.end()) continue;  // zero jump, nothing to bridge
      double rk = pair.r[static_cast<std::size_t>(it - jts.begin())];
      double a = pc.t0 + shift;
      shift += rk;
      double b = pc.t0 + shift;
      emit(a, b, pc.log_inc);
    }
  }
  GroupPath transformed(x.d(), x.level(), std::move(pieces), x.time_extended());
  return MarcusTransform(x, pair, std::move(transformed), std::move(jts), std::move(psi_inv));
}

double MarcusTransform::tau(double t) const {
  double s = t;
  for (std::size_t i = 0; i < jump_times_.size(); ++i)
    if (jump_times_[i] <= t) s += pair_.r[i];
  return s;
}

double MarcusTransform::tau_left(double t) const {
  double s = t;
  for (std::size_t i = 0; i < jump_times_.size(); ++i)
    if (jump_times_[i] < t) s += pair_.r[i];
  return s;
}

double pair_invariance_check(const std::function<double(double, const GroupPath&)>& F,
                             const GroupPath& x, const MarcusPair& a, const MarcusPair& b,
                             int probe_points) {
  MarcusTransform ta = marcus_transform(x, a);
  MarcusTransform tb = marcus_transform(x, b);
  double worst = 0.0;
  for (int i = 1; i <= probe_points; ++i) {
    double t = static_cast<double>(i) / probe_points;
    double va = F(ta.mu(t), ta.transformed());
    double vb = F(tb.mu(t), tb.transformed());
    worst = std::max(worst, std::abs(va - vb));
  }
  return worst;
}

} // namespace cadlag
