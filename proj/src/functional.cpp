#include "cadlag/functional.hpp"

#include <cmath>

namespace cadlag {
namespace {

int top_level(const TruncatedTensor& u) {
  for (int k = u.level; k >= 1; --k) {
    auto blk = u.block(k);
    for (double v : blk)
      if (v != 0.0) return k;
  }
  return 0;
}

int sig_level_for(const TruncatedTensor& u, const GroupPath& x) {
  return std::max(top_level(u), x.level() + 1);
}

double pair_or_zero(const TruncatedTensor& u, const Word& I, const GroupElement& g) {
  if (static_cast<int>(I.size()) > u.level) return 0.0;
  return pair(shift_component(u, I), g);
}

struct SmoothFn {
  double (*deriv)(int, double);  // k-th derivative at x
  const char* name;
};

double d_identity(int k, double x) { return k == 0 ? x : (k == 1 ? 1.0 : 0.0); }
double d_square(int k, double x) {
  if (k == 0) return x * x;
  if (k == 1) return 2.0 * x;
  return k == 2 ? 2.0 : 0.0;
}
double d_sin(int k, double x) {
  switch (k % 4) {
    case 0: return std::sin(x);
    case 1: return std::cos(x);
    case 2: return -std::sin(x);
    default: return -std::cos(x);
  }
}
double d_cos(int k, double x) { return d_sin(k + 1, x); }
double d_exp(int, double x) { return std::exp(x); }

SmoothFn smooth_table(Smooth f) {
  switch (f) {
    case Smooth::identity: return {d_identity, "id"};
    case Smooth::square: return {d_square, "square"};
    case Smooth::sin: return {d_sin, "sin"};
    case Smooth::cos: return {d_cos, "cos"};
    case Smooth::exp: return {d_exp, "exp"};
  }
  throw std::invalid_argument("unknown smooth function");
}

// sum over set partitions of the positions of I: f^(#blocks)(S) * prod over
// blocks of the shifted pairings at the block subwords
double faa_di_bruno(const SmoothFn& s, double sval,
                    const std::function<double(const Word&)>& sub, const Word& I) {
  const int k = static_cast<int>(I.size());
  std::vector<std::vector<int>> blocks;
  double total = 0.0;
  std::function<void(int)> rec = [&](int pos) {
    if (pos == k) {
      double term = s.deriv(static_cast<int>(blocks.size()), sval);
      for (auto& b : blocks) {
        Word w;
        for (int p : b) w.push_back(I[static_cast<std::size_t>(p)]);
        term *= sub(w);
      }
      total += term;
      return;
    }
    // index loop: deeper calls push/pop blocks, invalidating references
    for (std::size_t bi = 0, nb = blocks.size(); bi < nb; ++bi) {
      blocks[bi].push_back(pos);
      rec(pos + 1);
      blocks[bi].pop_back();
    }
    blocks.push_back({pos});
    rec(pos + 1);
    blocks.pop_back();
  };
  rec(0);
  return total;
}

// squeezes the stopped path [0,t] onto [0,t_new]; the tail stays constant
GroupPath compress_stopped(const GroupPath& stopped, double t, double t_new) {
  if (t <= 0.0) return stopped;
  const double scale = t_new / t;
  std::vector<PathPiece> pieces;
  for (auto& pc : stopped.pieces()) {
    PathPiece np = pc;
    np.t0 = pc.t0 * scale;
    np.t1 = pc.t1 * scale;
    pieces.push_back(std::move(np));
  }
  return GroupPath(stopped.d(), stopped.level(), std::move(pieces), stopped.time_extended());
}

} // namespace

const SignaturePath& PreparedPath::sig(int N) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sigs_.find(N);
  if (it == sigs_.end())
    it = sigs_.emplace(N, std::make_shared<SignaturePath>(path_, N)).first;
  return *it->second;
}

const MarcusTransform& PreparedPath::marcus() const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!marcus_) marcus_ = std::make_shared<MarcusTransform>(marcus_transform(path_));
  return *marcus_;
}

double eval_on(const PathFunctional& f, double t, const GroupPath& x) {
  PreparedPath pp(x);
  return f.eval(t, pp);
}

PathFunctional linear_sig(TruncatedTensor u) {
  PathFunctional f;
  f.name = "linear-sig";
  f.marcus_canonical = true;
  f.closed_derivative_order = 16;
  f.sig_rep = u;
  auto uv = std::make_shared<TruncatedTensor>(std::move(u));
  f.eval = [uv](double t, const PreparedPath& pp) {
    return pair(*uv, pp.sig(sig_level_for(*uv, pp.path())).eval(t));
  };
  f.closed_derivative = [uv](const Word& I, double t, const PreparedPath& pp) {
    return pair_or_zero(*uv, I, pp.sig(sig_level_for(*uv, pp.path())).eval(t));
  };
  return f;
}

PathFunctional levy_area(int letter_a, int letter_b, int d) {
  PathFunctional f = linear_sig(TruncatedTensor::basis(d, 2, Word{letter_a, letter_b}));
  f.name = "levy-area";
  return f;
}

PathFunctional sup_norm() {
  PathFunctional f;
  f.name = "sup-norm";
  f.marcus_canonical = true;
  f.closed_derivative_order = 0;
  f.eval = [](double t, const PreparedPath& pp) {
    // the supremum over a log-linear segment is attained at its endpoints, so
    // breakpoint values of the Marcus transform up to mu_t suffice
    const MarcusTransform& mt = pp.marcus();
    const GroupPath& y = mt.transformed();
    const double mu = mt.mu(t);
    double best = 0.0;
    for (double bp : y.breakpoints()) {
      if (bp > mu) break;
      best = std::max(best, homogeneous_norm(y.eval(bp)));
    }
    best = std::max(best, homogeneous_norm(y.eval(mu)));
    return best;
  };
  return f;
}

PathFunctional compose(Smooth fn, TruncatedTensor u) {
  SmoothFn s = smooth_table(fn);
  PathFunctional f;
  f.name = std::string("compose-") + s.name;
  f.marcus_canonical = true;
  f.closed_derivative_order = 8;
  auto uv = std::make_shared<TruncatedTensor>(std::move(u));
  f.eval = [uv, s](double t, const PreparedPath& pp) {
    return s.deriv(0, pair(*uv, pp.sig(sig_level_for(*uv, pp.path())).eval(t)));
  };
  f.closed_derivative = [uv, s](const Word& I, double t, const PreparedPath& pp) {
    const GroupElement g = pp.sig(sig_level_for(*uv, pp.path())).eval(t);
    auto sv = [&](const Word& w) { return pair_or_zero(*uv, w, g); };
    return faa_di_bruno(s, pair(*uv, g), sv, I);
  };
  return f;
}

PathFunctional sin_time(int d) {
  PathFunctional f = compose(Smooth::sin, TruncatedTensor::basis(d, 1, Word{0}));
  f.name = "sin-time";
  return f;
}

PathFunctional raw_levy(int letter_a, int letter_b) {
  PathFunctional f;
  f.name = "raw-levy";
  f.marcus_canonical = false;
  f.eval = [letter_a, letter_b](double t, const PreparedPath& pp) {
    // exact left-point integral of a piecewise log-linear path:
    // segments contribute trapezoids, jumps contribute x^a(s-) dx^b
    const GroupPath& x = pp.path();
    const auto& ts = x.breakpoints();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      double a0 = std::max(ts[i], 0.0), a1 = std::min(ts[i + 1], t);
      if (a1 <= a0) continue;
      auto p0 = x.point(a0);
      auto p1 = x.point_left(a1);
      // interior of the interval is a straight line; clip handled via eval
      if (a1 < ts[i + 1]) p1 = x.point(a1);
      acc += 0.5 * (p0[static_cast<std::size_t>(letter_a)] + p1[static_cast<std::size_t>(letter_a)]) *
             (p1[static_cast<std::size_t>(letter_b)] - p0[static_cast<std::size_t>(letter_b)]);
    }
    for (double s : x.jump_times()) {
      if (s > t) continue;
      auto pl = x.point_left(s);
      auto dx = x.jump_delta(s);
      acc += pl[static_cast<std::size_t>(letter_a)] * dx[static_cast<std::size_t>(letter_b)];
    }
    return acc;
  };
  return f;
}

PathFunctional marcus_extend(std::function<double(double, const GroupPath&)> f_cont,
                             std::string name) {
  PathFunctional f;
  f.name = std::move(name);
  f.marcus_canonical = true;
  f.eval = [fc = std::move(f_cont)](double t, const PreparedPath& pp) {
    const MarcusTransform& mt = pp.marcus();
    return fc(mt.mu(t), mt.transformed());
  };
  return f;
}

GroupPath insert_jump(const GroupPath& x, double t, const TruncatedTensor& log_jump) {
  std::vector<PathPiece> pieces;
  for (auto& pc : x.pieces()) {
    if (pc.kind == PathPiece::Kind::segment && pc.t0 < t && t < pc.t1) {
      double fa = (t - pc.t0) / (pc.t1 - pc.t0);
      pieces.push_back(PathPiece::segment(pc.t0, t, scaled(pc.log_inc, fa)));
      pieces.push_back(PathPiece::segment(t, pc.t1, scaled(pc.log_inc, 1.0 - fa)));
    } else {
      pieces.push_back(pc);
    }
  }
  pieces.push_back(PathPiece::jump(t, log_jump));
  return GroupPath(x.d(), x.level(), std::move(pieces), x.time_extended());
}

double vertical_derivative(const PathFunctional& f, double t, const GroupPath& x,
                           const PerturbationPlan& plan) {
  const int k = static_cast<int>(plan.directions.size());
  if (k == 0) return eval_on(f, t, x);
  const double h0 = plan.step > 0.0 ? plan.step : (k == 1 ? 1e-4 : 1e-3);

  std::vector<double> delays = plan.delays;
  if (delays.empty()) delays.assign(static_cast<std::size_t>(k), 1e-2 / k);
  double total = 0.0;
  for (double e : delays) total += e;

  const int d = x.d();
  const int level = x.level();
  const int points = 1 << k;

  auto stencil = [&](double h) {
    double acc = 0.0;
    if (!plan.literal_marcus) {
      // delayed perturbation of the original stopped path
      GroupPath base = stop(x, t);
      double tcur = t;
      const double margin = 1e-3;
      if (t + total + margin > 1.0) {
        tcur = 1.0 - total - margin;
        base = compress_stopped(base, t, tcur);
      }
      std::vector<double> taus(static_cast<std::size_t>(k));
      double acc_delay = tcur;
      for (int j = 0; j < k; ++j) {
        acc_delay += delays[static_cast<std::size_t>(j)];
        taus[static_cast<std::size_t>(j)] = acc_delay;
      }
      for (int mask = 0; mask < points; ++mask) {
        std::vector<PathPiece> pieces = base.pieces();
        double signprod = 1.0;
        for (int j = 0; j < k; ++j) {
          double sgn = (mask >> j) & 1 ? 1.0 : -1.0;
          signprod *= sgn;
          TruncatedTensor lg(d, level);
          lg.at(Word{plan.directions[static_cast<std::size_t>(j)]}) = sgn * h;
          pieces.push_back(PathPiece::jump(taus[static_cast<std::size_t>(j)], std::move(lg)));
        }
        GroupPath p(d, level, std::move(pieces), base.time_extended());
        PreparedPath pp(std::move(p));
        acc += signprod * f.eval(taus.back(), pp);
      }
    } else {
      // literal nested construction: transform, perturb at mu, re-transform
      for (int mask = 0; mask < points; ++mask) {
        double signprod = 1.0;
        MarcusTransform mt = marcus_transform(stop(x, t));
        GroupPath y = mt.transformed();
        double mu = mt.mu(t);
        for (int j = 0; j < k; ++j) {
          double sgn = (mask >> j) & 1 ? 1.0 : -1.0;
          signprod *= sgn;
          TruncatedTensor lg(d, level);
          lg.at(Word{plan.directions[static_cast<std::size_t>(j)]}) = sgn * h;
          GroupPath perturbed = insert_jump(y, mu, lg);
          MarcusTransform mt2 = marcus_transform(perturbed);
          y = mt2.transformed();
          mu = mt2.mu(mu);
        }
        PreparedPath pp(std::move(y));
        acc += signprod * f.eval(mu, pp);
      }
    }
    return acc / std::pow(2.0 * h, k);
  };

  double v = stencil(h0);
  if (!plan.richardson) return v;
  double vh = stencil(h0 / 2);
  return (4.0 * vh - v) / 3.0;
}

std::vector<double> gradient(const PathFunctional& f, int order, double t,
                             const PreparedPath& x, bool force_fd) {
  const int d = x.path().d();
  const std::int64_t n = level_size(d, order);
  std::vector<double> out(static_cast<std::size_t>(n));
  const bool closed = !force_fd && f.closed_derivative && order <= f.closed_derivative_order;
  for (std::int64_t r = 0; r < n; ++r) {
    Word w = word_from_rank(d, order, r);
    if (closed) {
      out[static_cast<std::size_t>(r)] = f.closed_derivative(w, t, x);
    } else {
      out[static_cast<std::size_t>(r)] =
          vertical_derivative(f, t, x.path(), PerturbationPlan::for_word(w));
    }
  }
  return out;
}

double invariance_probe(const PathFunctional& f, const GroupPath& x, ProbeKind kind) {
  double worst = 0.0;
  switch (kind) {
    case ProbeKind::reparametrization: {
      const std::vector<PiecewiseLinear> phis = {
          {{0.0, 0.3, 1.0}, {0.0, 0.6, 1.0}},
          {{0.0, 0.5, 1.0}, {0.0, 0.25, 1.0}},
          {{0.0, 0.2, 0.8, 1.0}, {0.0, 0.4, 0.9, 1.0}},
          {{0.0, 0.7, 1.0}, {0.0, 0.35, 1.0}},
          {{0.0, 0.1, 0.9, 1.0}, {0.0, 0.3, 0.95, 1.0}},
      };
      for (auto& phi : phis) {
        GroupPath xp = reparametrize(x, phi);
        PreparedPath pa(xp);
        PreparedPath pb(x);
        for (int i = 1; i <= 10; ++i) {
          double t = i / 10.0;
          worst = std::max(worst, std::abs(f.eval(t, pa) - f.eval(phi(t), pb)));
        }
      }
      break;
    }
    case ProbeKind::stop: {
      PreparedPath px(x);
      for (int i = 1; i <= 10; ++i) {
        double t = i / 10.0;
        PreparedPath ps(stop(x, t));
        worst = std::max(worst, std::abs(f.eval(t, px) - f.eval(t, ps)));
      }
      break;
    }
    case ProbeKind::stretch: {
      // work on the continuous transform; compare against a version with a
      // flat run wedged in, which time-stretching must remove
      const GroupPath y = marcus_transform(x).transformed();
      std::vector<PathPiece> pieces;
      for (auto& pc : y.pieces()) {
        auto squeeze = [](double s) { return s <= 0.4 ? s : 0.5 + (s - 0.4) * (0.5 / 0.6); };
        if (pc.kind == PathPiece::Kind::segment && pc.t0 < 0.4 && pc.t1 > 0.4) {
          double fa = (0.4 - pc.t0) / (pc.t1 - pc.t0);
          pieces.push_back(PathPiece::segment(squeeze(pc.t0), 0.4, scaled(pc.log_inc, fa)));
          pieces.push_back(PathPiece::segment(0.5, squeeze(pc.t1), scaled(pc.log_inc, 1.0 - fa)));
        } else {
          PathPiece np = pc;
          np.t0 = squeeze(pc.t0);
          np.t1 = squeeze(pc.t1);
          pieces.push_back(std::move(np));
        }
      }
      GroupPath flat(y.d(), y.level(), std::move(pieces), y.time_extended());
      PreparedPath pf(flat);
      for (double t : {0.45, 0.7, 1.0}) {
        GroupPath st = time_stretch(flat, t);
        PreparedPath ps(st);
        worst = std::max(worst, std::abs(f.eval(t, pf) - f.eval(t, ps)));
      }
      break;
    }
    case ProbeKind::marcus_pair: {
      PreparedPath px(x);
      MarcusTransform ta = marcus_transform(x, default_marcus_pair(x));
      MarcusTransform tb = marcus_transform(x, alternate_marcus_pair(x));
      PreparedPath pa(ta.transformed());
      PreparedPath pb(tb.transformed());
      for (int i = 1; i <= 10; ++i) {
        double t = i / 10.0;
        double v = f.eval(t, px);
        worst = std::max(worst, std::abs(v - f.eval(ta.mu(t), pa)));
        worst = std::max(worst, std::abs(v - f.eval(tb.mu(t), pb)));
      }
      break;
    }
  }
  return worst;
}

std::vector<double> continuity_probe(const PathFunctional& f, const GroupPath& x,
                                     double t, int steps) {
  // perturb at t, evaluate at 1: the perturbed paths converge to x in
  // p-variation, so the deviations of a var-continuous functional shrink
  std::vector<double> out;
  const double base = eval_on(f, 1.0, x);
  for (int n = 1; n <= steps; ++n) {
    double eps = std::pow(2.0, -n);
    TruncatedTensor lg(x.d(), x.level());
    lg.at(Word{0}) = eps;
    GroupPath xp = insert_jump(x, t, lg);
    out.push_back(std::abs(eval_on(f, 1.0, xp) - base));
  }
  return out;
}

} // namespace cadlag
