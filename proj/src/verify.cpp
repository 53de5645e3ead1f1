#include "cadlag/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace cadlag {
namespace {

// F(s-) and grad^k F(s-) are evaluated on the path frozen at the left limit
double left_eval(const PathFunctional& f, const GroupPath& x, double s) {
  PreparedPath pl(stop_left(x, s));
  return f.eval(s, pl);
}

std::vector<double> left_gradient(const PathFunctional& f, const GroupPath& x, double s, int order) {
  PreparedPath pl(stop_left(x, s));
  return gradient(f, order, s, pl);
}

int taylor_sum_orders(int K, int level) { return level == 1 ? K - 2 : K - 3; }

std::vector<double> uniform_grid(double a, double b, int n,
                                 const std::vector<double>& extra = {}) {
  std::vector<double> out;
  for (int i = 0; i <= n; ++i) out.push_back(a + (b - a) * i / n);
  for (double e : extra)
    if (e > a && e < b) out.push_back(e);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double u, double v) { return std::abs(u - v) < 1e-14; }),
            out.end());
  return out;
}

} // namespace

ItoReport check_ito_young(const PathFunctional& f, const GroupPath& xhat, double t,
                          const MeshSchedule& sched) {
  ItoReport rep;
  rep.t = t;
  PreparedPath pp(xhat);
  rep.lhs = f.eval(t, pp) - f.eval(0.0, pp);

  Covector grad = [&](double s) { return gradient(f, 1, s, pp); };
  IntegralResult ir = young_integral(grad, xhat, t, sched);

  auto f_right = [&](double s) { return f.eval(s, pp); };
  auto f_left = [&](double s) { return left_eval(f, xhat, s); };
  Covector g_left = [&](double s) { return left_gradient(f, xhat, s, 1); };
  rep.compensator = jump_compensator(f_right, f_left, g_left, nullptr, xhat, t);

  rep.mesh = ir.mesh;
  rep.integral_per_mesh = ir.value;
  for (double v : ir.value) rep.residual_per_mesh.push_back(rep.lhs - (v + rep.compensator));
  rep.integral = ir.limit();
  rep.residual = rep.lhs - (rep.integral + rep.compensator);
  rep.observed_order = ir.observed_order;
  rep.converged = ir.converged;
  rep.non_convergent = ir.non_convergent;
  return rep;
}

ItoReport check_ito_rough(const PathFunctional& f, const GroupPath& xhat, double t,
                          const MeshSchedule& sched) {
  if (xhat.level() < 2) throw std::invalid_argument("rough Ito check needs a level-2 path");
  ItoReport rep;
  rep.t = t;
  PreparedPath pp(xhat);
  rep.lhs = f.eval(t, pp) - f.eval(0.0, pp);

  ControlledPath cp;
  cp.y = [&](double s) { return gradient(f, 1, s, pp); };
  cp.y_prime = [&](double s) { return gradient(f, 2, s, pp); };
  IntegralResult ir = rough_integral(cp, xhat, t, sched);

  auto f_right = [&](double s) { return f.eval(s, pp); };
  auto f_left = [&](double s) { return left_eval(f, xhat, s); };
  Covector g_left = [&](double s) { return left_gradient(f, xhat, s, 1); };
  Covector h_left = [&](double s) { return left_gradient(f, xhat, s, 2); };
  rep.compensator = jump_compensator(f_right, f_left, g_left, &h_left, xhat, t);

  rep.mesh = ir.mesh;
  rep.integral_per_mesh = ir.value;
  for (double v : ir.value) rep.residual_per_mesh.push_back(rep.lhs - (v + rep.compensator));
  rep.integral = ir.limit();
  rep.residual = rep.lhs - (rep.integral + rep.compensator);
  rep.observed_order = ir.observed_order;
  rep.converged = ir.converged;
  rep.non_convergent = ir.non_convergent;
  return rep;
}

namespace {

// iterated left-point integrals of grad^top F along a continuous path,
// contracted down to a scalar; the innermost integration index is the first
// letter of the derivative word
double iterated_remainder(const PathFunctional& f, const GroupPath& z, double upper, int K,
                          int grid_n, const std::vector<double>& hint_breaks) {
  const int level = z.level();
  const int d = z.d();
  const int top = K - 1;                    // order of the innermost integrand
  const int iterations = level == 1 ? K - 1 : K - 2;
  const int inner_order = level == 1 ? top : K - 2;

  if (upper <= 0.0) return 0.0;
  PreparedPath pz(z);

  // structural shortcut: for linear functionals of degree below the innermost
  // integrand order the whole iterated integral vanishes identically
  if (f.sig_rep) {
    int deg = 0;
    for (int k = f.sig_rep->level; k >= 1; --k) {
      auto blk = f.sig_rep->block(k);
      for (double v : blk)
        if (v != 0.0) { deg = k; break; }
      if (deg) break;
    }
    if (deg < inner_order) return 0.0;
  }

  std::vector<double> grid = uniform_grid(0.0, upper, grid_n, hint_breaks);
  const std::size_t m = grid.size();

  // level-1 increments (and level-2 blocks when needed) per grid step
  std::vector<std::vector<double>> dz(m - 1);
  std::vector<std::vector<double>> dzz;  // level-2 increment blocks
  if (level == 2) dzz.resize(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    GroupElement inc = z.increment(grid[i], grid[i + 1]);
    auto b1 = inc.tensor().block(1);
    dz[i] = {b1.begin(), b1.end()};
    if (level == 2) {
      auto b2 = inc.tensor().block(2);
      dzz[i] = {b2.begin(), b2.end()};
    }
  }

  if (level == 1) {
    // H_top at all grid points, then integrate down
    std::vector<std::vector<double>> H(m);
    for (std::size_t i = 0; i < m; ++i) H[i] = gradient(f, top, grid[i], pz);
    for (int ord = top - 1; ord >= 0; --ord) {
      const std::int64_t nw = level_size(d, ord);
      std::vector<std::vector<double>> next(m, std::vector<double>(static_cast<std::size_t>(nw), 0.0));
      for (std::size_t i = 0; i + 1 < m; ++i) {
        next[i + 1] = next[i];
        for (std::int64_t r = 0; r < nw; ++r) {
          double acc = 0.0;
          for (int a = 0; a < d; ++a) {
            // prepend letter a to the component word
            std::int64_t src = a * nw + r;
            acc += H[i][static_cast<std::size_t>(src)] * dz[i][static_cast<std::size_t>(a)];
          }
          next[i + 1][static_cast<std::size_t>(r)] += acc;
        }
      }
      H = std::move(next);
    }
    return H[m - 1][0];
  }

  // level 2: compensated iterated integrals; G_{j} integrates (G_{j-1}, G_{j-2})
  const int base_order = K - 2;
  std::vector<std::vector<double>> Gm1(m), G0(m);
  for (std::size_t i = 0; i < m; ++i) {
    Gm1[i] = gradient(f, base_order + 1, grid[i], pz);
    G0[i] = gradient(f, base_order, grid[i], pz);
  }
  std::vector<std::vector<double>> prev = std::move(Gm1);  // order base+1
  std::vector<std::vector<double>> cur = std::move(G0);    // order base
  int cur_order = base_order;
  for (int it = 0; it < iterations; ++it) {
    const std::int64_t nw = level_size(d, cur_order - 1);
    std::vector<std::vector<double>> next(m, std::vector<double>(static_cast<std::size_t>(nw), 0.0));
    for (std::size_t i = 0; i + 1 < m; ++i) {
      next[i + 1] = next[i];
      for (std::int64_t r = 0; r < nw; ++r) {
        double acc = 0.0;
        for (int a = 0; a < d; ++a)
          acc += cur[i][static_cast<std::size_t>(a * nw + r)] * dz[i][static_cast<std::size_t>(a)];
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b)
            acc += prev[i][static_cast<std::size_t>((a * d + b) * nw + r)] *
                   dzz[i][static_cast<std::size_t>(a * d + b)];
        next[i + 1][static_cast<std::size_t>(r)] += acc;
      }
    }
    // the integral's Gubinelli derivative is the integrand itself
    prev = std::move(cur);
    cur = std::move(next);
    --cur_order;
  }
  return cur[m - 1][0];
}

} // namespace

TaylorReport taylor_expand(const PathFunctional& f, const GroupPath& xhat, double t, int K,
                           int remainder_grid) {
  const int level = xhat.level();
  if ((level == 1 && K < 2) || (level == 2 && K < 3))
    throw std::invalid_argument("expansion order too small for the path level");
  TaylorReport rep;
  rep.K = K;
  rep.t = t;
  PreparedPath pp(xhat);
  const int jmax = taylor_sum_orders(K, level);

  const int N = std::max(jmax, level + 1);
  GroupElement sinc = pp.sig(N).increment(0.0, t);
  for (int j = 0; j <= jmax; ++j) {
    std::vector<double> g = gradient(f, j, 0.0, pp);
    auto blk = sinc.tensor().block(j);
    double contrib = 0.0;
    for (std::size_t r = 0; r < g.size(); ++r) contrib += g[r] * blk[r];
    rep.order_contrib.push_back(contrib);
    rep.partial_sum += contrib;
  }

  const MarcusTransform& mt = pp.marcus();
  rep.remainder = iterated_remainder(f, mt.transformed(), mt.mu(t), K, remainder_grid,
                                     mt.transformed().breakpoints());
  rep.value = f.eval(t, pp);
  rep.defect = rep.value - rep.partial_sum - rep.remainder;
  return rep;
}

TaylorReport taylor_at(const PathFunctional& f, const GroupPath& xhat, const GroupPath& yhat,
                       double t, double s, int K, int remainder_grid) {
  if (!xhat.is_continuous() || !yhat.is_continuous())
    throw std::invalid_argument("concatenation expansion needs continuous paths");
  if (t > s) throw std::invalid_argument("needs t <= s");
  const int level = xhat.level();
  TaylorReport rep;
  rep.K = K;
  rep.t = s;
  const int jmax = taylor_sum_orders(K, level);

  GroupPath c = concat(xhat, yhat, t);
  PreparedPath pc(c);
  PreparedPath px(xhat);

  const int N = std::max(jmax, level + 1);
  SignaturePath ysig(yhat, N);
  GroupElement yinc = ysig.increment(t, s);
  for (int j = 0; j <= jmax; ++j) {
    std::vector<double> g = gradient(f, j, t, px);
    auto blk = yinc.tensor().block(j);
    double contrib = 0.0;
    for (std::size_t r = 0; r < g.size(); ++r) contrib += g[r] * blk[r];
    rep.order_contrib.push_back(contrib);
    rep.partial_sum += contrib;
  }

  // remainder: iterated integrals of the functional along the concatenation
  // over [t, s]; shift the window to start at zero by splicing the grid
  {
    const int d = c.d();
    PreparedPath pz(c);
    std::vector<double> grid = uniform_grid(t, s, remainder_grid, c.breakpoints());
    const std::size_t m = grid.size();
    const int top = K - 1;
    const int base_order = level == 1 ? top : K - 2;
    std::vector<std::vector<double>> dz(m - 1), dzz;
    if (level == 2) dzz.resize(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) {
      GroupElement inc = c.increment(grid[i], grid[i + 1]);
      auto b1 = inc.tensor().block(1);
      dz[i] = {b1.begin(), b1.end()};
      if (level == 2) {
        auto b2 = inc.tensor().block(2);
        dzz[i] = {b2.begin(), b2.end()};
      }
    }
    std::vector<std::vector<double>> prev(m), cur(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (level == 2) prev[i] = gradient(f, base_order + 1, grid[i], pz);
      cur[i] = gradient(f, base_order, grid[i], pz);
    }
    int cur_order = base_order;
    const int iterations = level == 1 ? K - 1 : K - 2;
    for (int it = 0; it < iterations; ++it) {
      const std::int64_t nw = level_size(d, cur_order - 1);
      std::vector<std::vector<double>> next(m, std::vector<double>(static_cast<std::size_t>(nw), 0.0));
      for (std::size_t i = 0; i + 1 < m; ++i) {
        next[i + 1] = next[i];
        for (std::int64_t r = 0; r < nw; ++r) {
          double acc = 0.0;
          for (int a = 0; a < d; ++a)
            acc += cur[i][static_cast<std::size_t>(a * nw + r)] * dz[i][static_cast<std::size_t>(a)];
          if (level == 2)
            for (int a = 0; a < d; ++a)
              for (int b = 0; b < d; ++b)
                acc += prev[i][static_cast<std::size_t>((a * d + b) * nw + r)] *
                       dzz[i][static_cast<std::size_t>(a * d + b)];
          next[i + 1][static_cast<std::size_t>(r)] += acc;
        }
      }
      prev = std::move(cur);
      cur = std::move(next);
      --cur_order;
    }
    rep.remainder = cur[m - 1][0];
  }

  rep.value = f.eval(s, pc);
  rep.defect = rep.value - rep.partial_sum - rep.remainder;
  return rep;
}

QVReport foellmer_qv(const GroupPath& x, double t, int depth_first, int depth_last) {
  QVReport rep;
  const int d = x.d();
  auto jumps = x.jump_times();
  for (int n = depth_first; n <= depth_last; ++n) {
    std::vector<double> part = PartitionSpec::dyadic(n).make(1.0);
    for (double j : jumps) part.push_back(j);
    std::sort(part.begin(), part.end());
    part.erase(std::unique(part.begin(), part.end()), part.end());

    std::vector<double> mat(static_cast<std::size_t>(d * d), 0.0);
    std::vector<double> prev = x.point(std::min(part[0], t));
    for (std::size_t i = 0; i + 1 < part.size(); ++i) {
      double a = std::min(part[i], t), b = std::min(part[i + 1], t);
      if (b <= a) break;
      std::vector<double> next = x.point(b);
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q)
          mat[static_cast<std::size_t>(p * d + q)] += (next[static_cast<std::size_t>(p)] - prev[static_cast<std::size_t>(p)]) *
                                                      (next[static_cast<std::size_t>(q)] - prev[static_cast<std::size_t>(q)]);
      prev = std::move(next);
    }
    rep.depths.push_back(n);
    rep.per_level.push_back(std::move(mat));
  }
  rep.qv = rep.per_level.back();

  rep.jump_part.assign(static_cast<std::size_t>(d * d), 0.0);
  for (double s : jumps) {
    if (s > t) continue;
    auto dx = x.jump_delta(s);
    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q)
        rep.jump_part[static_cast<std::size_t>(p * d + q)] += dx[static_cast<std::size_t>(p)] * dx[static_cast<std::size_t>(q)];
  }
  rep.qv_cont.resize(rep.qv.size());
  for (std::size_t i = 0; i < rep.qv.size(); ++i) rep.qv_cont[i] = rep.qv[i] - rep.jump_part[i];

  if (rep.per_level.size() >= 2) {
    double d1 = 0.0, d2 = 0.0;
    auto& a = rep.per_level[rep.per_level.size() - 2];
    auto& b = rep.per_level.back();
    for (std::size_t i = 0; i < b.size(); ++i) {
      d1 = std::max(d1, std::abs(b[i] - a[i]));
      d2 = std::max(d2, std::abs(b[i]));
    }
    rep.converged = d1 <= std::max(1e-10, 1e-6 * d2);
  }
  return rep;
}

ItoReport check_foellmer_ito(const PathFunctional& f, const GroupPath& xhat, double t,
                             int depth_first, int depth_last) {
  PreparedPath pp(xhat);
  const int d = xhat.d();

  // symmetry hypothesis on the second vertical derivative
  for (int i = 1; i <= 10; ++i) {
    double s = t * i / 10.0;
    std::vector<double> h = gradient(f, 2, s, pp);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < a; ++b)
        if (std::abs(h[static_cast<std::size_t>(a * d + b)] - h[static_cast<std::size_t>(b * d + a)]) > 1e-8)
          throw std::invalid_argument("second vertical derivative is not symmetric along the path");
  }

  ItoReport rep;
  rep.t = t;
  rep.lhs = f.eval(t, pp) - f.eval(0.0, pp);

  auto jumps = xhat.jump_times();
  // per level: partition-limit term (5.15)-style plus the [X]^c term assembled
  // along the same partition; the two converge jointly, so extrapolate the sum
  IntegralResult ir;
  for (int n = depth_first; n <= depth_last; ++n) {
    std::vector<double> part = PartitionSpec::dyadic(n).make(t);
    for (double j : jumps)
      if (j < t) part.push_back(j);
    std::sort(part.begin(), part.end());
    part.erase(std::unique(part.begin(), part.end()), part.end());

    Covector grad = [&](double s) { return gradient(f, 1, s, pp); };
    double i1 = young_sum(grad, xhat, part);

    double qc = 0.0;
    {
      const int cells = 64;
      std::vector<double> cell_edges = uniform_grid(0.0, t, cells);
      std::size_t pi = 0;
      for (std::size_t c = 0; c + 1 < cell_edges.size(); ++c) {
        std::vector<double> cinc(static_cast<std::size_t>(d * d), 0.0);
        while (pi + 1 < part.size() && part[pi + 1] <= cell_edges[c + 1] + 1e-14) {
          auto p0 = xhat.point(part[pi]);
          bool is_jump = std::binary_search(jumps.begin(), jumps.end(), part[pi + 1]);
          auto p1 = is_jump ? xhat.point_left(part[pi + 1]) : xhat.point(part[pi + 1]);
          for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
              cinc[static_cast<std::size_t>(a * d + b)] +=
                  (p1[static_cast<std::size_t>(a)] - p0[static_cast<std::size_t>(a)]) *
                  (p1[static_cast<std::size_t>(b)] - p0[static_cast<std::size_t>(b)]);
          ++pi;
        }
        std::vector<double> h = gradient(f, 2, cell_edges[c], pp);
        for (std::size_t k = 0; k < cinc.size(); ++k) qc += h[k] * cinc[k];
      }
      qc *= 0.5;
    }
    ir.mesh.push_back(std::pow(0.5, n));
    ir.value.push_back(i1 + qc);
  }
  finalize_diagnostics(ir);

  auto f_right = [&](double s) { return f.eval(s, pp); };
  auto f_left = [&](double s) { return left_eval(f, xhat, s); };
  Covector g_left = [&](double s) { return left_gradient(f, xhat, s, 1); };
  rep.compensator = jump_compensator(f_right, f_left, g_left, nullptr, xhat, t);

  rep.mesh = ir.mesh;
  rep.integral_per_mesh = ir.value;
  for (double v : ir.value) rep.residual_per_mesh.push_back(rep.lhs - (v + rep.compensator));
  rep.integral = ir.limit();
  rep.residual = rep.lhs - (rep.integral + rep.compensator);
  rep.observed_order = ir.observed_order;
  rep.converged = ir.converged;
  rep.non_convergent = ir.non_convergent;
  return rep;
}

RieReport check_rie(const GroupPath& x, double p, int depth_first, int depth_last) {
  RieReport rep;
  const int d = x.d();
  auto jumps = x.jump_times();

  auto make_part = [&](int n) {
    std::vector<double> part = PartitionSpec::dyadic(n).make(1.0);
    for (double j : jumps) part.push_back(j);
    std::sort(part.begin(), part.end());
    part.erase(std::unique(part.begin(), part.end()), part.end());
    return part;
  };

  // probe grid for uniform statements
  std::vector<double> probe = make_part(depth_last + 1);
  {
    std::vector<double> mids;
    for (std::size_t i = 0; i + 1 < probe.size(); ++i) mids.push_back(0.5 * (probe[i] + probe[i + 1]));
    probe.insert(probe.end(), mids.begin(), mids.end());
    std::sort(probe.begin(), probe.end());
  }
  std::vector<std::vector<double>> xprobe(probe.size());
  for (std::size_t i = 0; i < probe.size(); ++i) xprobe[i] = x.point(probe[i]);

  // cumulative 1-variation for the candidate control w(s,t) = V1[s,t]^p
  auto var_prefix = [&](const std::vector<double>& ts) {
    std::vector<double> v(ts.size(), 0.0);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      auto a = x.point(ts[i]);
      auto bl = x.point_left(ts[i + 1]);
      auto b = x.point(ts[i + 1]);
      double seg = 0.0, jmp = 0.0;
      for (int c = 0; c < d; ++c) {
        seg += (bl[static_cast<std::size_t>(c)] - a[static_cast<std::size_t>(c)]) * (bl[static_cast<std::size_t>(c)] - a[static_cast<std::size_t>(c)]);
        jmp += (b[static_cast<std::size_t>(c)] - bl[static_cast<std::size_t>(c)]) * (b[static_cast<std::size_t>(c)] - bl[static_cast<std::size_t>(c)]);
      }
      v[i + 1] = v[i] + std::sqrt(seg) + std::sqrt(jmp);
    }
    return v;
  };

  std::vector<std::vector<std::vector<double>>> riemann_paths;  // per depth, per probe time, d*d
  for (int n = depth_first; n <= depth_last; ++n) {
    auto part = make_part(n);

    // clause (i): staircase distance on the probe grid
    double udev = 0.0;
    {
      std::size_t pi = 0;
      for (std::size_t q = 0; q < probe.size(); ++q) {
        while (pi + 1 < part.size() && part[pi + 1] <= probe[q]) ++pi;
        double dev = 0.0;
        auto xp = x.point(part[pi]);
        for (int c = 0; c < d; ++c) {
          double dd = xprobe[q][static_cast<std::size_t>(c)] - xp[static_cast<std::size_t>(c)];
          dev += dd * dd;
        }
        udev = std::max(udev, std::sqrt(dev));
      }
    }
    rep.uniform_dev.push_back(udev);

    // prefix Riemann sums I(t_j) = sum X_{t_i} (x) X_{t_i,t_{i+1}}
    std::vector<std::vector<double>> prefix(part.size(), std::vector<double>(static_cast<std::size_t>(d * d), 0.0));
    std::vector<std::vector<double>> xs(part.size());
    for (std::size_t i = 0; i < part.size(); ++i) xs[i] = x.point(part[i]);
    for (std::size_t i = 0; i + 1 < part.size(); ++i) {
      prefix[i + 1] = prefix[i];
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          prefix[i + 1][static_cast<std::size_t>(a * d + b)] +=
              xs[i][static_cast<std::size_t>(a)] * (xs[i + 1][static_cast<std::size_t>(b)] - xs[i][static_cast<std::size_t>(b)]);
    }

    // clause (ii): sample the Riemann-sum path on the probe grid
    std::vector<std::vector<double>> rpath(probe.size());
    {
      std::size_t pi = 0;
      for (std::size_t q = 0; q < probe.size(); ++q) {
        while (pi + 1 < part.size() && part[pi + 1] <= probe[q]) ++pi;
        std::vector<double> v = prefix[pi];
        // partial cell [part[pi], probe[q]]
        auto xq = x.point(probe[q]);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b)
            v[static_cast<std::size_t>(a * d + b)] += xs[pi][static_cast<std::size_t>(a)] * (xq[static_cast<std::size_t>(b)] - xs[pi][static_cast<std::size_t>(b)]);
        rpath[q] = std::move(v);
      }
    }
    riemann_paths.push_back(std::move(rpath));

    // clause (iii): control witness over partition-point pairs
    std::vector<double> vpref = var_prefix(part);
    double witness = 0.0;
    for (std::size_t i = 0; i < part.size(); ++i) {
      for (std::size_t j = i + 1; j < part.size(); ++j) {
        double num = 0.0;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            double term = prefix[j][static_cast<std::size_t>(a * d + b)] - prefix[i][static_cast<std::size_t>(a * d + b)] -
                          xs[i][static_cast<std::size_t>(a)] * (xs[j][static_cast<std::size_t>(b)] - xs[i][static_cast<std::size_t>(b)]);
            num += term * term;
          }
        num = std::pow(std::sqrt(num), p);
        double w = std::pow(vpref[j] - vpref[i], p);
        if (w > 0.0) witness = std::max(witness, num / w);
      }
    }
    rep.control_witness.push_back(witness);
    rep.depths.push_back(n);
  }

  // clause verdicts
  {
    auto& u = rep.uniform_dev;
    rep.clause_i = u.back() < 1e-12 || u.back() <= 0.6 * u[u.size() - 2];
    std::vector<double> rdev;
    for (std::size_t k = 0; k + 1 < riemann_paths.size(); ++k) {
      double dev = 0.0;
      for (std::size_t q = 0; q < probe.size(); ++q)
        for (std::size_t c = 0; c < riemann_paths[k][q].size(); ++c)
          dev = std::max(dev, std::abs(riemann_paths[k + 1][q][c] - riemann_paths[k][q][c]));
      rdev.push_back(dev);
    }
    rep.riemann_dev = rdev;
    rep.clause_ii = rdev.size() >= 2 && (rdev.back() < 1e-12 || rdev.back() <= 0.75 * rdev[rdev.size() - 2]);
    double head = 0.0, tail = 0.0;
    for (std::size_t k = 0; k < rep.control_witness.size(); ++k) {
      if (k < rep.control_witness.size() / 2)
        head = std::max(head, rep.control_witness[k]);
      else
        tail = std::max(tail, rep.control_witness[k]);
    }
    rep.clause_iii = std::isfinite(tail) && tail <= std::max(head, 1e-30) * 1.2 + 1e-12;
  }

  // construct the level-2 path from the finest-level data and compare with the
  // canonical Marcus-like lift
  {
    auto part = make_part(depth_last);
    std::vector<std::vector<double>> prefix(part.size(), std::vector<double>(static_cast<std::size_t>(d * d), 0.0));
    std::vector<std::vector<double>> xs(part.size());
    for (std::size_t i = 0; i < part.size(); ++i) xs[i] = x.point(part[i]);
    for (std::size_t i = 0; i + 1 < part.size(); ++i) {
      prefix[i + 1] = prefix[i];
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          prefix[i + 1][static_cast<std::size_t>(a * d + b)] +=
              xs[i][static_cast<std::size_t>(a)] * (xs[i + 1][static_cast<std::size_t>(b)] - xs[i][static_cast<std::size_t>(b)]);
    }
    // QV prefix along the same partition
    std::vector<std::vector<double>> qv(part.size(), std::vector<double>(static_cast<std::size_t>(d * d), 0.0));
    for (std::size_t i = 0; i + 1 < part.size(); ++i) {
      qv[i + 1] = qv[i];
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          qv[i + 1][static_cast<std::size_t>(a * d + b)] +=
              (xs[i + 1][static_cast<std::size_t>(a)] - xs[i][static_cast<std::size_t>(a)]) * (xs[i + 1][static_cast<std::size_t>(b)] - xs[i][static_cast<std::size_t>(b)]);
    }
    GroupPath lift = lift_to_level(x, 2);
    double sdef = 0.0, mdev = 0.0;
    for (std::size_t i = 0; i < part.size(); i += std::max<std::size_t>(1, part.size() / 64)) {
      for (std::size_t j = i + 1; j < part.size(); j += std::max<std::size_t>(1, part.size() / 16)) {
        std::vector<double> xx2(static_cast<std::size_t>(d * d));
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            double integ = prefix[j][static_cast<std::size_t>(a * d + b)] - prefix[i][static_cast<std::size_t>(a * d + b)] -
                           xs[i][static_cast<std::size_t>(a)] * (xs[j][static_cast<std::size_t>(b)] - xs[i][static_cast<std::size_t>(b)]);
            double qvv = 0.5 * (qv[j][static_cast<std::size_t>(a * d + b)] - qv[i][static_cast<std::size_t>(a * d + b)]);
            xx2[static_cast<std::size_t>(a * d + b)] = integ + qvv;
          }
        GroupElement inc = lift.increment(part[i], part[j]);
        auto l2 = inc.tensor().block(2);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            double sym = 0.5 * (xx2[static_cast<std::size_t>(a * d + b)] + xx2[static_cast<std::size_t>(b * d + a)]) -
                         0.5 * (xs[j][static_cast<std::size_t>(a)] - xs[i][static_cast<std::size_t>(a)]) * (xs[j][static_cast<std::size_t>(b)] - xs[i][static_cast<std::size_t>(b)]);
            sdef = std::max(sdef, std::abs(sym));
            mdev = std::max(mdev, std::abs(xx2[static_cast<std::size_t>(a * d + b)] - l2[static_cast<std::size_t>(a * d + b)]));
          }
      }
    }
    rep.lift_symmetry_defect = sdef;
    rep.lift_vs_marcus = mdev;
  }

  // Eq E.9 route agreement for the controlled pair from a linear functional
  {
    GroupPath lift = lift_to_level(x, 2);
    Word w01{0, std::min(1, d - 1)};
    TruncatedTensor u = TruncatedTensor::basis(d, 2, w01);
    PathFunctional fu = linear_sig(u);
    PreparedPath pl(lift);
    ControlledPath cp;
    cp.y = [&](double s) { return gradient(fu, 1, s, pl); };
    cp.y_prime = [&](double s) { return gradient(fu, 2, s, pl); };
    IntegralResult rough = rough_integral(cp, lift, 1.0, MeshSchedule{1.0 / 16, 10, 1e-9});

    // partition-limit Young term along the nested partitions
    IntegralResult young_part;
    for (int n = depth_first; n <= depth_last; ++n) {
      auto part = make_part(n);
      Covector grad = [&](double s) { return gradient(fu, 1, s, pl); };
      young_part.mesh.push_back(std::pow(0.5, n));
      young_part.value.push_back(young_sum(grad, x, part));
    }
    finalize_diagnostics(young_part);

    // 0.5 * int Y' d[X,X]: jumps only for the piecewise linear class
    double qv_term = 0.0;
    for (double s : jumps) {
      std::vector<double> yp = left_gradient(fu, lift, s, 2);
      auto dx = x.jump_delta(s);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          qv_term += yp[static_cast<std::size_t>(a * d + b)] * dx[static_cast<std::size_t>(a)] * dx[static_cast<std::size_t>(b)];
    }
    qv_term *= 0.5;
    rep.e9_deviation = std::abs(rough.limit() - (young_part.limit() + qv_term));
  }

  return rep;
}

UatReport uat_fit(const PathFunctional& f, const GroupPath& xhat, int N, int grid_points,
                  int deriv_orders) {
  UatReport rep;
  rep.N = N;
  const int d = xhat.d();
  PreparedPath pp(xhat);
  const int sig_level = std::max(N, xhat.level() + 1);
  const SignaturePath& sp = pp.sig(sig_level);

  std::vector<double> grid = uniform_grid(0.0, 1.0, grid_points - 1, xhat.breakpoints());
  const std::int64_t cols = total_size(d, N);
  rep.cols = static_cast<int>(cols);

  // joint fit of F and its vertical derivatives up to the requested order:
  // the value rows alone leave the shift directions unconstrained inside the
  // kernel of the (shuffle-degenerate) design matrix
  std::int64_t deriv_words = 0;
  for (int k = 1; k <= deriv_orders; ++k) deriv_words += level_size(d, k);
  const std::int64_t rows = static_cast<std::int64_t>(grid.size()) * (1 + deriv_words);

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(cols));
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows));
  std::int64_t row = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    GroupElement g = sp.eval(grid[i]);
    for (std::int64_t c = 0; c < cols; ++c)
      A(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) =
          g.tensor().coeffs[static_cast<std::size_t>(c)];
    y(static_cast<Eigen::Index>(row)) = f.eval(grid[i], pp);
    ++row;
    for (int k = 1; k <= deriv_orders; ++k) {
      std::vector<double> truth = gradient(f, k, grid[i], pp);
      const std::int64_t nw = level_size(d, k);
      for (std::int64_t r = 0; r < nw; ++r) {
        Word suffix = word_from_rank(d, k, r);
        // column (J, suffix) pairs against the signature coefficient at J
        for (int lj = 0; lj + k <= N; ++lj) {
          const std::int64_t nj = level_size(d, lj);
          for (std::int64_t rj = 0; rj < nj; ++rj) {
            Word wcol = concat(word_from_rank(d, lj, rj), suffix);
            A(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(flat_index(d, wcol))) =
                g.tensor().coeffs[static_cast<std::size_t>(level_offset(d, lj) + rj)];
          }
        }
        y(static_cast<Eigen::Index>(row)) = truth[static_cast<std::size_t>(r)];
        ++row;
      }
    }
  }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  cod.setThreshold(1e-10);
  Eigen::VectorXd sol = cod.solve(y);
  rep.rank = static_cast<int>(cod.rank());
  rep.rank_deficient = rep.rank < rep.cols;

  TruncatedTensor u(d, N);
  for (std::int64_t c = 0; c < cols; ++c) u.coeffs[static_cast<std::size_t>(c)] = sol(static_cast<Eigen::Index>(c));
  rep.u = u;

  for (std::size_t i = 0; i < grid.size(); ++i) {
    GroupElement g = sp.eval(grid[i]);
    rep.sup_err_f = std::max(rep.sup_err_f, std::abs(pair(u, g) - f.eval(grid[i], pp)));
  }
  for (int k = 1; k <= deriv_orders; ++k) {
    double sup = 0.0;
    const std::int64_t nw = level_size(d, k);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::vector<double> truth = gradient(f, k, grid[i], pp);
      GroupElement g = sp.eval(grid[i]);
      for (std::int64_t r = 0; r < nw; ++r) {
        Word w = word_from_rank(d, k, r);
        double fitted = static_cast<int>(w.size()) <= u.level ? pair(shift_component(u, w), g) : 0.0;
        sup = std::max(sup, std::abs(fitted - truth[static_cast<std::size_t>(r)]));
      }
    }
    rep.sup_err_grad.push_back(sup);
  }
  return rep;
}

} // namespace cadlag
