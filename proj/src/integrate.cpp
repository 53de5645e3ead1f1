#include "cadlag/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>

namespace cadlag {
namespace {

constexpr double kMergeEps = 1e-14;

int worker_cap() {
  const char* env = std::getenv("CADLAG_ROUGH_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n > 0 ? n : 1;
}

// mesh levels are independent; results land in fixed slots so the output is
// identical regardless of the worker count
template <typename Fn>
std::vector<double> run_levels(const std::vector<double>& meshes, Fn&& level_value) {
  std::vector<double> out(meshes.size());
  const int cap = worker_cap();
  if (cap <= 1) {
    for (std::size_t i = 0; i < meshes.size(); ++i) out[i] = level_value(meshes[i]);
    return out;
  }
  std::size_t next = 0;
  while (next < meshes.size()) {
    std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(cap), meshes.size() - next);
    std::vector<std::future<double>> futs;
    for (std::size_t k = 0; k < batch; ++k)
      futs.push_back(std::async(std::launch::async, level_value, meshes[next + k]));
    for (std::size_t k = 0; k < batch; ++k) out[next + k] = futs[k].get();
    next += batch;
  }
  return out;
}

} // namespace

std::vector<double> build_partition(const GroupPath& x, double t, double h,
                                    const std::vector<double>& extra) {
  std::vector<double> pts;
  const int n = std::max(1, static_cast<int>(std::ceil(t / h)));
  for (int i = 0; i <= n; ++i) pts.push_back(t * i / n);
  for (double b : x.breakpoints())
    if (b < t) pts.push_back(b);
  for (double b : extra)
    if (b > 0.0 && b < t) pts.push_back(b);
  pts.push_back(t);
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double v : pts)
    if (out.empty() || v - out.back() > kMergeEps) out.push_back(v);
  if (out.back() != t) out.back() = t;
  return out;
}

double young_sum(const Covector& y, const GroupPath& x, const std::vector<double>& partition) {
  double acc = 0.0;
  std::vector<double> prev_pt = x.point(partition.front());
  for (std::size_t i = 0; i + 1 < partition.size(); ++i) {
    std::vector<double> yv = y(partition[i]);
    std::vector<double> next_pt = x.point(partition[i + 1]);
    for (std::size_t c = 0; c < yv.size(); ++c) acc += yv[c] * (next_pt[c] - prev_pt[c]);
    prev_pt = std::move(next_pt);
  }
  return acc;
}

double rough_sum(const ControlledPath& cp, const GroupPath& x, const std::vector<double>& partition) {
  if (x.level() < 2) throw std::invalid_argument("rough integral needs a level-2 driver");
  double acc = 0.0;
  GroupElement prev = x.eval(partition.front());
  const int d = x.d();
  for (std::size_t i = 0; i + 1 < partition.size(); ++i) {
    GroupElement next = x.eval(partition[i + 1]);
    GroupElement inc = group_mul(inverse(prev), next);
    auto lvl1 = inc.tensor().block(1);
    auto lvl2 = inc.tensor().block(2);
    std::vector<double> yv = cp.y(partition[i]);
    std::vector<double> ypv = cp.y_prime(partition[i]);
    for (int c = 0; c < d; ++c) acc += yv[static_cast<std::size_t>(c)] * lvl1[static_cast<std::size_t>(c)];
    for (int a = 0; a < d * d; ++a) acc += ypv[static_cast<std::size_t>(a)] * lvl2[static_cast<std::size_t>(a)];
    prev = std::move(next);
  }
  return acc;
}

void finalize_diagnostics(IntegralResult& r) {
  const std::size_t n = r.value.size();
  if (n == 0) return;
  r.richardson = n >= 2 ? 2.0 * r.value[n - 1] - r.value[n - 2] : r.value.back();
  const double scale = std::max(1.0, std::abs(r.value.back()));
  const double floor = 1e-12 * scale;
  if (n < 3) {
    r.converged = n >= 2 && std::abs(r.value[n - 1] - r.value[n - 2]) <= floor;
    return;
  }
  const double d1 = std::abs(r.value[n - 2] - r.value[n - 3]);
  const double d2 = std::abs(r.value[n - 1] - r.value[n - 2]);
  if (d2 <= floor) {
    // noise floor reached; rate no longer measurable
    r.converged = true;
    r.observed_order = d1 > floor ? std::min(std::log2(d1 / std::max(d2, floor * 1e-3)), 8.0) : 4.0;
  } else {
    r.observed_order = std::log2(d1 / d2);
    r.non_convergent = d2 > 1e-9 * scale && d2 >= d1;
  }
}

IntegralResult young_integral(const Covector& y, const GroupPath& x, double t,
                              const MeshSchedule& sched, const std::vector<double>& extra_breaks) {
  IntegralResult r;
  r.mesh = sched.meshes();
  r.value = run_levels(r.mesh, [&](double h) {
    return young_sum(y, x, build_partition(x, t, h, extra_breaks));
  });
  finalize_diagnostics(r);
  return r;
}

IntegralResult rough_integral(const ControlledPath& cp, const GroupPath& x, double t,
                              const MeshSchedule& sched, const std::vector<double>& extra_breaks) {
  IntegralResult r;
  std::vector<double> extras = extra_breaks;
  extras.insert(extras.end(), cp.breaks.begin(), cp.breaks.end());
  r.mesh = sched.meshes();
  r.value = run_levels(r.mesh, [&](double h) {
    return rough_sum(cp, x, build_partition(x, t, h, extras));
  });
  finalize_diagnostics(r);
  return r;
}

double jump_compensator(const std::function<double(double)>& f_right,
                        const std::function<double(double)>& f_left,
                        const Covector& grad_left, const Covector* hess_left,
                        const GroupPath& x, double t) {
  double acc = 0.0;
  for (double s : x.jump_times()) {
    if (s > t || s <= 0.0) continue;
    GroupElement jmp = x.jump(s);
    auto dx = jmp.tensor().block(1);
    double term = f_right(s) - f_left(s);
    std::vector<double> g = grad_left(s);
    for (std::size_t c = 0; c < g.size(); ++c) term -= g[c] * dx[c];
    if (hess_left) {
      auto dxx = jmp.tensor().block(2);
      std::vector<double> hv = (*hess_left)(s);
      for (std::size_t a = 0; a < hv.size(); ++a) term -= hv[a] * dxx[a];
    }
    acc += term;
  }
  return acc;
}

double controlled_remainder(const std::function<double(double)>& f, const Covector& fp,
                            const GroupPath& x, double s, double t) {
  if (s > t) throw std::invalid_argument("remainder needs s <= t");
  GroupElement inc = x.increment(s, t);
  auto dx = inc.tensor().block(1);
  double r = f(t) - f(s);
  std::vector<double> g = fp(s);
  for (std::size_t c = 0; c < g.size(); ++c) r -= g[c] * dx[c];
  return r;
}

double remainder_r_variation(const std::function<double(double)>& f, const Covector& fp,
                             const GroupPath& x, double r, int grid_n) {
  if (r < 0.5) throw std::invalid_argument("variation exponent too small");
  std::vector<double> grid = build_partition(x, 1.0, 1.0 / std::max(1, grid_n));
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    acc += std::pow(std::abs(controlled_remainder(f, fp, x, grid[i], grid[i + 1])), r);
  return std::pow(acc, 1.0 / r);
}

} // namespace cadlag
