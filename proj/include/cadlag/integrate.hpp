#pragma once

#include <functional>

#include "cadlag/path.hpp"

// Young and level-2 rough integrals as left-point (MRS) Riemann-sum limits
// over a halving mesh schedule. Every partition contains the breakpoints and
// jump times of both driver and integrand, which makes MRS and RRS coincide
// for the piecewise log-linear path class.

namespace cadlag {

// covector-valued integrand evaluated at partition points (right values)
using Covector = std::function<std::vector<double>(double)>;

struct MeshSchedule {
  double coarsest = 1.0 / 16;
  int levels = 12;
  double tolerance = 1e-9;  // non-convergence flag threshold on the last diff

  std::vector<double> meshes() const {
    std::vector<double> out;
    double h = coarsest;
    for (int i = 0; i < levels; ++i, h /= 2) out.push_back(h);
    return out;
  }
  static MeshSchedule quick() { return {1.0 / 16, 8, 1e-9}; }
};

struct IntegralResult {
  std::vector<double> mesh;
  std::vector<double> value;
  double richardson = 0.0;       // 2*v_n - v_{n-1}
  double observed_order = 0.0;   // log2 of successive-difference ratio
  bool converged = false;        // saturated the floating noise floor
  bool non_convergent = false;

  double limit() const { return richardson; }
};

// partition of [0,t]: uniform mesh h + all driver breakpoints + extras
std::vector<double> build_partition(const GroupPath& x, double t, double h,
                                    const std::vector<double>& extra = {});

IntegralResult young_integral(const Covector& y, const GroupPath& x, double t,
                              const MeshSchedule& sched = {},
                              const std::vector<double>& extra_breaks = {});

struct ControlledPath {
  Covector y;        // size d
  Covector y_prime;  // size d*d, word-major: entry (a,b) at a*d+b
  std::vector<double> breaks;
};

IntegralResult rough_integral(const ControlledPath& cp, const GroupPath& x, double t,
                              const MeshSchedule& sched = {},
                              const std::vector<double>& extra_breaks = {});

// single fixed-partition left-point sums (building blocks and diagnostics)
double young_sum(const Covector& y, const GroupPath& x, const std::vector<double>& partition);
double rough_sum(const ControlledPath& cp, const GroupPath& x, const std::vector<double>& partition);

// exact finite sum over jumps in (0,t]:
//   sum F(s) - F(s-) - gradF(s-).dx_s [- hessF(s-).dXX2_s]
// hess == nullptr gives the level-1 variant
double jump_compensator(const std::function<double(double)>& f_right,
                        const std::function<double(double)>& f_left,
                        const Covector& grad_left, const Covector* hess_left,
                        const GroupPath& x, double t);

// R^{F,F'}((s,t),X) = F(t) - F(s) - F'(s) . pi_1(X_{s,t})
double controlled_remainder(const std::function<double(double)>& f, const Covector& fp,
                            const GroupPath& x, double s, double t);

// grid r-variation of the remainder, (sum |R_{t_i,t_{i+1}}|^r)^{1/r} over a
// uniform grid refined by the path breakpoints; a measured diagnostic, not a
// certified supremum
double remainder_r_variation(const std::function<double(double)>& f, const Covector& fp,
                             const GroupPath& x, double r, int grid_n = 256);

void finalize_diagnostics(IntegralResult& r);

} // namespace cadlag
