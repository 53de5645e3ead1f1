#pragma once

#include "cadlag/functional.hpp"

// The theorem checks: functional Ito formulas (Young and rough), signature
// Taylor expansions, Foellmer quadratic variation, the RIE property, and a
// least-squares demonstration of the universal approximation theorem.

namespace cadlag {

struct ItoReport {
  double t = 1.0;
  double lhs = 0.0;          // F(t,X) - F(0,X)
  double compensator = 0.0;  // exact jump sum
  std::vector<double> mesh;
  std::vector<double> integral_per_mesh;
  std::vector<double> residual_per_mesh;
  double integral = 0.0;  // extrapolated
  double residual = 0.0;  // lhs - (integral + compensator)
  double observed_order = 0.0;
  bool converged = false;
  bool non_convergent = false;
};

ItoReport check_ito_young(const PathFunctional& f, const GroupPath& xhat, double t,
                          const MeshSchedule& sched = {});
ItoReport check_ito_rough(const PathFunctional& f, const GroupPath& xhat, double t,
                          const MeshSchedule& sched = {});

struct TaylorReport {
  int K = 2;
  double t = 1.0;
  std::vector<double> order_contrib;  // pairing of grad^j F(0) with the sig increment
  double partial_sum = 0.0;
  double remainder = 0.0;
  double value = 0.0;
  double defect = 0.0;  // value - partial_sum - remainder
};

TaylorReport taylor_expand(const PathFunctional& f, const GroupPath& xhat, double t, int K,
                           int remainder_grid = 4096);
// expansion of F(s, X (+)_t Y) around (t, X); continuous paths
TaylorReport taylor_at(const PathFunctional& f, const GroupPath& xhat, const GroupPath& yhat,
                       double t, double s, int K, int remainder_grid = 4096);

struct QVReport {
  std::vector<int> depths;
  std::vector<std::vector<double>> per_level;  // flattened d x d matrix at t
  std::vector<double> qv;                      // finest level
  std::vector<double> qv_cont;                 // [X]^c_t
  std::vector<double> jump_part;               // sum of jump squares
  bool converged = false;
};

QVReport foellmer_qv(const GroupPath& x, double t, int depth_first = 6, int depth_last = 14);

// Cor 5.7 form; throws std::invalid_argument when the second vertical
// derivative fails the symmetry hypothesis along the path
ItoReport check_foellmer_ito(const PathFunctional& f, const GroupPath& xhat, double t,
                             int depth_first = 6, int depth_last = 12);

struct RieReport {
  std::vector<int> depths;
  std::vector<double> uniform_dev;      // clause (i): sup |X^n - X|
  std::vector<double> riemann_dev;      // clause (ii): sup |I^n - I^{n+1}|
  std::vector<double> control_witness;  // clause (iii): per-depth max ratio
  bool clause_i = false;
  bool clause_ii = false;
  bool clause_iii = false;
  double lift_symmetry_defect = 0.0;  // |Sym(XX2) - x(x)^T/2| of the built lift
  double lift_vs_marcus = 0.0;        // distance to the canonical Marcus-like lift
  double e9_deviation = 0.0;
  bool holds() const { return clause_i && clause_ii && clause_iii; }
};

RieReport check_rie(const GroupPath& x, double p, int depth_first = 4, int depth_last = 10);

struct UatReport {
  int N = 2;
  int rank = 0;
  int cols = 0;
  bool rank_deficient = false;
  double sup_err_f = 0.0;
  std::vector<double> sup_err_grad;  // per derivative order 1..orders
  TruncatedTensor u;
};

UatReport uat_fit(const PathFunctional& f, const GroupPath& xhat, int N, int grid_points = 201,
                  int deriv_orders = 1);

} // namespace cadlag
