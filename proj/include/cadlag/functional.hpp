#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "cadlag/integrate.hpp"
#include "cadlag/marcus.hpp"
#include "cadlag/signature.hpp"

// Path functionals F(t, X), the worked builtins, Marcus-canonical extension,
// and the delayed-perturbation vertical derivative engine.

namespace cadlag {

// Immutable path plus lazily cached derived objects (signatures per level,
// default Marcus transform). Functional evaluators receive this so repeated
// evaluations along one path share the caches. Thread-safe.
class PreparedPath {
 public:
  explicit PreparedPath(GroupPath p) : path_(std::move(p)) {}
  PreparedPath(const PreparedPath&) = delete;
  PreparedPath& operator=(const PreparedPath&) = delete;

  const GroupPath& path() const { return path_; }
  const SignaturePath& sig(int N) const;
  const MarcusTransform& marcus() const;

 private:
  GroupPath path_;
  mutable std::mutex mu_;
  mutable std::map<int, std::shared_ptr<SignaturePath>> sigs_;
  mutable std::shared_ptr<MarcusTransform> marcus_;
};

struct PathFunctional {
  std::string name;
  bool non_anticipative = true;
  bool marcus_canonical = true;
  int closed_derivative_order = 0;  // 0: finite differences only
  std::optional<TruncatedTensor> sig_rep;

  std::function<double(double, const PreparedPath&)> eval;
  // closed-form vertical derivative in the direction word I (|I| >= 1);
  // component I corresponds to perturbing in temporal order I[0], I[1], ...
  std::function<double(const Word&, double, const PreparedPath&)> closed_derivative;
};

double eval_on(const PathFunctional& f, double t, const GroupPath& x);

// ---- builtins -------------------------------------------------------------
PathFunctional linear_sig(TruncatedTensor u);
PathFunctional levy_area(int letter_a, int letter_b, int d);
PathFunctional sup_norm();
enum class Smooth { identity, square, sin, cos, exp };
PathFunctional compose(Smooth f, TruncatedTensor u);
PathFunctional sin_time(int d);
// the non-canonical int X^a dX^b of a raw cadlag path (left-point limit)
PathFunctional raw_levy(int letter_a, int letter_b);

// extends a functional defined on continuous paths to cadlag paths by
// evaluating at (mu_t, Marcus transform)
PathFunctional marcus_extend(std::function<double(double, const GroupPath&)> f_cont,
                             std::string name);

// ---- vertical derivatives -------------------------------------------------
struct PerturbationPlan {
  Word directions;             // temporal order of the perturbations
  std::vector<double> delays;  // empty -> 1e-2/k each
  double step = 0.0;           // 0 -> 1e-4 (order 1) / 1e-3 (orders 2,3)
  bool literal_marcus = false; // run the nested transform construction instead
                               // of the delayed perturbation of the original path
  bool richardson = false;     // combine steps h and h/2 to cancel the h^2 term

  static PerturbationPlan for_word(Word w) {
    PerturbationPlan p;
    p.directions = std::move(w);
    return p;
  }
};

double vertical_derivative(const PathFunctional& f, double t, const GroupPath& x,
                           const PerturbationPlan& plan);

// flat tensor of order k (word-major), closed forms when available
std::vector<double> gradient(const PathFunctional& f, int order, double t,
                             const PreparedPath& x, bool force_fd = false);

enum class ProbeKind { reparametrization, stop, stretch, marcus_pair };
double invariance_probe(const PathFunctional& f, const GroupPath& x, ProbeKind kind);

// diagnostic only: deviations under vertical bumps of shrinking size
std::vector<double> continuity_probe(const PathFunctional& f, const GroupPath& x,
                                     double t, int steps = 6);

// splits the covering segment at t (if needed) and multiplies a jump onto the
// path from t onward
GroupPath insert_jump(const GroupPath& x, double t, const TruncatedTensor& log_jump);

} // namespace cadlag
