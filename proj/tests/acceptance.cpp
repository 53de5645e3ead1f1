// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cadlag/fixtures.hpp"
#include "cadlag/verify.hpp"
#include "oracles.hpp"

using namespace cadlag;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int num, bool pass, const std::string& what, const std::string& detail) {
  std::printf("[%s] C%d %s (%s)\n", pass ? "PASS" : "FAIL", num, what.c_str(), detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

void c1_algebra() {
  Timer timer;
  double worst_roundtrip = 0.0, worst_shuffle = 0.0, worst_inverse = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    int d = 2 + trial % 2;
    int level = 2 + trial % 3;
    auto b = oracle::random_tensor(d, level, trial % 4 == 0 ? 8.0 : 1.5, true);
    worst_roundtrip = std::max(worst_roundtrip, max_abs(sub(log_trunc(exp_trunc(b)), b)));
  }
  std::mt19937 gen(41);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = oracle::random_group_like(2, 4, 3, 1.0);
    Word I, J;
    int li = 1 + static_cast<int>(gen() % 2);
    for (int i = 0; i < li; ++i) I.push_back(static_cast<int>(gen() % 2));
    for (int j = 0; j < 1 + static_cast<int>(gen() % (3 - li)); ++j) J.push_back(static_cast<int>(gen() % 2));
    double lhs = pair(TruncatedTensor::basis(2, 4, I), g) * pair(TruncatedTensor::basis(2, 4, J), g);
    double rhs = pair(shuffle_tensor(2, 4, I, J), g);
    worst_shuffle = std::max(worst_shuffle, std::abs(lhs - rhs));
    auto prod = group_mul(g, inverse(g)).tensor();
    worst_inverse = std::max(worst_inverse, max_abs(sub(prod, TruncatedTensor::unit(2, 4))));
  }
  double secs = timer.seconds();
  bool pass = worst_roundtrip < 1e-12 && worst_shuffle < 1e-10 && worst_inverse < 1e-12 &&
              secs < 1.0;
  report(1, pass, "algebra: exp/log roundtrip, shuffle identity, inverse",
         "roundtrip " + fmt(worst_roundtrip) + ", shuffle " + fmt(worst_shuffle) + ", inverse " +
             fmt(worst_inverse) + ", " + fmt(secs) + " s");
}

void c2_signature_oracle() {
  Timer timer;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    GroupPath x = oracle::random_path(2, 3, 0, 0.8);
    SignaturePath s(x, 3);
    auto sig = oracle::riemann_signature(x, 3, 10000);  // mesh 1e-4
    auto g = s.eval(1.0).tensor();
    for (auto& [w, val] : sig) worst = std::max(worst, std::abs(g.at(w) - val));
  }
  double secs = timer.seconds();
  bool pass = worst < 1e-3 && secs < 30.0;
  report(2, pass, "signature vs iterated Riemann-sum oracle on 10 random d=2 paths",
         "max dev " + fmt(worst) + ", " + fmt(secs) + " s");
}

void c3_chen_taylor() {
  Timer timer;
  std::vector<GroupPath> fixtures_list;
  fixtures_list.push_back(tracking_jumps_extend(fixtures::two_segment()));
  fixtures_list.push_back(tracking_jumps_extend(fixtures::two_jump_drift()));  // jump path
  fixtures_list.push_back(tracking_jumps_extend(fixtures::pure_jump_11()));
  fixtures_list.push_back(tracking_jumps_extend(fixtures::kinked_line()));
  fixtures_list.push_back(tracking_jumps_extend(oracle::random_path(2, 3, 1)));
  double worst = 0.0;
  for (auto& xe : fixtures_list) {
    TruncatedTensor u(xe.d(), 2);
    u.at(Word{1, std::min(2, xe.d() - 1)}) = 1.0;
    u.at(Word{0, 1}) = -0.5;
    TaylorReport rep = taylor_expand(linear_sig(u), xe, 1.0, 4);
    worst = std::max(worst, std::abs(rep.remainder));
    worst = std::max(worst, std::abs(rep.defect));
  }
  double secs = timer.seconds();
  bool pass = worst < 1e-10 && secs < 5.0;
  report(3, pass, "Chen exactness: degree-2 expansion at K=4 on 5 fixtures",
         "max |remainder|+|defect| " + fmt(worst) + ", " + fmt(secs) + " s");
}

void c4_young_benchmark() {
  Timer timer;
  GroupPath x = fixtures::oscillatory(8, 4096);
  // integrand x2, driver component x1
  GroupPath x1 = [&] {
    std::vector<std::vector<double>> pts;
    for (double bt : x.breakpoints()) pts.push_back({x.point(bt)[0]});
    return path_from_points(1, x.breakpoints(), pts);
  }();
  auto y = [&](double s) { return std::vector<double>{x.point(s)[1]}; };
  MeshSchedule sched{1.0 / 16, 11, 1e-9};  // finest mesh 2^-14 < 1e-4
  IntegralResult r = young_integral(y, x1, 1.0, sched);
  double target = 2.0 * M_PI;
  double dev = std::abs(r.value.back() - target);
  bool order_ok = r.observed_order >= 0.9 || r.converged;
  bool pass = dev < 1e-3 && order_ok;
  report(4, pass, "oscillatory Young benchmark returns 2*pi",
         "dev " + fmt(dev) + ", observed order " + fmt(r.observed_order) + ", " +
             fmt(timer.seconds()) + " s");
}

void c5_example_derivatives() {
  Timer timer;
  PathFunctional f = levy_area(0, 1, 2);
  std::mt19937 gen(57);
  std::uniform_real_distribution<double> ut(0.35, 0.95);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    // jump paths in the mix; jumps land before t by construction
    GroupPath x = oracle::random_path(2, 3, i % 2 == 0 ? 1 : 2);
    double t = ut(gen);
    auto vd = [&](Word w) {
      return vertical_derivative(f, t, x, PerturbationPlan::for_word(std::move(w)));
    };
    worst = std::max(worst, std::abs(vd(Word{1}) - x.point(t)[0]));  // U2 F = X^1_t
    worst = std::max(worst, std::abs(vd(Word{0, 1}) - 1.0));         // U1U2 F = 1
    worst = std::max(worst, std::abs(vd(Word{1, 0})));               // U2U1 F = 0
    worst = std::max(worst, std::abs(vd(Word{0})));                  // U1 F = 0
  }
  bool pass = worst < 1e-5;
  report(5, pass, "vertical-derivative fixture values at 10 random (t, path)",
         "max dev " + fmt(worst) + ", " + fmt(timer.seconds()) + " s");
}

std::vector<std::pair<std::string, PathFunctional>> ito_functionals(int d) {
  TruncatedTensor u3(d, 3);
  u3.at(Word{1, 2, 0}) = 1.0;
  u3.at(Word{2, 1}) = 0.4;
  TruncatedTensor u2(d, 2);
  u2.at(Word{1, 2}) = 1.0;
  u2.at(Word{0, 0}) = -0.3;
  std::vector<std::pair<std::string, PathFunctional>> out;
  out.emplace_back("linear-sig deg 3", linear_sig(u3));
  out.emplace_back("compose-sin", compose(Smooth::sin, u2));
  out.emplace_back("compose-square", compose(Smooth::square, TruncatedTensor::basis(d, 1, Word{1})));
  out.emplace_back("sin-time", sin_time(d));
  return out;
}

void c6_ito_young() {
  Timer timer;
  GroupPath xe = tracking_jumps_extend(fixtures::two_jump_drift());
  bool pass = true;
  std::string detail;
  for (auto& [name, f] : ito_functionals(xe.d())) {
    ItoReport rep = check_ito_young(f, xe, 1.0, MeshSchedule{1.0 / 16, 12, 1e-9});
    auto& r = rep.residual_per_mesh;
    bool decreasing = std::abs(r[r.size() - 1]) < std::abs(r[r.size() - 2]) &&
                      std::abs(r[r.size() - 2]) < std::abs(r[r.size() - 3]);
    bool ok = std::abs(rep.residual) < 1e-6 && decreasing;
    pass = pass && ok;
    detail += name + " " + fmt(std::abs(rep.residual)) + "; ";
  }
  report(6, pass, "functional Ito formula (Young) on a 2-jump extended path",
         detail + fmt(timer.seconds()) + " s");
}

void c7_ito_rough() {
  Timer timer;
  GroupPath xe = tracking_jumps_extend(fixtures::two_jump_drift());
  GroupPath xe2 = lift_to_level(xe, 2);
  bool pass = xe2.marcus_like_defect() < 1e-12;
  std::string detail;
  for (auto& [name, f] : ito_functionals(xe.d())) {
    ItoReport rough = check_ito_rough(f, xe2, 1.0, MeshSchedule{1.0 / 16, 12, 1e-9});
    ItoReport young = check_ito_young(f, xe, 1.0, MeshSchedule{1.0 / 16, 12, 1e-9});
    double route_gap = std::abs((rough.integral + rough.compensator) -
                                (young.integral + young.compensator));
    bool ok = std::abs(rough.residual) < 1e-5 && route_gap < 1e-6;
    pass = pass && ok;
    detail += name + " " + fmt(std::abs(rough.residual)) + "/" + fmt(route_gap) + "; ";
  }
  report(7, pass, "functional Ito formula (rough) and the finite-variation route",
         detail + fmt(timer.seconds()) + " s");
}

void c8_foellmer() {
  Timer timer;
  QVReport qv = foellmer_qv(fixtures::qv_steps(), 1.0, 6, 14);
  bool qv_ok = std::abs(qv.qv[0] - 5.0) < 1e-10 && std::abs(qv.qv_cont[0]) < 1e-10;

  GroupPath xe2 = lift_to_level(tracking_jumps_extend(fixtures::two_jump_drift()), 2);
  PathFunctional sym1 = compose(Smooth::square, TruncatedTensor::basis(3, 1, Word{1}));
  PathFunctional sym2 = linear_sig(TruncatedTensor::basis(3, 2, Word{1, 1}));
  ItoReport r1 = check_foellmer_ito(sym1, xe2, 1.0, 6, 12);
  ItoReport r2 = check_foellmer_ito(sym2, xe2, 1.0, 6, 12);
  bool formula_ok = std::abs(r1.residual) < 1e-5 && std::abs(r2.residual) < 1e-5;

  bool refused = false;
  try {
    check_foellmer_ito(linear_sig(TruncatedTensor::basis(3, 2, Word{1, 2})), xe2, 1.0, 6, 8);
  } catch (const std::invalid_argument&) {
    refused = true;
  }
  bool pass = qv_ok && formula_ok && refused;
  report(8, pass, "Foellmer QV fixture, Cor-5.7 formula, asymmetric refusal",
         "[X]_1 " + fmt(qv.qv[0]) + ", residuals " + fmt(std::abs(r1.residual)) + "/" +
             fmt(std::abs(r2.residual)) + ", refused " + (refused ? "yes" : "no") + ", " +
             fmt(timer.seconds()) + " s");
}

void c9_rie() {
  Timer timer;
  RieReport a = check_rie(fixtures::kinked_line(), 2.5, 4, 10);
  RieReport b = check_rie(fixtures::qv_steps(), 2.5, 4, 10);
  bool pass = a.holds() && b.holds() && a.e9_deviation < 1e-5 && b.e9_deviation < 1e-5;
  report(9, pass, "RIE clauses (i)-(iii) on two fixtures with Eq-E.9 agreement",
         "e9 " + fmt(a.e9_deviation) + "/" + fmt(b.e9_deviation) + ", " + fmt(timer.seconds()) +
             " s");
}

void c10_invariance_battery() {
  Timer timer;
  GroupPath x = fixtures::two_jump_drift();
  GroupPath xe = tracking_jumps_extend(x);

  // every Marcus canonical builtin, on its natural path
  std::vector<std::pair<PathFunctional, const GroupPath*>> battery;
  TruncatedTensor u(3, 2);
  u.at(Word{1, 2}) = 1.0;
  u.at(Word{0}) = 0.2;
  battery.emplace_back(linear_sig(u), &xe);
  battery.emplace_back(levy_area(0, 1, 2), &x);
  battery.emplace_back(sup_norm(), &x);
  battery.emplace_back(compose(Smooth::sin, u), &xe);
  battery.emplace_back(sin_time(3), &xe);

  double worst = 0.0;
  for (auto& [f, px] : battery) {
    worst = std::max(worst, invariance_probe(f, *px, ProbeKind::reparametrization));
    worst = std::max(worst, invariance_probe(f, *px, ProbeKind::stop));
    worst = std::max(worst, invariance_probe(f, *px, ProbeKind::stretch));
    worst = std::max(worst, invariance_probe(f, *px, ProbeKind::marcus_pair));
  }

  // delay independence for the differentiable builtins
  double worst_delay = 0.0;
  for (auto& [f, px] : battery) {
    if (!f.closed_derivative) continue;
    for (Word dirs : {Word{1}, Word{0, 1}}) {
      PerturbationPlan pa = PerturbationPlan::for_word(dirs);
      pa.delays.assign(dirs.size(), 6e-3);
      PerturbationPlan pb = PerturbationPlan::for_word(dirs);
      pb.delays.assign(dirs.size(), 3e-3);
      worst_delay = std::max(worst_delay, std::abs(vertical_derivative(f, 0.6, *px, pa) -
                                                   vertical_derivative(f, 0.6, *px, pb)));
    }
  }

  // the raw cadlag integral must be flagged on the designed jump fixture
  double raw_dev = invariance_probe(raw_levy(0, 1), x, ProbeKind::marcus_pair);

  bool pass = worst < 1e-5 && worst_delay < 1e-5 && raw_dev > 0.1;
  report(10, pass, "invariance battery and non-canonical detection",
         "canonical max " + fmt(worst) + ", delay " + fmt(worst_delay) + ", raw dev " +
             fmt(raw_dev) + ", " + fmt(timer.seconds()) + " s");
}

void c11_uat() {
  Timer timer;
  GroupPath ext = tracking_jumps_extend(fixtures::two_segment());
  PathFunctional f = compose(Smooth::sin, TruncatedTensor::basis(3, 1, Word{0}));
  double prev_f = 1e300, last_f = 0.0, last_g = 0.0;
  bool monotone = true;
  for (int n : {2, 4, 6}) {
    UatReport rep = uat_fit(f, ext, n, 161, 1);
    monotone = monotone && rep.sup_err_f <= prev_f + 1e-15;
    prev_f = rep.sup_err_f;
    last_f = rep.sup_err_f;
    last_g = rep.sup_err_grad[0];
  }
  bool pass = monotone && last_f < 1e-2 && last_g < 1e-1;
  report(11, pass, "signature regression of sin(Z_t): errors shrink over N=2,4,6",
         "final F err " + fmt(last_f) + ", grad err " + fmt(last_g) + ", " +
             fmt(timer.seconds()) + " s");
}

} // namespace

int main() {
  c1_algebra();
  c2_signature_oracle();
  c3_chen_taylor();
  c4_young_benchmark();
  c5_example_derivatives();
  c6_ito_young();
  c7_ito_rough();
  c8_foellmer();
  c9_rie();
  c10_invariance_battery();
  c11_uat();
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 11 criteria passed\n");
  return 0;
}
