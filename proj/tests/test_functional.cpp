#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cadlag/fixtures.hpp"
#include "cadlag/functional.hpp"
#include "oracles.hpp"

using namespace cadlag;

namespace {

// paper directions 1,2 map to internal letters 0,1 on a raw d=2 path
PathFunctional levy2() { return levy_area(0, 1, 2); }

double vd(const PathFunctional& f, double t, const GroupPath& x, Word dirs) {
  return vertical_derivative(f, t, x, PerturbationPlan::for_word(std::move(dirs)));
}

} // namespace

TEST_CASE("builtin values") {
  // levy area on the two-segment path: F(1,X) = 1
  GroupPath ts = fixtures::two_segment();
  CHECK(eval_on(levy2(), 1.0, ts) == doctest::Approx(1.0));

  // compose(identity, u) equals linear_sig(u)
  TruncatedTensor u = TruncatedTensor::basis(2, 2, Word{0, 1});
  PathFunctional lin = linear_sig(u);
  PathFunctional cid = compose(Smooth::identity, u);
  GroupPath x = oracle::random_path(2, 4, 1);
  for (int i = 0; i <= 10; ++i) {
    double t = i / 10.0;
    CHECK(eval_on(lin, t, x) == doctest::Approx(eval_on(cid, t, x)).epsilon(1e-14));
  }

  // sin_time on a time-extended continuous path is sin(t)
  GroupPath ext = tracking_jumps_extend(fixtures::two_segment());
  PathFunctional st = sin_time(3);
  for (int i = 0; i <= 10; ++i) {
    double t = i / 10.0;
    CHECK(eval_on(st, t, ext) == doctest::Approx(std::sin(t)).epsilon(1e-12));
  }

  // u = eps_empty: F constant 1, derivatives vanish
  PathFunctional one = linear_sig(TruncatedTensor::unit(2, 1));
  CHECK(eval_on(one, 0.7, x) == doctest::Approx(1.0));
  CHECK(std::abs(vd(one, 0.5, x, Word{0})) < 1e-10);
  CHECK(std::abs(vd(one, 0.5, x, Word{1, 0})) < 1e-7);
}

TEST_CASE("marcus extension") {
  // raw integral evaluator, exact on continuous piecewise-linear paths
  PathFunctional raw = raw_levy(0, 1);
  auto f_cont = [raw](double t, const GroupPath& y) { return eval_on(raw, t, y); };
  PathFunctional ext = marcus_extend(f_cont, "levy-marcus");

  // on continuous paths: no change
  GroupPath cont = fixtures::two_segment();
  CHECK(eval_on(ext, 1.0, cont) == doctest::Approx(eval_on(raw, 1.0, cont)).epsilon(1e-12));

  // on jump paths: equals the canonical signature coefficient
  GroupPath j = fixtures::two_jump_drift();
  PathFunctional canon = levy2();
  for (double t : {0.4, 0.8, 1.0})
    CHECK(eval_on(ext, t, j) == doctest::Approx(eval_on(canon, t, j)).epsilon(1e-12));

  // pure-jump (1,1) at 1/2: Marcus value 1/2 (Young part 0, jump term 1/2)
  GroupPath pj = fixtures::pure_jump_11();
  CHECK(eval_on(ext, 1.0, pj) == doctest::Approx(0.5));
  CHECK(eval_on(canon, 1.0, pj) == doctest::Approx(0.5));
  // the raw evaluation misses the Marcus correction by dX1 dX2 / 2
  CHECK(eval_on(raw, 1.0, pj) == doctest::Approx(0.0));

  // constant functional extends to the same constant
  PathFunctional c = marcus_extend([](double, const GroupPath&) { return 4.25; }, "const");
  CHECK(eval_on(c, 0.3, j) == doctest::Approx(4.25));
}

TEST_CASE("vertical derivatives of the levy functional") {
  PathFunctional f = levy2();
  // fixed path with a jump before t plus random paths
  std::vector<GroupPath> paths;
  paths.push_back(fixtures::two_jump_drift());
  for (int i = 0; i < 4; ++i) paths.push_back(oracle::random_path(2, 3, i % 3));
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> ut(0.3, 0.95);
  for (auto& x : paths) {
    for (int rep = 0; rep < 2; ++rep) {
      double t = ut(gen);
      double x1 = x.point(t)[0];
      // paper: U2 F = X^1_t ; U1U2 F = 1 ; U2U1 F = 0 ; U1 F = 0
      CHECK(std::abs(vd(f, t, x, Word{1}) - x1) < 1e-6);
      CHECK(std::abs(vd(f, t, x, Word{0})) < 1e-6);
      CHECK(std::abs(vd(f, t, x, Word{0, 1}) - 1.0) < 1e-5);
      CHECK(std::abs(vd(f, t, x, Word{1, 0})) < 1e-5);
      CHECK(std::abs(vd(f, t, x, Word{0, 0})) < 1e-5);
      CHECK(std::abs(vd(f, t, x, Word{1, 1})) < 1e-5);
    }
  }
}

TEST_CASE("closed derivatives match finite differences") {
  GroupPath x = oracle::random_path(2, 3, 1);
  PreparedPath pp(x);

  TruncatedTensor u(2, 3);
  u.at(Word{0, 1}) = 1.0;
  u.at(Word{1, 0, 1}) = -0.7;
  u.at(Word{1}) = 0.4;
  std::vector<PathFunctional> fs{linear_sig(u), compose(Smooth::sin, u),
                                 compose(Smooth::square, TruncatedTensor::basis(2, 1, Word{0}))};
  for (auto& f : fs) {
    for (double t : {0.35, 0.7}) {
      for (int order = 1; order <= 3; ++order) {
        auto closed = gradient(f, order, t, pp);
        auto fd = gradient(f, order, t, pp, /*force_fd=*/true);
        for (std::size_t r = 0; r < closed.size(); ++r)
          CHECK(std::abs(closed[r] - fd[r]) < 1e-5);
      }
    }
  }
}

TEST_CASE("derivative engine details") {
  PathFunctional f = levy2();
  GroupPath x = fixtures::two_jump_drift();

  // delay independence: eps and eps/2
  for (Word dirs : {Word{1}, Word{0, 1}}) {
    PerturbationPlan a = PerturbationPlan::for_word(dirs);
    a.delays.assign(dirs.size(), 5e-3);
    PerturbationPlan b = PerturbationPlan::for_word(dirs);
    b.delays.assign(dirs.size(), 2.5e-3);
    CHECK(std::abs(vertical_derivative(f, 0.6, x, a) - vertical_derivative(f, 0.6, x, b)) < 1e-5);
  }

  // literal nested-transform construction agrees with the delayed form
  for (Word dirs : {Word{1}, Word{0, 1}, Word{1, 0}}) {
    PerturbationPlan lit = PerturbationPlan::for_word(dirs);
    lit.literal_marcus = true;
    PerturbationPlan del = PerturbationPlan::for_word(dirs);
    CHECK(std::abs(vertical_derivative(f, 0.55, x, lit) - vertical_derivative(f, 0.55, x, del)) < 1e-5);
  }

  // near t = 1 the delays do not fit and the path is compressed first
  CHECK(std::abs(vd(f, 1.0, x, Word{0, 1}) - 1.0) < 1e-5);

  // non-commutativity witness at 10 random (t, path)
  std::mt19937 gen(23);
  std::uniform_real_distribution<double> ut(0.2, 0.9);
  for (int i = 0; i < 10; ++i) {
    GroupPath xr = oracle::random_path(2, 3, i % 2);
    double t = ut(gen);
    double m12 = vd(f, t, xr, Word{0, 1});
    double m21 = vd(f, t, xr, Word{1, 0});
    CHECK(std::abs(m12 - m21 - 1.0) < 1e-4);
  }
}

TEST_CASE("invariance probes") {
  GroupPath x = fixtures::two_jump_drift();
  std::vector<PathFunctional> canon{levy2(), linear_sig(TruncatedTensor::basis(2, 2, Word{1, 0})),
                                    sup_norm()};
  for (auto& f : canon) {
    CHECK(invariance_probe(f, x, ProbeKind::reparametrization) < 1e-10);
    CHECK(invariance_probe(f, x, ProbeKind::stop) < 1e-10);
    CHECK(invariance_probe(f, x, ProbeKind::stretch) < 1e-10);
    CHECK(invariance_probe(f, x, ProbeKind::marcus_pair) < 1e-10);
  }

  // the raw cadlag integral is not Marcus canonical: the probe flags it with
  // a deviation at least half the product of the jump components
  PathFunctional raw = raw_levy(0, 1);
  double gap = 0.0;
  for (double jt : x.jump_times()) {
    auto dj = x.jump_delta(jt);
    gap += 0.5 * std::abs(dj[0] * dj[1]);
  }
  double dev = invariance_probe(raw, x, ProbeKind::marcus_pair);
  CHECK(dev >= 0.5 * std::abs(x.jump_delta(0.375)[0] * x.jump_delta(0.375)[1]) - 1e-12);
  CHECK(dev > 0.1);
  (void)gap;
}

TEST_CASE("non-anticipativity of the builtins") {
  GroupPath x = fixtures::two_jump_drift();
  std::vector<PathFunctional> fs{levy2(), linear_sig(TruncatedTensor::basis(2, 1, Word{1})),
                                 compose(Smooth::sin, TruncatedTensor::basis(2, 2, Word{0, 1})),
                                 sup_norm()};
  for (auto& f : fs) {
    for (int i = 1; i <= 10; ++i) {
      double t = i / 10.0;
      CHECK(std::abs(eval_on(f, t, x) - eval_on(f, t, stop(x, t))) < 1e-12);
    }
  }
}

TEST_CASE("sup norm sees jump bridges") {
  // pure jump of size (1,1): the bridge passes through values up to sqrt(2)
  GroupPath pj = fixtures::pure_jump_11();
  PathFunctional f = sup_norm();
  CHECK(eval_on(f, 1.0, pj) == doctest::Approx(std::sqrt(2.0)));
  CHECK(eval_on(f, 0.4, pj) == doctest::Approx(0.0));

  // monotone continuous path: sup attained at the endpoint
  GroupPath seg = path_from_points(1, {0.0, 1.0}, {{0.0}, {2.0}});
  CHECK(eval_on(f, 1.0, seg) == doctest::Approx(2.0));
}

TEST_CASE("continuity probe shrinks for var-continuous functionals") {
  GroupPath x = fixtures::two_segment();
  auto devs = continuity_probe(levy2(), x, 0.3, 5);
  for (std::size_t i = 1; i < devs.size(); ++i) CHECK(devs[i] <= devs[i - 1] + 1e-12);
}

TEST_CASE("richardson-refined stencils sharpen finite differences") {
  GroupPath x = oracle::random_path(2, 3, 1);
  // a functional with strong curvature so the h^2 truncation term is visible
  TruncatedTensor u(2, 2);
  u.at(Word{}) = 0.4;
  u.at(Word{0, 1}) = 2.0;
  u.at(Word{1}) = 1.5;
  PathFunctional f = compose(Smooth::exp, u);
  PreparedPath pp(x);
  double truth = f.closed_derivative(Word{1}, 0.5, pp);
  PerturbationPlan coarse = PerturbationPlan::for_word(Word{1});
  coarse.step = 0.05;  // deliberately large step
  PerturbationPlan refined = coarse;
  refined.richardson = true;
  double plain_err = std::abs(vertical_derivative(f, 0.5, x, coarse) - truth);
  double rich_err = std::abs(vertical_derivative(f, 0.5, x, refined) - truth);
  CHECK(rich_err < plain_err);
  CHECK(rich_err < 1e-4);
}
