#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cadlag/kernels.hpp"
#include "cadlag/tensor.hpp"
#include "oracles.hpp"

using namespace cadlag;

namespace {
const Word W1{0};
const Word W2{1};
}

TEST_CASE("kernel variants agree with the scalar reference") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto& scalar = kernels::scalar_ops();
  const auto& act = kernels::active();
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 1 + static_cast<std::size_t>(trial * 7 % 93);
    std::vector<double> x(n), y0(n), y1(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = u(gen);
      y0[i] = y1[i] = u(gen);
    }
    double a = u(gen);
    scalar.axpy(y0.data(), x.data(), a, n);
    act.axpy(y1.data(), x.data(), a, n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y0[i] == doctest::Approx(y1[i]).epsilon(1e-13));
    CHECK(scalar.dot(x.data(), y0.data(), n) ==
          doctest::Approx(act.dot(x.data(), y0.data(), n)).epsilon(1e-13));
    scalar.add(y0.data(), x.data(), n);
    act.add(y1.data(), x.data(), n);
    scalar.scale(y0.data(), a, n);
    act.scale(y1.data(), a, n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y0[i] == doctest::Approx(y1[i]).epsilon(1e-13));
  }
}

TEST_CASE("word indexing is a bijection") {
  for (int d : {1, 2, 3}) {
    for (int k = 0; k <= 4; ++k) {
      for (std::int64_t r = 0; r < level_size(d, k); ++r) {
        Word w = word_from_rank(d, k, r);
        CHECK(word_rank(d, w) == r);
        CHECK(flat_index(d, w) == level_offset(d, k) + r);
      }
    }
  }
}

TEST_CASE("tensor multiplication matches the word-splitting oracle") {
  for (int trial = 0; trial < 10; ++trial) {
    auto a = oracle::random_tensor(2, 4);
    auto b = oracle::random_tensor(2, 4);
    auto fast = tensor_mul(a, b);
    auto slow = oracle::naive_mul(a, b);
    CHECK(max_abs(sub(fast, slow)) < 1e-12);
  }
  auto a3 = oracle::random_tensor(3, 3);
  auto b3 = oracle::random_tensor(3, 3);
  CHECK(max_abs(sub(tensor_mul(a3, b3), oracle::naive_mul(a3, b3))) < 1e-12);
}

TEST_CASE("worked products") {
  // (1+e1)(1+e2) = 1 + e1 + e2 + e12 at d=2, N=2
  auto a = add(TruncatedTensor::unit(2, 2), TruncatedTensor::basis(2, 2, W1));
  auto b = add(TruncatedTensor::unit(2, 2), TruncatedTensor::basis(2, 2, W2));
  auto c = tensor_mul(a, b);
  CHECK(c.at(Word{}) == doctest::Approx(1.0));
  CHECK(c.at(W1) == doctest::Approx(1.0));
  CHECK(c.at(W2) == doctest::Approx(1.0));
  CHECK(c.at(Word{0, 1}) == doctest::Approx(1.0));
  CHECK(c.at(Word{1, 0}) == doctest::Approx(0.0));

  // a x 1 = a
  auto id = TruncatedTensor::unit(2, 2);
  CHECK(max_abs(sub(tensor_mul(a, id), a)) == 0.0);

  // exp(e1) x exp(e1) = exp(2 e1) at N=3
  auto e1 = TruncatedTensor::basis(2, 3, W1);
  auto lhs = tensor_mul(exp_trunc(e1).tensor(), exp_trunc(e1).tensor());
  auto rhs = oracle::naive_exp(scaled(e1, 2.0));
  CHECK(max_abs(sub(lhs, rhs)) < 1e-12);
}

TEST_CASE("associativity on random triples") {
  for (int trial = 0; trial < 5; ++trial) {
    auto a = oracle::random_tensor(2, 4);
    auto b = oracle::random_tensor(2, 4);
    auto c = oracle::random_tensor(2, 4);
    auto l = tensor_mul(tensor_mul(a, b), c);
    auto r = tensor_mul(a, tensor_mul(b, c));
    CHECK(max_abs(sub(l, r)) < 1e-12);
  }
}

TEST_CASE("inverse") {
  // 1 -> 1
  auto id = GroupElement::identity(2, 3);
  CHECK(max_abs(sub(inverse(id).tensor(), id.tensor())) == 0.0);

  // (1+e1) at N=2 -> 1 - e1 + e11
  auto g = GroupElement(add(TruncatedTensor::unit(2, 2), TruncatedTensor::basis(2, 2, W1)));
  auto gi = inverse(g).tensor();
  CHECK(gi.at(Word{}) == doctest::Approx(1.0));
  CHECK(gi.at(W1) == doctest::Approx(-1.0));
  CHECK(gi.at(Word{0, 0}) == doctest::Approx(1.0));

  // exp(e1+e2)^{-1} = exp(-e1-e2); product collapses to 1
  TruncatedTensor v(2, 2);
  v.at(W1) = 1.0;
  v.at(W2) = 1.0;
  auto e = exp_trunc(v);
  CHECK(max_abs(sub(inverse(e).tensor(), exp_trunc(scaled(v, -1.0)).tensor())) < 1e-12);
  for (int trial = 0; trial < 20; ++trial) {
    auto h = oracle::random_group_like(2, 4, 3, 1.5);
    auto prod = group_mul(h, inverse(h)).tensor();
    CHECK(max_abs(sub(prod, TruncatedTensor::unit(2, 4))) < 1e-12);
  }
}

TEST_CASE("exp and log") {
  // exp(e1) = 1 + e1 + e11/2
  auto e1 = TruncatedTensor::basis(2, 2, W1);
  auto g = exp_trunc(e1).tensor();
  CHECK(g.at(Word{}) == doctest::Approx(1.0));
  CHECK(g.at(W1) == doctest::Approx(1.0));
  CHECK(g.at(Word{0, 0}) == doctest::Approx(0.5));

  // exp(0) = 1
  CHECK(max_abs(sub(exp_trunc(TruncatedTensor(2, 3)).tensor(), TruncatedTensor::unit(2, 3))) == 0.0);

  // log(1 + e1 + e2 + e12) = e1 + e2 + (e12 - e21)/2, against the series oracle
  auto x = TruncatedTensor::unit(2, 2);
  x.at(W1) = 1.0;
  x.at(W2) = 1.0;
  x.at(Word{0, 1}) = 1.0;
  auto lg = log_trunc(GroupElement(x));
  CHECK(max_abs(sub(lg, oracle::naive_log(x))) < 1e-14);
  CHECK(lg.at(W1) == doctest::Approx(1.0));
  CHECK(lg.at(Word{0, 1}) == doctest::Approx(0.5));
  CHECK(lg.at(Word{1, 0}) == doctest::Approx(-0.5));
}

TEST_CASE("exp/log roundtrip") {
  // moderate level, coefficients up to 10 in magnitude
  for (int trial = 0; trial < 30; ++trial) {
    int d = 2 + trial % 2;
    int level = 2 + trial % 3;
    auto b = oracle::random_tensor(d, level, trial % 5 == 0 ? 10.0 : 1.0, true);
    auto back = log_trunc(exp_trunc(b));
    CHECK(max_abs(sub(back, b)) < 1e-12);
  }
}

TEST_CASE("shuffle") {
  // (1) sh (2) = (1,2) + (2,1)
  auto s = shuffle(W1, W2);
  CHECK(s.size() == 2);
  CHECK(s[Word{0, 1}] == 1);
  CHECK(s[Word{1, 0}] == 1);

  // I sh empty = I
  auto s2 = shuffle(Word{0, 1}, Word{});
  CHECK(s2.size() == 1);
  CHECK(s2[Word{0, 1}] == 1);

  // (1,1) sh (1) = 3 (1,1,1)
  auto s3 = shuffle(Word{0, 0}, Word{0});
  CHECK(s3.size() == 1);
  CHECK(s3[Word{0, 0, 0}] == 3);

  // interleaving-count oracle on random word pairs
  std::mt19937 gen(3);
  for (int trial = 0; trial < 10; ++trial) {
    Word I, J;
    for (int i = 0; i < 2 + trial % 2; ++i) I.push_back(static_cast<int>(gen() % 2));
    for (int j = 0; j < 1 + trial % 3; ++j) J.push_back(static_cast<int>(gen() % 2));
    std::map<Word, long long> expect;
    oracle::enumerate_shuffles(I, J, expect);
    CHECK(shuffle(I, J) == expect);
  }
}

TEST_CASE("shuffle identity pairs products of coordinates") {
  for (int trial = 0; trial < 50; ++trial) {
    auto g = oracle::random_group_like(2, 4, 3, 1.0);
    std::mt19937 gen(static_cast<unsigned>(100 + trial));
    Word I, J;
    for (int i = 0; i < 1 + trial % 2; ++i) I.push_back(static_cast<int>(gen() % 2));
    for (int j = 0; j < 1 + (trial / 2) % 2; ++j) J.push_back(static_cast<int>(gen() % 2));
    double lhs = pair(TruncatedTensor::basis(2, 4, I), g) * pair(TruncatedTensor::basis(2, 4, J), g);
    double rhs = pair(shuffle_tensor(2, 4, I, J), g);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("shifts") {
  // shift(e12, 1): component (2) is e1, component (1) is 0
  auto u = TruncatedTensor::basis(2, 2, Word{0, 1});
  auto comp2 = shift_component(u, Word{1});
  CHECK(comp2.at(W1) == doctest::Approx(1.0));
  auto comp1 = shift_component(u, Word{0});
  CHECK(max_abs(comp1) == 0.0);

  // shift(u, 0) = u
  auto r = oracle::random_tensor(2, 3);
  CHECK(max_abs(sub(shift_component(r, Word{}), r)) == 0.0);

  // shift(e121, 2) at (2,1) is e1
  auto u3 = TruncatedTensor::basis(2, 3, Word{0, 1, 0});
  auto c = shift_component(u3, Word{1, 0});
  CHECK(c.at(W1) == doctest::Approx(1.0));
  CHECK(max_abs(c) == doctest::Approx(1.0));

  // composing single shifts prepends: shift-by-j of shift-by-i = shift-by-(j,i)
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      auto once = shift_component(shift_component(r, Word{i}), Word{j});
      auto twice = shift_component(r, Word{j, i});
      CHECK(max_abs(sub(once, twice)) == 0.0);
    }

  // prefix-enumeration oracle
  auto big = oracle::random_tensor(2, 4);
  for (auto& I : oracle::all_words(2, 2)) {
    auto comp = shift_component(big, I);
    for (auto& J : oracle::all_words(2, 4 - static_cast<int>(I.size()))) {
      CHECK(comp.at(J) == doctest::Approx(big.at(cadlag::concat(J, I))));
    }
  }
}

TEST_CASE("pairing") {
  auto g = oracle::random_group_like(2, 3, 2, 1.0);
  CHECK(pair(TruncatedTensor::basis(2, 3, Word{}), g) == doctest::Approx(1.0));

  // <e11, exp(2 e1)> = 2
  auto e = exp_trunc(scaled(TruncatedTensor::basis(2, 2, W1), 2.0));
  CHECK(pair(TruncatedTensor::basis(2, 2, Word{0, 0}), e) == doctest::Approx(2.0));

  // <e1 sh e2, exp(e1+e2)> = <e1,.><e2,.> = 1
  TruncatedTensor v(2, 2);
  v.at(W1) = 1.0;
  v.at(W2) = 1.0;
  auto ge = exp_trunc(v);
  CHECK(pair(shuffle_tensor(2, 2, W1, W2), ge) == doctest::Approx(1.0));
}

TEST_CASE("homogeneous norm") {
  CHECK(homogeneous_norm(GroupElement::identity(2, 2)) == 0.0);
  CHECK(homogeneous_norm(exp_trunc(TruncatedTensor::basis(2, 2, W1))) == doctest::Approx(1.0));

  // exp of the level-2 antisymmetric element: norm (2*|area|)^(1/2)
  TruncatedTensor a(2, 2);
  a.at(Word{0, 1}) = 0.5;
  a.at(Word{1, 0}) = -0.5;
  double n = homogeneous_norm(exp_trunc(a));
  double expect = std::sqrt(2.0 * std::sqrt(0.5 * 0.5 * 2.0));
  CHECK(n == doctest::Approx(expect).epsilon(1e-12));

  // homogeneous of degree 1 under dilation of the log
  for (int trial = 0; trial < 10; ++trial) {
    auto b = oracle::random_tensor(2, 3, 1.0, true);
    double lam = 0.3 + 0.2 * trial;
    double n1 = homogeneous_norm(exp_trunc(dilate(b, lam)));
    double n0 = homogeneous_norm(exp_trunc(b));
    CHECK(n1 == doctest::Approx(lam * n0).epsilon(1e-10));
  }
}

TEST_CASE("group closure keeps the level-2 log block antisymmetric") {
  for (int trial = 0; trial < 20; ++trial) {
    auto g = oracle::random_group_like(2, 2, 4, 1.0);
    auto h = oracle::random_group_like(2, 2, 3, 1.0);
    auto lg = log_trunc(group_mul(g, h));
    CHECK(std::abs(lg.at(Word{0, 1}) + lg.at(Word{1, 0})) < 1e-12);
    CHECK(std::abs(lg.at(Word{0, 0})) < 1e-12);
    CHECK(std::abs(lg.at(Word{1, 1})) < 1e-12);
  }
}

TEST_CASE("letter projections") {
  auto u = oracle::random_tensor(3, 3);
  auto dropped = project_out_letter(u, 0);
  CHECK(dropped.d == 2);
  CHECK(dropped.at(Word{0, 1}) == doctest::Approx(u.at(Word{1, 2})));
  auto emb = embed_shift_letters(dropped);
  CHECK(emb.d == 3);
  CHECK(emb.at(Word{1, 2}) == doctest::Approx(u.at(Word{1, 2})));
  CHECK(emb.at(Word{0}) == 0.0);
}

TEST_CASE("errors") {
  auto a2 = oracle::random_tensor(2, 2);
  auto a3 = oracle::random_tensor(3, 2);
  CHECK_THROWS_AS(tensor_mul(a2, a3), std::invalid_argument);
  CHECK_THROWS_AS(exp_trunc(TruncatedTensor::unit(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS(GroupElement(oracle::random_tensor(2, 2, 3.0)), std::invalid_argument);
  CHECK_THROWS_AS(shift_component(a2, Word{0, 1, 0}), std::invalid_argument);
}

TEST_CASE("group membership defect") {
  // products of exponentials of Lie elements stay in the group
  for (int trial = 0; trial < 10; ++trial) {
    auto g = oracle::random_group_like(2, 2, 3, 1.0);
    CHECK(group_defect(g) < 1e-12);
  }
  // a generic tensor with scalar 1 is not a group element
  TruncatedTensor bad = TruncatedTensor::unit(2, 2);
  bad.at(Word{0, 1}) = 0.7;  // symmetric level-2 log content
  CHECK(group_defect(GroupElement(bad)) > 0.1);
}
