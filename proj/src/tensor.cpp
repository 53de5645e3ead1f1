#include "cadlag/tensor.hpp"

#include <cmath>
#include <cstring>

#include "cadlag/kernels.hpp"

namespace cadlag {
namespace {

void check_same_shape(const TruncatedTensor& a, const TruncatedTensor& b) {
  if (a.d != b.d || a.level != b.level)
    throw std::invalid_argument("tensor shape mismatch (d or level)");
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

} // namespace

GroupElement::GroupElement(TruncatedTensor v) : value_(std::move(v)) {
  if (std::abs(value_.scalar() - 1.0) > 1e-9)
    throw std::invalid_argument("group element must have scalar part 1");
}

TruncatedTensor add(const TruncatedTensor& a, const TruncatedTensor& b) {
  check_same_shape(a, b);
  TruncatedTensor c = a;
  kernels::add(c.coeffs.data(), b.coeffs.data(), c.coeffs.size());
  return c;
}

TruncatedTensor sub(const TruncatedTensor& a, const TruncatedTensor& b) {
  check_same_shape(a, b);
  TruncatedTensor c = a;
  kernels::axpy(c.coeffs.data(), b.coeffs.data(), -1.0, c.coeffs.size());
  return c;
}

TruncatedTensor scaled(const TruncatedTensor& a, double c) {
  TruncatedTensor r = a;
  kernels::scale(r.coeffs.data(), c, r.coeffs.size());
  return r;
}

double max_abs(const TruncatedTensor& a) {
  double m = 0.0;
  for (double v : a.coeffs) m = std::max(m, std::abs(v));
  return m;
}

TruncatedTensor tensor_mul(const TruncatedTensor& a, const TruncatedTensor& b) {
  check_same_shape(a, b);
  const int d = a.d, N = a.level;
  TruncatedTensor c(d, N);
  for (int lc = 0; lc <= N; ++lc) {
    auto out = c.block(lc);
    for (int la = 0; la <= lc; ++la) {
      const int lb = lc - la;
      auto ba = a.block(la);
      auto bb = b.block(lb);
      const std::size_t nb = bb.size();
      for (std::size_t u = 0; u < ba.size(); ++u) {
        const double av = ba[u];
        if (av != 0.0) kernels::axpy(out.data() + u * nb, bb.data(), av, nb);
      }
    }
  }
  return c;
}

GroupElement group_mul(const GroupElement& a, const GroupElement& b) {
  return GroupElement(tensor_mul(a.tensor(), b.tensor()));
}

GroupElement inverse(const GroupElement& g) {
  // (1 + b)^{-1} = sum_k (-1)^k b^k, nilpotent so the series terminates
  const TruncatedTensor& u = g.tensor();
  TruncatedTensor b = u;
  b.coeffs[0] = 0.0;
  TruncatedTensor acc = TruncatedTensor::unit(u.d, u.level);
  TruncatedTensor pw = TruncatedTensor::unit(u.d, u.level);
  double sign = 1.0;
  for (int k = 1; k <= u.level; ++k) {
    pw = tensor_mul(pw, b);
    sign = -sign;
    kernels::axpy(acc.coeffs.data(), pw.coeffs.data(), sign, acc.coeffs.size());
  }
  return GroupElement(std::move(acc));
}

GroupElement exp_trunc(const TruncatedTensor& b) {
  if (std::abs(b.scalar()) > 1e-12)
    throw std::invalid_argument("exp requires zero scalar part");
  const int N = b.level;
  // Horner form: 1 + b(1 + b/2(1 + ... b/N))
  TruncatedTensor r = TruncatedTensor::unit(b.d, N);
  for (int k = N; k >= 1; --k) {
    r = tensor_mul(scaled(b, 1.0 / k), r);
    r.coeffs[0] += 1.0;
  }
  return GroupElement(std::move(r));
}

TruncatedTensor log_trunc(const GroupElement& g) {
  // alternating series of Eq 2.2; b is nilpotent so it terminates at level N
  const TruncatedTensor& u = g.tensor();
  TruncatedTensor b = u;
  b.coeffs[0] = 0.0;
  const int N = u.level;
  TruncatedTensor r(b.d, N);
  TruncatedTensor pw = TruncatedTensor::unit(b.d, N);
  double sign = -1.0;
  for (int k = 1; k <= N; ++k) {
    pw = tensor_mul(pw, b);
    sign = -sign;
    kernels::axpy(r.coeffs.data(), pw.coeffs.data(), sign / k, r.coeffs.size());
  }
  return r;
}

std::map<Word, long long> shuffle(const Word& I, const Word& J) {
  std::map<Word, long long> out;
  if (I.empty()) { out[J] += 1; return out; }
  if (J.empty()) { out[I] += 1; return out; }
  Word Ihead(I.begin(), I.end() - 1);
  Word Jhead(J.begin(), J.end() - 1);
  for (auto& [w, m] : shuffle(Ihead, J)) {
    Word e = w;
    e.push_back(I.back());
    out[e] += m;
  }
  for (auto& [w, m] : shuffle(I, Jhead)) {
    Word e = w;
    e.push_back(J.back());
    out[e] += m;
  }
  return out;
}

TruncatedTensor shuffle_tensor(int d, int level, const Word& I, const Word& J) {
  if (static_cast<int>(I.size() + J.size()) > level)
    throw std::invalid_argument("shuffle result exceeds truncation level");
  TruncatedTensor t(d, level);
  for (auto& [w, m] : shuffle(I, J)) t.at(w) += static_cast<double>(m);
  return t;
}

TruncatedTensor shift_component(const TruncatedTensor& u, const Word& I) {
  const int k = static_cast<int>(I.size());
  if (k > u.level) throw std::invalid_argument("shift order exceeds tensor level");
  TruncatedTensor out(u.d, u.level - k);
  for (int lj = 0; lj <= u.level - k; ++lj) {
    auto dst = out.block(lj);
    const std::int64_t base = level_offset(u.d, lj + k);
    const std::int64_t rank_i = word_rank(u.d, I);
    const std::int64_t width = level_size(u.d, k);
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(dst.size()); ++j) {
      dst[static_cast<std::size_t>(j)] = u.coeffs[static_cast<std::size_t>(base + j * width + rank_i)];
    }
  }
  return out;
}

std::vector<TruncatedTensor> shift(const TruncatedTensor& u, int k) {
  if (k > u.level) throw std::invalid_argument("shift order exceeds tensor level");
  std::vector<TruncatedTensor> out;
  const std::int64_t nw = level_size(u.d, k);
  out.reserve(static_cast<std::size_t>(nw));
  for (std::int64_t r = 0; r < nw; ++r) out.push_back(shift_component(u, word_from_rank(u.d, k, r)));
  return out;
}

double pair(const TruncatedTensor& u, const TruncatedTensor& x) {
  if (u.d != x.d) throw std::invalid_argument("pairing dimension mismatch");
  const std::size_t n = std::min(u.coeffs.size(), x.coeffs.size());
  return kernels::dot(u.coeffs.data(), x.coeffs.data(), n);
}

double pair(const TruncatedTensor& u, const GroupElement& g) { return pair(u, g.tensor()); }

double homogeneous_norm(const GroupElement& g) {
  TruncatedTensor lg = log_trunc(g);
  double best = 0.0;
  for (int n = 1; n <= lg.level; ++n) {
    auto blk = lg.block(n);
    double s2 = kernels::dot(blk.data(), blk.data(), blk.size());
    double v = std::pow(factorial(n) * std::sqrt(s2), 1.0 / n);
    best = std::max(best, v);
  }
  return best;
}

double group_distance(const GroupElement& a, const GroupElement& b) {
  return homogeneous_norm(group_mul(inverse(a), b));
}

double group_defect(const GroupElement& g) {
  TruncatedTensor lg = log_trunc(g);
  double worst = std::abs(lg.coeffs[0]);
  if (lg.level >= 2) {
    const int d = lg.d;
    auto blk = lg.block(2);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b <= a; ++b) {
        double sym = blk[static_cast<std::size_t>(a * d + b)] + blk[static_cast<std::size_t>(b * d + a)];
        worst = std::max(worst, std::abs(0.5 * sym));
      }
  }
  return worst;
}

TruncatedTensor dilate(const TruncatedTensor& lie, double lambda) {
  TruncatedTensor out = lie;
  double p = 1.0;
  for (int n = 1; n <= out.level; ++n) {
    p *= lambda;
    auto blk = out.block(n);
    kernels::scale(blk.data(), p, blk.size());
  }
  return out;
}

TruncatedTensor project_out_letter(const TruncatedTensor& u, int letter) {
  if (u.d < 2) throw std::invalid_argument("cannot drop a letter from a unary alphabet");
  TruncatedTensor out(u.d - 1, u.level);
  for (int k = 0; k <= u.level; ++k) {
    const std::int64_t nw = level_size(u.d - 1, k);
    for (std::int64_t r = 0; r < nw; ++r) {
      Word w = word_from_rank(u.d - 1, k, r);
      Word src = w;
      for (int& c : src)
        if (c >= letter) ++c;
      out.coeffs[static_cast<std::size_t>(flat_index(u.d - 1, w))] = u.at(src);
    }
  }
  return out;
}

TruncatedTensor embed_shift_letters(const TruncatedTensor& u) {
  TruncatedTensor out(u.d + 1, u.level);
  for (int k = 0; k <= u.level; ++k) {
    const std::int64_t nw = level_size(u.d, k);
    for (std::int64_t r = 0; r < nw; ++r) {
      Word w = word_from_rank(u.d, k, r);
      Word dst = w;
      for (int& c : dst) ++c;
      out.at(dst) = u.coeffs[static_cast<std::size_t>(flat_index(u.d, w))];
    }
  }
  return out;
}

TruncatedTensor pad_level(const TruncatedTensor& u, int level) {
  if (level < u.level) throw std::invalid_argument("pad_level shrinks the tensor");
  TruncatedTensor out(u.d, level);
  std::memcpy(out.coeffs.data(), u.coeffs.data(), u.coeffs.size() * sizeof(double));
  return out;
}

TruncatedTensor project_level(const TruncatedTensor& u, int level) {
  if (level > u.level) throw std::invalid_argument("project_level grows the tensor");
  TruncatedTensor out(u.d, level);
  std::memcpy(out.coeffs.data(), u.coeffs.data(), out.coeffs.size() * sizeof(double));
  return out;
}

} // namespace cadlag
