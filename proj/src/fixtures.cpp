#include "cadlag/fixtures.hpp"

#include <cmath>

namespace cadlag::fixtures {

GroupPath two_segment() {
  return path_from_points(1, {0.0, 0.5, 1.0}, {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}});
}

GroupPath oscillatory(int n, int segments) {
  const double amp = std::pow(static_cast<double>(n), -1.0 / 3.0);
  std::vector<double> ts;
  std::vector<std::vector<double>> xs;
  for (int i = 0; i <= segments; ++i) {
    double t = static_cast<double>(i) / segments;
    double u = 2.0 * M_PI * n * t;
    ts.push_back(t);
    xs.push_back({-amp * std::cos(u), amp * std::sin(u)});
  }
  return path_from_points(1, ts, xs);
}

GroupPath pure_jump_11() {
  TruncatedTensor jl(2, 1);
  jl.at(Word{0}) = 1.0;
  jl.at(Word{1}) = 1.0;
  return GroupPath(2, 1, {PathPiece::jump(0.5, jl)});
}

GroupPath two_jump_drift() {
  std::vector<PathPiece> pieces;
  TruncatedTensor s1(2, 1), s2(2, 1), s3(2, 1), j1(2, 1), j2(2, 1);
  s1.at(Word{0}) = 0.6;
  s1.at(Word{1}) = -0.2;
  s2.at(Word{0}) = -0.3;
  s2.at(Word{1}) = 0.5;
  s3.at(Word{0}) = 0.4;
  s3.at(Word{1}) = 0.3;
  j1.at(Word{0}) = 0.8;
  j1.at(Word{1}) = 0.4;
  j2.at(Word{0}) = -0.5;
  j2.at(Word{1}) = 0.7;
  pieces.push_back(PathPiece::segment(0.0, 0.375, s1));
  pieces.push_back(PathPiece::jump(0.375, j1));
  pieces.push_back(PathPiece::segment(0.375, 0.75, s2));
  pieces.push_back(PathPiece::jump(0.75, j2));
  pieces.push_back(PathPiece::segment(0.75, 1.0, s3));
  return GroupPath(2, 1, std::move(pieces));
}

GroupPath qv_steps() {
  TruncatedTensor j1(1, 1), j2(1, 1);
  j1.at(Word{0}) = 1.0;
  j2.at(Word{0}) = 2.0;
  std::vector<PathPiece> pieces;
  pieces.push_back(PathPiece::jump(1.0 / 3, j1));
  pieces.push_back(PathPiece::jump(2.0 / 3, j2));
  return GroupPath(1, 1, std::move(pieces));
}

GroupPath kinked_line() {
  return path_from_points(1, {0.0, 0.375, 1.0}, {{0.0}, {0.75}, {0.25}});
}

} // namespace cadlag::fixtures
