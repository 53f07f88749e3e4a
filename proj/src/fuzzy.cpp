#include "fuzzysched/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fsched {

TriFuzzy TriFuzzy::make(double a, double m, double b) {
  TriFuzzy x{a, m, b};
  if (!x.valid()) {
    throw std::invalid_argument("invalid triangular fuzzy number (" + std::to_string(a) + ", " +
                                std::to_string(m) + ", " + std::to_string(b) + ")");
  }
  return x;
}

bool TriFuzzy::valid() const {
  return std::isfinite(a) && std::isfinite(m) && std::isfinite(b) && a <= m && m <= b;
}

double TriFuzzy::membership(double x) const {
  if (x < a || x > b) return 0.0;
  if (x == m) return 1.0;
  if (x < m) return (x - a) / (m - a);
  return (b - x) / (b - m);
}

std::ostream& operator<<(std::ostream& os, const TriFuzzy& x) {
  return os << '(' << x.a << ", " << x.m << ", " << x.b << ')';
}

TriFuzzy add(const TriFuzzy& x, const TriFuzzy& y) { return {x.a + y.a, x.m + y.m, x.b + y.b}; }

TriFuzzy sub(const TriFuzzy& x, const TriFuzzy& y) { return {x.a - y.b, x.m - y.m, x.b - y.a}; }

TriFuzzy fuzzy_max(const TriFuzzy& x, const TriFuzzy& y) {
  return {std::max(x.a, y.a), std::max(x.m, y.m), std::max(x.b, y.b)};
}

double defuzz_centroid(const TriFuzzy& x) {
  if (x.is_crisp()) return x.m;
  return (x.a + x.m + x.b) / 3.0;
}

double defuzz(const TriFuzzy& x, Defuzzification method) {
  return method == Defuzzification::peak ? x.m : defuzz_centroid(x);
}

std::weak_ordering compare(const TriFuzzy& x, const TriFuzzy& y, double eps) {
  const double cx = defuzz_centroid(x);
  const double cy = defuzz_centroid(y);
  if (std::abs(cx - cy) > eps) return cx < cy ? std::weak_ordering::less : std::weak_ordering::greater;
  const double wx = x.width();
  const double wy = y.width();
  if (std::abs(wx - wy) > eps) {
    return wx < wy ? std::weak_ordering::greater : std::weak_ordering::less;
  }
  return std::weak_ordering::equivalent;
}

AlphaInterval alpha_cut(const TriFuzzy& x, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::domain_error("alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
  return {alpha, x.a + alpha * (x.m - x.a), x.b - alpha * (x.b - x.m)};
}

}  // namespace fsched
