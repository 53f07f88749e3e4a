#pragma once

#include <compare>
#include <iosfwd>

namespace fsched {

/// Triangular fuzzy number (a, m, b): support [a, b], peak m with membership 1.
///
/// A crisp value v is the degenerate triangle (v, v, v). Construct through
/// `TriFuzzy::make` when the operands are untrusted; the aggregate form is
/// kept public for brace-initialisation in the hot paths and in tests.
struct TriFuzzy {
  double a = 0.0;
  double m = 0.0;
  double b = 0.0;

  /// Throws std::invalid_argument unless a <= m <= b and all are finite.
  static TriFuzzy make(double a, double m, double b);
  static constexpr TriFuzzy crisp(double v) { return {v, v, v}; }

  constexpr bool is_crisp() const { return a == m && m == b; }
  constexpr double width() const { return b - a; }
  bool valid() const;

  /// Piecewise-linear membership through (a,0), (m,1), (b,0).
  double membership(double x) const;

  friend constexpr bool operator==(const TriFuzzy&, const TriFuzzy&) = default;
};

std::ostream& operator<<(std::ostream& os, const TriFuzzy& x);

struct AlphaInterval {
  double alpha = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

enum class Defuzzification { centroid, peak };

TriFuzzy add(const TriFuzzy& x, const TriFuzzy& y);
/// Extension-principle difference; spreads widen: (x.a - y.b, x.m - y.m, x.b - y.a).
TriFuzzy sub(const TriFuzzy& x, const TriFuzzy& y);
TriFuzzy fuzzy_max(const TriFuzzy& x, const TriFuzzy& y);

/// (a + m + b) / 3, returning v exactly for a crisp (v, v, v).
double defuzz_centroid(const TriFuzzy& x);
double defuzz(const TriFuzzy& x, Defuzzification method);

/// Centroid order; within `eps` the narrower support ranks greater, then equal.
std::weak_ordering compare(const TriFuzzy& x, const TriFuzzy& y, double eps);

/// Throws std::domain_error for alpha outside [0, 1].
AlphaInterval alpha_cut(const TriFuzzy& x, double alpha);

}  // namespace fsched
