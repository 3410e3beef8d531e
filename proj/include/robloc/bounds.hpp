#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "robloc/errors.hpp"

namespace robloc {

/// Unreduced fraction m/n as reported for breakdown values (e.g. 5/10).
struct Fraction {
  std::int64_t numerator;
  std::int64_t denominator;

  std::string str() const { return std::to_string(numerator) + "/" + std::to_string(denominator); }
  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }

  /// Value comparison by cross-multiplication (denominators are positive).
  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
    return a.numerator * b.denominator <=> b.numerator * a.denominator;
  }
  friend bool operator==(const Fraction& a, const Fraction& b) { return (a <=> b) == 0; }
  /// Same numerator and denominator, not merely the same value.
  bool identical(const Fraction& o) const { return numerator == o.numerator && denominator == o.denominator; }
};

/// Upper bounds on the finite-sample breakdown value for n points in R^k.
struct BoundTable {
  Fraction translation;  // ⌊(n+1)/2⌋/n, translation equivariant location
  Fraction affine_condition_h;  // ⌊(n−h+1)/2⌋/n, affine location under the h-point boundary condition
  Fraction scatter;  // ⌊(n−k+1)/2⌋/n, affine equivariant scatter
  Fraction projection_median;  // ⌊(n−k+2)/2⌋/n, attained by the MAD_{k−1} projection median
};

inline BoundTable theoretical_bounds(std::int64_t n, std::int64_t k, std::int64_t h) {
  if (!(k >= 1 && n > k)) throw ParameterError("bounds: need n > k >= 1");
  if (!(h >= 1 && h <= k)) throw ParameterError("bounds: need 1 <= h <= k");
  return BoundTable{
      {(n + 1) / 2, n},
      {(n - h + 1) / 2, n},
      {(n - k + 1) / 2, n},
      {(n - k + 2) / 2, n},
  };
}

}  // namespace robloc
