#pragma once

#include <string>

namespace lcm {

/// Positive number exp(exp(...exp(top))) with `level` exponentials.
///
/// Kept normalized: level > 0 only when exp(top) would overflow a double, so
/// (level, top) orders lexicographically. Used for magnitudes like
/// exp(2^53) that no floating format holds.
class Tower {
 public:
  Tower() = default;
  static Tower from_double(double x);
  static Tower make(int level, double top);

  int level() const { return level_; }
  double top() const { return top_; }
  bool finite_double() const { return level_ == 0; }
  /// The value as a double, +inf above the double range.
  double to_double() const;

  /// Natural logarithm; requires a value > 1 when level > 0.
  Tower ln() const;
  Tower exp() const;
  /// this + c for any real c, requiring a positive result.
  Tower add(double c) const;
  Tower add(const Tower& other) const;
  Tower scale(double factor) const;

  /// "exp^level(top)" or the plain number.
  std::string str() const;

  friend bool operator==(const Tower&, const Tower&) = default;
  friend bool operator<(const Tower& a, const Tower& b);
  friend bool operator>(const Tower& a, const Tower& b) { return b < a; }

 private:
  void normalize();
  int level_ = 0;
  double top_ = 0.0;
};

/// ln(a) - ln(b) as a double; +-inf when the gap exceeds the double range.
double log_ratio(const Tower& a, const Tower& b);

}  // namespace lcm
