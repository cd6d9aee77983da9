#include "lcm/tower.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace lcm {

namespace {
// Largest argument with a finite exp().
const double kExpLimit = std::log(std::numeric_limits<double>::max());
constexpr double kInf = std::numeric_limits<double>::infinity();

// x - y for two logarithms carried as towers.
double difference(const Tower& x, const Tower& y) {
  if (x.level() == 0 && y.level() == 0) return x.top() - y.top();
  if (x == y) return 0.0;
  return x < y ? -kInf : kInf;
}
}  // namespace

Tower Tower::from_double(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("tower: value must be finite and nonnegative");
  Tower t;
  t.top_ = x;
  return t;
}

Tower Tower::make(int level, double top) {
  if (level < 0 || !std::isfinite(top)) throw std::domain_error("tower: bad level or top");
  Tower t;
  t.level_ = level;
  t.top_ = top;
  t.normalize();
  return t;
}

void Tower::normalize() {
  while (level_ > 0 && top_ <= kExpLimit) {
    top_ = std::exp(top_);
    --level_;
  }
}

double Tower::to_double() const { return level_ == 0 ? top_ : kInf; }

Tower Tower::ln() const {
  if (level_ > 0) {
    Tower t;
    t.level_ = level_ - 1;
    t.top_ = top_;
    return t;
  }
  if (!(top_ > 1.0)) throw std::domain_error("tower: ln of a value <= 1 is not representable");
  return from_double(std::log(top_));
}

Tower Tower::exp() const { return make(level_ + 1, top_); }

Tower Tower::add(double c) const {
  if (level_ == 0) {
    const double v = top_ + c;
    if (!(v > 0.0)) throw std::domain_error("tower: sum is not positive");
    if (std::isinf(v)) return make(1, std::log(top_) + std::log1p(c / top_));
    return from_double(v);
  }
  if (c == 0.0) return *this;
  // ln(T + c) = ln T + log1p(c / T)
  const Tower log_t = ln();
  const double log_c = std::log(std::abs(c));
  const double ratio = std::exp(log_c - (log_t.level() == 0 ? log_t.top() : kInf));
  const double shift = std::log1p(c > 0 ? ratio : -ratio);
  return log_t.add(shift).exp();
}

Tower Tower::add(const Tower& other) const {
  if (level_ == 0 && other.level_ == 0) {
    const double v = top_ + other.top_;
    if (std::isfinite(v)) return from_double(v);
  }
  const Tower& big = *this < other ? other : *this;
  const Tower& small = *this < other ? *this : other;
  if (small.level_ == 0) return big.add(small.top_);
  const double r = std::exp(log_ratio(small, big));
  return big.ln().add(std::log1p(r)).exp();
}

Tower Tower::scale(double factor) const {
  if (!(factor > 0.0)) throw std::domain_error("tower: scale factor must be positive");
  if (level_ == 0) {
    const double v = top_ * factor;
    if (std::isfinite(v)) return from_double(v);
    return make(1, std::log(top_) + std::log(factor));
  }
  return ln().add(std::log(factor)).exp();
}

std::string Tower::str() const {
  char buf[64];
  if (level_ == 0) {
    std::snprintf(buf, sizeof buf, "%.17g", top_);
    return buf;
  }
  std::snprintf(buf, sizeof buf, "exp^%d(%.17g)", level_, top_);
  return buf;
}

bool operator<(const Tower& a, const Tower& b) {
  if (a.level() != b.level()) return a.level() < b.level();
  return a.top() < b.top();
}

double log_ratio(const Tower& a, const Tower& b) {
  if (a.level() == 0 && b.level() == 0) return std::log(a.top()) - std::log(b.top());
  auto lg = [](const Tower& t) { return t.level() > 0 ? t.ln() : Tower::make(0, std::log(t.top())); };
  return difference(lg(a), lg(b));
}

}  // namespace lcm
