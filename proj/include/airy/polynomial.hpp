#ifndef AIRY_POLYNOMIAL_HPP
#define AIRY_POLYNOMIAL_HPP

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace airy {

/// Dense univariate polynomial, coefficients in increasing degree.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> c) : c_(c) {}
  explicit Polynomial(std::vector<double> c) : c_(std::move(c)) {}

  std::size_t size() const { return c_.size(); }
  double operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0.0; }
  std::span<const double> coefficients() const { return c_; }

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
    std::vector<double> r(std::max(p.size(), q.size()), 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = p[i] + q[i];
    return Polynomial(std::move(r));
  }

  friend Polynomial operator*(double k, const Polynomial& p) {
    std::vector<double> r(p.c_);
    for (auto& v : r) v *= k;
    return Polynomial(std::move(r));
  }

  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    if (p.c_.empty() || q.c_.empty()) return {};
    std::vector<double> r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p.c_[i] * q.c_[j];
    return Polynomial(std::move(r));
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<double> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = static_cast<double>(i) * c_[i];
    return Polynomial(std::move(r));
  }

  /// Antiderivative vanishing at 0.
  Polynomial antiderivative() const {
    std::vector<double> r(c_.size() + 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) r[i + 1] = c_[i] / static_cast<double>(i + 1);
    return Polynomial(std::move(r));
  }

  double integrate(double a, double b) const {
    const Polynomial P = antiderivative();
    return P(b) - P(a);
  }

  /// Coefficients of p(x + shift).
  Polynomial shifted(double shift) const {
    // Horner-style Taylor shift.
    std::vector<double> r(c_);
    const std::size_t n = r.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = n - 1; j > i; --j) r[j - 1] += shift * r[j];
    return Polynomial(std::move(r));
  }

 private:
  std::vector<double> c_;
};

inline Polynomial pow(const Polynomial& p, unsigned k) {
  Polynomial r{1.0};
  for (unsigned i = 0; i < k; ++i) r = r * p;
  return r;
}

}  // namespace airy

#endif  // AIRY_POLYNOMIAL_HPP
