#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace kgalign {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// Cosine similarity; 0 when either vector is all-zero.
inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double na = norm2(a), nb = norm2(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

// L2-normalize in place; all-zero vectors are left untouched.
inline void normalize(std::vector<double>& a) {
  double n = norm2(a);
  if (n == 0.0) return;
  for (double& x : a) x /= n;
}

}  // namespace kgalign
