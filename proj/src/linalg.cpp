#include "mobandit/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include "mobandit/errors.hpp"

namespace mob {

Mat Mat::identity(int n, double scale) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = scale;
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec matvec(const Mat& a, std::span<const double> x) {
  if (static_cast<size_t>(a.cols) != x.size()) throw std::invalid_argument("matvec: size mismatch");
  Vec y(a.rows, 0.0);
  for (int i = 0; i < a.rows; ++i) y[i] = dot(a.row(i), x);
  return y;
}

void add_outer(Mat& a, std::span<const double> x, double scale) {
  if (a.rows != a.cols || static_cast<size_t>(a.rows) != x.size())
    throw std::invalid_argument("add_outer: size mismatch");
  for (int i = 0; i < a.rows; ++i) {
    const double xi = scale * x[i];
    double* row = a.data.data() + static_cast<size_t>(i) * a.cols;
    for (int j = 0; j < a.cols; ++j) row[j] += xi * x[j];
  }
}

Mat cholesky_lower(const Mat& a) {
  if (a.rows != a.cols) throw std::invalid_argument("cholesky: not square");
  const int n = a.rows;
  Mat l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 0.0 || !std::isfinite(s)) throw NumericError("cholesky: matrix not positive definite");
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

Vec cholesky_solve(const Mat& lower, std::span<const double> b) {
  const int n = lower.rows;
  if (static_cast<size_t>(n) != b.size()) throw std::invalid_argument("cholesky_solve: size mismatch");
  Vec y(b.begin(), b.end());
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) y[i] -= lower(i, k) * y[k];
    y[i] /= lower(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) y[i] -= lower(k, i) * y[k];
    y[i] /= lower(i, i);
  }
  return y;
}

Mat spd_inverse(const Mat& a) {
  const Mat l = cholesky_lower(a);
  const int n = a.rows;
  Mat inv(n, n);
  Vec e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    Vec col = cholesky_solve(l, e);
    e[j] = 0.0;
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  // exact symmetry despite column-wise solves
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      const double v = 0.5 * (inv(i, j) + inv(j, i));
      inv(i, j) = v;
      inv(j, i) = v;
    }
  return inv;
}

double max_abs_diff(const Mat& a, const Mat& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::fabs(a.data[i] - b.data[i]));
  return m;
}

}  // namespace mob
