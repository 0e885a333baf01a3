#pragma once
#include <span>
#include <vector>

namespace mob {

using Vec = std::vector<double>;

// Dense row-major matrix. Sizes here are small (d <= 20, K <= a few
// hundred), so no sparsity or blocking.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

  double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  std::span<const double> row(int i) const { return {data.data() + static_cast<size_t>(i) * cols, static_cast<size_t>(cols)}; }
  std::span<double> row(int i) { return {data.data() + static_cast<size_t>(i) * cols, static_cast<size_t>(cols)}; }

  static Mat identity(int n, double scale = 1.0);
};

double dot(std::span<const double> a, std::span<const double> b);
Vec matvec(const Mat& a, std::span<const double> x);

// a += scale * x x^T
void add_outer(Mat& a, std::span<const double> x, double scale = 1.0);

// Lower-triangular Cholesky factor of a symmetric positive-definite
// matrix; throws NumericError when a pivot degenerates.
Mat cholesky_lower(const Mat& a);

// Solve L L^T y = b given the lower factor.
Vec cholesky_solve(const Mat& lower, std::span<const double> b);

Mat spd_inverse(const Mat& a);

double max_abs_diff(const Mat& a, const Mat& b);

}  // namespace mob
