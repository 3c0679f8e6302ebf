#include "fhn/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fhn {

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> entries) {
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(static_cast<std::size_t>(rows) + 1, 0);
  for (std::size_t k = 0; k < entries.size();) {
    const auto& e = entries[k];
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
      throw std::out_of_range("triplet outside matrix bounds");
    double sum = 0.0;
    std::size_t l = k;
    // summed in sorted order, so assembly is deterministic
    for (; l < entries.size() && entries[l].row == e.row && entries[l].col == e.col; ++l)
      sum += entries[l].value;
    m.col_.push_back(e.col);
    m.values_.push_back(sum);
    ++m.row_ptr_[e.row + 1];
    k = l;
  }
  for (int r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += values_[k] * x[col_[k]];
    y[r] = acc;
  }
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

double CsrMatrix::at(int row, int col) const {
  const auto begin = col_.begin() + row_ptr_[row];
  const auto end = col_.begin() + row_ptr_[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  return (it != end && *it == col) ? values_[it - col_.begin()] : 0.0;
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(std::min(rows_, cols_));
  for (int r = 0; r < static_cast<int>(d.size()); ++r) d[r] = at(r, r);
  return d;
}

CsrMatrix CsrMatrix::add_scaled(const CsrMatrix& other, double scale) const {
  std::vector<Triplet> t;
  t.reserve(nonzeros() + other.nonzeros());
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) t.push_back({r, col_[k], values_[k]});
    for (int k = other.row_ptr_[r]; k < other.row_ptr_[r + 1]; ++k)
      t.push_back({r, other.col_[k], scale * other.values_[k]});
  }
  return from_triplets(rows_, cols_, std::move(t));
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(nonzeros());
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) t.push_back({col_[k], r, values_[k]});
  return from_triplets(cols_, rows_, std::move(t));
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

SolveStats solve_spd(const CsrMatrix& a, std::span<const double> b, std::span<double> x, double tol,
                     int max_iter, std::span<const double> precond_diag) {
  if (b.size() != static_cast<std::size_t>(a.rows())) throw std::invalid_argument("solve_spd: size mismatch");
  const std::vector<double> diag = precond_diag.empty() ? a.diagonal() : std::vector<double>{};
  return solve_spd([&a](std::span<const double> in, std::span<double> out) { a.multiply(in, out); }, b, x, tol,
                   max_iter, precond_diag.empty() ? std::span<const double>(diag) : precond_diag);
}

SolveStats solve_spd(const LinearOperator& a, std::span<const double> b, std::span<double> x, double tol,
                     int max_iter, std::span<const double> precond_diag) {
  const auto n = b.size();
  if (x.size() != n || precond_diag.size() != n) throw std::invalid_argument("solve_spd: size mismatch");

  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return {};
  }

  std::vector<double> inv_diag(precond_diag.begin(), precond_diag.end());
  for (double& v : inv_diag) {
    if (!(v > 0.0)) throw SolverError("solve_spd: preconditioner diagonal not positive", 0.0, 0);
    v = 1.0 / v;
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  a(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  double rnorm = norm2(r);
  if (rnorm <= tol * bnorm) return {0, rnorm / bnorm};

  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);

  for (int it = 1; it <= max_iter; ++it) {
    a(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) throw SolverError("solve_spd: matrix not positive definite", rnorm / bnorm, it);
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    rnorm = norm2(r);
    if (rnorm <= tol * bnorm) return {it, rnorm / bnorm};
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  std::ostringstream os;
  os << "solve_spd: no convergence after " << max_iter << " iterations, relative residual "
     << rnorm / bnorm;
  throw SolverError(os.str(), rnorm / bnorm, max_iter);
}

}  // namespace fhn
