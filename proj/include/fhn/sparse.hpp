#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fhn {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix. Column indices are sorted within each row.
class CsrMatrix {
public:
  CsrMatrix() = default;
  /// Duplicate (row, col) entries are summed.
  static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nonzeros() const { return values_.size(); }

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;
  double at(int row, int col) const;
  std::vector<double> diagonal() const;

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_index() const { return col_; }
  std::span<const double> values() const { return values_; }

  /// this + scale * other (same shape).
  CsrMatrix add_scaled(const CsrMatrix& other, double scale) const;
  CsrMatrix transpose() const;

private:
  int rows_{0}, cols_{0};
  std::vector<int> row_ptr_{0};
  std::vector<int> col_;
  std::vector<double> values_;
};

class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

private:
  double residual_;
  int iterations_;
};

struct SolveStats {
  int iterations{0};
  double relative_residual{0.0};
};

/// Preconditioned conjugate gradients for a symmetric positive definite
/// system. `x` holds the initial guess on entry and the solution on exit.
/// `precond_diag` is the diagonal used for Jacobi preconditioning; when empty
/// the matrix diagonal is used. Convergence: ||b - A x|| <= tol * ||b||.
/// Throws SolverError carrying the last residual after max_iter iterations.
SolveStats solve_spd(const CsrMatrix& a, std::span<const double> b, std::span<double> x, double tol,
                     int max_iter, std::span<const double> precond_diag = {});

/// y = A x for a matrix-free symmetric positive definite operator.
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

/// Matrix-free variant; `precond_diag` is required.
SolveStats solve_spd(const LinearOperator& a, std::span<const double> b, std::span<double> x, double tol,
                     int max_iter, std::span<const double> precond_diag);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

}  // namespace fhn
