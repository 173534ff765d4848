#pragma once

// Matrix form of the algebra product. Coefficient j of x*y equals
// [x]^T B_j [y], where B_0 has the real unit pinned in its corner and B_j
// (j >= 1) carries a 1 at (0, j) and (j, 0); the lower-right n x n block of
// every B_j holds p[a][b][j]. An algebra is non-degenerate when every B_j is
// invertible.

#include "hxnn/algebra.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hxnn {

template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t size) : size_(size), data_(size * size) {}

  std::size_t size() const noexcept { return size_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * size_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * size_ + c];
  }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<T> data_;
};

struct BilinearMatrixSet {
  std::vector<SquareMatrix<double>> mats;
  /// Present iff the algebra carries exact structure constants.
  std::optional<std::vector<SquareMatrix<Rational>>> exact;

  std::size_t dim() const noexcept { return mats.size(); }
};

BilinearMatrixSet build_bilinear_matrices(const Algebra& alg);

/// result[j] = a^T mats[j] b, rows outer, columns inner.
HNumber mul_bilinear(const BilinearMatrixSet& bms, std::span<const double> a,
                     std::span<const double> b);

/// Nonzero entries of a BilinearMatrixSet, for products and their
/// gradients in inner loops.
class SparseBilinear {
 public:
  struct Term {
    std::uint32_t j;
    std::uint32_t r;
    std::uint32_t c;
    double v;
  };

  SparseBilinear() = default;
  explicit SparseBilinear(const BilinearMatrixSet& bms);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  /// out[j] = sum_{r,c} a[r] B_j[r][c] b[c]. No length checks.
  void mul(const double* a, const double* b, double* out) const;

  /// Back-propagates g = dL/d(ab): ga += sum_j g[j] B_j b and
  /// gb += sum_j g[j] B_j^T a. Either output may be null.
  void mul_grad(const double* a, const double* b, const double* g, double* ga,
                double* gb) const;

 private:
  std::size_t dim_ = 0;
  std::vector<Term> terms_;
};

enum class Verdict { NonDegenerate, Degenerate };
enum class DetMethod { ExactRational, FloatTolerance };

struct MatrixVerdict {
  std::size_t index = 0;
  double det = 0.0;
  std::optional<Rational> exact_det;
  bool singular = false;
};

struct DegeneracyReport {
  std::string algebra_name;
  std::vector<MatrixVerdict> per_matrix;
  Verdict verdict = Verdict::NonDegenerate;
  DetMethod method = DetMethod::ExactRational;
};

/// Exact when the algebra has rational constants, float tolerance otherwise.
DegeneracyReport check_degeneracy(const Algebra& alg);

/// Forces a method; ExactRational on a float-only algebra throws.
DegeneracyReport check_degeneracy(const Algebra& alg, DetMethod method);

/// Fraction-free (Bareiss) elimination; exact for any integer matrix.
BigInt bareiss_determinant(SquareMatrix<BigInt> m);

/// Clears denominators row by row and defers to bareiss_determinant.
Rational exact_determinant(const SquareMatrix<Rational>& m);

/// Partially pivoted Gaussian elimination.
double float_determinant(SquareMatrix<double> m);

/// |det| <= 1e-10 * (max |entry|)^size.
bool float_singular(const SquareMatrix<double>& m, double det);

const char* to_string(Verdict v);
const char* to_string(DetMethod m);

std::string render_text(const DegeneracyReport& report);

/// `matrix <j> det <value> singular <true|false>` per matrix, then
/// `verdict <NonDegenerate|Degenerate>`.
std::string render_machine(const DegeneracyReport& report);

}  // namespace hxnn
