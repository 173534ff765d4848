#pragma once

// Hypercomplex numbers over a real algebra with basis {1, i_1, ..., i_n}.
//
// An algebra is fixed by its structure constants p[a][b][g]: the product of
// units i_a * i_b is p[a][b][0] + p[a][b][1] i_1 + ... + p[a][b][n] i_n.
// Values are plain coefficient vectors; every operation takes the algebra
// explicitly and checks lengths at the boundary.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hxnn {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class StructureConstants {
 public:
  /// The reals: no hyperimaginary units, an empty (exact) table.
  StructureConstants() = default;

  /// Float-only constants; `values` holds n*n*(n+1) entries in
  /// (a, b, g) row-major order with a, b running over 1..n.
  static StructureConstants from_doubles(std::size_t n,
                                         std::vector<double> values);

  /// Exact constants; the float table is derived by rounding each entry.
  static StructureConstants from_rationals(std::size_t n,
                                           std::vector<Rational> values);

  std::size_t units() const noexcept { return n_; }
  std::size_t dim() const noexcept { return n_ + 1; }

  /// a, b in 1..n; g in 0..n.
  double at(std::size_t a, std::size_t b, std::size_t g) const {
    return p_[index(a, b, g)];
  }
  const Rational& exact_at(std::size_t a, std::size_t b, std::size_t g) const {
    return (*exact_)[index(a, b, g)];
  }

  bool has_exact() const noexcept { return exact_.has_value(); }
  std::span<const double> values() const noexcept { return p_; }
  const std::optional<std::vector<Rational>>& exact() const noexcept {
    return exact_;
  }

  /// Compares the float tables and the exact ones (or their absence).
  friend bool operator==(const StructureConstants&,
                         const StructureConstants&) = default;

 private:
  std::size_t index(std::size_t a, std::size_t b, std::size_t g) const {
    return ((a - 1) * n_ + (b - 1)) * (n_ + 1) + g;
  }

  std::size_t n_ = 0;
  std::vector<double> p_;
  std::optional<std::vector<Rational>> exact_ = std::vector<Rational>{};
};

class Algebra {
 public:
  /// The reals.
  Algebra();

  /// Throws InvalidArgument when the labels do not match the constants or
  /// are empty, duplicated, or equal to "1".
  Algebra(std::string name, StructureConstants sc,
          std::vector<std::string> unit_labels);

  const std::string& name() const noexcept { return name_; }
  const StructureConstants& constants() const noexcept { return sc_; }
  const std::vector<std::string>& unit_labels() const noexcept {
    return labels_;
  }
  std::size_t units() const noexcept { return sc_.units(); }
  std::size_t dim() const noexcept { return sc_.dim(); }

  /// Label of basis element k, where 0 is the real unit "1".
  std::string basis_label(std::size_t k) const;

 private:
  std::string name_;
  StructureConstants sc_;
  std::vector<std::string> labels_;
};

/// Coefficients (x_0, ..., x_n); index 0 is the real part.
struct HNumber {
  std::vector<double> coeffs;

  HNumber() = default;
  explicit HNumber(std::size_t dim) : coeffs(dim, 0.0) {}
  HNumber(std::initializer_list<double> c) : coeffs(c) {}
  explicit HNumber(std::vector<double> c) : coeffs(std::move(c)) {}
  explicit HNumber(std::span<const double> c) : coeffs(c.begin(), c.end()) {}

  std::size_t size() const noexcept { return coeffs.size(); }
  double& operator[](std::size_t k) { return coeffs[k]; }
  double operator[](std::size_t k) const { return coeffs[k]; }
  operator std::span<const double>() const noexcept { return coeffs; }

  friend bool operator==(const HNumber&, const HNumber&) = default;
};

/// Basis element k (0 = the real unit) of a dim-dimensional algebra.
HNumber unit(std::size_t dim, std::size_t k);

/// The real number c as (c, 0, ..., 0).
HNumber embed(double c, std::size_t dim);

HNumber add(std::span<const double> a, std::span<const double> b);
HNumber sub(std::span<const double> a, std::span<const double> b);
HNumber scalar_mul(double c, std::span<const double> a);
double abs(std::span<const double> a);

/// Product straight from the structure constants. Terms are accumulated
/// with b inner, a outer, ascending, so results are bit-reproducible.
HNumber mul_direct(const Algebra& alg, std::span<const double> a,
                   std::span<const double> b);
void mul_direct_into(const Algebra& alg, std::span<const double> a,
                     std::span<const double> b, std::span<double> out);

/// Reads the line-oriented algebra description:
///
///   # comment
///   name: quaternion
///   units: i j k
///   prod 1 2 : 0 0 0 1
///
/// Product indices may be 1-based numbers or unit labels. Coefficients are
/// integers, fractions a/b or decimals; the table keeps exact rationals
/// only when no decimal appears.
Algebra parse_algebra(std::string_view text);

/// Inverse of parse_algebra; product lines in row-major (a, b) order.
std::string serialize_algebra(const Algebra& alg);

/// Rational formatted as "p" or "p/q".
std::string format_rational(const Rational& r);

/// Shortest round-trip decimal, always carrying a '.' or exponent so it
/// never reads back as an exact integer.
std::string format_double(double v);

}  // namespace hxnn
