#include "hxnn/bilinear.hpp"

#include "hxnn/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hxnn {

namespace {

template <typename T, typename Entry>
std::vector<SquareMatrix<T>> fill_templates(std::size_t n, Entry entry) {
  const std::size_t dim = n + 1;
  std::vector<SquareMatrix<T>> mats;
  mats.reserve(dim);
  for (std::size_t j = 0; j <= n; ++j) {
    SquareMatrix<T> m(dim);
    if (j == 0) {
      m(0, 0) = T(1);
    } else {
      m(0, j) = T(1);
      m(j, 0) = T(1);
    }
    for (std::size_t a = 1; a <= n; ++a) {
      for (std::size_t b = 1; b <= n; ++b) m(a, b) = entry(a, b, j);
    }
    mats.push_back(std::move(m));
  }
  return mats;
}

}  // namespace

BilinearMatrixSet build_bilinear_matrices(const Algebra& alg) {
  const auto& sc = alg.constants();
  BilinearMatrixSet bms;
  bms.mats = fill_templates<double>(
      sc.units(), [&](auto a, auto b, auto j) { return sc.at(a, b, j); });
  if (sc.has_exact()) {
    bms.exact = fill_templates<Rational>(
        sc.units(), [&](auto a, auto b, auto j) { return sc.exact_at(a, b, j); });
  }
  return bms;
}

HNumber mul_bilinear(const BilinearMatrixSet& bms, std::span<const double> a,
                     std::span<const double> b) {
  const std::size_t dim = bms.dim();
  if (a.size() != dim || b.size() != dim) {
    throw DimensionError("mul_bilinear: operands of length " +
                         std::to_string(a.size()) + " and " +
                         std::to_string(b.size()) + " for dimension " +
                         std::to_string(dim));
  }
  HNumber out(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const auto& m = bms.mats[j];
    double s = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
      double row = 0.0;
      for (std::size_t c = 0; c < dim; ++c) row += m(r, c) * b[c];
      s += a[r] * row;
    }
    out[j] = s;
  }
  return out;
}

SparseBilinear::SparseBilinear(const BilinearMatrixSet& bms) : dim_(bms.dim()) {
  for (std::size_t j = 0; j < dim_; ++j) {
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t c = 0; c < dim_; ++c) {
        const double v = bms.mats[j](r, c);
        if (v != 0.0) {
          terms_.push_back({static_cast<std::uint32_t>(j),
                            static_cast<std::uint32_t>(r),
                            static_cast<std::uint32_t>(c), v});
        }
      }
    }
  }
}

void SparseBilinear::mul(const double* a, const double* b, double* out) const {
  std::fill(out, out + dim_, 0.0);
  for (const Term& t : terms_) out[t.j] += a[t.r] * t.v * b[t.c];
}

void SparseBilinear::mul_grad(const double* a, const double* b, const double* g,
                              double* ga, double* gb) const {
  for (const Term& t : terms_) {
    const double w = g[t.j] * t.v;
    if (ga) ga[t.r] += w * b[t.c];
    if (gb) gb[t.c] += w * a[t.r];
  }
}

// ---------------------------------------------------------------------------
// Determinants

BigInt bareiss_determinant(SquareMatrix<BigInt> m) {
  const std::size_t n = m.size();
  if (n == 0) return BigInt(1);
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m(swap, k) == 0) ++swap;
      if (swap == n) return BigInt(0);
      for (std::size_t c = 0; c < n; ++c) std::swap(m(k, c), m(swap, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        // Exact division: Sylvester's identity guarantees prev divides this.
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign < 0 ? BigInt(-m(n - 1, n - 1)) : m(n - 1, n - 1);
}

Rational exact_determinant(const SquareMatrix<Rational>& m) {
  const std::size_t n = m.size();
  SquareMatrix<BigInt> ints(n);
  BigInt scale = 1;
  for (std::size_t r = 0; r < n; ++r) {
    BigInt row_lcm = 1;
    for (std::size_t c = 0; c < n; ++c) {
      row_lcm = boost::multiprecision::lcm(
          row_lcm, boost::multiprecision::denominator(m(r, c)));
    }
    for (std::size_t c = 0; c < n; ++c) {
      ints(r, c) = boost::multiprecision::numerator(m(r, c)) *
                   (row_lcm / boost::multiprecision::denominator(m(r, c)));
    }
    scale *= row_lcm;
  }
  return Rational(bareiss_determinant(std::move(ints)), scale);
}

double float_determinant(SquareMatrix<double> m) {
  const std::size_t n = m.size();
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::fabs(m(i, k)) > std::fabs(m(piv, k))) piv = i;
    }
    if (m(piv, k) == 0.0) return 0.0;
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(k, c), m(piv, c));
      det = -det;
    }
    det *= m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m(i, k) / m(k, k);
      for (std::size_t c = k + 1; c < n; ++c) m(i, c) -= f * m(k, c);
    }
  }
  return det;
}

bool float_singular(const SquareMatrix<double>& m, double det) {
  double max_abs = 0.0;
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m.size(); ++c) {
      max_abs = std::max(max_abs, std::fabs(m(r, c)));
    }
  }
  return std::fabs(det) <=
         1e-10 * std::pow(max_abs, static_cast<double>(m.size()));
}

DegeneracyReport check_degeneracy(const Algebra& alg) {
  return check_degeneracy(alg, alg.constants().has_exact()
                                   ? DetMethod::ExactRational
                                   : DetMethod::FloatTolerance);
}

DegeneracyReport check_degeneracy(const Algebra& alg, DetMethod method) {
  const BilinearMatrixSet bms = build_bilinear_matrices(alg);
  if (method == DetMethod::ExactRational && !bms.exact) {
    throw Error(ErrorKind::InvalidArgument,
                "algebra '" + alg.name() +
                    "' has no exact structure constants");
  }
  DegeneracyReport report;
  report.algebra_name = alg.name();
  report.method = method;
  for (std::size_t j = 0; j < bms.dim(); ++j) {
    MatrixVerdict mv;
    mv.index = j;
    if (method == DetMethod::ExactRational) {
      mv.exact_det = exact_determinant((*bms.exact)[j]);
      mv.det = mv.exact_det->convert_to<double>();
      mv.singular = *mv.exact_det == 0;
    } else {
      mv.det = float_determinant(bms.mats[j]);
      mv.singular = float_singular(bms.mats[j], mv.det);
    }
    if (mv.singular) report.verdict = Verdict::Degenerate;
    report.per_matrix.push_back(std::move(mv));
  }
  return report;
}

const char* to_string(Verdict v) {
  return v == Verdict::NonDegenerate ? "NonDegenerate" : "Degenerate";
}

const char* to_string(DetMethod m) {
  return m == DetMethod::ExactRational ? "ExactRational" : "FloatTolerance";
}

namespace {

std::string det_string(const MatrixVerdict& mv) {
  return mv.exact_det ? format_rational(*mv.exact_det) : format_double(mv.det);
}

}  // namespace

std::string render_text(const DegeneracyReport& report) {
  std::ostringstream out;
  out << "algebra " << report.algebra_name << "\n";
  out << "method " << to_string(report.method) << "\n";
  for (const auto& mv : report.per_matrix) {
    out << "  B" << mv.index << "  det = " << det_string(mv) << "  "
        << (mv.singular ? "singular" : "invertible") << "\n";
  }
  out << "verdict " << to_string(report.verdict) << "\n";
  return out.str();
}

std::string render_machine(const DegeneracyReport& report) {
  std::ostringstream out;
  for (const auto& mv : report.per_matrix) {
    out << "matrix " << mv.index << " det " << det_string(mv) << " singular "
        << (mv.singular ? "true" : "false") << "\n";
  }
  out << "verdict " << to_string(report.verdict) << "\n";
  return out.str();
}

}  // namespace hxnn
