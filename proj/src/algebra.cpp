#include "hxnn/algebra.hpp"

#include "hxnn/error.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace hxnn {

namespace {

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": length " + std::to_string(a) +
                         " does not match " + std::to_string(b));
  }
}

std::size_t table_size(std::size_t n) { return n * n * (n + 1); }

}  // namespace

StructureConstants StructureConstants::from_doubles(std::size_t n,
                                                    std::vector<double> values) {
  if (values.size() != table_size(n)) {
    throw DimensionError("structure constants: expected " +
                         std::to_string(table_size(n)) + " entries, got " +
                         std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::InvalidArgument,
                  "structure constants must be finite");
    }
  }
  StructureConstants sc;
  sc.n_ = n;
  sc.p_ = std::move(values);
  sc.exact_.reset();
  return sc;
}

StructureConstants StructureConstants::from_rationals(
    std::size_t n, std::vector<Rational> values) {
  if (values.size() != table_size(n)) {
    throw DimensionError("structure constants: expected " +
                         std::to_string(table_size(n)) + " entries, got " +
                         std::to_string(values.size()));
  }
  std::vector<double> p;
  p.reserve(values.size());
  for (const auto& v : values) p.push_back(v.convert_to<double>());
  StructureConstants sc = from_doubles(n, std::move(p));
  sc.exact_ = std::move(values);
  return sc;
}

Algebra::Algebra() : name_("real") {}

Algebra::Algebra(std::string name, StructureConstants sc,
                 std::vector<std::string> unit_labels)
    : name_(std::move(name)), sc_(std::move(sc)), labels_(std::move(unit_labels)) {
  if (labels_.size() != sc_.units()) {
    throw Error(ErrorKind::InvalidArgument,
                "algebra '" + name_ + "': " + std::to_string(labels_.size()) +
                    " unit labels for " + std::to_string(sc_.units()) +
                    " units");
  }
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty() || l == "1") {
      throw Error(ErrorKind::InvalidArgument,
                  "algebra '" + name_ + "': invalid unit label '" + l + "'");
    }
    if (!seen.insert(l).second) {
      throw Error(ErrorKind::InvalidArgument,
                  "algebra '" + name_ + "': duplicate unit label '" + l + "'");
    }
  }
}

std::string Algebra::basis_label(std::size_t k) const {
  return k == 0 ? std::string("1") : labels_.at(k - 1);
}

HNumber unit(std::size_t dim, std::size_t k) {
  HNumber e(dim);
  e[k] = 1.0;
  return e;
}

HNumber embed(double c, std::size_t dim) {
  HNumber e(dim);
  if (dim > 0) e[0] = c;
  return e;
}

HNumber add(std::span<const double> a, std::span<const double> b) {
  require_same(a.size(), b.size(), "add");
  HNumber r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] + b[k];
  return r;
}

HNumber sub(std::span<const double> a, std::span<const double> b) {
  require_same(a.size(), b.size(), "sub");
  HNumber r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] - b[k];
  return r;
}

HNumber scalar_mul(double c, std::span<const double> a) {
  HNumber r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = c * a[k];
  return r;
}

double abs(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

void mul_direct_into(const Algebra& alg, std::span<const double> a,
                     std::span<const double> b, std::span<double> out) {
  const std::size_t dim = alg.dim();
  require_same(a.size(), dim, "mul_direct (left operand)");
  require_same(b.size(), dim, "mul_direct (right operand)");
  require_same(out.size(), dim, "mul_direct (output)");
  const std::size_t n = dim - 1;
  const StructureConstants& sc = alg.constants();

  for (std::size_t g = 0; g <= n; ++g) {
    double s = (g == 0) ? a[0] * b[0] : a[0] * b[g] + a[g] * b[0];
    for (std::size_t al = 1; al <= n; ++al) {
      for (std::size_t be = 1; be <= n; ++be) {
        s += a[al] * b[be] * sc.at(al, be, g);
      }
    }
    out[g] = s;
  }
}

HNumber mul_direct(const Algebra& alg, std::span<const double> a,
                   std::span<const double> b) {
  HNumber r(alg.dim());
  mul_direct_into(alg, a, b, r.coeffs);
  return r;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

struct Coefficient {
  double value = 0.0;
  std::optional<Rational> exact;
};

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_integer_token(std::string_view s) {
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

BigInt parse_bigint(std::string_view s) {
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  BigInt v{std::string(s)};
  return neg ? BigInt(-v) : v;
}

Coefficient parse_coefficient(std::string_view tok, std::size_t line) {
  Coefficient c;
  if (const auto slash = tok.find('/'); slash != std::string_view::npos) {
    const auto num = tok.substr(0, slash);
    const auto den = tok.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den)) {
      throw ParseError(line, "malformed fraction '" + std::string(tok) + "'");
    }
    const BigInt d = parse_bigint(den);
    if (d == 0) throw ParseError(line, "zero denominator in '" + std::string(tok) + "'");
    c.exact = Rational(parse_bigint(num), d);
    c.value = c.exact->convert_to<double>();
    return c;
  }
  if (is_integer_token(tok)) {
    c.exact = Rational(parse_bigint(tok));
    c.value = c.exact->convert_to<double>();
    return c;
  }
  std::string_view body = tok;
  if (!body.empty() && body[0] == '+') body.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(body.data(), body.data() + body.size(), v);
  if (ec != std::errc() || ptr != body.data() + body.size() ||
      !std::isfinite(v)) {
    throw ParseError(line, "malformed coefficient '" + std::string(tok) + "'");
  }
  c.value = v;
  return c;
}

}  // namespace

Algebra parse_algebra(std::string_view text) {
  std::string name = "unnamed";
  std::optional<std::vector<std::string>> labels;
  std::vector<std::optional<std::vector<Coefficient>>> rows;
  bool saw_name = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;

    if (line.starts_with("prod ") || line.starts_with("prod\t")) {
      if (!labels) throw ParseError(line_no, "product line before 'units:'");
      const std::size_t n = labels->size();
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "product line needs ':' before coefficients");
      }
      const auto head = split_ws(line.substr(0, colon));
      if (head.size() != 3 || head[0] != "prod") {
        throw ParseError(line_no, "expected 'prod <a> <b> : <c_0> ... <c_n>'");
      }
      auto resolve = [&](const std::string& tok) -> std::size_t {
        if (is_integer_token(tok) && tok[0] != '-' && tok[0] != '+') {
          std::size_t idx = 0;
          std::from_chars(tok.data(), tok.data() + tok.size(), idx);
          if (idx < 1 || idx > n) {
            throw ParseError(line_no, "unit index " + tok + " out of range 1.." +
                                          std::to_string(n));
          }
          return idx;
        }
        for (std::size_t k = 0; k < n; ++k) {
          if ((*labels)[k] == tok) return k + 1;
        }
        throw ParseError(line_no, "unknown unit label '" + tok + "'");
      };
      const std::size_t a = resolve(head[1]);
      const std::size_t b = resolve(head[2]);
      const auto toks = split_ws(line.substr(colon + 1));
      if (toks.size() != n + 1) {
        throw ParseError(line_no, "expected " + std::to_string(n + 1) +
                                      " coefficients, got " +
                                      std::to_string(toks.size()));
      }
      auto& row = rows[(a - 1) * n + (b - 1)];
      if (row) {
        throw ParseError(line_no, "duplicate product line for (" +
                                      std::to_string(a) + ", " +
                                      std::to_string(b) + ")");
      }
      row.emplace();
      for (const auto& t : toks) row->push_back(parse_coefficient(t, line_no));
      continue;
    }

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError(line_no, "unrecognized line '" + std::string(line) + "'");
    }
    const std::string_view key = trim(line.substr(0, colon));
    const std::string_view value = trim(line.substr(colon + 1));
    if (key == "name") {
      if (saw_name) throw ParseError(line_no, "duplicate 'name:'");
      if (value.empty()) throw ParseError(line_no, "empty algebra name");
      saw_name = true;
      name = std::string(value);
    } else if (key == "units") {
      if (labels) throw ParseError(line_no, "duplicate 'units:'");
      labels = split_ws(value);
      std::set<std::string> seen;
      for (const auto& l : *labels) {
        if (l == "1" || l == "prod" || is_integer_token(l) ||
            l.find_first_of(":#") != std::string::npos) {
          throw ParseError(line_no, "invalid unit label '" + l + "'");
        }
        if (!seen.insert(l).second) {
          throw ParseError(line_no, "duplicate unit label '" + l + "'");
        }
      }
      rows.assign(labels->size() * labels->size(), std::nullopt);
    } else {
      throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
    }
  }

  if (!labels) throw ParseError(0, "missing 'units:' line");
  const std::size_t n = labels->size();
  bool all_exact = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i]) {
      throw ParseError(0, "missing product line for (" +
                              std::to_string(i / n + 1) + ", " +
                              std::to_string(i % n + 1) + ")");
    }
    for (const auto& c : *rows[i]) all_exact = all_exact && c.exact.has_value();
  }

  StructureConstants sc;
  if (all_exact) {
    std::vector<Rational> vals;
    vals.reserve(n * n * (n + 1));
    for (const auto& r : rows) {
      for (const auto& c : *r) vals.push_back(*c.exact);
    }
    sc = StructureConstants::from_rationals(n, std::move(vals));
  } else {
    std::vector<double> vals;
    vals.reserve(n * n * (n + 1));
    for (const auto& r : rows) {
      for (const auto& c : *r) vals.push_back(c.value);
    }
    sc = StructureConstants::from_doubles(n, std::move(vals));
  }
  return Algebra(std::move(name), std::move(sc), std::move(*labels));
}

std::string format_rational(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (std::isfinite(v) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string serialize_algebra(const Algebra& alg) {
  const auto& sc = alg.constants();
  const std::size_t n = sc.units();
  std::ostringstream out;
  out << "name: " << alg.name() << "\n";
  out << "units:";
  for (const auto& l : alg.unit_labels()) out << ' ' << l;
  out << "\n";
  for (std::size_t a = 1; a <= n; ++a) {
    for (std::size_t b = 1; b <= n; ++b) {
      out << "prod " << a << ' ' << b << " :";
      for (std::size_t g = 0; g <= n; ++g) {
        out << ' '
            << (sc.has_exact() ? format_rational(sc.exact_at(a, b, g))
                               : format_double(sc.at(a, b, g)));
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace hxnn
