#include "hxnn/zoo.hpp"

#include "hxnn/error.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <functional>

namespace hxnn::zoo {

namespace {

// Unit products whose result is a signed basis element: i_a i_b = sign * e_k
// (k = 0 for the real unit, sign 0 for a null product).
struct SignedUnit {
  int sign;
  std::size_t k;
};

Algebra from_signed_table(
    std::string name, std::vector<std::string> labels,
    const std::function<SignedUnit(std::size_t, std::size_t)>& product) {
  const std::size_t n = labels.size();
  std::vector<Rational> p(n * n * (n + 1), Rational(0));
  for (std::size_t a = 1; a <= n; ++a) {
    for (std::size_t b = 1; b <= n; ++b) {
      const SignedUnit u = product(a, b);
      p[((a - 1) * n + (b - 1)) * (n + 1) + u.k] = Rational(u.sign);
    }
  }
  return Algebra(std::move(name),
                 StructureConstants::from_rationals(n, std::move(p)),
                 std::move(labels));
}

// 3x3 table over units i, j, k in the order (i,i) (i,j) (i,k) (j,i) ...
Algebra four_dim(std::string name, const SignedUnit (&table)[3][3]) {
  return from_signed_table(std::move(name), {"i", "j", "k"},
                           [&](std::size_t a, std::size_t b) {
                             return table[a - 1][b - 1];
                           });
}

Algebra two_dim(std::string name, int square) {
  return from_signed_table(std::move(name), {"i"},
                           [&](std::size_t, std::size_t) {
                             return SignedUnit{square, 0};
                           });
}

// Cayley-Dickson product on coefficient vectors of length 2^m.
std::vector<int> cd_conj(std::vector<int> x) {
  for (std::size_t k = 1; k < x.size(); ++k) x[k] = -x[k];
  return x;
}

std::vector<int> cd_mul(const std::vector<int>& x, const std::vector<int>& y) {
  const std::size_t len = x.size();
  if (len == 1) return {x[0] * y[0]};
  const std::size_t h = len / 2;
  const std::vector<int> a(x.begin(), x.begin() + h), b(x.begin() + h, x.end());
  const std::vector<int> c(y.begin(), y.begin() + h), d(y.begin() + h, y.end());
  const auto ac = cd_mul(a, c);
  const auto db = cd_mul(cd_conj(d), b);
  const auto da = cd_mul(d, a);
  const auto bc = cd_mul(b, cd_conj(c));
  std::vector<int> out(len);
  for (std::size_t k = 0; k < h; ++k) {
    out[k] = ac[k] - db[k];
    out[h + k] = da[k] + bc[k];
  }
  return out;
}

int parse_int(std::string_view s) {
  int v = -1;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) return -1;
  return v;
}

std::vector<std::string_view> split_dash(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto d = s.find('-', pos);
    parts.push_back(s.substr(pos, d - pos));
    if (d == std::string_view::npos) break;
    pos = d + 1;
  }
  return parts;
}

}  // namespace

const std::vector<std::string>& named_algebras() {
  static const std::vector<std::string> names = {
      "real",      "complex",   "hyperbolic", "dual",
      "quaternion", "tessarine", "klein4",     "hyperbolic-quaternion"};
  return names;
}

Algebra named(std::string_view name) {
  constexpr std::size_t one = 0, i = 1, j = 2, k = 3;
  if (name == "real") return Algebra();
  if (name == "complex") return two_dim("complex", -1);
  if (name == "hyperbolic") return two_dim("hyperbolic", 1);
  if (name == "dual") return two_dim("dual", 0);
  if (name == "quaternion") {
    const SignedUnit t[3][3] = {{{-1, one}, {1, k}, {-1, j}},
                                {{-1, k}, {-1, one}, {1, i}},
                                {{1, j}, {-1, i}, {-1, one}}};
    return four_dim("quaternion", t);
  }
  if (name == "tessarine") {
    // i^2 = -1, j^2 = 1, k = ij = ji.
    const SignedUnit t[3][3] = {{{-1, one}, {1, k}, {-1, j}},
                                {{1, k}, {1, one}, {1, i}},
                                {{-1, j}, {1, i}, {-1, one}}};
    return four_dim("tessarine", t);
  }
  if (name == "klein4") {
    const SignedUnit t[3][3] = {{{1, one}, {1, k}, {1, j}},
                                {{1, k}, {1, one}, {1, i}},
                                {{1, j}, {1, i}, {1, one}}};
    return four_dim("klein4", t);
  }
  if (name == "hyperbolic-quaternion") {
    const SignedUnit t[3][3] = {{{1, one}, {1, k}, {-1, j}},
                                {{-1, k}, {1, one}, {1, i}},
                                {{1, j}, {-1, i}, {1, one}}};
    return four_dim("hyperbolic-quaternion", t);
  }
  throw Error(ErrorKind::NotFound, "unknown algebra '" + std::string(name) + "'");
}

Algebra cayley_dickson(int levels) {
  if (levels < 0 || levels > 5) {
    throw Error(ErrorKind::InvalidArgument,
                "cayley-dickson levels must be in 0..5, got " +
                    std::to_string(levels));
  }
  const std::size_t dim = std::size_t{1} << levels;
  std::vector<std::string> labels;
  for (std::size_t k = 1; k < dim; ++k) labels.push_back("e" + std::to_string(k));
  return from_signed_table(
      "cayley-dickson-" + std::to_string(levels), std::move(labels),
      [dim](std::size_t a, std::size_t b) {
        std::vector<int> x(dim, 0), y(dim, 0);
        x[a] = 1;
        y[b] = 1;
        const auto z = cd_mul(x, y);
        for (std::size_t k = 0; k < dim; ++k) {
          if (z[k] != 0) return SignedUnit{z[k], k};
        }
        return SignedUnit{0, 0};
      });
}

Algebra clifford(CliffordSignature sig) {
  if (sig.p < 0 || sig.q < 0 || sig.r < 0) {
    throw Error(ErrorKind::InvalidArgument, "clifford signature must be non-negative");
  }
  const int gens = sig.generators();
  if (gens > 5) {
    throw Error(ErrorKind::InvalidArgument,
                "clifford algebra with " + std::to_string(gens) +
                    " generators exceeds dimension " + std::to_string(kMaxDim));
  }
  const std::size_t dim = sig.dim();

  // Blades as generator bitmasks, grade-ascending then lexicographic on the
  // ascending index list.
  std::vector<unsigned> blades;
  for (int grade = 0; grade <= gens; ++grade) {
    std::vector<unsigned> same;
    for (unsigned m = 0; m < dim; ++m) {
      if (std::popcount(m) == grade) same.push_back(m);
    }
    auto indices = [](unsigned m) {
      std::vector<int> v;
      for (int b = 0; m >> b; ++b) {
        if ((m >> b) & 1u) v.push_back(b);
      }
      return v;
    };
    std::sort(same.begin(), same.end(),
              [&](unsigned x, unsigned y) { return indices(x) < indices(y); });
    blades.insert(blades.end(), same.begin(), same.end());
  }
  std::vector<std::size_t> position(dim);
  for (std::size_t k = 0; k < dim; ++k) position[blades[k]] = k;

  std::vector<std::string> labels;
  for (std::size_t k = 1; k < dim; ++k) {
    std::string l = "e";
    for (int b = 0; b < gens; ++b) {
      if ((blades[k] >> b) & 1u) l += std::to_string(b + 1);
    }
    labels.push_back(std::move(l));
  }

  auto square = [&](int b) {
    if (b < sig.p) return 1;
    if (b < sig.p + sig.q) return -1;
    return 0;
  };

  const std::string name = "clifford-" + std::to_string(sig.p) + "-" +
                           std::to_string(sig.q) + "-" + std::to_string(sig.r);
  return from_signed_table(name, std::move(labels), [&](std::size_t a, std::size_t b) {
    const unsigned x = blades[a];
    const unsigned y = blades[b];
    // Transpositions needed to move every generator of y past those of x
    // with a larger index.
    int swaps = 0;
    for (unsigned s = x >> 1; s; s >>= 1) swaps += std::popcount(s & y);
    int sign = (swaps % 2) ? -1 : 1;
    const unsigned common = x & y;
    for (int g = 0; g < gens; ++g) {
      if ((common >> g) & 1u) sign *= square(g);
    }
    return SignedUnit{sign, position[x ^ y]};
  });
}

Algebra resolve(std::string_view name) {
  if (name == "octonion") {
    Algebra cd = cayley_dickson(3);
    return Algebra("octonion", cd.constants(), cd.unit_labels());
  }
  if (name.starts_with("cayley-dickson-")) {
    const int levels = parse_int(name.substr(15));
    if (levels >= 0 && levels <= 5) return cayley_dickson(levels);
  } else if (name.starts_with("clifford-")) {
    const auto parts = split_dash(name.substr(9));
    if (parts.size() == 3) {
      const int p = parse_int(parts[0]), q = parse_int(parts[1]),
                r = parse_int(parts[2]);
      if (p >= 0 && q >= 0 && r >= 0 && p + q + r <= 5) {
        return clifford({p, q, r});
      }
    }
  } else {
    for (const auto& n : named_algebras()) {
      if (n == name) return named(name);
    }
  }
  throw Error(ErrorKind::NotFound, "unknown algebra '" + std::string(name) + "'");
}

bool is_zoo_name(std::string_view name) {
  try {
    resolve(name);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace hxnn::zoo
