#pragma once

#include "hxnn/algebra.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hxnn::zoo {

/// Largest supported algebra dimension.
inline constexpr std::size_t kMaxDim = 32;

/// real, complex, hyperbolic, dual, quaternion, tessarine, klein4,
/// hyperbolic-quaternion.
const std::vector<std::string>& named_algebras();

/// Throws NotFound for names outside named_algebras().
Algebra named(std::string_view name);

/// Classical doubling (a,b)(c,d) = (ac - conj(d) b, d a + b conj(c)) applied
/// `levels` times to the reals. Levels 0..5.
Algebra cayley_dickson(int levels);

struct CliffordSignature {
  int p = 0;  // generators squaring to +1
  int q = 0;  // generators squaring to -1
  int r = 0;  // generators squaring to 0

  int generators() const noexcept { return p + q + r; }
  std::size_t dim() const noexcept { return std::size_t{1} << generators(); }
};

/// Clifford algebra over blades ordered by grade, then lexicographically:
/// 1, e1, e2, ..., e12, e13, ..., e123, ...
Algebra clifford(CliffordSignature sig);

/// Resolves a zoo name or a family spelling: "cayley-dickson-<levels>",
/// "clifford-<p>-<q>-<r>" and "octonion" (cayley-dickson-3).
Algebra resolve(std::string_view name);

/// True when resolve() would accept `name`.
bool is_zoo_name(std::string_view name);

}  // namespace hxnn::zoo
