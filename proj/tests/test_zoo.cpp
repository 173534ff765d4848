#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hxnn/bilinear.hpp"
#include "hxnn/error.hpp"
#include "hxnn/zoo.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace hxnn;
using hxnn::test::random_hnumber;

namespace {

// i_a * i_b as an exact coefficient vector.
std::vector<Rational> unit_product(const Algebra& alg, std::size_t a, std::size_t b) {
  std::vector<Rational> out(alg.dim());
  for (std::size_t g = 0; g < alg.dim(); ++g) out[g] = alg.constants().exact_at(a, b, g);
  return out;
}

std::vector<Rational> basis(std::size_t dim, std::size_t k, int sign = 1) {
  std::vector<Rational> v(dim);
  v[k] = sign;
  return v;
}

bool commutes(const Algebra& alg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int t = 0; t < 20; ++t) {
    const HNumber x = random_hnumber(rng, alg.dim()), y = random_hnumber(rng, alg.dim());
    const HNumber xy = mul_direct(alg, x, y), yx = mul_direct(alg, y, x);
    for (std::size_t k = 0; k < alg.dim(); ++k)
      if (std::fabs(xy[k] - yx[k]) > 1e-12) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("named algebras") {
  CHECK(zoo::named_algebras().size() == 8);
  for (const auto& n : zoo::named_algebras()) {
    const Algebra a = zoo::named(n);
    CHECK(a.name() == n);
    CHECK(a.constants().has_exact());
  }
  CHECK(zoo::named("real").dim() == 1);
  CHECK_THROWS_AS(zoo::named("octonions"), Error);
  CHECK_THROWS_AS(zoo::named(""), Error);
}

TEST_CASE("unit tables") {
  const Algebra q = zoo::named("quaternion");
  CHECK(unit_product(q, 1, 1) == basis(4, 0, -1));
  CHECK(unit_product(q, 2, 2) == basis(4, 0, -1));
  CHECK(unit_product(q, 3, 3) == basis(4, 0, -1));
  CHECK(unit_product(q, 1, 2) == basis(4, 3));
  CHECK(unit_product(q, 2, 1) == basis(4, 3, -1));

  const Algebra k4 = zoo::named("klein4");
  for (std::size_t a = 1; a <= 3; ++a) CHECK(unit_product(k4, a, a) == basis(4, 0));
  CHECK(unit_product(k4, 1, 2) == basis(4, 3));

  const Algebra hq = zoo::named("hyperbolic-quaternion");
  for (std::size_t a = 1; a <= 3; ++a) CHECK(unit_product(hq, a, a) == basis(4, 0));
  CHECK(unit_product(hq, 1, 2) == basis(4, 3));
  CHECK(unit_product(hq, 2, 1) == basis(4, 3, -1));
  CHECK(unit_product(hq, 2, 3) == basis(4, 1));
  CHECK(unit_product(hq, 3, 2) == basis(4, 1, -1));
  CHECK(unit_product(hq, 3, 1) == basis(4, 2));
  CHECK(unit_product(hq, 1, 3) == basis(4, 2, -1));

  const Algebra t = zoo::named("tessarine");
  CHECK(unit_product(t, 1, 1) == basis(4, 0, -1));
  CHECK(unit_product(t, 2, 2) == basis(4, 0));
  CHECK(unit_product(t, 3, 3) == basis(4, 0, -1));
  CHECK(unit_product(t, 1, 2) == basis(4, 3));

  CHECK(unit_product(zoo::named("complex"), 1, 1) == basis(2, 0, -1));
  CHECK(unit_product(zoo::named("hyperbolic"), 1, 1) == basis(2, 0));
  CHECK(unit_product(zoo::named("dual"), 1, 1) == basis(2, 0, 0));
}

TEST_CASE("hyperbolic quaternions are not associative") {
  const Algebra hq = zoo::named("hyperbolic-quaternion");
  const HNumber i = unit(4, 1), j = unit(4, 2);
  CHECK(mul_direct(hq, mul_direct(hq, i, i), j) != mul_direct(hq, i, mul_direct(hq, i, j)));
}

TEST_CASE("construction identities") {
  CHECK(zoo::cayley_dickson(0).constants() == zoo::named("real").constants());
  CHECK(zoo::cayley_dickson(1).constants() == zoo::named("complex").constants());
  CHECK(zoo::cayley_dickson(2).constants() == zoo::named("quaternion").constants());
  CHECK(zoo::clifford({0, 1, 0}).constants() == zoo::named("complex").constants());
  CHECK(zoo::clifford({1, 0, 0}).constants() == zoo::named("hyperbolic").constants());
  CHECK(zoo::clifford({0, 0, 1}).constants() == zoo::named("dual").constants());
  CHECK(zoo::clifford({0, 2, 0}).constants() == zoo::named("quaternion").constants());
  CHECK(zoo::cayley_dickson(1).constants() == zoo::clifford({0, 1, 0}).constants());
}

TEST_CASE("Cayley-Dickson family") {
  for (int l = 0; l <= 5; ++l) {
    const Algebra a = zoo::cayley_dickson(l);
    CHECK(a.dim() == (std::size_t{1} << l));
    CHECK(a.name() == "cayley-dickson-" + std::to_string(l));
    for (std::size_t u = 1; u < a.dim(); ++u) CHECK(unit_product(a, u, u) == basis(a.dim(), 0, -1));
  }
  CHECK_THROWS_AS(zoo::cayley_dickson(-1), Error);
  CHECK_THROWS_AS(zoo::cayley_dickson(6), Error);

  // Octonions keep the norm multiplicative.
  const Algebra o = zoo::cayley_dickson(3);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const HNumber x = random_hnumber(rng, 8), y = random_hnumber(rng, 8);
    CHECK(abs(mul_direct(o, x, y)) == doctest::Approx(abs(x) * abs(y)).epsilon(1e-13));
  }
  CHECK(zoo::resolve("octonion").constants() == o.constants());
}

TEST_CASE("Clifford family") {
  const Algebra c = zoo::clifford({1, 1, 1});
  CHECK(c.dim() == 8);
  CHECK(c.unit_labels() ==
        std::vector<std::string>{"e1", "e2", "e3", "e12", "e13", "e23", "e123"});
  CHECK(unit_product(c, 1, 1) == basis(8, 0));
  CHECK(unit_product(c, 2, 2) == basis(8, 0, -1));
  CHECK(unit_product(c, 3, 3) == basis(8, 0, 0));
  CHECK(unit_product(c, 1, 2) == basis(8, 4));
  CHECK(unit_product(c, 2, 1) == basis(8, 4, -1));
  // e12 e12 = -e1 e1 e2 e2 = 1
  CHECK(unit_product(c, 4, 4) == basis(8, 0));
  // e1 * e23 = e123
  CHECK(unit_product(c, 1, 6) == basis(8, 7));
  // e2 * e13 = -e123
  CHECK(unit_product(c, 2, 5) == basis(8, 7, -1));

  CHECK_THROWS_AS(zoo::clifford({3, 3, 0}), Error);
  CHECK_THROWS_AS(zoo::clifford({-1, 0, 0}), Error);
  CHECK(zoo::clifford({2, 2, 1}).dim() == 32);
}

TEST_CASE("Clifford algebras with p+q+r <= 4 are degenerate iff r > 0") {
  for (int p = 0; p <= 4; ++p)
    for (int q = 0; p + q <= 4; ++q)
      for (int r = 0; p + q + r <= 4; ++r) {
        CAPTURE(p);
        CAPTURE(q);
        CAPTURE(r);
        const auto v = check_degeneracy(zoo::clifford({p, q, r})).verdict;
        CHECK((v == Verdict::Degenerate) == (r > 0));
      }
}

TEST_CASE("commutativity") {
  for (const char* n : {"complex", "hyperbolic", "dual", "tessarine", "klein4"}) {
    CAPTURE(n);
    CHECK(commutes(zoo::named(n), 1));
  }
  for (const char* n : {"quaternion", "hyperbolic-quaternion"}) {
    CAPTURE(n);
    CHECK_FALSE(commutes(zoo::named(n), 1));
  }
}

TEST_CASE("resolve") {
  CHECK(zoo::resolve("quaternion").constants() == zoo::named("quaternion").constants());
  CHECK(zoo::resolve("cayley-dickson-4").dim() == 16);
  CHECK(zoo::resolve("clifford-1-2-0").dim() == 8);
  CHECK(zoo::is_zoo_name("klein4"));
  CHECK(zoo::is_zoo_name("clifford-0-0-2"));
  CHECK_FALSE(zoo::is_zoo_name("clifford-3-3-0"));
  CHECK_FALSE(zoo::is_zoo_name("cayley-dickson-x"));
  CHECK_FALSE(zoo::is_zoo_name("nosuch"));
  CHECK_THROWS_AS(zoo::resolve("nosuch"), Error);
}

TEST_CASE("every zoo algebra serializes") {
  for (const auto& alg : test::zoo_algebras()) {
    CAPTURE(alg.name());
    const Algebra back = parse_algebra(serialize_algebra(alg));
    CHECK(back.constants() == alg.constants());
    CHECK(check_degeneracy(back).verdict == check_degeneracy(alg).verdict);
  }
}
