#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"

#include "crcensus/errors.hpp"
#include "crcensus/geometry/heisenberg.hpp"
#include "crcensus/geometry/sublaplacian.hpp"
#include "support.hpp"

using namespace crcensus;
using namespace crcensus::geometry;
using doctest::Approx;

namespace {

bool close(const HeisenbergPoint& a, const HeisenbergPoint& b, double tol) {
  return std::abs(a.z - b.z) <= tol && std::abs(a.t - b.t) <= tol;
}

HeisenbergPoint random_point(std::mt19937_64& rng, double spread = 3.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_SUITE("heisenberg_geometry") {
  TEST_CASE("group law examples") {
    CHECK(close(group_mul({}, {3.0, 1.0, 5.0}), {3.0, 1.0, 5.0}, 0.0));
    CHECK(close(group_mul({1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}), {1.0, 1.0, -2.0}, 0.0));
    CHECK(close(group_mul({2.0, 1.0, 3.0}, {-2.0, -1.0, -3.0}), {}, 0.0));
    const HeisenbergPoint g(0.3, -1.2, 0.7);
    CHECK(close(group_mul(g, group_inverse(g)), HeisenbergPoint::identity(), 1e-15));
  }

  TEST_CASE("associativity over random triples") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10000; ++i) {
      const auto a = random_point(rng), b = random_point(rng), c = random_point(rng);
      REQUIRE(close(group_mul(group_mul(a, b), c), group_mul(a, group_mul(b, c)), 1e-12));
    }
  }

  TEST_CASE("Koranyi norm and dilations") {
    CHECK(koranyi_norm({0.0, 0.0, 4.0}) == Approx(2.0).epsilon(1e-15));
    CHECK(koranyi_norm({3.0, 4.0, 0.0}) == Approx(5.0).epsilon(1e-15));
    CHECK(koranyi_norm(dilate(3.0, {1.0, 0.0, 1.0})) == Approx(3.0 * std::pow(2.0, 0.25)).epsilon(1e-14));
    CHECK(close(dilate(2.0, {1.0, 0.0, 1.0}), {2.0, 0.0, 4.0}, 0.0));
    CHECK_THROWS_AS(dilate(0.0, {}), DomainError);
    CHECK_THROWS_AS(dilate(-1.0, {}), DomainError);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> lam(0.01, 100.0);
    for (int i = 0; i < 1000; ++i) {
      const auto g = random_point(rng);
      const double l = lam(rng);
      REQUIRE(koranyi_norm(dilate(l, g)) == Approx(l * koranyi_norm(g)).epsilon(1e-12));
      REQUIRE(close(dilate(l, dilate(1.0 / l, g)), g, 1e-12 * std::max(1.0, koranyi_norm(g) * koranyi_norm(g))));
    }
  }

  TEST_CASE("Cayley transform examples") {
    CHECK(close(cayley_forward({0.0, 1.0}), {}, 0.0));
    CHECK(close(cayley_forward({{0.0, 0.0}, {0.0, 1.0}}), {0.0, 0.0, 1.0}, 1e-15));
    CHECK_THROWS_AS(cayley_forward(SpherePoint::pole()), PoleError);
    const auto o = cayley_inverse({});
    CHECK(std::abs(o.zeta1()) == 0.0);
    CHECK(std::abs(o.zeta2() - 1.0) < 1e-15);
    const auto far = cayley_inverse({0.0, 0.0, 1e8});
    CHECK(std::abs(far.zeta2() + 1.0) < 1e-7);
  }

  TEST_CASE("Cayley inverse lands on the sphere and round trips") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100000; ++i) {
      const auto g = random_point(rng, 10.0);
      const auto z = cayley_inverse(g);
      REQUIRE(std::norm(z.zeta1()) + std::norm(z.zeta2()) == Approx(1.0).epsilon(1e-12));
      const auto back = cayley_forward(z);
      const double scale = std::max(1.0, koranyi_norm(g) * koranyi_norm(g));
      REQUIRE(close(back, g, 1e-10 * scale));
      const auto zeta = support::random_sphere(rng, 0.05);
      const auto again = cayley_inverse(cayley_forward(zeta));
      REQUIRE(std::abs(again.zeta1() - zeta.zeta1()) < 1e-10);
      REQUIRE(std::abs(again.zeta2() - zeta.zeta2()) < 1e-10);
    }
  }

  TEST_CASE("CR distance examples and pullback identity") {
    const SpherePoint a({0.0, 0.0}, {1.0, 0.0});
    const SpherePoint b({0.0, 0.0}, {0.0, 1.0});
    CHECK(cr_distance_sq(a, a) == Approx(0.0));
    CHECK(cr_distance_sq(a, b) == Approx(std::sqrt(2.0)).epsilon(1e-15));
    // at zeta = (0,1), eta = F^-1(0,t) both sides equal 2|t|/sqrt(1+t^2)
    for (double t : {0.5, -2.0, 7.0}) {
      const auto eta = cayley_inverse({0.0, 0.0, t});
      CHECK(cr_distance_sq(a, eta) == Approx(2.0 * std::abs(t) / std::sqrt(1.0 + t * t)).epsilon(1e-14));
    }
    std::mt19937_64 rng(14);
    for (int i = 0; i < 10000; ++i) {
      const auto z = support::random_sphere(rng, 0.05), e = support::random_sphere(rng, 0.05);
      const double n = koranyi_norm(group_mul(group_inverse(cayley_forward(e)), cayley_forward(z)));
      const double rhs = 0.5 * std::abs(1.0 + z.zeta2()) * std::abs(1.0 + e.zeta2()) * n * n;
      REQUIRE(cr_distance_sq(z, e) == Approx(rhs).epsilon(1e-9));
      REQUIRE(cr_distance_sq(z, e) == Approx(cr_distance_sq(e, z)).epsilon(1e-15));
    }
  }

  TEST_CASE("bubbles") {
    const double c0 = jerison_lee_c0();
    CHECK(bubble_w({{}, 1.0}, {}) == Approx(c0));
    const HeisenbergPoint g0(0.4, -0.3, 1.1);
    CHECK(bubble_w({g0, 7.0}, g0) == Approx(7.0 * c0).epsilon(1e-14));
    CHECK_THROWS_AS(BubbleParams({}, 0.0), DomainError);
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> lam(0.1, 50.0);
    for (int i = 0; i < 1000; ++i) {
      const auto c = random_point(rng), g = random_point(rng);
      const double l = lam(rng);
      const double lhs = bubble_w({c, l}, g);
      const double rhs = l * bubble_w({{}, 1.0}, dilate(l, group_mul(group_inverse(c), g)));
      REQUIRE(lhs == Approx(rhs).epsilon(1e-12));
    }
    CHECK(sphere_bubble({SpherePoint(), 1.0}, SpherePoint()) == Approx(c0 / 2.0).epsilon(1e-14));
    const SpherePoint other({0.6, 0.0}, {0.8, 0.0});
    CHECK(sphere_bubble({SpherePoint(), 1e6}, other) < 1e-5);
    CHECK_THROWS_AS(sphere_bubble({SpherePoint(), 1.0}, SpherePoint::pole()), PoleError);
    // standard bubble pulled back through the chart: c0 |1 + zeta2| / 2
    for (int i = 0; i < 1000; ++i) {
      const auto z = support::random_sphere(rng, 0.01);
      REQUIRE(bubble_w({{}, 1.0}, cayley_forward(z)) == Approx(c0 * std::abs(1.0 + z.zeta2()) / 2.0).epsilon(1e-12));
    }
  }

  TEST_CASE("sublaplacian finite differences") {
    const ScalarField one = [](const HeisenbergPoint&) { return 3.0; };
    const ScalarField t = [](const HeisenbergPoint& g) { return g.t; };
    CHECK(std::abs(sublaplacian_fd(one, {0.3, 0.2, 1.0}, 1e-2)) < 1e-10);
    CHECK(std::abs(sublaplacian_richardson(t, {0.3, 0.2, 1.0}, 1e-2)) < 1e-9);
    // |z|^2 has X^2 + Y^2 = 4, so the sublaplacian is -1
    const ScalarField r2 = [](const HeisenbergPoint& g) { return std::norm(g.z); };
    CHECK(sublaplacian_richardson(r2, {0.7, -0.1, 2.0}, 1e-2) == Approx(-1.0).epsilon(1e-9));
  }

  TEST_CASE("c0 squared is a constant ratio") {
    const std::vector<HeisenbergPoint> four = {{1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}, {2.0, 0.0, 3.0}, {0.5, 0.0, -1.0}};
    const auto est = c0_squared(four);
    CHECK(est.spread < 1e-6);
    CHECK(est.value == Approx(4.0).epsilon(1e-6));
    auto doubled = four;
    for (const auto& p : four) doubled.push_back(group_mul({0.1, 0.2, 0.3}, p));
    CHECK(c0_squared(doubled).value == Approx(est.value).epsilon(1e-6));
    CHECK(c0_squared(four, 1e-2, {0.5, -0.5, 2.0}).value == Approx(est.value).epsilon(1e-6));
    const auto& dflt = c0_squared();
    CHECK(dflt.samples.size() >= 20);
    CHECK(dflt.rel_stddev < 1e-5);
  }
}
