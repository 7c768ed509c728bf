#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lenselast/elasticity.hpp"

using namespace lens;
using namespace lens::elasticity;

namespace {
constexpr double kHalfPi = 1.5707963267948966;
constexpr double kPi = 3.141592653589793;

std::vector<geometry::Point2> interior_points(int count, unsigned seed, double min_r = 0.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uc(1.0 + 1e-6, 2.0 - 1e-6);
  std::uniform_real_distribution<double> ut(-kHalfPi + 1e-3, kHalfPi - 1e-3);
  std::vector<geometry::Point2> pts;
  while (int(pts.size()) < count) {
    const auto p = geometry::circle_point({uc(rng)}, ut(rng));
    if (std::hypot(p.x1, p.x2) > min_r) pts.push_back(p);
  }
  return pts;
}
}  // namespace

TEST_CASE("stress pinned values") {
  auto s = stress({{2.0, 0.0}, 0.0});
  CHECK(s.t11 == doctest::Approx(0.0));
  CHECK(s.t12 == doctest::Approx(2.0));
  CHECK(s.t22 == doctest::Approx(0.0));

  s = stress({{1.0, 1.0}, 0.0});
  CHECK(s.t11 == doctest::Approx(-(kPi + 2.0)));
  CHECK(s.t12 == doctest::Approx(0.0));
  CHECK(s.t22 == doctest::Approx(2.0 - kPi));

  s = stress({{2.0, 0.0}, 4.0});
  CHECK(s.t12 == doctest::Approx(4.0));

  CHECK_THROWS_AS(stress({{0.0, 0.0}, 0.0}), SingularPointError);
}

TEST_CASE("airy pinned values and stress recovery") {
  CHECK(airy({{2.0, 0.0}, 0.0}).value == doctest::Approx(0.0));
  CHECK(airy({{1.0, 1.0}, 0.0}).value == doctest::Approx(kPi));
  CHECK(airy({{1.0, 1.0}, 2.0}).value == doctest::Approx(0.0));

  for (double k : {0.0, 1.0, 5.0}) {
    for (const auto& p : interior_points(200, 31u)) {
      const auto s = stress({p, k});
      const auto a = airy({p, k});
      CHECK(std::abs(s.t11 + a.hessian.t22) < 1e-12 * (1.0 + std::abs(s.t11)));
      CHECK(std::abs(s.t22 + a.hessian.t11) < 1e-12 * (1.0 + std::abs(s.t22)));
      CHECK(std::abs(s.t12 - a.hessian.t12) < 1e-12 * (1.0 + std::abs(s.t12)));
    }
  }
}

TEST_CASE("airy finite-difference hessian agrees") {
  const numerics::DiffConfig fd{1e-3, 3};
  for (double k : {0.0, 2.0}) {
    for (const auto& p : interior_points(30, 37u, 0.1)) {
      auto phi = [k](double x1, double x2) { return airy({{x1, x2}, k}).value; };
      const auto a = airy({p, k});
      const double p11 = numerics::derivative([&](double x) { return phi(x, p.x2); }, p.x1, 2, fd);
      const double p22 = numerics::derivative([&](double y) { return phi(p.x1, y); }, p.x2, 2, fd);
      const double scale = std::abs(a.hessian.t11) + std::abs(a.hessian.t22) + 1.0;
      CHECK(std::abs(p11 - a.hessian.t11) / scale < 1e-6);
      CHECK(std::abs(p22 - a.hessian.t22) / scale < 1e-6);
    }
  }
}

TEST_CASE("lame pinned values") {
  auto lm = lame({{1.0, 1.0}, 0.0});
  CHECK(lm.mu == doctest::Approx(2.0));
  CHECK(lm.lambda == doctest::Approx(-(kPi + 2.0)));
  CHECK(lm.lambda_plus_2mu == doctest::Approx(2.0 - kPi));
  REQUIRE(lm.poisson.has_value());
  CHECK(*lm.poisson == doctest::Approx((kPi + 2.0) / (2.0 * kPi)));

  lm = lame({{1.0, 1.0}, 1.0});
  CHECK(lm.mu == doctest::Approx(3.0));

  // theta = 0: theta cot(theta) -> 1
  lm = lame({{2.0, 0.0}, 0.0});
  CHECK(lm.mu == doctest::Approx(4.0));
  CHECK(lm.lambda == doctest::Approx(-8.0));
  CHECK(lm.lambda_plus_2mu == doctest::Approx(0.0));

  CHECK_THROWS_AS(lame({{0.0, 0.5}, 0.0}), SingularPointError);
}

TEST_CASE("mu positive, lambda_plus_2mu consistent") {
  for (double k : {0.0, 1.0, 5.0}) {
    for (const auto& p : interior_points(300, 41u)) {
      const auto lm = lame({p, k});
      CHECK(lm.mu > 0.0);
      CHECK(lm.lambda_plus_2mu == doctest::Approx(lm.lambda + 2.0 * lm.mu).epsilon(1e-12));
    }
  }
}

TEST_CASE("polar strain forms on the circle family") {
  for (double c : {1.0, 1.5, 2.0}) {
    for (int j = -6; j <= 6; ++j) {
      const double theta = 1.45 * double(j) / 6.0;
      const auto p = geometry::circle_point({c}, theta);
      const auto e = fields::strain(p);
      CHECK(e.t22 == doctest::Approx(std::tan(theta)).epsilon(1e-12));
      const double ct = std::cos(theta);
      CHECK(e.t12 ==
            doctest::Approx(std::cos(2.0 * theta) / (4.0 * ct * ct)).epsilon(1e-12));
    }
  }
}

TEST_CASE("lambda_coefficient pinned values and duality") {
  CHECK(lambda_coefficient({1.0, 0.5}) == doctest::Approx(-8.0 / 3.0));
  CHECK(lambda_coefficient({2.0, 0.0}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(lambda_coefficient({1.0, 1.0}), std::domain_error);

  for (const auto& p : interior_points(200, 43u)) {
    const auto e = fields::strain(p);
    if (std::abs(e.t12) < 1e-8) continue;
    CHECK(std::abs((e.t11 - e.t22) / e.t12 - lambda_coefficient(p)) < 1e-12 * 100.0);
  }
}

TEST_CASE("constitutive residual vanishes") {
  for (const MaterialPoint mp :
       {MaterialPoint{{1.0, 1.0}, 0.0}, {{2.0, 0.0}, 0.0}, {{1.0, 0.5}, 3.0}}) {
    const auto res = constitutive_residual(mp);
    CHECK(std::abs(res.t11) < 1e-10);
    CHECK(std::abs(res.t12) < 1e-10);
    CHECK(std::abs(res.t22) < 1e-10);
  }
  for (double k : {0.0, 1.0, 5.0})
    for (const auto& p : interior_points(200, 47u)) {
      const auto res = constitutive_residual({p, k});
      CHECK(std::abs(res.t11) < 1e-10);
      CHECK(std::abs(res.t12) < 1e-10);
      CHECK(std::abs(res.t22) < 1e-10);
    }
}

TEST_CASE("lame_from_ratios") {
  {  // direct identity: 2 mu = sigma12 / e12
    const auto r = lame_from_ratios({0.0, 2.0, 0.0}, {0.0, 0.25, 0.0});
    REQUIRE(r.mu.has_value());
    CHECK(2.0 * *r.mu == doctest::Approx(8.0));
    CHECK_FALSE(r.lambda_plus_mu.has_value());
    CHECK_FALSE(r.lambda.has_value());
  }
  {  // e12 = 0: mu identity undefined
    const auto r = lame_from_ratios({1.0, 2.0, 3.0}, {0.5, 0.0, 0.25});
    CHECK_FALSE(r.mu.has_value());
  }
  // round trip against the closed-form moduli
  for (double k : {0.0, 2.0})
    for (const auto& p : interior_points(150, 53u)) {
      const auto e = fields::strain(p);
      const auto lm = lame({p, k});
      const auto r = lame_from_ratios(stress({p, k}), e);
      if (std::abs(e.t12) > 1e-8 && r.mu)
        CHECK(*r.mu == doctest::Approx(lm.mu).epsilon(1e-9));
      if (std::abs(e.t11 + e.t22) > 1e-8 && r.lambda_plus_mu)
        CHECK(*r.lambda_plus_mu == doctest::Approx(lm.lambda + lm.mu).epsilon(1e-9));
      if (std::abs(e.t11 * e.t11 - e.t22 * e.t22) > 1e-8 && r.lambda_plus_2mu) {
        CHECK(*r.lambda_plus_2mu == doctest::Approx(lm.lambda_plus_2mu).epsilon(1e-9));
        CHECK(*r.lambda == doctest::Approx(lm.lambda).epsilon(1e-9));
      }
    }
}

TEST_CASE("equilibrium residual small") {
  for (const MaterialPoint mp :
       {MaterialPoint{{1.0, 0.5}, 0.0}, {{3.0, 1.0}, 5.0}, {{0.5, 0.86}, 1.0}}) {
    const auto r = equilibrium_residual(mp);
    const auto s = stress(mp);
    const double scale = std::abs(s.t11) + std::abs(s.t12) + std::abs(s.t22) + 1.0;
    CHECK(std::abs(r.x1) / scale < 1e-6);
    CHECK(std::abs(r.x2) / scale < 1e-6);
  }
  CHECK_THROWS_AS(equilibrium_residual({{0.005, 0.005}, 0.0}), SingularPointError);
}

TEST_CASE("navier assembly: divergence of lambda tr(e) I + 2 mu e") {
  // Independent of the stress closed form: assemble sigma pointwise from the
  // Lame fields and strain, then difference numerically.
  const numerics::DiffConfig fd{1e-4, 3};
  for (double k : {0.0, 1.0}) {
    auto sig = [k](double x1, double x2) {
      const geometry::Point2 p{x1, x2};
      const auto e = fields::strain(p);
      const auto lm = lame({p, k});
      const double tr = e.t11 + e.t22;
      return fields::SymTensor2{lm.lambda * tr + 2.0 * lm.mu * e.t11, 2.0 * lm.mu * e.t12,
                                lm.lambda * tr + 2.0 * lm.mu * e.t22};
    };
    for (const auto& p : interior_points(40, 59u, 0.3)) {
      const double r1 =
          numerics::derivative([&](double x) { return sig(x, p.x2).t11; }, p.x1, 1, fd) +
          numerics::derivative([&](double y) { return sig(p.x1, y).t12; }, p.x2, 1, fd);
      const double r2 =
          numerics::derivative([&](double x) { return sig(x, p.x2).t12; }, p.x1, 1, fd) +
          numerics::derivative([&](double y) { return sig(p.x1, y).t22; }, p.x2, 1, fd);
      const auto s = stress({p, k});
      const double scale = std::abs(s.t11) + std::abs(s.t12) + std::abs(s.t22) + 1.0;
      CHECK(std::abs(r1) / scale < 1e-4);
      CHECK(std::abs(r2) / scale < 1e-4);
    }
  }
}

TEST_CASE("airy pde residual") {
  CHECK(std::abs(airy_pde_residual({{1.0, 0.5}, 0.0})) < 1e-8);
  CHECK(std::abs(airy_pde_residual({{2.0, 1.0}, 7.0})) < 1e-8);
  CHECK_THROWS_AS(airy_pde_residual({{1.0, 1.0}, 0.0}), std::domain_error);
}

TEST_CASE("ellipticity margin and scan") {
  // theta -> 0 row: margin tends to k / c^2
  CHECK(ellipticity_margin(1.0, 1e-9, 0.0) == doctest::Approx(0.0));
  CHECK(ellipticity_margin(2.0, 1e-9, 1.0) == doctest::Approx(0.25));
  // (1,1): lambda + 2 mu = 2 - pi
  CHECK(ellipticity_margin(1.0, kPi / 4.0, 0.0) == doctest::Approx(2.0 - kPi));

  const auto scan = ellipticity_scan({2.0, 0.0}, 64);
  CHECK(scan.min_margin < 0.0);
  CHECK(scan.k_threshold > 0.0);

  // monotone in k; positive just above the threshold
  const auto above = ellipticity_scan({2.0, scan.k_threshold + 0.01}, 64);
  CHECK(above.min_margin > 0.0);
  const auto mid = ellipticity_scan({2.0, 1.0}, 64);
  CHECK(mid.min_margin > scan.min_margin);
  CHECK(mid.min_margin < above.min_margin);

  // k/c^2 dominance for large k
  const auto large = ellipticity_scan({1.5, 100.0}, 64);
  CHECK(large.min_margin > 0.0);

  CHECK_THROWS_AS(ellipticity_scan({2.0, 0.0}, 8), std::invalid_argument);
}

TEST_CASE("generalized J") {
  CHECK(general_J({1.0, 1.0}, 1, 0.0) == doctest::Approx(2.0));
  CHECK(general_J({1.0, 0.0}, 2, 1.0) == doctest::Approx(2.5));
  CHECK_THROWS_AS(general_J({1.0, 0.0}, 0, 0.0), std::invalid_argument);

  for (int m = 1; m <= 3; ++m)
    for (double k : {0.0, 1.0})
      CHECK(general_J_derivative_check(m, k) < 1e-4);
}
