#include <doctest.h>

#include <cmath>
#include <random>

#include "toepmg/symbol.hpp"

using namespace toepmg;

namespace {

Symbol laplace() { return power_symbol(-1, 1); }
Symbol laplace_shift() { return power_symbol(1, 1); }

Symbol random_symbol(std::mt19937& rng, int radius, bool even) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Symbol::Coefficients c;
  for (int j = -radius; j <= radius; ++j) {
    if (even && j < 0) continue;
    const double v = u(rng);
    c[{j}] = v;
    if (even && j > 0) c[{-j}] = v;
  }
  return Symbol(1, std::move(c));
}

// direct summation of sum_j a_j exp(-i j x)
Complex direct_sum(const Symbol& s, double x) {
  Complex acc{};
  for (const auto& [j, a] : s.coefficients()) acc += a * std::exp(Complex(0.0, -j[0] * x));
  return acc;
}

// 2^{-d} sum over the corner set of x/2 of (r f p)
Complex coarse_oracle(const Symbol& f, const Symbol& r, const Symbol& p, double x) {
  Complex acc{};
  for (double y : {x / 2, x / 2 + pi}) acc += r(y) * f(y) * p(y);
  return acc / 2.0;
}

// Divides g by ((1 + w) / 2)^m in the variable w = exp(-ix). Returns the
// quotient and whether the remainder vanished.
std::pair<std::vector<double>, bool> divide_by_bspline(const Symbol& g, int m) {
  int lo = 0, hi = 0;
  for (const auto& [j, a] : g.coefficients()) lo = std::min(lo, j[0]), hi = std::max(hi, j[0]);
  std::vector<double> poly(static_cast<std::size_t>(hi - lo + 1));
  for (const auto& [j, a] : g.coefficients()) poly[j[0] - lo] = a.real();
  bool exact = true;
  for (int k = 0; k < m; ++k) {
    // synthetic division by (w + 1) / 2, highest degree first
    std::vector<double> q(poly.size() - 1);
    double carry = 0.0;
    for (std::size_t i = poly.size(); i-- > 1;) {
      carry = poly[i] - carry;
      q[i - 1] = carry;
    }
    if (std::abs(poly[0] - q[0]) > 1e-12) exact = false;
    for (auto& v : q) v *= 2.0;
    poly = q;
  }
  return {poly, exact};
}

}  // namespace

TEST_SUITE("symbol") {
  TEST_CASE("evaluation examples") {
    CHECK(std::abs(laplace()(0.0)) == doctest::Approx(0.0));
    CHECK(laplace()(pi).real() == doctest::Approx(4.0));
    CHECK(cubic_interp_symbol()(0.0).real() == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("evaluation matches direct summation on random symbols") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ux(-pi, pi);
    for (int t = 0; t < 200; ++t) {
      Symbol::Coefficients c;
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (int j = -4; j <= 4; ++j) c[{j}] = Complex(u(rng), u(rng));
      const Symbol s(1, c);
      const double x = ux(rng);
      CHECK(std::abs(s(x) - direct_sum(s, x)) < 1e-13);
    }
  }

  TEST_CASE("normalization drops explicit zeros") {
    const Symbol s(1, {{{0}, 2.0}, {{1}, 0.0}, {{-1}, -1.0}});
    CHECK(s.coefficients().size() == 2);
    CHECK((laplace() - laplace()).empty());
  }

  TEST_CASE("real-valued flag") {
    CHECK(laplace().real_valued());
    CHECK(cubic_interp_symbol().real_valued());
    CHECK_FALSE(Symbol::stencil({0.5, 0.5}, 0).real_valued());
    std::mt19937 rng(3);
    const Symbol s = random_symbol(rng, 3, true);
    for (const auto& [j, a] : s.coefficients()) CHECK(std::abs(s.coefficient({-j[0]}) - std::conj(a)) < 1e-15);
  }

  TEST_CASE("algebra examples") {
    CHECK((laplace() * laplace_shift()).approx_equal(Symbol(1, {{{0}, 2.0}, {{2}, -1.0}, {{-2}, -1.0}})));
    CHECK((laplace() * Symbol::constant(1.0)).approx_equal(laplace()));
    CHECK((laplace_shift() * laplace_shift())
              .approx_equal(Symbol(1, {{{0}, 6.0}, {{1}, 4.0}, {{-1}, 4.0}, {{2}, 1.0}, {{-2}, 1.0}})));
    CHECK(mul(laplace(), laplace_shift()).approx_equal(laplace() * laplace_shift()));
    CHECK(add(laplace(), laplace_shift()).approx_equal(Symbol::constant(4.0)));
    CHECK(scale(laplace(), 2.0).approx_equal(laplace() + laplace()));
  }

  TEST_CASE("product evaluates pointwise") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ux(-pi, pi);
    for (int t = 0; t < 50; ++t) {
      const Symbol a = random_symbol(rng, 3, false), b = random_symbol(rng, 2, false);
      const double x = ux(rng);
      CHECK(std::abs((a * b)(x) - a(x) * b(x)) < 1e-12);
    }
  }

  TEST_CASE("dimension mismatch is reported") {
    CHECK_THROWS_AS(laplace() * power_symbol(-1, 1, 2), DimensionMismatch);
    CHECK_THROWS_AS(laplace() + power_symbol(-1, 1, 2), DimensionMismatch);
  }

  TEST_CASE("derivative examples") {
    const Symbol d1 = derivative(laplace(), 0, 1);
    CHECK(d1.approx_equal(Symbol(1, {{{1}, Complex(0, 1)}, {{-1}, Complex(0, -1)}})));
    CHECK(derivative(laplace(), 0, 0).approx_equal(laplace()));
    CHECK(derivative(laplace(), 0, 2)(0.0).real() == doctest::Approx(2.0));
    for (double x : {-2.0, 0.3, 1.7}) CHECK(d1(x).real() == doctest::Approx(2.0 * std::sin(x)));
  }

  TEST_CASE("derivative agrees with centered finite differences") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ux(-3.0, 3.0);
    for (int t = 0; t < 50; ++t) {
      const Symbol s = random_symbol(rng, 3, false);
      const double x = ux(rng), h = 1e-5;
      const Complex fd = (s(x + h) - s(x - h)) / (2 * h);
      const Complex d = derivative(s, 0, 1)(x);
      CHECK(std::abs(fd - d) <= 1e-6 * std::max(1.0, std::abs(d)));
    }
  }

  TEST_CASE("zero order examples") {
    CHECK(zero_order_at(power_symbol(1, 3), pi) == 6);
    CHECK(zero_order_at(laplace(), 0.0) == 2);
    CHECK(zero_order_at(laplace(), pi / 2) == 0);
  }

  TEST_CASE("zero order matches factorization exponents") {
    for (int s = 1; s <= 4; ++s) {
      CHECK(zero_order_at(power_symbol(-1, s), 0.0) == 2 * s);
      CHECK(zero_order_at(power_symbol(1, s), pi) == 2 * s);
      CHECK(zero_order_at(power_symbol(1, s), -pi) == 2 * s);
    }
  }

  TEST_CASE("separable zero orders") {
    const Symbol s = power_symbol(-1, 2, 2);
    const Point origin{0.0, 0.0};
    CHECK(zero_orders_at(s, origin) == std::vector<int>{4, 4});
    CHECK(zero_order_at(s, origin) == 8);
    const Symbol general(2, {{{0, 0}, 4.0}, {{1, 0}, -1.0}, {{-1, 0}, -1.0}, {{0, 1}, -1.0}, {{0, -1}, -1.0}});
    CHECK_THROWS_AS(zero_order_at(general, origin), UnsupportedAnalysis);
  }

  TEST_CASE("mirror points") {
    const auto m0 = mirror_points(Point{0.0});
    REQUIRE(m0.size() == 1);
    CHECK(std::abs(std::abs(m0[0][0]) - pi) < 1e-15);
    const auto mpi = mirror_points(Point{pi});
    REQUIRE(mpi.size() == 1);
    CHECK(mpi[0][0] == doctest::Approx(0.0));
    const auto m2 = mirror_points(Point{0.0, 0.0});
    CHECK(m2.size() == 3);
    for (int d = 1; d <= 3; ++d) {
      const Point x(static_cast<std::size_t>(d), 0.4);
      CHECK(corner_points(x).size() == (1u << d));
      CHECK(mirror_points(x).size() == (1u << d) - 1);
    }
  }

  TEST_CASE("mirror set is an involution") {
    const Point x{0.3, -1.1};
    for (const auto& y : corner_points(x)) {
      auto back = corner_points(y);
      for (const auto& z : corner_points(x)) {
        bool found = false;
        for (const auto& w : back)
          found = found || (std::abs(wrap_angle(w[0] - z[0])) < 1e-12 && std::abs(wrap_angle(w[1] - z[1])) < 1e-12);
        CHECK(found);
      }
    }
  }

  TEST_CASE("wrap angle range") {
    CHECK(wrap_angle(pi) == doctest::Approx(-pi));
    CHECK(wrap_angle(2 * pi) == doctest::Approx(0.0));
    CHECK(wrap_angle(-pi) == doctest::Approx(-pi));
    CHECK(wrap_angle(3 * pi / 2) == doctest::Approx(-pi / 2));
  }

  TEST_CASE("low and high frequency orders") {
    CHECK(lf_order(bspline_symbol(2)) == 2);
    CHECK(hf_order(bspline_symbol(2)) == 2);
    CHECK(lf_order(bspline_symbol(4)) == 2);
    CHECK(hf_order(bspline_symbol(4)) == 4);
    CHECK(lf_order(cubic_interp_symbol()) == 4);
    CHECK(hf_order(cubic_interp_symbol()) == 4);
    const OrderReport r = orders(bspline_symbol(4));
    CHECK(r.lf == 2);
    CHECK(r.hf == 4);
  }

  TEST_CASE("prolongation role divides by 2^d") {
    const Symbol p = bspline_symbol(2) * 2.0;
    CHECK(lf_order(p, TransferRole::normalized) == 0);
    CHECK(lf_order(p, TransferRole::prolongation) == 2);
    CHECK(hf_order(p, TransferRole::prolongation) == 2);
    CHECK(lf_order(bspline_symbol(2, 2) * 4.0, TransferRole::prolongation) == 2);
  }

  TEST_CASE("even B-splines have LF 2, odd ones are only reported") {
    for (int m : {2, 4, 6}) CHECK(lf_order(bspline_symbol(m)) == 2);
    for (int m = 1; m <= 6; ++m) CHECK(hf_order(bspline_symbol(m)) == m);
    // centered phi_3 has first-order contact with 1 at the origin
    MESSAGE("lf_order(phi_3) = " << lf_order(bspline_symbol(3)));
    CHECK(lf_order(bspline_symbol(3)) >= 1);
  }

  TEST_CASE("B-spline masks") {
    const Symbol p2 = bspline_symbol(2);
    CHECK(p2.approx_equal(Symbol::stencil({0.25, 0.5, 0.25}, -1)));
    for (double x : {0.0, 0.7, 2.0}) CHECK(p2(x).real() == doctest::Approx((1 + std::cos(x)) / 2));
    const Symbol p4 = bspline_symbol(4);
    CHECK(p4.approx_equal(Symbol::stencil({1 / 16.0, 4 / 16.0, 6 / 16.0, 4 / 16.0, 1 / 16.0}, -2)));
    for (double x : {0.0, 0.7, 2.0})
      CHECK(p4(x).real() == doctest::Approx((1 + std::cos(x)) * (1 + std::cos(x)) / 4));
    CHECK(bspline_symbol(1).approx_equal(Symbol::stencil({0.5, 0.5}, 0)));
    CHECK(bspline_symbol(1, 1, false).approx_equal(Symbol::stencil({0.5, 0.5}, 0)));
    CHECK(bspline_symbol(3).approx_equal(Symbol::stencil({0.125, 0.375, 0.375, 0.125}, -1)));
  }

  TEST_CASE("B-spline rows are binomial coefficients") {
    for (int m = 1; m <= 6; ++m) {
      const Symbol s = bspline_symbol(m);
      int k = 0;
      double binom = 1.0;
      for (const auto& [j, a] : s.coefficients()) {
        CHECK(j[0] == k - m / 2);
        CHECK(a.real() * std::ldexp(1.0, m) == doctest::Approx(binom));
        binom = binom * (m - k) / (k + 1);
        ++k;
      }
      CHECK(k == m + 1);
    }
  }

  TEST_CASE("cubic interpolation") {
    const Symbol g = cubic_interp_symbol();
    CHECK(g.approx_equal(Symbol::stencil({-1 / 32.0, 0.0, 9 / 32.0, 16 / 32.0, 9 / 32.0, 0.0, -1 / 32.0}, -3)));
    CHECK(g.approx_equal(bspline_symbol(4) * Symbol::stencil({-0.5, 2.0, -0.5}, -1)));
    CHECK(std::abs(g(pi)) < 1e-15);
    CHECK(zero_order_at(g, pi) == 4);
    const Symbol g2 = cubic_interp_symbol(2);
    CHECK(g2.separable());
    CHECK(std::abs(g2(Point{0.3, -0.8}) - g(0.3) * g(-0.8)) < 1e-15);
  }

  TEST_CASE("high-frequency factorization") {
    for (const auto& [g, m] : {std::pair{bspline_symbol(2), 2}, {bspline_symbol(4), 4}, {cubic_interp_symbol(), 4}}) {
      REQUIRE(hf_order(g) == m);
      const auto [quotient, exact] = divide_by_bspline(g, m);
      CHECK(exact);
      double at_origin = 0.0;
      for (double q : quotient) at_origin += q;
      CHECK(at_origin == doctest::Approx(g(0.0).real()));
    }
  }

  TEST_CASE("power symbols") {
    CHECK(power_symbol(1, 1).approx_equal(Symbol(1, {{{0}, 2.0}, {{1}, 1.0}, {{-1}, 1.0}})));
    CHECK(power_symbol(-1, 2).approx_equal(Symbol(1, {{{0}, 6.0}, {{1}, -4.0}, {{-1}, -4.0}, {{2}, 1.0}, {{-2}, 1.0}})));
    CHECK(zero_order_at(power_symbol(1, 1), pi) == 2);
    CHECK_THROWS(power_symbol(0, 1));
    CHECK_THROWS(power_symbol(1, 0));
  }

  TEST_CASE("high-pass family is exposed as written") {
    // order floor(q/2) at the origin, the mirror point of pi
    for (int q = 1; q <= 6; ++q) {
      const Symbol mu = high_pass_symbol(q);
      CHECK(zero_order_at(mu, 0.0) == q / 2);
      CHECK(std::abs(mu(pi)) > 0.0);
    }
    CHECK(high_pass_symbol(2).approx_equal(Symbol::stencil({0.25, -0.25}, -1)));
  }

  TEST_CASE("coarse symbol examples") {
    CHECK(coarsen_symbol(laplace(), laplace_shift(), laplace_shift()).approx_equal(laplace() * 2.0));
    const Symbol c = coarsen_symbol(laplace_shift(), laplace(), laplace());
    CHECK(c.approx_equal(laplace() * 2.0));
    CHECK(zero_order_at(c, 0.0) == 2);
    std::mt19937 rng(2);
    const Symbol f = random_symbol(rng, 4, true);
    const Symbol one = Symbol::constant(1.0);
    const Symbol cf = coarsen_symbol(f, one, one);
    for (double x : {-3.0, -1.0, 0.0, 0.5, 2.9}) CHECK(std::abs(cf(x) - coarse_oracle(f, one, one, x)) < 1e-12);
  }

  TEST_CASE("coarse symbol matches the aliasing sum") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> ux(-pi, pi);
    for (int t = 0; t < 50; ++t) {
      const Symbol f = random_symbol(rng, 3, false), r = random_symbol(rng, 2, false), p = random_symbol(rng, 2, false);
      const Symbol c = coarsen_symbol(f, r, p);
      for (int k = 0; k < 5; ++k) {
        const double x = ux(rng);
        CHECK(std::abs(c(x) - coarse_oracle(f, r, p, x)) < 1e-12);
      }
    }
  }

  TEST_CASE("coarse symbol is linear in f") {
    std::mt19937 rng(17);
    const Symbol r = random_symbol(rng, 2, true), p = random_symbol(rng, 2, true);
    const Symbol f = random_symbol(rng, 3, true), g = random_symbol(rng, 2, true);
    const Complex alpha = 1.5, beta = -0.25;
    const Symbol lhs = coarsen_symbol(f * alpha + g * beta, r, p);
    const Symbol rhs = coarsen_symbol(f, r, p) * alpha + coarsen_symbol(g, r, p) * beta;
    CHECK(lhs.approx_equal(rhs, 1e-13));
  }

  TEST_CASE("coarse symbol of a separable product") {
    const Symbol f = power_symbol(-1, 1, 2), r = power_symbol(1, 1, 2);
    const Symbol c = coarsen_symbol(f, r, r);
    CHECK(c.separable());
    CHECK(c.approx_equal(power_symbol(-1, 1, 2) * 4.0));
  }

  TEST_CASE("zero tracking") {
    {
      const Symbol f = power_symbol(1, 2);
      const ZeroInfo z{{pi}, {4}};
      const ZeroInfo out = track_zero(f, z, power_symbol(-1, 1), power_symbol(-1, 1));
      CHECK(out.location[0] == doctest::Approx(0.0));
      CHECK(out.order() == 4);
    }
    {
      const ZeroInfo out = track_zero(laplace(), ZeroInfo{{0.0}, {2}}, laplace_shift(), laplace_shift());
      CHECK(out.location[0] == doctest::Approx(0.0));
      CHECK(out.order() == 2);
    }
    {
      // 2 - 2 sin x vanishes at pi/2; 2 + 2 sin x vanishes at its mirror -pi/2
      const Symbol f(1, {{{0}, 2.0}, {{-1}, Complex(0, 1)}, {{1}, Complex(0, -1)}});
      const Symbol r(1, {{{0}, 2.0}, {{-1}, Complex(0, -1)}, {{1}, Complex(0, 1)}});
      REQUIRE(zero_order_at(f, pi / 2) == 2);
      const ZeroInfo out = track_zero(f, ZeroInfo{{pi / 2}, {2}}, r, r);
      CHECK(out.location[0] == doctest::Approx(-pi));
      CHECK(out.order() == 2);
      CHECK(zero_order_at(coarsen_symbol(f, r, r), -pi) == 2);
    }
  }

  TEST_CASE("zero tracking rejects transfers that break the order condition") {
    const Symbol f = power_symbol(1, 3);
    CHECK_THROWS_AS(track_zero(f, ZeroInfo{{pi}, {6}}, laplace(), laplace()), AnalysisError);
    CHECK_THROWS_AS(track_zero(f, ZeroInfo{{0.0}, {6}}, laplace(), laplace()), AnalysisError);
  }

  TEST_CASE("zero search") {
    const auto z = find_zeros(power_symbol(1, 3));
    REQUIRE(z.size() == 1);
    CHECK(z[0][0] == doctest::Approx(-pi));
    const auto z2 = find_zeros(laplace() * laplace_shift());
    CHECK(z2.size() == 2);
    CHECK(find_zeros(Symbol::constant(1.0)).empty());
  }
}
