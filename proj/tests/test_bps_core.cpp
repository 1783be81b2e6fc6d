#include <doctest.h>

#include <cmath>
#include <random>

#include "bpsosc/bps_core.hpp"

using namespace bpsosc;

namespace {

SkewForm standard_form() { return SkewForm({{0, -1}, {1, 0}}); }

BpsStructure double_a1(Rational omega = 1) {
  return BpsStructure(standard_form(), {cplx(1, 0), cplx(0, 1)}, symmetrize({{{1, 0}, omega}}));
}

AlgebraElement random_element(std::mt19937_64& rng, int rank) {
  std::uniform_int_distribution<int> coord(-2, 2), coeff(-3, 3), count(1, 5);
  AlgebraElement e;
  int n = count(rng);
  for (int i = 0; i < n; ++i) {
    Charge c(rank);
    for (auto& x : c) x = coord(rng);
    e.add(c, GaussRational(Rational(coeff(rng), 1 + std::abs(coeff(rng))), Rational(coeff(rng))));
  }
  return e;
}

SkewForm random_form(std::mt19937_64& rng, int rank) {
  std::uniform_int_distribution<int> entry(-2, 2);
  std::vector<std::vector<std::int64_t>> m(rank, std::vector<std::int64_t>(rank, 0));
  for (int i = 0; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j) {
      m[i][j] = entry(rng);
      m[j][i] = -m[i][j];
    }
  return SkewForm(m);
}

}  // namespace

TEST_CASE("pairing") {
  SkewForm f = standard_form();
  CHECK(pairing(f, {1, 0}, {0, 1}) == -1);
  CHECK(pairing(f, {2, 1}, {1, 1}) == -1);
  CHECK(pairing(f, {3, -7}, {3, -7}) == 0);
  CHECK(pairing(f, {0, 1}, {1, 0}) == 1);
  CHECK_THROWS_AS(pairing(f, {1, 0, 0}, {0, 1}), ValidationError);
  CHECK_THROWS_AS(SkewForm({{0, 1}, {1, 0}}), ValidationError);
}

TEST_CASE("DT spectrum is the multicover transform") {
  BpsStructure s = double_a1();
  CHECK(dt_spectrum(s, {2, 0}) == Rational(1, 4));
  CHECK(dt_spectrum(s, {1, 0}) == 1);
  CHECK(dt_spectrum(s, {-3, 0}) == Rational(1, 9));
  CHECK(dt_spectrum(s, {1, 1}) == 0);
  BpsStructure s2(standard_form(), {cplx(1, 0), cplx(0, 1)}, symmetrize({{{1, 0}, Rational(1)}, {{2, 0}, Rational(1)}}));
  CHECK(dt_spectrum(s2, {2, 0}) == Rational(5, 4));
  CHECK_THROWS_AS(dt_spectrum(s, {0, 0}), ValidationError);
}

TEST_CASE("uncoupledness") {
  CHECK(is_uncoupled(double_a1()));
  BpsStructure empty(standard_form(), {cplx(1, 0), cplx(0, 1)}, {});
  CHECK(is_uncoupled(empty));
  BpsStructure coupled(standard_form(), {cplx(1, 0), cplx(0, 1)},
                       symmetrize({{{1, 0}, Rational(1)}, {{0, 1}, Rational(1)}}));
  CHECK_FALSE(is_uncoupled(coupled));
}

TEST_CASE("spectrum validation") {
  CHECK_THROWS_AS(BpsStructure(standard_form(), {cplx(1, 0), cplx(0, 1)}, {{{1, 0}, Rational(1)}}), ValidationError);
  CHECK_THROWS_AS(symmetrize({{{1, 0}, Rational(1)}, {{-1, 0}, Rational(2)}}), ValidationError);
  // support property |Z(a)| > C |a|
  CHECK_NOTHROW(BpsStructure(standard_form(), {cplx(1, 0), cplx(0, 1)}, symmetrize({{{2, 0}, Rational(1)}}), 0.9));
  CHECK_THROWS_AS(BpsStructure(standard_form(), {cplx(1, 0), cplx(0, 1)}, symmetrize({{{2, 0}, Rational(1)}}), 1.0),
                  ValidationError);
}

TEST_CASE("active rays") {
  BpsStructure s(standard_form(), {cplx(0, 1), cplx(1, 0)}, symmetrize({{{1, 0}, Rational(1)}, {{2, 0}, Rational(3)}}));
  auto rays = active_rays(s);
  REQUIRE(rays.size() == 2);
  CHECK(std::abs(rays[0].angle - kPi / 2) < 1e-15);
  CHECK(std::abs(rays[1].angle - 3 * kPi / 2) < 1e-15);
  CHECK(rays[0].classes == std::vector<Charge>{{1, 0}, {2, 0}});
  CHECK(rays[1].classes == std::vector<Charge>{{-2, 0}, {-1, 0}});

  BpsStructure t(SkewForm({{0, 0}, {0, 0}}), {cplx(1, 1), cplx(2, 2)},
                 symmetrize({{{1, 0}, Rational(1)}, {{0, 1}, Rational(1)}}));
  auto r2 = active_rays(t);
  REQUIRE(r2.size() == 2);
  CHECK(std::abs(r2[0].angle - kPi / 4) < 1e-15);
  CHECK(r2[0].classes.size() == 2);

  BpsStructure empty(standard_form(), {cplx(1, 0), cplx(0, 1)}, {});
  CHECK(active_rays(empty).empty());

  BpsStructure degenerate(standard_form(), {cplx(0, 0), cplx(0, 1)}, symmetrize({{{1, 0}, Rational(1)}}));
  CHECK_THROWS_AS(active_rays(degenerate), ValidationError);
}

TEST_CASE("active rays partition the active classes") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coord(-3, 3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    Spectrum sp;
    for (int i = 0; i < 6; ++i) {
      Charge c{coord(rng), coord(rng), coord(rng)};
      if (!is_zero(c)) sp[c] = 1;
    }
    BpsStructure s(random_form(rng, 3), {cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng))}, symmetrize(sp));
    std::vector<Charge> seen;
    for (const auto& r : active_rays(s)) seen.insert(seen.end(), r.classes.begin(), r.classes.end());
    std::sort(seen.begin(), seen.end());
    CHECK(seen == s.active());
  }
}

TEST_CASE("twisted product") {
  SkewForm f = standard_form();
  Charge a{0, 1}, b{1, 0};  // <a,b> = 1
  REQUIRE(pairing(f, a, b) == 1);
  auto xa = AlgebraElement::generator(a), xb = AlgebraElement::generator(b);
  CHECK(twisted_product(xa, AlgebraElement::generator({0, 0}), f) == xa);
  auto xg = AlgebraElement::generator({1, 0}), xgv = AlgebraElement::generator({0, 1});
  CHECK(twisted_product(xg, xgv, f) == AlgebraElement::generator({1, 1}, -1));
  auto lhs = twisted_product(xa + AlgebraElement::generator(b, 2), xb, f);
  AlgebraElement rhs = AlgebraElement::generator(a + b, -1) + AlgebraElement::generator(2 * b, 2);
  CHECK(lhs == rhs);
}

TEST_CASE("Poisson bracket") {
  SkewForm f = standard_form();
  auto x = AlgebraElement::generator({1, 0});
  CHECK(poisson_bracket(x, x, f).empty());
  CHECK(poisson_bracket(x, AlgebraElement::generator({0, 1}), f) == AlgebraElement::generator({1, 1}));
  SkewForm g({{0, 2}, {-2, 0}});
  CHECK(poisson_bracket(AlgebraElement::generator({1, 0}), AlgebraElement::generator({0, 1}), g) ==
        AlgebraElement::generator({1, 1}, 2));
}

TEST_CASE("algebra identities on random elements") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    int rank = 2 + trial % 3;
    SkewForm f = random_form(rng, rank);
    auto a = random_element(rng, rank), b = random_element(rng, rank), c = random_element(rng, rank);
    auto mul = [&](const AlgebraElement& x, const AlgebraElement& y) { return twisted_product(x, y, f); };
    auto br = [&](const AlgebraElement& x, const AlgebraElement& y) { return poisson_bracket(x, y, f); };
    CHECK(mul(a, b) == mul(b, a));
    CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
    CHECK((br(a, b) + br(b, a)).empty());
    CHECK((br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))).empty());
    CHECK(br(a, mul(b, c)) == mul(br(a, b), c) + mul(b, br(a, c)));
  }
}

TEST_CASE("q-bracket deviation") {
  SkewForm f = standard_form();
  SkewForm f2({{0, 2}, {-2, 0}});
  Charge a{1, 0}, b{0, 1};
  CHECK(q_bracket_deviation(a, a, f, 0.3) == 0.0);
  for (double h : {0.4, 0.2, 0.1}) {
    CHECK(std::abs(q_bracket_deviation(a, b, f2, h) - 2 * (h - std::sin(h))) < 1e-14);
    CHECK(std::abs(q_bracket_deviation(a, b, f2, h, QBranch::MinusExpPlusIh) - 2 * (h + std::sin(h))) < 1e-14);
  }
  double d1 = q_bracket_deviation(a, b, f2, 0.1), d2 = q_bracket_deviation(a, b, f2, 0.05);
  CHECK(std::abs(std::log2(d1 / d2) - 3.0) < 0.02);
  CHECK_THROWS_AS(q_bracket_deviation(a, b, f, 0.1), ValidationError);
  CHECK_NOTHROW(q_bracket_deviation(a, b, f, 0.1, QBranch::MinusExpMinusIh, HalfPower::Principal));
}
