#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "nodal/specfun.hpp"

using namespace nodal::specfun;
using std::complex;

namespace {
void check_cplx(cplx got, double re, double im, double tol) {
  CHECK(std::abs(got - cplx(re, im)) <= tol * (1.0 + std::abs(cplx(re, im))));
}
}  // namespace

TEST_CASE("hankel1 frozen high-precision values, series regime") {
  check_cplx(hankel1(0, {1.0, 0.0}), 0.76519768655796655, 0.088256964215676958, 1e-12);
  check_cplx(hankel1(0, {0.5, 0.0}), 0.9384698072408129, -0.44451873350670656, 1e-12);
  check_cplx(hankel1(0, {3.0, 0.0}), -0.26005195490193344, 0.37685001001279038, 1e-12);
  check_cplx(hankel1(1, {1.0, 0.0}), 0.44005058574493352, -0.78121282130028872, 1e-12);
  check_cplx(hankel1(1, {0.5, 0.0}), 0.24226845767487389, -1.4714723926702431, 1e-12);
  check_cplx(hankel1(0, {1.0, 0.5}), 0.43064462640653444, -0.037156936324262794, 1e-12);
  check_cplx(hankel1(1, {4.0, -2.0}), -1.019556748120827, 2.5056141944377663, 1e-12);
  check_cplx(hankel1(0, {0.05, 0.01}), 0.87315849689895385, -1.9671180385283904, 1e-12);
  check_cplx(hankel1(0, {11.9, 0.0}), 0.025049441699589645, -0.22983321394337506, 1e-11);
  check_cplx(hankel1(1, {11.5, 3.0}), -0.010803562646406617, 0.0042993340438036967, 1e-11);
}

TEST_CASE("hankel1 frozen values, asymptotic regime") {
  check_cplx(hankel1(0, {50.0, 0.0}), 0.055812327669251815, -0.098064995470077079, 1e-11);
  check_cplx(hankel1(1, {50.0, 0.0}), -0.097511828125175138, -0.056795668562014768, 1e-11);
  check_cplx(hankel1(0, {200.0, 0.0}), -0.015437439930565092, -0.054265775249817911, 1e-11);
  check_cplx(hankel1(0, {12.1, 0.0}), 0.069666773606807312, -0.21843838055092549, 1e-10);
  check_cplx(hankel1(1, {12.1, 0.0}), -0.21574897337692481, -0.078736931451395746, 1e-10);
  check_cplx(hankel1(0, {13.0, 3.0}), 0.0096526760294060405, -0.0049534256694846665, 1e-10);
  check_cplx(hankel1(0, {30.0, 10.0}), -4.5929917477310973e-6, -4.5045885851194452e-6, 1e-10);
  check_cplx(hankel1(1, {600.0, 4.0}), 0.00044117655185465427, 0.00040161621023925551, 1e-10);
}

TEST_CASE("series/asymptotic crossover agreement near |z| = 12") {
  // The branch switches at |z| = 17: each side must match the reference values
  // (high-precision oracle) to well within the 1e-10 cross-regime tolerance.
  {
    cplx zs = std::polar(16.999999, -0.3);  // series side
    cplx za = std::polar(17.000001, -0.3);  // asymptotic side
    check_cplx(hankel1(0, zs), -29.294271536543453, 3.2288883679564842, 1e-12);
    check_cplx(hankel1(1, zs), 2.3722935064865987, 29.142116868789378, 1e-12);
    check_cplx(hankel1(0, za), -29.294293293343385, 3.2288340889873143, 1e-12);
    check_cplx(hankel1(1, za), 2.3722391639900332, 29.142136923706568, 1e-12);
  }
  // direct cross-regime consistency via the Wronskian at |z| straddling 17
  for (double x : {16.8, 16.95, 17.05, 17.5}) {
    cplx h0 = hankel1(0, {x, 0.0});
    cplx h1v = hankel1(1, {x, 0.0});
    double j0 = h0.real(), y0 = h0.imag(), j1 = h1v.real(), y1 = h1v.imag();
    // J_1 Y_0 - J_0 Y_1 = 2/(pi z)
    CHECK(std::abs(j1 * y0 - j0 * y1 - 2.0 / (M_PI * x)) <= 1e-10);
  }
}

TEST_CASE("Wronskian identity at 100 random real arguments") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dist(0.2, 60.0);
  for (int i = 0; i < 100; ++i) {
    double x = dist(rng);
    cplx h0 = hankel1(0, {x, 0.0});
    cplx h1v = hankel1(1, {x, 0.0});
    double lhs = h1v.real() * h0.imag() - h0.real() * h1v.imag();
    CHECK(std::abs(lhs - 2.0 / (M_PI * x)) <= 1e-10);
  }
}

TEST_CASE("Cauchy-Riemann residual on a strip grid") {
  const double d = 1e-5;
  for (double x : {0.7, 3.0, 9.0, 20.0, 45.0}) {
    for (double y : {-1.0, 0.2, 2.0}) {
      cplx z(x, y);
      for (int nu : {0, 1}) {
        cplx fx = (hankel1(nu, z + d) - hankel1(nu, z - d)) / (2.0 * d);
        cplx fy = (hankel1(nu, z + cplx(0, d)) - hankel1(nu, z - cplx(0, d))) / (2.0 * d);
        // analyticity: d/dy f = i d/dx f
        CHECK(std::abs(fy - cplx(0, 1) * fx) <= 1e-7 * (1.0 + std::abs(fx)));
      }
    }
  }
}

TEST_CASE("bessel_j frozen values incl. large order") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(3, 0.0) == 0.0);
  CHECK(std::abs(bessel_j(0, 2.404825557695773)) <= 1e-12);
  CHECK(bessel_j(1, 1.8412098282) == doctest::Approx(0.5818652241424414).epsilon(1e-12));
  CHECK(bessel_j(5, 7.5) == doctest::Approx(0.28347390516255046).epsilon(1e-12));
  CHECK(bessel_j(50, 30.0) == doctest::Approx(2.0581656631564178e-8).epsilon(1e-10));
  CHECK(bessel_j(50, 70.0) == doctest::Approx(-0.1139486673878714).epsilon(1e-11));
  CHECK(bessel_j(200, 150.0) == doctest::Approx(8.0577021983968538e-14).epsilon(1e-9));
  CHECK(bessel_j(200, 620.0) == doctest::Approx(-0.0039158725114968586).epsilon(1e-10));
  CHECK(bessel_j(120, 130.5) == doctest::Approx(-0.047259414723091155).epsilon(1e-11));
  CHECK(bessel_j(7, 7.0) == doctest::Approx(0.23358356950569608).epsilon(1e-12));
}

TEST_CASE("bessel_j_prime frozen values and stationary points") {
  CHECK(std::abs(bessel_j_prime(1, 1.841184)) <= 1e-6);  // first maximum of J_1
  CHECK(bessel_j_prime(0, 2.404825557695773) ==
        doctest::Approx(-0.51914749728946676).epsilon(1e-12));
  CHECK(bessel_j_prime(5, 7.5) == doctest::Approx(-0.16515792347067829).epsilon(1e-12));
  CHECK(bessel_j_prime(200, 620.0) == doctest::Approx(0.030957963043554634).epsilon(1e-10));
  CHECK(bessel_j_prime(50, 70.0) == doctest::Approx(0.0026942616650910469).epsilon(1e-9));
  CHECK(bessel_j_prime(1, 0.0) == 0.5);
  CHECK(bessel_j_prime(0, 0.0) == 0.0);
}

TEST_CASE("reflection consistency: hankel1 vs J,Y on the real axis") {
  for (double x : {0.3, 1.0, 2.5, 6.0, 11.0}) {
    cplx h0 = hankel1(0, {x, 0.0});
    CHECK(h0.real() == doctest::Approx(bessel_j(0, x)).epsilon(1e-12));
    CHECK(h0.imag() == doctest::Approx(bessel_y(0, x)).epsilon(1e-12));
    cplx h1v = hankel1(1, {x, 0.0});
    CHECK(h1v.real() == doctest::Approx(bessel_j(1, x)).epsilon(1e-12));
  }
}

TEST_CASE("bessel_root frozen values") {
  CHECK(bessel_root(0, 1, RootKind::J) == doctest::Approx(2.404825557695773).epsilon(1e-13));
  CHECK(bessel_root(0, 2, RootKind::J) == doctest::Approx(5.520078110286311).epsilon(1e-13));
  CHECK(bessel_root(1, 1, RootKind::J) == doctest::Approx(3.831705970207512).epsilon(1e-13));
  CHECK(bessel_root(2, 1, RootKind::J) == doctest::Approx(5.135622301840683).epsilon(1e-13));
  CHECK(bessel_root(7, 3, RootKind::J) == doctest::Approx(18.28758283248173).epsilon(1e-13));
  CHECK(bessel_root(50, 1, RootKind::J) == doctest::Approx(57.11689916011917).epsilon(1e-13));
  CHECK(bessel_root(200, 1, RootKind::J) == doctest::Approx(211.0291665105547).epsilon(1e-13));
  CHECK(bessel_root(10, 10, RootKind::J) == doctest::Approx(45.23157410353504).epsilon(1e-13));
  CHECK(bessel_root(1, 1, RootKind::Jprime) == doctest::Approx(1.841183781340659).epsilon(1e-13));
  CHECK(bessel_root(2, 1, RootKind::Jprime) == doctest::Approx(3.05423692822714).epsilon(1e-13));
  CHECK(bessel_root(0, 1, RootKind::Jprime) == 0.0);
  CHECK(bessel_root(0, 2, RootKind::Jprime) == doctest::Approx(3.831705970207512).epsilon(1e-13));
  CHECK(bessel_root(50, 1, RootKind::Jprime) == doctest::Approx(52.99764038731665).epsilon(1e-13));
  CHECK(bessel_root(200, 1, RootKind::Jprime) == doctest::Approx(204.7409602767712).epsilon(1e-13));
  CHECK(bessel_root(10, 10, RootKind::Jprime) == doctest::Approx(43.60676490137952).epsilon(1e-13));
}

TEST_CASE("root residuals and interlacing for m <= 20, n <= 20") {
  for (int m = 0; m <= 20; m += 5) {
    double prevJ = 0.0, prevJp = -1.0;
    for (int n = 1; n <= 20; ++n) {
      double j = bessel_root(m, n, RootKind::J);
      double jp = bessel_root(m, n, RootKind::Jprime);
      CHECK(std::abs(bessel_j(m, j)) <= 1e-13);
      if (!(m == 0 && n == 1)) CHECK(std::abs(bessel_j_prime(m, jp)) <= 1e-13);
      CHECK(j > prevJ);   // j_{m,n} increasing in n
      CHECK(jp > prevJp); // j'_{m,n} increasing in n
      if (m >= 1) CHECK(jp < j);  // j'_{m,n} < j_{m,n}
      prevJ = j;
      prevJp = jp;
    }
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS(hankel1(0, {-1.0, 0.0}));
  CHECK_THROWS(hankel1(2, {1.0, 0.0}));
  CHECK_THROWS(bessel_j(201, 1.0));
  CHECK_THROWS(bessel_j(0, -1.0));
  CHECK_THROWS(bessel_root(1, 0, RootKind::J));
}
