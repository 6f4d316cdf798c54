#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "slsht/errors.hpp"
#include "slsht/harmonics.hpp"
#include "slsht/wigner.hpp"

using namespace slsht;

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

SphCoeffs random_complex_coeffs(int L, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SphCoeffs c = SphCoeffs::zeros(L);
  for (auto& v : c.data)
    v = cplx(static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5,
             static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5);
  return c;
}

/// long-double recursion, the high-precision reference for stability checks
long double legendre_ld(int m, int l, long double theta) {
  const int am = std::abs(m);
  const long double x = std::cos(theta), s = std::sin(theta);
  long double p0 = 1.0L / std::sqrt(4.0L * std::numbers::pi_v<long double>);
  for (int j = 1; j <= am; ++j)
    p0 *= -s * std::sqrt((2.0L * j + 1.0L) / (2.0L * j));
  if (m < 0 && (am & 1)) p0 = -p0;
  if (l == am) return p0;
  long double p1 = x * std::sqrt(2.0L * am + 3.0L) * p0;
  for (int k = am + 2; k <= l; ++k) {
    const long double kk = static_cast<long double>(k) * k;
    const long double k1 = static_cast<long double>(k - 1) * (k - 1);
    const long double a = std::sqrt((4.0L * kk - 1.0L) / (kk - am * am));
    const long double b = std::sqrt((k1 - am * am) / (4.0L * k1 - 1.0L));
    const long double p2 = a * (x * p1 - b * p0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// closed-form sectoral value in log space: |lambda_l^l| =
/// sqrt((2l+1)/4pi) sqrt(C(2l,l))/2^l sin^l(theta)
double sectoral_logform(int l, double theta) {
  const double log_c =
      std::lgamma(2.0 * l + 1.0) - 2.0 * std::lgamma(l + 1.0);
  const double lg = 0.5 * std::log((2.0 * l + 1.0) / (4.0 * kPi)) +
                    0.5 * log_c - l * std::numbers::ln2 +
                    l * std::log(std::sin(theta));
  const double sign = (l & 1) ? -1.0 : 1.0;
  return sign * std::exp(lg);
}

cplx rotated_point_value(const SphCoeffs& f, const EulerAngles& rho,
                         double theta, double phi) {
  // (D_rho f)(x) = f(R^{-1} x) with R = Rz(alpha) Ry(beta) Rz(gamma)
  const double ca = std::cos(rho.alpha), sa = std::sin(rho.alpha);
  const double cb = std::cos(rho.beta), sb = std::sin(rho.beta);
  const double cg = std::cos(rho.gamma), sg = std::sin(rho.gamma);
  const double r[9] = {ca * cb * cg - sa * sg,  -ca * cb * sg - sa * cg, ca * sb,
                       sa * cb * cg + ca * sg,  -sa * cb * sg + ca * cg, sa * sb,
                       -sb * cg,                sb * sg,                 cb};
  const double u[3] = {std::sin(theta) * std::cos(phi),
                       std::sin(theta) * std::sin(phi), std::cos(theta)};
  double v[3];
  for (int i = 0; i < 3; ++i)
    v[i] = r[i] * u[0] + r[3 + i] * u[1] + r[6 + i] * u[2];  // R^T u
  const double vt = std::acos(std::min(1.0, std::max(-1.0, v[2])));
  const double vp = std::atan2(v[1], v[0]);
  cplx acc{0.0, 0.0};
  for (int l = 0; l <= f.band_limit; ++l)
    for (int m = -l; m <= l; ++m) acc += f.at(l, m) * eval_ylm(l, m, vt, vp);
  return acc;
}

}  // namespace

TEST_CASE("eval_ylm pinned values") {
  CHECK(std::abs(eval_ylm(0, 0, 0.7, 1.3) - cplx(0.28209479177387814, 0.0)) <
        1e-14);
  CHECK(std::abs(eval_ylm(0, 0, 2.9, 5.1) - cplx(1.0 / std::sqrt(4.0 * kPi), 0.0)) <
        1e-14);
  CHECK(eval_ylm(1, 0, 0.0, 0.0).real() ==
        doctest::Approx(std::sqrt(3.0 / (4.0 * kPi))));
  CHECK(eval_ylm(1, 1, kPi / 2.0, 0.0).real() ==
        doctest::Approx(-std::sqrt(3.0 / (8.0 * kPi))));
  CHECK(eval_ylm(1, 1, kPi / 2.0, 0.0).imag() == doctest::Approx(0.0));
  CHECK_THROWS_AS(eval_ylm(1, 2, 0.5, 0.5), ValidationError);
}

TEST_CASE("legendre recursion stays finite and accurate at high degree") {
  std::mt19937_64 rng(7);
  std::vector<double> col;
  for (int l : {64, 256}) {
    for (int m : {0, l / 2, l}) {
      const int n_args = 10000 / 6;
      for (int i = 0; i < n_args; ++i) {
        const double theta =
            1e-3 + (kPi - 2e-3) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
        col.resize(l - std::abs(m) + 1);
        legendre_column(m, l, theta, col.data());
        const double mine = col.back();
        CHECK(std::isfinite(mine));
        double ref;
        if (m == l)
          ref = sectoral_logform(l, theta);
        else
          ref = static_cast<double>(legendre_ld(m, l, theta));
        CHECK(std::abs(mine - ref) < 1e-10);
      }
    }
  }
}

TEST_CASE("analysis of the constant map") {
  for (int L : {0, 3}) {
    SphereMap map;
    map.grid = sphere_grid(L);
    map.values.assign(map.grid.size(), cplx(1.0 / std::sqrt(4.0 * kPi), 0.0));
    const SphCoeffs c = sh_analysis(map);
    for (int l = 0; l <= L; ++l)
      for (int m = -l; m <= l; ++m) {
        const cplx expected = (l == 0) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
        CHECK(std::abs(c.at(l, m) - expected) < 1e-12);
      }
  }
}

TEST_CASE("analysis picks out a single sampled harmonic") {
  const SphereGrid grid = sphere_grid(2);
  SphereMap map;
  map.grid = grid;
  map.values.resize(grid.size());
  for (std::size_t t = 0; t < grid.n_theta(); ++t)
    for (std::size_t p = 0; p < grid.n_phi(); ++p)
      map.at(t, p) = eval_ylm(2, 1, grid.thetas[t], grid.phis[p]);
  const SphCoeffs c = sh_analysis(map);
  for (int l = 0; l <= 2; ++l)
    for (int m = -l; m <= l; ++m) {
      const cplx expected = (l == 2 && m == 1) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
      CHECK(std::abs(c.at(l, m) - expected) < 1e-12);
    }
}

TEST_CASE("discrete orthonormality of sampled harmonics up to L = 8") {
  const int L = 8;
  const SphereGrid grid = sphere_grid(L);
  for (int l = 0; l <= L; ++l) {
    for (int m = -l; m <= l; ++m) {
      SphereMap map;
      map.grid = grid;
      map.values.resize(grid.size());
      for (std::size_t t = 0; t < grid.n_theta(); ++t)
        for (std::size_t p = 0; p < grid.n_phi(); ++p)
          map.at(t, p) = eval_ylm(l, m, grid.thetas[t], grid.phis[p]);
      const SphCoeffs c = sh_analysis(map);
      for (int lp = 0; lp <= L; ++lp)
        for (int mp = -lp; mp <= lp; ++mp) {
          const double expected = (lp == l && mp == m) ? 1.0 : 0.0;
          CHECK(std::abs(c.at(lp, mp) - expected) < 1e-10);
        }
    }
  }
}

TEST_CASE("synthesis basics") {
  SphCoeffs c = SphCoeffs::zeros(4);
  c.at(0, 0) = 1.0;
  const SphereMap map = sh_synthesis(c, sphere_grid(4));
  for (const cplx& v : map.values)
    CHECK(std::abs(v - cplx(1.0 / std::sqrt(4.0 * kPi), 0.0)) < 1e-14);

  const SphCoeffs z = SphCoeffs::zeros(3);
  const SphereMap zero = sh_synthesis(z, sphere_grid(5));
  for (const cplx& v : zero.values) CHECK(std::abs(v) == 0.0);

  CHECK_THROWS_AS(sh_synthesis(SphCoeffs::zeros(4), sphere_grid(3)),
                  ValidationError);
}

TEST_CASE("round trip analysis(synthesis) recovers coefficients") {
  for (int L : {32, 64}) {
    const SphCoeffs c = random_complex_coeffs(L, 11 + L);
    const SphereMap map = sh_synthesis(c, sphere_grid(L));
    const SphCoeffs back = sh_analysis(map);
    double max_err = 0.0;
    for (int i = 0; i < coeff_count(L); ++i)
      max_err = std::max(max_err, std::abs(back.data[i] - c.data[i]));
    CHECK(max_err < (L <= 32 ? 1e-12 : 1e-11));
  }
}

TEST_CASE("rotation basics") {
  const int L = 6;
  const SphCoeffs c = random_complex_coeffs(L, 3);

  const SphCoeffs ident = rotate_coeffs(c, EulerAngles{0.0, 0.0, 0.0});
  for (int i = 0; i < coeff_count(L); ++i)
    CHECK(std::abs(ident.data[i] - c.data[i]) < 1e-13);

  const double alpha = 1.234;
  const SphCoeffs zrot = rotate_coeffs(c, EulerAngles{alpha, 0.0, 0.0});
  for (int l = 0; l <= L; ++l)
    for (int m = -l; m <= l; ++m)
      CHECK(std::abs(zrot.at(l, m) - std::polar(1.0, -m * alpha) * c.at(l, m)) <
            1e-13);

  const EulerAngles rho{0.9, 2.0, 4.3};
  const SphCoeffs rot = rotate_coeffs(c, rho);
  for (int l = 0; l <= L; ++l) {
    double before = 0.0, after = 0.0;
    for (int m = -l; m <= l; ++m) {
      before += std::norm(c.at(l, m));
      after += std::norm(rot.at(l, m));
    }
    CHECK(std::abs(before - after) < 1e-12);
  }
}

TEST_CASE("spectral rotation agrees with pointwise rotation of the sphere") {
  const int L = 5;
  const SphCoeffs c = random_complex_coeffs(L, 17);
  const EulerAngles rho{2.2, 1.1, 0.4};
  const SphCoeffs rot = rotate_coeffs(c, rho);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 12; ++i) {
    const double theta = 0.05 + 3.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double phi = 6.2 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    cplx direct{0.0, 0.0};
    for (int l = 0; l <= L; ++l)
      for (int m = -l; m <= l; ++m)
        direct += rot.at(l, m) * eval_ylm(l, m, theta, phi);
    const cplx expected = rotated_point_value(c, rho, theta, phi);
    CHECK(std::abs(direct - expected) < 1e-11);
  }
}
