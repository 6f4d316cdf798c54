#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "slsht/errors.hpp"
#include "slsht/grids.hpp"
#include "slsht/harmonics.hpp"
#include "slsht/wigner.hpp"

using namespace slsht;

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

/// explicit degree-2 d-matrix entries (Varshalovich table), for m >= 0
double d2_closed_form(int m, int mp, double beta) {
  const double c = std::cos(beta), s = std::sin(beta);
  if (m == 2 && mp == 2) return 0.25 * (1.0 + c) * (1.0 + c);
  if (m == 2 && mp == 1) return -0.5 * (1.0 + c) * s;
  if (m == 2 && mp == 0) return std::sqrt(6.0) / 4.0 * s * s;
  if (m == 2 && mp == -1) return -0.5 * (1.0 - c) * s;
  if (m == 2 && mp == -2) return 0.25 * (1.0 - c) * (1.0 - c);
  if (m == 1 && mp == 1) return 0.5 * (1.0 + c) * (2.0 * c - 1.0);
  if (m == 1 && mp == 0) return -std::sqrt(1.5) * s * c;
  if (m == 1 && mp == -1) return 0.5 * (1.0 - c) * (2.0 * c + 1.0);
  if (m == 0 && mp == 0) return 0.5 * (3.0 * c * c - 1.0);
  return std::nan("");
}

double d2_any(int m, int mp, double beta) {
  // reflect into the tabulated sector with the d-matrix symmetries
  if (m >= std::abs(mp) && m >= 0) return d2_closed_form(m, mp, beta);
  if (mp >= std::abs(m))  // transpose
    return ((m - mp) % 2 == 0 ? 1.0 : -1.0) * d2_any(mp, m, beta);
  return d2_any(-mp, -m, beta);
}

}  // namespace

TEST_CASE("delta table seeds") {
  const DeltaTables d0(0);
  CHECK(d0.at(0, 0, 0) == doctest::Approx(1.0));

  const DeltaTables d1(1);
  CHECK(d1.at(1, 0, 0) == doctest::Approx(0.0));
  CHECK(d1.at(1, 1, 1) == doctest::Approx(0.5));
  CHECK(d1.at(1, 1, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(d1.at(1, 0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(d1.at(1, -1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(d1.at(1, 1, -1) == doctest::Approx(0.5));
}

TEST_CASE("delta symmetry relations at L = 32") {
  const int L = 32;
  const DeltaTables delta(L);
  double worst_t = 0.0, worst_r = 0.0;
  for (int p = 0; p <= L; ++p)
    for (int q = -p; q <= p; ++q)
      for (int qp = -p; qp <= p; ++qp) {
        const double v = delta.at(p, q, qp);
        const double sign = ((q - qp) % 2 == 0) ? 1.0 : -1.0;
        worst_t = std::max(worst_t, std::abs(v - sign * delta.at(p, qp, q)));
        worst_r = std::max(worst_r, std::abs(v - delta.at(p, -qp, -q)));
      }
  CHECK(worst_t < 1e-12);
  CHECK(worst_r < 1e-12);
}

TEST_CASE("delta rows have unit norm up to L = 64") {
  const int L = 64;
  const DeltaTables delta(L);
  for (int p = 0; p <= L; ++p)
    for (int q = -p; q <= p; ++q) {
      const double* row = delta.row(p, q);
      double norm = 0.0;
      for (int i = 0; i < 2 * p + 1; ++i) norm += row[i] * row[i];
      CHECK(std::abs(norm - 1.0) < 1e-12);
    }
}

TEST_CASE("wigner_d at beta = 0 is the identity") {
  const std::vector<double> d = wigner_d(5, 0.0);
  const int w = 11;
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j)
      CHECK(std::abs(d[i * w + j] - (i == j ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("wigner_d at pi/2 reproduces the delta table") {
  const std::vector<double> d = wigner_d(1, kPi / 2.0);
  const DeltaTables delta(1);
  for (int q = -1; q <= 1; ++q)
    for (int qp = -1; qp <= 1; ++qp)
      CHECK(std::abs(d[(q + 1) * 3 + (qp + 1)] - delta.at(1, q, qp)) < 1e-13);
}

TEST_CASE("wigner_d degree 2 matches the closed form") {
  const double beta = 0.7;
  const std::vector<double> d = wigner_d(2, beta);
  for (int m = -2; m <= 2; ++m)
    for (int mp = -2; mp <= 2; ++mp)
      CHECK(std::abs(d[(m + 2) * 5 + (mp + 2)] - d2_any(m, mp, beta)) < 1e-12);
}

TEST_CASE("wigner_D identities and unitarity") {
  const std::vector<cplx> ident = wigner_D(3, EulerAngles{0.0, 0.0, 0.0});
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      CHECK(std::abs(ident[i * 7 + j] - cplx(i == j ? 1.0 : 0.0, 0.0)) < 1e-12);

  CHECK(std::abs(wigner_D(0, EulerAngles{1.0, 2.0, 3.0})[0] - cplx(1.0, 0.0)) <
        1e-14);

  std::mt19937_64 rng(5);
  for (int l = 1; l <= 8; ++l) {
    const EulerAngles rho{6.2 * static_cast<double>(rng() >> 11) * 0x1.0p-53,
                          3.1 * static_cast<double>(rng() >> 11) * 0x1.0p-53,
                          6.2 * static_cast<double>(rng() >> 11) * 0x1.0p-53};
    const std::vector<cplx> D = wigner_D(l, rho);
    const int w = 2 * l + 1;
    for (int i = 0; i < w; ++i)
      for (int j = 0; j < w; ++j) {
        cplx acc{0.0, 0.0};
        for (int k = 0; k < w; ++k) acc += D[i * w + k] * std::conj(D[j * w + k]);
        CHECK(std::abs(acc - cplx(i == j ? 1.0 : 0.0, 0.0)) < 1e-12);
      }
  }
}

TEST_CASE("discrete Wigner-D orthogonality on an adequate grid") {
  // products of two degree-<=2 functions are integrated on E_4
  const int deg = 2;
  const int L = 2 * deg;
  const So3Grid grid = so3_grid(L);
  const QuadratureWeights qw = beta_weights(L);
  const int n = 2 * L + 1;
  const DeltaTables delta(deg);

  std::vector<std::vector<std::vector<double>>> drows(L + 1);
  for (int b = 0; b <= L; ++b) {
    drows[b].resize(deg + 1);
    for (int p = 0; p <= deg; ++p)
      drows[b][p] = wigner_d_from_delta(p, grid.betas[b], delta);
  }

  for (int l = 0; l <= deg; ++l)
    for (int m = -l; m <= l; ++m)
      for (int mp = -l; mp <= l; ++mp)
        for (int p = 0; p <= deg; ++p)
          for (int q = -p; q <= p; ++q)
            for (int qp = -p; qp <= p; ++qp) {
              cplx acc{0.0, 0.0};
              for (int a = 0; a < n; ++a)
                for (int b = 0; b <= L; ++b)
                  for (int c = 0; c < n; ++c) {
                    const cplx da =
                        std::polar(1.0, -(m - q) * grid.alphas[a]);
                    const cplx dc =
                        std::polar(1.0, -(mp - qp) * grid.gammas[c]);
                    const double dd =
                        drows[b][l][(m + l) * (2 * l + 1) + (mp + l)] *
                        drows[b][p][(q + p) * (2 * p + 1) + (qp + p)];
                    acc += da * dc * dd * qw.beta_weights[b];
                  }
              acc /= static_cast<double>(n) * n * n;
              const bool diag = (l == p && m == q && mp == qp);
              const double expected = diag ? 8.0 * kPi * kPi / (2 * l + 1) : 0.0;
              CHECK(std::abs(acc - expected) < 1e-9);
            }
}

TEST_CASE("so3 coefficient bookkeeping") {
  CHECK(So3Coeffs::count(0) == 1);
  CHECK(So3Coeffs::count(1) == 10);
  CHECK(So3Coeffs::count(3) == 4 * 7 * 9 / 3);
  CHECK(So3Coeffs::index(0, 0, 0) == 0);
  CHECK(So3Coeffs::index(1, -1, -1) == 1);
  CHECK(So3Coeffs::index(1, 1, 1) == 9);
  CHECK(So3Coeffs::index(2, -2, -2) == 10);
}

TEST_CASE("triple product pinned values and selection rules") {
  for (int l : {0, 1, 4}) {
    for (int m = -l; m <= l; ++m)
      CHECK(triple_product(l, m, 0, 0, l, m) ==
            doctest::Approx(1.0 / std::sqrt(4.0 * kPi)));
  }
  CHECK(triple_product(1, 1, 1, 1, 2, 1) == 0.0);  // order rule m'+q != m
  CHECK(triple_product(1, 0, 1, 0, 3, 0) == 0.0);  // triangle rule
  CHECK(triple_product(1, 0, 1, 0, 2, 0) != 0.0);
  CHECK_THROWS_AS(triple_product(61, 0, 0, 0, 61, 0), ValidationError);
  CHECK_THROWS_AS(triple_product(1, 2, 0, 0, 1, 0), ValidationError);
}

TEST_CASE("triple products match dense quadrature up to degree 4") {
  const int deg = 4;
  const int N = 3 * deg;  // integrand band limit
  const SphereGrid grid = sphere_grid(N);
  const std::vector<double> ring = theta_weights(N);
  const double dphi = 2.0 * kPi / grid.n_phi();

  // tabulate all harmonics on the grid
  const int count = coeff_count(deg);
  std::vector<std::vector<cplx>> y(count);
  for (int l = 0; l <= deg; ++l)
    for (int m = -l; m <= l; ++m) {
      auto& tab = y[coeff_index(l, m)];
      tab.resize(grid.size());
      for (std::size_t t = 0; t < grid.n_theta(); ++t)
        for (std::size_t p = 0; p < grid.n_phi(); ++p)
          tab[t * grid.n_phi() + p] =
              eval_ylm(l, m, grid.thetas[t], grid.phis[p]);
    }

  for (int lp = 0; lp <= deg; ++lp)
    for (int mp = -lp; mp <= lp; ++mp)
      for (int p = 0; p <= deg; ++p)
        for (int q = -p; q <= p; ++q)
          for (int l = 0; l <= deg; ++l)
            for (int m = -l; m <= l; ++m) {
              cplx acc{0.0, 0.0};
              const auto& y1 = y[coeff_index(lp, mp)];
              const auto& y2 = y[coeff_index(p, q)];
              const auto& y3 = y[coeff_index(l, m)];
              for (std::size_t t = 0; t < grid.n_theta(); ++t) {
                cplx rowsum{0.0, 0.0};
                for (std::size_t pp = 0; pp < grid.n_phi(); ++pp) {
                  const std::size_t i = t * grid.n_phi() + pp;
                  rowsum += y1[i] * y2[i] * std::conj(y3[i]);
                }
                acc += ring[t] * dphi * rowsum;
              }
              const double expected = triple_product(lp, mp, p, q, l, m);
              CHECK(std::abs(acc - expected) < 1e-10);
            }
}
