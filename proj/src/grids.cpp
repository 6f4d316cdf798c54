#include "slsht/grids.hpp"

#include <cmath>
#include <numbers>

#include "slsht/errors.hpp"

namespace slsht {

namespace {

constexpr double kPi = std::numbers::pi;

void check_band_limit(int band_limit) {
  if (band_limit < 0) throw ValidationError("band limit must be non-negative");
}

}  // namespace

std::complex<double> fourier_sin_integral(int m) {
  if (m == 0) return {2.0, 0.0};
  if (m == 1) return {0.0, kPi / 2.0};
  if (m == -1) return {0.0, -kPi / 2.0};
  if (m % 2 != 0) return {0.0, 0.0};
  return {2.0 / (1.0 - static_cast<double>(m) * m), 0.0};
}

SphereGrid sphere_grid(int band_limit) {
  check_band_limit(band_limit);
  SphereGrid grid;
  grid.band_limit = band_limit;
  const int n = 2 * band_limit + 1;
  grid.thetas.resize(band_limit + 1);
  for (int t = 0; t <= band_limit; ++t)
    grid.thetas[t] = kPi * (2 * t + 1) / n;
  grid.phis.resize(n);
  for (int p = 0; p < n; ++p) grid.phis[p] = 2.0 * kPi * p / n;
  return grid;
}

So3Grid so3_grid(int band_limit) {
  check_band_limit(band_limit);
  So3Grid grid;
  grid.band_limit = band_limit;
  const int n = 2 * band_limit + 1;
  grid.alphas.resize(n);
  for (int a = 0; a < n; ++a) grid.alphas[a] = 2.0 * kPi * a / n;
  grid.gammas = grid.alphas;
  grid.betas.assign(grid.alphas.begin(),
                    grid.alphas.begin() + band_limit + 1);
  return grid;
}

QuadratureWeights beta_weights(int band_limit) {
  check_band_limit(band_limit);
  const int L = band_limit;
  const int n = 2 * L + 1;
  QuadratureWeights qw;
  qw.band_limit = L;
  qw.w_table.resize(n);
  for (int m = -L; m <= L; ++m) qw.w_table[m + L] = fourier_sin_integral(m);

  qw.beta_weights.resize(L + 1);
  qw.beta_weights[0] = 4.0 * kPi * kPi / (L / 2 + 0.5);
  for (int b = 1; b <= L; ++b) {
    const double beta = 2.0 * kPi * b / n;
    std::complex<double> sum{0.0, 0.0};
    for (int m = -L; m <= L; ++m) sum += qw.w(-m) * std::cos(m * beta);
    if (std::abs(sum.imag()) >= 1e-12)
      throw NumericError("beta weight imaginary residue exceeds 1e-12");
    qw.beta_weights[b] = 8.0 * kPi * kPi * sum.real();
  }
  return qw;
}

std::vector<double> theta_weights(int band_limit) {
  check_band_limit(band_limit);
  const int L = band_limit;
  const int n = 2 * L + 1;
  std::vector<double> weights(L + 1);
  for (int t = 0; t <= L; ++t) {
    const double theta = kPi * (2 * t + 1) / n;
    std::complex<double> sum{0.0, 0.0};
    for (int k = -L; k <= L; ++k)
      sum += fourier_sin_integral(-k) * std::cos(k * theta);
    if (std::abs(sum.imag()) >= 1e-12)
      throw NumericError("theta weight imaginary residue exceeds 1e-12");
    // the south-pole row pairs with itself under the parity extension
    weights[t] = (t < L) ? 2.0 * sum.real() / n : sum.real() / n;
  }
  return weights;
}

}  // namespace slsht
