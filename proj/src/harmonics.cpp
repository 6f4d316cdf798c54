#include "slsht/harmonics.hpp"

#include <cmath>
#include <numbers>

#include "slsht/dft.hpp"
#include "slsht/errors.hpp"
#include "slsht/wigner.hpp"

namespace slsht {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

int wrap_index(int k, int n) { return ((k % n) + n) % n; }

}  // namespace

SphCoeffs SphCoeffs::zeros(int band_limit, bool real_signal) {
  if (band_limit < 0) throw ValidationError("band limit must be non-negative");
  SphCoeffs c;
  c.band_limit = band_limit;
  c.real_signal = real_signal;
  c.data.assign(coeff_count(band_limit), cplx(0.0, 0.0));
  return c;
}

double SphCoeffs::norm() const {
  double sum = 0.0;
  for (const cplx& v : data) sum += std::norm(v);
  return std::sqrt(sum);
}

void legendre_column(int m, int lmax, double theta, double* out) {
  const int am = std::abs(m);
  if (am > lmax) throw ValidationError("legendre order exceeds degree");
  const double x = std::cos(theta);
  const double s = std::sin(theta);

  // sectoral seed lambda_am^am, in one pass to avoid factorial overflow
  double sect = 1.0 / std::sqrt(4.0 * kPi);
  for (int j = 1; j <= am; ++j)
    sect *= -s * std::sqrt((2.0 * j + 1.0) / (2.0 * j));
  if (m < 0 && (am & 1)) sect = -sect;

  out[0] = sect;
  if (lmax == am) return;
  out[1] = x * std::sqrt(2.0 * am + 3.0) * sect;
  for (int l = am + 2; l <= lmax; ++l) {
    const double ll = static_cast<double>(l) * l;
    const double l1 = static_cast<double>(l - 1) * (l - 1);
    const double a = std::sqrt((4.0 * ll - 1.0) / (ll - am * am));
    const double b = std::sqrt((l1 - am * am) / (4.0 * l1 - 1.0));
    out[l - am] = a * (x * out[l - am - 1] - b * out[l - am - 2]);
  }
}

void legendre_rows(int m, int lmax, const double* thetas, std::size_t n_nodes,
                   double* rows) {
  const int am = std::abs(m);
  if (am > lmax) throw ValidationError("legendre order exceeds degree");
  double* r0 = rows;
  for (std::size_t j = 0; j < n_nodes; ++j) {
    double sect = 1.0 / std::sqrt(4.0 * kPi);
    const double s = std::sin(thetas[j]);
    for (int k = 1; k <= am; ++k)
      sect *= -s * std::sqrt((2.0 * k + 1.0) / (2.0 * k));
    if (m < 0 && (am & 1)) sect = -sect;
    r0[j] = sect;
  }
  if (lmax == am) return;
  double* r1 = rows + n_nodes;
  const double c1 = std::sqrt(2.0 * am + 3.0);
  for (std::size_t j = 0; j < n_nodes; ++j)
    r1[j] = std::cos(thetas[j]) * c1 * r0[j];
  for (int l = am + 2; l <= lmax; ++l) {
    const double ll = static_cast<double>(l) * l;
    const double l1 = static_cast<double>(l - 1) * (l - 1);
    const double a = std::sqrt((4.0 * ll - 1.0) / (ll - am * am));
    const double b = std::sqrt((l1 - am * am) / (4.0 * l1 - 1.0));
    const double* prev1 = rows + static_cast<std::size_t>(l - am - 1) * n_nodes;
    const double* prev2 = rows + static_cast<std::size_t>(l - am - 2) * n_nodes;
    double* cur = rows + static_cast<std::size_t>(l - am) * n_nodes;
    for (std::size_t j = 0; j < n_nodes; ++j)
      cur[j] = a * (std::cos(thetas[j]) * prev1[j] - b * prev2[j]);
  }
}

cplx eval_ylm(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l)
    throw ValidationError("eval_ylm requires 0 <= |m| <= l");
  std::vector<double> col(l - std::abs(m) + 1);
  legendre_column(m, l, theta, col.data());
  return col.back() * std::polar(1.0, m * phi);
}

SphCoeffs sh_analysis(const SphereMap& map) {
  const int L = map.grid.band_limit;
  const int n = 2 * L + 1;
  if (map.values.size() != map.grid.size())
    throw ValidationError("map sample count does not match its grid");

  // ring Fourier coefficients F_m(theta_t), m = -L..L
  std::vector<cplx> fm(static_cast<std::size_t>(n) * (L + 1));
  {
    dft::Plan ring(n, -1);
    std::vector<cplx> row(n);
    for (int t = 0; t <= L; ++t) {
      ring.execute(&map.values[static_cast<std::size_t>(t) * n], row.data());
      for (int m = -L; m <= L; ++m)
        fm[static_cast<std::size_t>(m + L) * (L + 1) + t] =
            row[wrap_index(m, n)] / static_cast<double>(n);
    }
  }

  // parity extension over the full circle, then trig coefficients in theta
  std::vector<cplx> ctheta(static_cast<std::size_t>(n) * n);
  {
    dft::Plan tdft(n, -1);
    std::vector<cplx> ext(n), spec(n);
    for (int m = -L; m <= L; ++m) {
      const cplx* f = &fm[static_cast<std::size_t>(m + L) * (L + 1)];
      const double parity = (m & 1) ? -1.0 : 1.0;
      for (int t = 0; t <= L; ++t) ext[t] = f[t];
      for (int t = L + 1; t < n; ++t) ext[t] = parity * f[2 * L - t];
      tdft.execute(ext.data(), spec.data());
      for (int k = -L; k <= L; ++k)
        ctheta[static_cast<std::size_t>(m + L) * n + (k + L)] =
            spec[wrap_index(k, n)] * std::polar(1.0, -kPi * k / n) /
            static_cast<double>(n);
    }
  }

  // evaluate each ring profile on the colatitudes of S_{2L}
  const int N = 2 * L;
  const int nn = N + 1;
  std::vector<double> nodes(nn);
  for (int j = 0; j < nn; ++j) nodes[j] = kPi * (2 * j + 1) / (2 * N + 1);
  std::vector<cplx> g(static_cast<std::size_t>(n) * nn);
  for (int m = -L; m <= L; ++m) {
    const cplx* c = &ctheta[static_cast<std::size_t>(m + L) * n];
    for (int j = 0; j < nn; ++j) {
      const cplx z = std::polar(1.0, nodes[j]);
      cplx w = std::polar(1.0, -L * nodes[j]);
      cplx acc{0.0, 0.0};
      for (int k = 0; k < n; ++k) {
        acc += c[k] * w;
        w *= z;
      }
      g[static_cast<std::size_t>(m + L) * nn + j] = acc;
    }
  }

  // exact theta quadrature against the normalized Legendre rows
  const std::vector<double> v = theta_weights(N);
  SphCoeffs out = SphCoeffs::zeros(L);
  std::vector<cplx> u(nn);
  std::vector<double> rows;
  for (int m = -L; m <= L; ++m) {
    const int am = std::abs(m);
    for (int j = 0; j < nn; ++j)
      u[j] = 2.0 * kPi * v[j] * g[static_cast<std::size_t>(m + L) * nn + j];
    rows.resize(static_cast<std::size_t>(L - am + 1) * nn);
    legendre_rows(m, L, nodes.data(), nn, rows.data());
    for (int l = am; l <= L; ++l) {
      const double* lam = rows.data() + static_cast<std::size_t>(l - am) * nn;
      cplx acc{0.0, 0.0};
      for (int j = 0; j < nn; ++j) acc += u[j] * lam[j];
      out.at(l, m) = acc;
    }
  }
  return out;
}

SphereMap sh_synthesis(const SphCoeffs& coeffs, const SphereGrid& grid) {
  const int L = coeffs.band_limit;
  const int M = grid.band_limit;
  if (M < L)
    throw ValidationError(
        "synthesis grid band limit below coefficient band limit");
  const int n = 2 * M + 1;

  SphereMap map;
  map.grid = grid;
  map.values.assign(grid.size(), cplx(0.0, 0.0));

  dft::Plan ring(n, +1);
  std::vector<cplx> spec(n);
  std::vector<double> col(L + 1);
  for (int t = 0; t <= M; ++t) {
    const double theta = grid.thetas[t];
    std::fill(spec.begin(), spec.end(), cplx(0.0, 0.0));
    for (int m = -L; m <= L; ++m) {
      const int am = std::abs(m);
      legendre_column(m, L, theta, col.data());
      cplx acc{0.0, 0.0};
      for (int l = am; l <= L; ++l) acc += coeffs.at(l, m) * col[l - am];
      spec[wrap_index(m, n)] = acc;
    }
    ring.execute(spec.data(), &map.values[static_cast<std::size_t>(t) * n]);
  }
  return map;
}

SphCoeffs rotate_coeffs(const SphCoeffs& coeffs, const EulerAngles& rho,
                        const DeltaTables& delta) {
  const int L = coeffs.band_limit;
  if (delta.band_limit() < L)
    throw ValidationError("delta tables too small for rotation");
  SphCoeffs out = SphCoeffs::zeros(L, coeffs.real_signal);
  std::vector<cplx> pre(2 * L + 1);
  for (int l = 0; l <= L; ++l) {
    const std::vector<double> d = wigner_d_from_delta(l, rho.beta, delta);
    const int w = 2 * l + 1;
    for (int mp = -l; mp <= l; ++mp)
      pre[mp + l] = std::polar(1.0, -mp * rho.gamma) * coeffs.at(l, mp);
    for (int m = -l; m <= l; ++m) {
      const double* row = d.data() + static_cast<std::size_t>(m + l) * w;
      cplx acc{0.0, 0.0};
      for (int mp = 0; mp < w; ++mp) acc += row[mp] * pre[mp];
      out.at(l, m) = std::polar(1.0, -m * rho.alpha) * acc;
    }
  }
  return out;
}

SphCoeffs rotate_coeffs(const SphCoeffs& coeffs, const EulerAngles& rho) {
  return rotate_coeffs(coeffs, rho, DeltaTables(coeffs.band_limit));
}

}  // namespace slsht
