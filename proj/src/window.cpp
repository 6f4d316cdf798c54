#include "slsht/window.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "slsht/errors.hpp"
#include "slsht/transform.hpp"

namespace slsht {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

constexpr double kRayleighTol = 1e-12;
constexpr int kMaxIterations = 100000;
constexpr int kMinMaskSamples = 10;

double clamp1(double x) { return std::min(1.0, std::max(-1.0, x)); }

}  // namespace

void validate_region(const EllipticalRegion& region) {
  if (!(region.theta_c >= 0.0) || !(region.theta_c <= region.a) ||
      !(region.a <= kPi / 2.0))
    throw ValidationError(
        "elliptical region requires 0 <= theta_c <= a <= pi/2");
}

double angular_distance(double theta1, double phi1, double theta2,
                        double phi2) {
  const double c = std::sin(theta1) * std::sin(theta2) * std::cos(phi1 - phi2) +
                   std::cos(theta1) * std::cos(theta2);
  return std::acos(clamp1(c));
}

bool region_contains(const EllipticalRegion& region, double theta,
                     double phi) {
  const double d = angular_distance(theta, phi, region.theta_c, 0.0) +
                   angular_distance(theta, phi, region.theta_c, kPi);
  return d <= 2.0 * region.a;
}

ConcentrationMatrix concentration_matrix(const EllipticalRegion& region,
                                         int band_limit, int oversample) {
  validate_region(region);
  if (band_limit < 0) throw ValidationError("band limit must be non-negative");
  if (oversample < 2) throw ValidationError("oversample must be at least 2");

  const int dim = coeff_count(band_limit);
  const int N = oversample * band_limit;
  const SphereGrid grid = sphere_grid(N);
  const std::vector<double> ring = theta_weights(N);
  const double dphi = 2.0 * kPi / grid.n_phi();

  // gather samples inside the region with their solid-angle weights
  struct MaskSample {
    double theta;
    double phi;
    double weight;
  };
  std::vector<MaskSample> samples;
  for (std::size_t t = 0; t < grid.n_theta(); ++t)
    for (std::size_t p = 0; p < grid.n_phi(); ++p)
      if (region_contains(region, grid.thetas[t], grid.phis[p]))
        samples.push_back({grid.thetas[t], grid.phis[p], ring[t] * dphi});
  if (static_cast<int>(samples.size()) < kMinMaskSamples)
    throw ValidationError(
        "region mask holds fewer than 10 grid samples; raise oversample or "
        "widen the region");

  // harmonic values at every masked sample
  std::vector<cplx> y(samples.size() * static_cast<std::size_t>(dim));
  {
    std::vector<double> col(band_limit + 1);
    for (std::size_t s = 0; s < samples.size(); ++s) {
      cplx* row = &y[s * dim];
      for (int m = -band_limit; m <= band_limit; ++m) {
        legendre_column(m, band_limit, samples[s].theta, col.data());
        const cplx e = std::polar(1.0, m * samples[s].phi);
        for (int l = std::abs(m); l <= band_limit; ++l)
          row[coeff_index(l, m)] = col[l - std::abs(m)] * e;
      }
    }
  }

  ConcentrationMatrix out;
  out.band_limit = band_limit;
  out.dim = dim;
  out.k.assign(static_cast<std::size_t>(dim) * dim, cplx(0.0, 0.0));

  const int threads = resolve_thread_count(0);
  std::atomic<int> next_row{0};
  auto worker = [&] {
    for (;;) {
      const int r = next_row.fetch_add(1);
      if (r >= dim) break;
      cplx* krow = &out.k[static_cast<std::size_t>(r) * dim];
      for (std::size_t s = 0; s < samples.size(); ++s) {
        const cplx* yrow = &y[s * dim];
        const cplx lead = samples[s].weight * std::conj(yrow[r]);
        for (int c = 0; c < dim; ++c) krow[c] += lead * yrow[c];
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  // symmetrize
  for (int r = 0; r < dim; ++r)
    for (int c = r; c < dim; ++c) {
      const cplx avg = 0.5 * (out.k[static_cast<std::size_t>(r) * dim + c] +
                              std::conj(out.k[static_cast<std::size_t>(c) * dim + r]));
      out.k[static_cast<std::size_t>(r) * dim + c] = avg;
      out.k[static_cast<std::size_t>(c) * dim + r] = std::conj(avg);
    }
  return out;
}

Window eigenfunction_window(const EllipticalRegion& region, int band_limit,
                            int oversample) {
  const ConcentrationMatrix K = concentration_matrix(region, band_limit,
                                                     oversample);
  const int dim = K.dim;

  std::vector<cplx> v(dim, cplx(0.0, 0.0));
  v[coeff_index(0, 0)] = 1.0;
  std::vector<cplx> w(dim);
  double lambda_prev = -1.0;
  double lambda = 0.0;
  bool converged = false;
  for (int it = 0; it < kMaxIterations; ++it) {
    for (int r = 0; r < dim; ++r) {
      const cplx* krow = &K.k[static_cast<std::size_t>(r) * dim];
      cplx acc{0.0, 0.0};
      for (int c = 0; c < dim; ++c) acc += krow[c] * v[c];
      w[r] = acc;
    }
    cplx rq{0.0, 0.0};
    double nw = 0.0;
    for (int r = 0; r < dim; ++r) {
      rq += std::conj(v[r]) * w[r];
      nw += std::norm(w[r]);
    }
    lambda = rq.real();
    nw = std::sqrt(nw);
    if (nw == 0.0) throw NumericError("power iteration collapsed to zero");
    for (int r = 0; r < dim; ++r) v[r] = w[r] / nw;
    if (it > 0 &&
        std::abs(lambda - lambda_prev) <= kRayleighTol * std::abs(lambda)) {
      converged = true;
      break;
    }
    lambda_prev = lambda;
  }
  if (!converged)
    throw NumericError("power iteration did not converge within 1e5 steps");

  // phase so the north-pole value is real and positive
  cplx pole{0.0, 0.0};
  for (int l = 0; l <= band_limit; ++l)
    pole += v[coeff_index(l, 0)] * std::sqrt((2.0 * l + 1.0) / (4.0 * kPi));
  if (std::abs(pole) > 0.0) {
    const cplx phase = std::conj(pole) / std::abs(pole);
    for (cplx& x : v) x *= phase;
  }

  // the region is reflection symmetric, so the eigenfunction is real valued;
  // enforce the coefficient symmetry exactly
  Window win;
  win.region = region;
  win.lambda = lambda;
  win.coeffs = SphCoeffs::zeros(band_limit, true);
  for (int l = 0; l <= band_limit; ++l) {
    win.coeffs.at(l, 0) = cplx(v[coeff_index(l, 0)].real(), 0.0);
    for (int m = 1; m <= l; ++m) {
      const double sign = (m & 1) ? -1.0 : 1.0;
      const cplx sym =
          0.5 * (v[coeff_index(l, m)] + sign * std::conj(v[coeff_index(l, -m)]));
      win.coeffs.at(l, m) = sym;
      win.coeffs.at(l, -m) = sign * std::conj(sym);
    }
  }
  const double norm = win.coeffs.norm();
  if (norm == 0.0) throw NumericError("eigenfunction window is zero");
  for (cplx& x : win.coeffs.data) x /= norm;

  if (std::abs(win.coeffs.at(0, 0)) < 1e-10)
    throw NumericError(
        "window DC component vanishes; inversion would be impossible");
  return win;
}

}  // namespace slsht
