#include "slsht/signals.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "slsht/errors.hpp"

namespace slsht {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

double next_uniform(std::mt19937_64& rng) {
  // top 53 bits -> [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Mat3 {
  double m[9];

  static Mat3 rotation_z(double t) {
    const double c = std::cos(t), s = std::sin(t);
    return {{c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0}};
  }
  static Mat3 rotation_y(double t) {
    const double c = std::cos(t), s = std::sin(t);
    return {{c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c}};
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double acc = 0.0;
        for (int k = 0; k < 3; ++k) acc += m[3 * i + k] * o.m[3 * k + j];
        r.m[3 * i + j] = acc;
      }
    return r;
  }
};

Mat3 rotation_zyz(const EulerAngles& rho) {
  return Mat3::rotation_z(rho.alpha) * Mat3::rotation_y(rho.beta) *
         Mat3::rotation_z(rho.gamma);
}

}  // namespace

bool rotated_region_contains(const EllipticalRegion& region,
                             const EulerAngles& rho, double theta, double phi) {
  const Mat3 r = rotation_zyz(rho);
  const double u[3] = {std::sin(theta) * std::cos(phi),
                       std::sin(theta) * std::sin(phi), std::cos(theta)};
  // transpose-apply: carry the point back to the unrotated region
  double v[3];
  for (int i = 0; i < 3; ++i)
    v[i] = r.m[i] * u[0] + r.m[3 + i] * u[1] + r.m[6 + i] * u[2];
  const double vt = std::acos(std::min(1.0, std::max(-1.0, v[2])));
  double vp = std::atan2(v[1], v[0]);
  if (vp < 0.0) vp += 2.0 * kPi;
  return region_contains(region, vt, vp);
}

SphCoeffs random_coeffs(int band_limit, std::uint64_t seed, bool real_signal) {
  SphCoeffs c = SphCoeffs::zeros(band_limit, real_signal);
  std::mt19937_64 rng(seed);
  for (int l = 0; l <= band_limit; ++l) {
    if (real_signal) {
      c.at(l, 0) = cplx(next_uniform(rng), 0.0);
      for (int m = 1; m <= l; ++m) {
        const cplx v(next_uniform(rng), next_uniform(rng));
        c.at(l, m) = v;
        c.at(l, -m) = ((m & 1) ? -1.0 : 1.0) * std::conj(v);
      }
    } else {
      for (int m = -l; m <= l; ++m)
        c.at(l, m) = cplx(next_uniform(rng), next_uniform(rng));
    }
  }
  return c;
}

Example1Layout example1_layout(int band_limit) {
  if (band_limit < 16)
    throw ValidationError("example1 needs a band limit of at least 16");
  Example1Layout layout;
  layout.background_band = band_limit / 4;
  layout.band_lo = 40 * band_limit / 128;
  layout.band_hi = 45 * band_limit / 128;
  // keep the directional order even so Y_l^m + Y_l^{-m} stays real; round to
  // the nearest even so its azimuthal wavelength scales like the band
  layout.order =
      std::max(2, 2 * static_cast<int>(std::lround(10.0 * band_limit / 128.0)));
  layout.band_lo = std::max(layout.band_lo, layout.order);
  layout.band_hi = std::max(layout.band_hi, layout.band_lo);
  layout.region = EllipticalRegion{kPi / 6.0, kPi / 6.0 + kPi / 240.0};
  layout.rotation_colat = EulerAngles{kPi / 2.0, kPi / 2.0, 0.0};
  layout.rotation_lon = EulerAngles{3.0 * kPi / 2.0, kPi / 2.0, kPi / 2.0};
  return layout;
}

SphCoeffs example1_signal(int band_limit, std::uint64_t seed) {
  const Example1Layout layout = example1_layout(band_limit);

  SphCoeffs f1 = random_coeffs(layout.background_band, seed, true);
  const double n1 = f1.norm();

  // band-pass directional part, masked to the two rotated ellipses and
  // spectrally truncated back to the band limit
  SphCoeffs band = SphCoeffs::zeros(2 * band_limit, true);
  for (int l = layout.band_lo; l <= layout.band_hi; ++l) {
    band.at(l, layout.order) = 1.0;
    band.at(l, -layout.order) = 1.0;
  }
  const SphereGrid grid = sphere_grid(2 * band_limit);
  SphereMap map = sh_synthesis(band, grid);
  for (std::size_t t = 0; t < grid.n_theta(); ++t)
    for (std::size_t p = 0; p < grid.n_phi(); ++p) {
      const double theta = grid.thetas[t];
      const double phi = grid.phis[p];
      const bool keep =
          rotated_region_contains(layout.region, layout.rotation_colat, theta,
                                  phi) ||
          rotated_region_contains(layout.region, layout.rotation_lon, theta,
                                  phi);
      if (!keep) map.at(t, p) = 0.0;
    }
  const SphCoeffs masked = sh_analysis(map);

  SphCoeffs f2 = SphCoeffs::zeros(band_limit, true);
  for (int l = 0; l <= band_limit; ++l) {
    f2.at(l, 0) = cplx(masked.at(l, 0).real(), 0.0);
    for (int m = 1; m <= l; ++m) {
      const double sign = (m & 1) ? -1.0 : 1.0;
      const cplx sym =
          0.5 * (masked.at(l, m) + sign * std::conj(masked.at(l, -m)));
      f2.at(l, m) = sym;
      f2.at(l, -m) = sign * std::conj(sym);
    }
  }
  const double n2 = f2.norm();
  if (n2 == 0.0) throw NumericError("example1 directional part vanished");

  SphCoeffs out = SphCoeffs::zeros(band_limit, true);
  for (int i = 0; i < coeff_count(band_limit); ++i) {
    cplx v = (i < coeff_count(layout.background_band)) ? f1.data[i] / n1
                                                       : cplx(0.0, 0.0);
    out.data[i] = 1e3 * (v + f2.data[i] / (4.0 * n2));
  }
  return out;
}

}  // namespace slsht
