#pragma once

#include <cstdint>

#include "slsht/harmonics.hpp"
#include "slsht/window.hpp"

namespace slsht {

/// Coefficients with real and imaginary parts uniform in [0,1]; with
/// real_signal the negative orders are filled by conjugate symmetry and the
/// m = 0 entries are kept real. Deterministic for a fixed seed.
SphCoeffs random_coeffs(int band_limit, std::uint64_t seed,
                        bool real_signal = true);

/// Reduced-scale synthetic test scene: a random low-band background
/// (degrees <= L_f/4) plus band-pass harmonics of one even order masked to
/// two elliptical regions rotated onto the equator, one oriented along
/// colatitude and one along longitude; combined as
/// 10^3 (f1/||f1|| + f2/(4||f2||)).
SphCoeffs example1_signal(int band_limit, std::uint64_t seed);

/// Degree band and order used by example1_signal at this band limit.
struct Example1Layout {
  int background_band = 0;
  int band_lo = 0;
  int band_hi = 0;
  int order = 0;
  EllipticalRegion region;      // base region of the two features
  EulerAngles rotation_colat;   // feature oriented along colatitude
  EulerAngles rotation_lon;     // feature oriented along longitude
};
Example1Layout example1_layout(int band_limit);

/// Membership of (theta, phi) in the region rotated by rho.
bool rotated_region_contains(const EllipticalRegion& region,
                             const EulerAngles& rho, double theta, double phi);

}  // namespace slsht
