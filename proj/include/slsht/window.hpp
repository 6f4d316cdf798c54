#pragma once

#include <complex>
#include <vector>

#include "slsht/harmonics.hpp"

namespace slsht {

/// Spherical ellipse about the north pole: foci at colatitude theta_c on the
/// phi = 0 and phi = pi meridians, semi-major arc length a. Membership is the
/// two-focus criterion sum of angular distances <= 2a. Valid parameters
/// satisfy 0 <= theta_c <= a <= pi/2.
struct EllipticalRegion {
  double theta_c = 0.0;
  double a = 0.0;
};

void validate_region(const EllipticalRegion& region);

/// arccos(sin t sin t' cos(p - p') + cos t cos t'), in [0, pi].
double angular_distance(double theta1, double phi1, double theta2,
                        double phi2);

bool region_contains(const EllipticalRegion& region, double theta, double phi);

/// Hermitian kernel K_{(l,m),(l',m')} = integral_R Y_{l'}^{m'} conj(Y_l^m) ds
/// of the Slepian concentration problem, dimension (band_limit+1)^2,
/// assembled by mask quadrature on S_{oversample * band_limit} and
/// symmetrized. Row/column index is coeff_index(l, m).
struct ConcentrationMatrix {
  int band_limit = 0;
  int dim = 0;
  std::vector<std::complex<double>> k;  // row-major dim x dim

  const std::complex<double>& at(int row, int col) const {
    return k[static_cast<std::size_t>(row) * dim + col];
  }
};

ConcentrationMatrix concentration_matrix(const EllipticalRegion& region,
                                         int band_limit, int oversample);

/// Band-limited window: unit-energy coefficients, concentration ratio lambda,
/// and the region it was solved for.
struct Window {
  SphCoeffs coeffs;
  double lambda = 0.0;
  EllipticalRegion region;
};

/// Dominant eigenfunction of the concentration kernel: power iteration with
/// Rayleigh-quotient convergence, sign fixed so the north-pole value is real
/// and positive, coefficients conjugate-symmetrized (the eigenfunctions of a
/// reflection-symmetric region are real valued).
Window eigenfunction_window(const EllipticalRegion& region, int band_limit,
                            int oversample);

}  // namespace slsht
