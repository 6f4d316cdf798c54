#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace slsht {

/// zyz Euler angles in radians: rotate by gamma about z, then beta about y,
/// then alpha about z.
struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// Equiangular sphere grid S_L:
///   theta_t = pi (2t+1)/(2L+1), 0 <= t <= L
///   phi_p   = 2 pi p/(2L+1),    0 <= p <= 2L
struct SphereGrid {
  int band_limit = 0;
  std::vector<double> thetas;
  std::vector<double> phis;

  std::size_t n_theta() const { return thetas.size(); }
  std::size_t n_phi() const { return phis.size(); }
  std::size_t size() const { return thetas.size() * phis.size(); }
};

/// Equiangular SO(3) grid E_L: alpha and gamma run over 2L+1 steps of
/// 2 pi/(2L+1), beta over the first L+1 of those steps (all <= pi).
struct So3Grid {
  int band_limit = 0;
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<double> gammas;

  std::size_t size() const {
    return alphas.size() * betas.size() * gammas.size();
  }
};

/// Quadrature data for exact integration over SO(3) sampled on E_L:
///   integral f drho = 1/(2L+1)^3 sum_{a,b,c} f(rho_{abc}) q(beta_b)
/// for every f band-limited at degree L in the Wigner-D basis.
struct QuadratureWeights {
  int band_limit = 0;
  std::vector<double> beta_weights;           // q(beta_b), b = 0..L
  std::vector<std::complex<double>> w_table;  // w(m), index m + L

  std::complex<double> w(int m) const { return w_table[m + band_limit]; }
};

SphereGrid sphere_grid(int band_limit);
So3Grid so3_grid(int band_limit);
QuadratureWeights beta_weights(int band_limit);

/// w(m) = integral_0^pi e^{i m t} sin t dt
std::complex<double> fourier_sin_integral(int m);

/// Ring weights v_t for the colatitudes of S_L:
///   sum_t v_t u(theta_t) = integral_0^pi u(theta) sin(theta) dtheta,
/// exact whenever u extends to an even trigonometric polynomial of degree
/// <= L under theta -> 2 pi - theta. The repeated south-pole row (theta = pi)
/// carries half the generic weight.
std::vector<double> theta_weights(int band_limit);

}  // namespace slsht
