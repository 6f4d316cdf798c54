#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "slsht/grids.hpp"

namespace slsht {

class DeltaTables;

inline int coeff_index(int l, int m) { return l * l + l + m; }
inline int coeff_count(int band_limit) {
  return (band_limit + 1) * (band_limit + 1);
}

/// Triangular array of spherical harmonic coefficients f_l^m, l <= band_limit,
/// flat-indexed by coeff_index. real_signal marks conjugate symmetry
/// f_l^{-m} = (-1)^m conj(f_l^m).
struct SphCoeffs {
  int band_limit = 0;
  bool real_signal = false;
  std::vector<std::complex<double>> data;

  static SphCoeffs zeros(int band_limit, bool real_signal = false);

  std::complex<double>& at(int l, int m) { return data[coeff_index(l, m)]; }
  const std::complex<double>& at(int l, int m) const {
    return data[coeff_index(l, m)];
  }
  double norm() const;
};

/// Samples of a function on a SphereGrid, row-major in (n_theta, n_phi).
struct SphereMap {
  SphereGrid grid;
  std::vector<std::complex<double>> values;

  std::complex<double>& at(std::size_t t, std::size_t p) {
    return values[t * grid.n_phi() + p];
  }
  const std::complex<double>& at(std::size_t t, std::size_t p) const {
    return values[t * grid.n_phi() + p];
  }
};

/// Normalized associated Legendre N_l^m P_l^m(cos theta) with the
/// Condon-Shortley phase inside P_l^m, for l = |m| .. lmax at a single theta;
/// out must hold lmax - |m| + 1 values, out[l - |m|] receives degree l.
void legendre_column(int m, int lmax, double theta, double* out);

/// Same as legendre_column for several colatitudes at once; rows holds
/// (lmax - |m| + 1) x n_nodes values, row-major with degree-l row starting at
/// rows + (l - |m|) * n_nodes.
void legendre_rows(int m, int lmax, const double* thetas, std::size_t n_nodes,
                   double* rows);

std::complex<double> eval_ylm(int l, int m, double theta, double phi);

/// Exact forward transform of a map sampled on S_L, for signals band-limited
/// at L: Fourier transform per ring, parity extension in theta, trigonometric
/// interpolation onto the colatitudes of S_{2L}, and exact theta quadrature.
SphCoeffs sh_analysis(const SphereMap& map);

/// Pointwise evaluation of the truncated expansion on the given grid.
/// The grid band limit must be at least the coefficient band limit.
SphereMap sh_synthesis(const SphCoeffs& coeffs, const SphereGrid& grid);

/// Spectral rotation: out_l^m = sum_{m'} D^l_{m,m'}(rho) f_l^{m'}.
SphCoeffs rotate_coeffs(const SphCoeffs& coeffs, const EulerAngles& rho);
SphCoeffs rotate_coeffs(const SphCoeffs& coeffs, const EulerAngles& rho,
                        const DeltaTables& delta);

}  // namespace slsht
