#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "slsht/grids.hpp"

namespace slsht {

/// Tables of Delta^p = d^p(pi/2) for all p <= band_limit, built by the
/// Trapani recursion over the sector m >= m' >= 0 and reflected through the
/// d-matrix symmetries.
class DeltaTables {
 public:
  explicit DeltaTables(int band_limit);

  int band_limit() const { return band_limit_; }

  /// Delta^p_{q,q'}
  double at(int p, int q, int qp) const {
    return data_[offsets_[p] + static_cast<std::size_t>(q + p) * (2 * p + 1) +
                 (qp + p)];
  }

  /// Row Delta^p_{q, .}, 2p+1 entries for the second index -p..p.
  const double* row(int p, int q) const {
    return data_.data() + offsets_[p] +
           static_cast<std::size_t>(q + p) * (2 * p + 1);
  }

 private:
  int band_limit_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<double> data_;
};

/// Wigner coefficients hat f_l^{m,m'} of a function on SO(3), flat-indexed.
struct So3Coeffs {
  int band_limit = 0;
  std::vector<std::complex<double>> data;

  static So3Coeffs zeros(int band_limit);
  /// total entry count sum_l (2l+1)^2 = (L+1)(2L+1)(2L+3)/3
  static std::size_t count(int band_limit);
  /// offset of (l, m, m'): degrees below l, then (m+l)(2l+1) + m'+l
  static std::size_t index(int l, int m, int mp);

  std::complex<double>& at(int l, int m, int mp) { return data[index(l, m, mp)]; }
  const std::complex<double>& at(int l, int m, int mp) const {
    return data[index(l, m, mp)];
  }
};

/// d^l_{m,m'}(beta) for 0 <= beta <= pi, row-major (2l+1)^2 with entry
/// (m, m') at (m+l)(2l+1) + m'+l. Evaluated from the given Delta tables via
///   d^l_{q,q'}(beta) = i^{q-q'} sum_{q''} Delta^l_{q'',q} Delta^l_{q'',q'}
///                      e^{-i q'' beta}.
std::vector<double> wigner_d_from_delta(int l, double beta,
                                        const DeltaTables& delta);
std::vector<double> wigner_d(int l, double beta);

/// D^l_{m,m'}(rho) = e^{-i m alpha} d^l_{m,m'}(beta) e^{-i m' gamma},
/// row-major like wigner_d.
std::vector<std::complex<double>> wigner_D(int l, const EulerAngles& rho);

/// Wigner 3j symbol by the Racah single-sum formula with log-factorial
/// accumulation; reliable for degrees up to ~60.
double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3);

/// Spherical harmonic triple product
///   T(l',m'; p,q; l,m) = integral Y_{l'}^{m'} Y_p^q conj(Y_l^m) ds,
/// via the Gaunt identity in 3j symbols. Degrees above 60 are rejected.
double triple_product(int lp, int mp, int p, int q, int l, int m);

}  // namespace slsht
