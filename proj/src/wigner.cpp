#include "slsht/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slsht/errors.hpp"

namespace slsht {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

constexpr int kMax3jDegree = 60;

double parity(int k) { return (k & 1) ? -1.0 : 1.0; }

const cplx kIPow[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

cplx ipow(int k) { return kIPow[((k % 4) + 4) % 4]; }

double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace

DeltaTables::DeltaTables(int band_limit) : band_limit_(band_limit) {
  if (band_limit < 0) throw ValidationError("band limit must be non-negative");
  offsets_.resize(band_limit + 1);
  std::size_t total = 0;
  for (int p = 0; p <= band_limit; ++p) {
    offsets_[p] = total;
    total += static_cast<std::size_t>(2 * p + 1) * (2 * p + 1);
  }
  data_.assign(total, 0.0);

  auto slot = [this](int p, int q, int qp) -> double& {
    return data_[offsets_[p] + static_cast<std::size_t>(q + p) * (2 * p + 1) +
                 (qp + p)];
  };

  slot(0, 0, 0) = 1.0;
  for (int l = 1; l <= band_limit; ++l) {
    // top row m = l from the previous degree (Trapani seeds)
    slot(l, l, 0) = -std::sqrt((2.0 * l - 1.0) / (2.0 * l)) * at(l - 1, l - 1, 0);
    for (int mp = 1; mp <= l; ++mp)
      slot(l, l, mp) =
          std::sqrt(l * (2.0 * l - 1.0) /
                    (2.0 * (l + mp) * (static_cast<double>(l) + mp - 1.0))) *
          at(l - 1, l - 1, mp - 1);

    // downward three-term recursion in m over the sector m >= mp >= 0
    for (int mp = 0; mp <= l - 1; ++mp) {
      for (int m = l - 1; m >= mp; --m) {
        const double denom =
            std::sqrt(static_cast<double>(l - m) * (l + m + 1.0));
        double value = 2.0 * mp / denom * slot(l, m + 1, mp);
        if (m + 2 <= l)
          value -= std::sqrt((l - m - 1.0) * (l + m + 2.0)) / denom *
                   slot(l, m + 2, mp);
        slot(l, m, mp) = value;
      }
    }

    // transpose into the full non-negative quadrant, then the d-matrix
    // symmetries fill the negative indices
    for (int m = 0; m <= l; ++m)
      for (int mp = m + 1; mp <= l; ++mp)
        slot(l, m, mp) = parity(mp - m) * slot(l, mp, m);
    for (int m = 0; m <= l; ++m) {
      for (int mp = 0; mp <= l; ++mp) {
        const double value = slot(l, m, mp);
        if (m > 0) slot(l, -m, mp) = parity(l + mp) * value;
        if (mp > 0) slot(l, m, -mp) = parity(l + m) * value;
        if (m > 0 && mp > 0) slot(l, -m, -mp) = parity(m + mp) * value;
      }
    }
  }
}

So3Coeffs So3Coeffs::zeros(int band_limit) {
  So3Coeffs c;
  c.band_limit = band_limit;
  c.data.assign(count(band_limit), cplx(0.0, 0.0));
  return c;
}

std::size_t So3Coeffs::count(int band_limit) {
  const std::size_t L = band_limit;
  return (L + 1) * (2 * L + 1) * (2 * L + 3) / 3;
}

std::size_t So3Coeffs::index(int l, int m, int mp) {
  const std::size_t below = (l == 0) ? 0 : count(l - 1);
  return below + static_cast<std::size_t>(m + l) * (2 * l + 1) + (mp + l);
}

std::vector<double> wigner_d_from_delta(int l, double beta,
                                        const DeltaTables& delta) {
  if (l < 0 || l > delta.band_limit())
    throw ValidationError("degree outside delta tables");
  if (beta < 0.0 || beta > kPi)
    throw ValidationError("wigner_d requires 0 <= beta <= pi");
  const int w = 2 * l + 1;
  std::vector<cplx> phase(w);
  for (int qpp = -l; qpp <= l; ++qpp)
    phase[qpp + l] = std::polar(1.0, -qpp * beta);

  std::vector<double> d(static_cast<std::size_t>(w) * w);
  for (int q = -l; q <= l; ++q) {
    for (int qp = -l; qp <= l; ++qp) {
      cplx acc{0.0, 0.0};
      for (int qpp = -l; qpp <= l; ++qpp)
        acc += delta.at(l, qpp, q) * delta.at(l, qpp, qp) * phase[qpp + l];
      const cplx value = ipow(q - qp) * acc;
      if (std::abs(value.imag()) >= 1e-11)
        throw NumericError("wigner_d imaginary residue exceeds tolerance");
      d[static_cast<std::size_t>(q + l) * w + (qp + l)] = value.real();
    }
  }
  return d;
}

std::vector<double> wigner_d(int l, double beta) {
  return wigner_d_from_delta(l, beta, DeltaTables(l));
}

std::vector<cplx> wigner_D(int l, const EulerAngles& rho) {
  const std::vector<double> d = wigner_d(l, rho.beta);
  const int w = 2 * l + 1;
  std::vector<cplx> D(static_cast<std::size_t>(w) * w);
  for (int m = -l; m <= l; ++m) {
    const cplx pa = std::polar(1.0, -m * rho.alpha);
    for (int mp = -l; mp <= l; ++mp)
      D[static_cast<std::size_t>(m + l) * w + (mp + l)] =
          pa * d[static_cast<std::size_t>(m + l) * w + (mp + l)] *
          std::polar(1.0, -mp * rho.gamma);
  }
  return D;
}

double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (j1 < 0 || j2 < 0 || j3 < 0)
    throw ValidationError("3j degrees must be non-negative");
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
  if (m1 + m2 + m3 != 0) return 0.0;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;

  const double log_delta =
      log_factorial(j1 + j2 - j3) + log_factorial(j1 - j2 + j3) +
      log_factorial(-j1 + j2 + j3) - log_factorial(j1 + j2 + j3 + 1);
  const double log_m =
      log_factorial(j1 + m1) + log_factorial(j1 - m1) + log_factorial(j2 + m2) +
      log_factorial(j2 - m2) + log_factorial(j3 + m3) + log_factorial(j3 - m3);
  const double log_pref = 0.5 * (log_delta + log_m);

  const int t_min = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  const int t_max = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  double sum = 0.0;
  for (int t = t_min; t <= t_max; ++t) {
    const double log_den =
        log_factorial(t) + log_factorial(j1 + j2 - j3 - t) +
        log_factorial(j1 - m1 - t) + log_factorial(j2 + m2 - t) +
        log_factorial(j3 - j2 + m1 + t) + log_factorial(j3 - j1 - m2 + t);
    sum += parity(t) * std::exp(log_pref - log_den);
  }
  return parity(j1 - j2 - m3) * sum;
}

double triple_product(int lp, int mp, int p, int q, int l, int m) {
  if (lp < 0 || p < 0 || l < 0)
    throw ValidationError("triple product degrees must be non-negative");
  if (std::abs(mp) > lp || std::abs(q) > p || std::abs(m) > l)
    throw ValidationError("triple product orders must lie within degrees");
  if (lp > kMax3jDegree || p > kMax3jDegree || l > kMax3jDegree)
    throw ValidationError("triple product degree beyond 3j evaluator range");
  if (mp + q != m) return 0.0;
  const double scale = std::sqrt((2.0 * lp + 1.0) * (2.0 * p + 1.0) *
                                 (2.0 * l + 1.0) / (4.0 * kPi));
  return parity(m) * scale * wigner_3j(lp, p, l, 0, 0, 0) *
         wigner_3j(lp, p, l, mp, q, -m);
}

}  // namespace slsht
