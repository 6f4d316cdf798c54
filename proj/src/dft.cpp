#include "slsht/dft.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "slsht/errors.hpp"

namespace slsht::dft {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 transform, unnormalized.
void fft_pow2(cplx* a, std::size_t n, int sign) {
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * kPi / static_cast<double>(len);
    const cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace

void dft_naive(const cplx* in, cplx* out, std::size_t n, int sign) {
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      const double ang =
          sign * 2.0 * kPi * static_cast<double>((j * k) % n) / n;
      acc += in[j] * cplx(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
}

Plan::Plan(std::size_t n, int sign) : n_(n), sign_(sign) {
  if (n == 0) throw ValidationError("dft length must be positive");
  if (sign != 1 && sign != -1)
    throw ValidationError("dft sign must be +1 or -1");

  if (is_pow2(n_)) {
    mode_ = Mode::kPow2;
    return;
  }
  if (n_ <= 32) {
    mode_ = Mode::kDirect;
    twiddle_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      const double ang = sign * 2.0 * kPi * static_cast<double>(k) / n_;
      twiddle_[k] = cplx(std::cos(ang), std::sin(ang));
    }
    return;
  }

  mode_ = Mode::kBluestein;
  m_ = 1;
  while (m_ < 2 * n_ - 1) m_ <<= 1;
  chirp_.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    // j^2 reduced mod 2n keeps the chirp angle small and exact
    const std::size_t j2 = (j * j) % (2 * n_);
    const double ang = sign * kPi * static_cast<double>(j2) / n_;
    chirp_[j] = cplx(std::cos(ang), std::sin(ang));
  }
  bfft_.assign(m_, cplx(0.0, 0.0));
  bfft_[0] = cplx(1.0, 0.0);
  for (std::size_t j = 1; j < n_; ++j)
    bfft_[j] = bfft_[m_ - j] = std::conj(chirp_[j]);
  fft_pow2(bfft_.data(), m_, -1);
}

void Plan::execute(const cplx* in, cplx* out) const {
  switch (mode_) {
    case Mode::kPow2: {
      for (std::size_t i = 0; i < n_; ++i) out[i] = in[i];
      fft_pow2(out, n_, sign_);
      return;
    }
    case Mode::kDirect: {
      for (std::size_t k = 0; k < n_; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < n_; ++j)
          acc += in[j] * twiddle_[(j * k) % n_];
        out[k] = acc;
      }
      return;
    }
    case Mode::kBluestein: {
      std::vector<cplx> work(m_, cplx(0.0, 0.0));
      for (std::size_t j = 0; j < n_; ++j) work[j] = in[j] * chirp_[j];
      fft_pow2(work.data(), m_, -1);
      for (std::size_t i = 0; i < m_; ++i) work[i] *= bfft_[i];
      fft_pow2(work.data(), m_, +1);
      const double inv = 1.0 / static_cast<double>(m_);
      for (std::size_t k = 0; k < n_; ++k) out[k] = work[k] * inv * chirp_[k];
      return;
    }
  }
}

}  // namespace slsht::dft
