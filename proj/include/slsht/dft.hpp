#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace slsht::dft {

/// Reference O(n^2) transform: out[k] = sum_j in[j] exp(sign 2 pi i j k / n).
void dft_naive(const std::complex<double>* in, std::complex<double>* out,
               std::size_t n, int sign);

/// Out-of-place DFT of arbitrary length with the same convention as
/// dft_naive. Power-of-two lengths use radix-2; short lengths a
/// precomputed-twiddle direct sum; everything else Bluestein's chirp
/// embedding in a radix-2 transform. sign is -1 (forward) or +1
/// (unnormalized inverse).
class Plan {
 public:
  Plan(std::size_t n, int sign);

  void execute(const std::complex<double>* in, std::complex<double>* out) const;
  std::size_t size() const { return n_; }
  int sign() const { return sign_; }

 private:
  enum class Mode { kPow2, kDirect, kBluestein };

  std::size_t n_ = 0;
  int sign_ = -1;
  Mode mode_ = Mode::kDirect;
  std::vector<std::complex<double>> twiddle_;  // direct mode
  std::size_t m_ = 0;                          // Bluestein FFT length
  std::vector<std::complex<double>> chirp_;    // e^{sign i pi j^2 / n}
  std::vector<std::complex<double>> bfft_;     // FFT of chirp kernel
};

}  // namespace slsht::dft
