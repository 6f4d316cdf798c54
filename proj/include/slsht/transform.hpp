#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "slsht/harmonics.hpp"
#include "slsht/wigner.hpp"
#include "slsht/window.hpp"

namespace slsht {

/// Samples of one distribution component over E_{L_h}: n_alpha-major, then
/// n_beta, then n_gamma.
struct So3Volume {
  int band_limit = 0;
  std::vector<std::complex<double>> values;

  static So3Volume zeros(int band_limit);

  std::size_t index(int a, int b, int c) const {
    const int n = 2 * band_limit + 1;
    return (static_cast<std::size_t>(a) * (band_limit + 1) + b) * n + c;
  }
  std::complex<double>& at(int a, int b, int c) { return values[index(a, b, c)]; }
  const std::complex<double>& at(int a, int b, int c) const {
    return values[index(a, b, c)];
  }
};

/// The family g(rho; l, m) for l <= lmax, one SO(3) volume per component.
/// lmax is L_g = L_f + L_h unless an engine was asked for fewer (or, for the
/// direct engine, more) degrees.
struct SlshtDistribution {
  int L_f = 0;
  int L_h = 0;
  int L_g = 0;
  int lmax = 0;
  So3Grid grid;
  std::vector<So3Volume> components;  // indexed by coeff_index(l, m)

  So3Volume& component(int l, int m) { return components[coeff_index(l, m)]; }
  const So3Volume& component(int l, int m) const {
    return components[coeff_index(l, m)];
  }
};

/// Coefficients of the modulated signal conj(f) Y_l^m truncated at degree
/// band_limit (= L_h), triangular storage like SphCoeffs.
struct ModulatedCoeffs {
  int band_limit = 0;
  std::vector<std::complex<double>> data;

  std::complex<double>& at(int p, int q) { return data[coeff_index(p, q)]; }
  const std::complex<double>& at(int p, int q) const {
    return data[coeff_index(p, q)];
  }
};

/// C_{q,q',q''}(l,m) of the factored-rotation sum, dense (2L_h+1)^3 with
/// layout [q''][q][q'] (q' fastest).
struct CTensor {
  int band_limit = 0;
  std::vector<std::complex<double>> data;

  std::size_t index(int q, int qp, int qpp) const {
    const int n = 2 * band_limit + 1;
    return (static_cast<std::size_t>(qpp + band_limit) * n +
            (q + band_limit)) *
               n +
           (qp + band_limit);
  }
  const std::complex<double>& at(int q, int qp, int qpp) const {
    return data[index(q, qp, qpp)];
  }
};

/// Spherical harmonic transform of the modulated signal conj(f) Y_l^m up to
/// degree L_h, by separation of variables on S_{2L_f+2L_h}: the phi integral
/// I(theta, m-q) is read off the ring Fourier coefficients of f, the theta
/// integral is done with exact quadrature weights. Construction precomputes
/// everything that does not depend on (l, m).
class ModulatedSht {
 public:
  ModulatedSht(const SphCoeffs& f, int window_band_limit);

  /// Per-thread state: the Legendre rows of the current order m.
  struct Scratch {
    int m = 0;
    bool valid = false;
    std::vector<double> lambda_f;
    std::vector<std::complex<double>> row;
  };

  void compute(int l, int m, Scratch& scratch, ModulatedCoeffs& out) const;

  int signal_band_limit() const { return L_f_; }
  int window_band_limit() const { return L_h_; }
  int max_degree() const { return L_g_; }

 private:
  int L_f_ = 0;
  int L_h_ = 0;
  int L_g_ = 0;
  int n_nodes_ = 0;
  std::vector<double> nodes_;    // colatitudes of S_{2L_g}
  std::vector<double> weights_;  // theta_weights(2L_g)
  std::vector<std::complex<double>> itab_;  // I(theta_j, mu), |mu| <= L_f
  std::vector<double> lamh_;  // lambda_p^q(theta_j), triangular x nodes
};

ModulatedCoeffs modulated_sht(const SphCoeffs& f, int l, int m,
                              int window_band_limit);

CTensor build_c_tensor(const ModulatedCoeffs& mod, const SphCoeffs& h,
                       const DeltaTables& delta);
/// Storage-reusing overload for per-component loops.
void build_c_tensor(const ModulatedCoeffs& mod, const SphCoeffs& h,
                    const DeltaTables& delta, CTensor& out);

/// Evaluates one component volume on E_{L_h} from its C tensor: three nested
/// odd-length Fourier sums (q -> alpha, q'' -> beta truncated to beta <= pi,
/// q' -> gamma) against a precomputed kernel.
class So3Evaluator {
 public:
  explicit So3Evaluator(int band_limit);

  struct Scratch {
    std::vector<std::complex<double>> v1;
    std::vector<std::complex<double>> plane;
  };

  void evaluate(const CTensor& c, Scratch& scratch, So3Volume& out) const;
  int band_limit() const { return band_limit_; }

 private:
  int band_limit_ = 0;
  int n_ = 0;
  std::vector<std::complex<double>> kernel_;  // e^{-2 pi i x (j-L)/n}
};

using ComponentSink =
    std::function<void(int l, int m, const So3Volume& volume)>;

struct ForwardOptions {
  /// Highest component degree to produce; -1 means L_f + L_h. The direct
  /// engine accepts values above L_f + L_h (the extra components vanish).
  int lmax = -1;
  /// Worker threads; 0 consults SLSHT_THREADS, then hardware concurrency.
  int threads = 0;
  /// Compute only m >= 0 and derive m < 0 by conjugate symmetry when both
  /// f and h are flagged real.
  bool use_real_symmetry = true;
  /// Emit the derived negative-m components to the sink (real mode only);
  /// switch off when the consumer restores them itself.
  bool emit_negative_m = true;
};

/// Fast engine: modulated SHT, C tensor, and the 3-axis Fourier evaluation
/// onto E_{L_h} per component. Components are emitted in unspecified order;
/// sink calls are serialized.
void forward_fast(const SphCoeffs& f, const SphCoeffs& h,
                  const ComponentSink& sink, const ForwardOptions& opts = {});
SlshtDistribution forward_fast(const SphCoeffs& f, const SphCoeffs& h,
                               const ForwardOptions& opts = {});

/// Direct quadrature engine: rotate the window to every grid rho, multiply
/// in the spatial domain on S_{max(lmax, L_g)}, and analyze exactly.
SlshtDistribution forward_direct(const SphCoeffs& f, const SphCoeffs& h,
                                 const ForwardOptions& opts = {});

/// Harmonic-formulation engine (oracle): the quintuple sum over triple
/// products. Degrees must stay within reach of the 3j evaluator.
SlshtDistribution forward_reference(const SphCoeffs& f, const SphCoeffs& h);

inline void forward_fast(const SphCoeffs& f, const Window& h,
                         const ComponentSink& sink,
                         const ForwardOptions& opts = {}) {
  forward_fast(f, h.coeffs, sink, opts);
}
inline SlshtDistribution forward_fast(const SphCoeffs& f, const Window& h,
                                      const ForwardOptions& opts = {}) {
  return forward_fast(f, h.coeffs, opts);
}
inline SlshtDistribution forward_direct(const SphCoeffs& f, const Window& h,
                                        const ForwardOptions& opts = {}) {
  return forward_direct(f, h.coeffs, opts);
}

/// Quadrature-weighted sum of one component volume over E_{L_h}:
///   1/(2L_h+1)^3 sum_{a,b,c} volume q(beta_b).
std::complex<double> integrate_volume(const So3Volume& volume,
                                      const QuadratureWeights& weights);

/// Exact inverse: f_l^m = integral of g(.; l, m) over SO(3) divided by
/// sqrt(16 pi^3) h00, for l <= signal_band_limit.
SphCoeffs inverse_slsht(const SlshtDistribution& dist,
                        std::complex<double> h00, int signal_band_limit);

/// Streaming inverse; feed components as an engine emits them. Components
/// with l > signal_band_limit are ignored. With fill_negative_by_symmetry,
/// missing negative orders are restored from the positive ones at finish().
class InverseAccumulator {
 public:
  InverseAccumulator(int signal_band_limit, int window_band_limit,
                     std::complex<double> h00, bool fill_negative_by_symmetry);

  void consume(int l, int m, const So3Volume& volume);
  SphCoeffs finish() const;
  ComponentSink sink();

 private:
  int L_f_ = 0;
  int L_h_ = 0;
  std::complex<double> h00_{0.0, 0.0};
  bool fill_negative_ = false;
  QuadratureWeights weights_;
  std::vector<std::complex<double>> integrals_;
  std::vector<char> seen_;
};

/// Worker count for `requested` (0 = SLSHT_THREADS env, then hardware).
int resolve_thread_count(int requested);

}  // namespace slsht
