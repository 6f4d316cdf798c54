#include "slsht/transform.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <thread>

#include "slsht/errors.hpp"

namespace slsht {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

const cplx kIPow[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
cplx ipow(int k) { return kIPow[((k % 4) + 4) % 4]; }

void build_c_tensor_into(const ModulatedCoeffs& mod, const SphCoeffs& h,
                         const DeltaTables& delta, CTensor& out,
                         std::vector<cplx>& u, std::vector<cplx>& v,
                         std::vector<cplx>& au, std::vector<cplx>& av) {
  const int L = mod.band_limit;
  if (h.band_limit != L)
    throw ValidationError("window band limit does not match modulated coeffs");
  if (delta.band_limit() < L)
    throw ValidationError("delta tables too small for c tensor");
  const int n = 2 * L + 1;
  out.band_limit = L;
  out.data.assign(static_cast<std::size_t>(n) * n * n, cplx(0.0, 0.0));
  u.resize(n);
  v.resize(n);
  au.resize(n);
  av.resize(n);

  for (int p = 0; p <= L; ++p) {
    const int w = 2 * p + 1;
    for (int q = -p; q <= p; ++q) u[q + p] = ipow(q) * std::conj(mod.at(p, q));
    for (int qp = -p; qp <= p; ++qp) v[qp + p] = ipow(-qp) * h.at(p, qp);
    for (int qpp = -p; qpp <= p; ++qpp) {
      const double* drow = delta.row(p, qpp);
      for (int i = 0; i < w; ++i) {
        au[i] = drow[i] * u[i];
        av[i] = drow[i] * v[i];
      }
      cplx* base = &out.data[out.index(-p, -p, qpp)];
      for (int iq = 0; iq < w; ++iq) {
        const cplx lead = au[iq];
        cplx* row = base + static_cast<std::size_t>(iq) * n;
        for (int iqp = 0; iqp < w; ++iqp) row[iqp] += lead * av[iqp];
      }
    }
  }
}

void conjugate_volume(const So3Volume& in, int m, So3Volume& out) {
  out.band_limit = in.band_limit;
  out.values.resize(in.values.size());
  const double sign = (m & 1) ? -1.0 : 1.0;
  for (std::size_t i = 0; i < in.values.size(); ++i)
    out.values[i] = sign * std::conj(in.values[i]);
}

}  // namespace

So3Volume So3Volume::zeros(int band_limit) {
  So3Volume v;
  v.band_limit = band_limit;
  const std::size_t n = 2 * band_limit + 1;
  v.values.assign(n * n * (band_limit + 1), cplx(0.0, 0.0));
  return v;
}

So3Evaluator::So3Evaluator(int band_limit)
    : band_limit_(band_limit), n_(2 * band_limit + 1) {
  if (band_limit < 0) throw ValidationError("band limit must be non-negative");
  kernel_.resize(static_cast<std::size_t>(n_) * n_);
  for (int x = 0; x < n_; ++x)
    for (int j = 0; j < n_; ++j)
      kernel_[static_cast<std::size_t>(x) * n_ + j] = std::polar(
          1.0, -2.0 * kPi * x * (j - band_limit) / static_cast<double>(n_));
}

void So3Evaluator::evaluate(const CTensor& c, Scratch& scratch,
                            So3Volume& out) const {
  if (c.band_limit != band_limit_)
    throw ValidationError("c tensor band limit does not match evaluator");
  const int L = band_limit_;
  const int n = n_;
  const int nb = L + 1;
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  out.band_limit = L;
  out.values.resize(nn * nb);

  // collapse q'' -> beta, keeping only the first L+1 outputs
  scratch.v1.assign(static_cast<std::size_t>(nb) * nn, cplx(0.0, 0.0));
  for (int b = 0; b < nb; ++b) {
    cplx* acc = &scratch.v1[static_cast<std::size_t>(b) * nn];
    for (int jpp = 0; jpp < n; ++jpp) {
      const cplx w = kernel_[static_cast<std::size_t>(b) * n + jpp];
      const cplx* src = &c.data[static_cast<std::size_t>(jpp) * nn];
      for (std::size_t i = 0; i < nn; ++i) acc[i] += w * src[i];
    }
  }

  scratch.plane.resize(nn);
  for (int b = 0; b < nb; ++b) {
    // q -> alpha
    std::fill(scratch.plane.begin(), scratch.plane.end(), cplx(0.0, 0.0));
    const cplx* vb = &scratch.v1[static_cast<std::size_t>(b) * nn];
    for (int a = 0; a < n; ++a) {
      cplx* dst = &scratch.plane[static_cast<std::size_t>(a) * n];
      for (int jq = 0; jq < n; ++jq) {
        const cplx w = kernel_[static_cast<std::size_t>(a) * n + jq];
        const cplx* src = vb + static_cast<std::size_t>(jq) * n;
        for (int i = 0; i < n; ++i) dst[i] += w * src[i];
      }
    }
    // q' -> gamma
    for (int a = 0; a < n; ++a) {
      const cplx* arow = &scratch.plane[static_cast<std::size_t>(a) * n];
      cplx* orow = &out.values[(static_cast<std::size_t>(a) * nb + b) * n];
      for (int cc = 0; cc < n; ++cc) {
        const cplx* kr = &kernel_[static_cast<std::size_t>(cc) * n];
        cplx acc{0.0, 0.0};
        for (int j = 0; j < n; ++j) acc += arow[j] * kr[j];
        orow[cc] = acc;
      }
    }
  }
}

int resolve_thread_count(int requested) {
  int threads = requested;
  if (threads <= 0) {
    if (const char* env = std::getenv("SLSHT_THREADS")) threads = std::atoi(env);
  }
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, threads);
}

ModulatedSht::ModulatedSht(const SphCoeffs& f, int window_band_limit)
    : L_f_(f.band_limit), L_h_(window_band_limit), L_g_(L_f_ + L_h_) {
  if (window_band_limit < 0)
    throw ValidationError("window band limit must be non-negative");
  const int N = 2 * L_g_;  // quadrature grid band limit, S_{2L_f+2L_h}
  n_nodes_ = N + 1;
  nodes_.resize(n_nodes_);
  for (int j = 0; j < n_nodes_; ++j)
    nodes_[j] = kPi * (2 * j + 1) / (2 * N + 1);
  weights_ = theta_weights(N);

  // I(theta_j, mu) = 2 pi conj(F_mu(theta_j)) from the ring profiles of f
  itab_.assign(static_cast<std::size_t>(2 * L_f_ + 1) * n_nodes_,
               cplx(0.0, 0.0));
  std::vector<double> rows;
  for (int mu = -L_f_; mu <= L_f_; ++mu) {
    const int amu = std::abs(mu);
    rows.resize(static_cast<std::size_t>(L_f_ - amu + 1) * n_nodes_);
    legendre_rows(mu, L_f_, nodes_.data(), n_nodes_, rows.data());
    cplx* dst = &itab_[static_cast<std::size_t>(mu + L_f_) * n_nodes_];
    for (int j = 0; j < n_nodes_; ++j) {
      cplx acc{0.0, 0.0};
      for (int l = amu; l <= L_f_; ++l)
        acc += f.at(l, mu) * rows[static_cast<std::size_t>(l - amu) * n_nodes_ + j];
      dst[j] = 2.0 * kPi * std::conj(acc);
    }
  }

  // window-side Legendre table lambda_p^q(theta_j)
  lamh_.resize(static_cast<std::size_t>(coeff_count(L_h_)) * n_nodes_);
  for (int q = -L_h_; q <= L_h_; ++q) {
    const int aq = std::abs(q);
    rows.resize(static_cast<std::size_t>(L_h_ - aq + 1) * n_nodes_);
    legendre_rows(q, L_h_, nodes_.data(), n_nodes_, rows.data());
    for (int p = aq; p <= L_h_; ++p)
      std::copy_n(rows.data() + static_cast<std::size_t>(p - aq) * n_nodes_,
                  n_nodes_,
                  lamh_.data() +
                      static_cast<std::size_t>(coeff_index(p, q)) * n_nodes_);
  }
}

void ModulatedSht::compute(int l, int m, Scratch& scratch,
                           ModulatedCoeffs& out) const {
  if (std::abs(m) > l || l > L_g_)
    throw ValidationError("modulated transform requires |m| <= l <= L_f+L_h");
  const int am = std::abs(m);
  if (!scratch.valid || scratch.m != m) {
    scratch.lambda_f.resize(static_cast<std::size_t>(L_g_ - am + 1) * n_nodes_);
    legendre_rows(m, L_g_, nodes_.data(), n_nodes_, scratch.lambda_f.data());
    scratch.m = m;
    scratch.valid = true;
  }
  const double* lamf =
      scratch.lambda_f.data() + static_cast<std::size_t>(l - am) * n_nodes_;

  out.band_limit = L_h_;
  out.data.assign(coeff_count(L_h_), cplx(0.0, 0.0));
  scratch.row.resize(n_nodes_);
  for (int q = -L_h_; q <= L_h_; ++q) {
    const int mu = m - q;
    if (std::abs(mu) > L_f_) continue;
    const cplx* itab = &itab_[static_cast<std::size_t>(mu + L_f_) * n_nodes_];
    for (int j = 0; j < n_nodes_; ++j)
      scratch.row[j] = weights_[j] * lamf[j] * itab[j];
    for (int p = std::abs(q); p <= L_h_; ++p) {
      const double* lam =
          &lamh_[static_cast<std::size_t>(coeff_index(p, q)) * n_nodes_];
      cplx acc{0.0, 0.0};
      for (int j = 0; j < n_nodes_; ++j) acc += scratch.row[j] * lam[j];
      out.at(p, q) = acc;
    }
  }
}

ModulatedCoeffs modulated_sht(const SphCoeffs& f, int l, int m,
                              int window_band_limit) {
  ModulatedSht ctx(f, window_band_limit);
  ModulatedSht::Scratch scratch;
  ModulatedCoeffs out;
  ctx.compute(l, m, scratch, out);
  return out;
}

CTensor build_c_tensor(const ModulatedCoeffs& mod, const SphCoeffs& h,
                       const DeltaTables& delta) {
  CTensor out;
  build_c_tensor(mod, h, delta, out);
  return out;
}

void build_c_tensor(const ModulatedCoeffs& mod, const SphCoeffs& h,
                    const DeltaTables& delta, CTensor& out) {
  std::vector<cplx> u, v, au, av;
  build_c_tensor_into(mod, h, delta, out, u, v, au, av);
}

void forward_fast(const SphCoeffs& f, const SphCoeffs& h,
                  const ComponentSink& sink, const ForwardOptions& opts) {
  const int L_f = f.band_limit;
  const int L_h = h.band_limit;
  const int L_g = L_f + L_h;
  const int lmax = opts.lmax < 0 ? L_g : opts.lmax;
  if (lmax > L_g)
    throw ValidationError(
        "fast engine computes components up to L_f + L_h only");
  const bool real_mode =
      opts.use_real_symmetry && f.real_signal && h.real_signal;

  const ModulatedSht ctx(f, L_h);
  const DeltaTables delta(L_h);
  const So3Evaluator evaluator(L_h);

  std::vector<int> orders;
  for (int m = real_mode ? 0 : -lmax; m <= lmax; ++m) orders.push_back(m);

  std::mutex sink_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    ModulatedSht::Scratch scratch;
    So3Evaluator::Scratch escratch;
    ModulatedCoeffs mod;
    CTensor c;
    So3Volume vol, volneg;
    std::vector<cplx> u, v, au, av;
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= orders.size()) break;
      const int m = orders[i];
      for (int l = std::abs(m); l <= lmax; ++l) {
        ctx.compute(l, m, scratch, mod);
        build_c_tensor_into(mod, h, delta, c, u, v, au, av);
        evaluator.evaluate(c, escratch, vol);
        const bool mirror = real_mode && opts.emit_negative_m && m > 0;
        if (mirror) conjugate_volume(vol, m, volneg);
        std::lock_guard<std::mutex> lock(sink_mutex);
        sink(l, m, vol);
        if (mirror) sink(l, -m, volneg);
      }
    }
  };

  const int threads =
      std::min<int>(resolve_thread_count(opts.threads), orders.size());
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

SlshtDistribution forward_fast(const SphCoeffs& f, const SphCoeffs& h,
                               const ForwardOptions& opts) {
  SlshtDistribution dist;
  dist.L_f = f.band_limit;
  dist.L_h = h.band_limit;
  dist.L_g = dist.L_f + dist.L_h;
  dist.lmax = opts.lmax < 0 ? dist.L_g : opts.lmax;
  dist.grid = so3_grid(dist.L_h);
  dist.components.assign(coeff_count(dist.lmax), So3Volume{});
  forward_fast(
      f, h,
      [&dist](int l, int m, const So3Volume& v) { dist.component(l, m) = v; },
      opts);
  return dist;
}

SlshtDistribution forward_direct(const SphCoeffs& f, const SphCoeffs& h,
                                 const ForwardOptions& opts) {
  const int L_f = f.band_limit;
  const int L_h = h.band_limit;
  const int L_g = L_f + L_h;
  const int lmax = opts.lmax < 0 ? L_g : opts.lmax;
  const int band = std::max(lmax, L_g);

  SlshtDistribution dist;
  dist.L_f = L_f;
  dist.L_h = L_h;
  dist.L_g = L_g;
  dist.lmax = lmax;
  dist.grid = so3_grid(L_h);
  dist.components.assign(coeff_count(lmax), So3Volume{});
  for (int l = 0; l <= lmax; ++l)
    for (int m = -l; m <= l; ++m) dist.component(l, m) = So3Volume::zeros(L_h);

  const SphereGrid sgrid = sphere_grid(band);
  const SphereMap fmap = sh_synthesis(f, sgrid);
  const DeltaTables delta(L_h);
  const int n = 2 * L_h + 1;
  const int nb = L_h + 1;

  std::atomic<int> next_b{0};
  auto worker = [&] {
    std::vector<std::vector<double>> dbeta(L_h + 1);
    std::vector<cplx> t1(coeff_count(L_h));
    SphCoeffs hr = SphCoeffs::zeros(L_h);
    SphereMap prod;
    for (;;) {
      const int b = next_b.fetch_add(1);
      if (b >= nb) break;
      for (int p = 0; p <= L_h; ++p)
        dbeta[p] = wigner_d_from_delta(p, dist.grid.betas[b], delta);
      for (int c = 0; c < n; ++c) {
        const double gamma = dist.grid.gammas[c];
        for (int p = 0; p <= L_h; ++p) {
          const int w = 2 * p + 1;
          for (int q = -p; q <= p; ++q) {
            cplx acc{0.0, 0.0};
            const double* row =
                dbeta[p].data() + static_cast<std::size_t>(q + p) * w;
            for (int qp = -p; qp <= p; ++qp)
              acc += row[qp + p] * std::polar(1.0, -qp * gamma) * h.at(p, qp);
            t1[coeff_index(p, q)] = acc;
          }
        }
        for (int a = 0; a < n; ++a) {
          const double alpha = dist.grid.alphas[a];
          for (int p = 0; p <= L_h; ++p)
            for (int q = -p; q <= p; ++q)
              hr.at(p, q) =
                  std::polar(1.0, -q * alpha) * t1[coeff_index(p, q)];
          const SphereMap hmap = sh_synthesis(hr, sgrid);
          prod.grid = sgrid;
          prod.values.resize(fmap.values.size());
          for (std::size_t i = 0; i < fmap.values.size(); ++i)
            prod.values[i] = fmap.values[i] * hmap.values[i];
          const SphCoeffs g = sh_analysis(prod);
          const std::size_t cell =
              (static_cast<std::size_t>(a) * nb + b) * n + c;
          for (int l = 0; l <= lmax; ++l)
            for (int m = -l; m <= l; ++m)
              dist.component(l, m).values[cell] = g.at(l, m);
        }
      }
    }
  };
  const int threads = std::min(resolve_thread_count(opts.threads), nb);
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return dist;
}

SlshtDistribution forward_reference(const SphCoeffs& f, const SphCoeffs& h) {
  const int L_f = f.band_limit;
  const int L_h = h.band_limit;
  const int L_g = L_f + L_h;

  SlshtDistribution dist;
  dist.L_f = L_f;
  dist.L_h = L_h;
  dist.L_g = L_g;
  dist.lmax = L_g;
  dist.grid = so3_grid(L_h);
  dist.components.assign(coeff_count(L_g), So3Volume{});

  const DeltaTables delta(L_h);
  const int n = 2 * L_h + 1;
  const int nb = L_h + 1;

  // d^p at every beta row of the grid
  std::vector<std::vector<std::vector<double>>> dbeta(nb);
  for (int b = 0; b < nb; ++b) {
    dbeta[b].resize(L_h + 1);
    for (int p = 0; p <= L_h; ++p)
      dbeta[b][p] = wigner_d_from_delta(p, dist.grid.betas[b], delta);
  }

  for (int l = 0; l <= L_g; ++l) {
    for (int m = -l; m <= l; ++m) {
      // W_{p,q,q'} = sum_{l',m'} f_{l'}^{m'} h_p^{q'} T(l',m';p,q;l,m);
      // slot (p, q) holds a row over q'
      std::vector<cplx> wrow(static_cast<std::size_t>(coeff_count(L_h)) * n,
                             cplx(0.0, 0.0));
      for (int lp = 0; lp <= L_f; ++lp) {
        for (int mp = -lp; mp <= lp; ++mp) {
          const int q = m - mp;
          if (std::abs(q) > L_h) continue;
          const cplx fc = f.at(lp, mp);
          for (int p = std::abs(q); p <= L_h; ++p) {
            const double t = triple_product(lp, mp, p, q, l, m);
            if (t == 0.0) continue;
            cplx* row =
                &wrow[static_cast<std::size_t>(coeff_index(p, q)) * n];
            for (int qp = -p; qp <= p; ++qp)
              row[qp + L_h] += fc * h.at(p, qp) * t;
          }
        }
      }

      So3Volume vol = So3Volume::zeros(L_h);
      for (int b = 0; b < nb; ++b) {
        for (int c = 0; c < n; ++c) {
          const double gamma = dist.grid.gammas[c];
          // collapse q' against d^p(beta) and the gamma phase
          for (int a = 0; a < n; ++a) {
            const double alpha = dist.grid.alphas[a];
            cplx acc{0.0, 0.0};
            for (int p = 0; p <= L_h; ++p) {
              const int wd = 2 * p + 1;
              for (int q = -p; q <= p; ++q) {
                const cplx* row =
                    &wrow[static_cast<std::size_t>(coeff_index(p, q)) * n];
                const double* drow =
                    dbeta[b][p].data() + static_cast<std::size_t>(q + p) * wd;
                cplx inner{0.0, 0.0};
                for (int qp = -p; qp <= p; ++qp)
                  inner += row[qp + L_h] * drow[qp + p] *
                           std::polar(1.0, -qp * gamma);
                acc += inner * std::polar(1.0, -q * alpha);
              }
            }
            vol.values[(static_cast<std::size_t>(a) * nb + b) * n + c] = acc;
          }
        }
      }
      dist.component(l, m) = std::move(vol);
    }
  }
  return dist;
}

cplx integrate_volume(const So3Volume& volume, const QuadratureWeights& weights) {
  const int L = volume.band_limit;
  if (weights.band_limit != L)
    throw ValidationError("quadrature weights band limit mismatch");
  const int n = 2 * L + 1;
  const int nb = L + 1;
  cplx acc{0.0, 0.0};
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < nb; ++b) {
      const cplx* row = &volume.values[(static_cast<std::size_t>(a) * nb + b) * n];
      cplx rowsum{0.0, 0.0};
      for (int c = 0; c < n; ++c) rowsum += row[c];
      acc += weights.beta_weights[b] * rowsum;
    }
  }
  return acc / (static_cast<double>(n) * n * n);
}

SphCoeffs inverse_slsht(const SlshtDistribution& dist, cplx h00,
                        int signal_band_limit) {
  if (std::abs(h00) <= 1e-10)
    throw NumericError("window DC component too small for inversion");
  if (dist.lmax < signal_band_limit)
    throw ValidationError("distribution lacks components up to L_f");
  const QuadratureWeights qw = beta_weights(dist.L_h);
  const double scale = std::sqrt(16.0 * kPi * kPi * kPi);
  SphCoeffs out = SphCoeffs::zeros(signal_band_limit);
  for (int l = 0; l <= signal_band_limit; ++l)
    for (int m = -l; m <= l; ++m)
      out.at(l, m) = integrate_volume(dist.component(l, m), qw) / (scale * h00);
  return out;
}

InverseAccumulator::InverseAccumulator(int signal_band_limit,
                                       int window_band_limit, cplx h00,
                                       bool fill_negative_by_symmetry)
    : L_f_(signal_band_limit),
      L_h_(window_band_limit),
      h00_(h00),
      fill_negative_(fill_negative_by_symmetry),
      weights_(beta_weights(window_band_limit)),
      integrals_(coeff_count(signal_band_limit), cplx(0.0, 0.0)),
      seen_(coeff_count(signal_band_limit), 0) {
  if (std::abs(h00) <= 1e-10)
    throw NumericError("window DC component too small for inversion");
}

void InverseAccumulator::consume(int l, int m, const So3Volume& volume) {
  if (l > L_f_) return;
  integrals_[coeff_index(l, m)] = integrate_volume(volume, weights_);
  seen_[coeff_index(l, m)] = 1;
}

SphCoeffs InverseAccumulator::finish() const {
  const double scale = std::sqrt(16.0 * kPi * kPi * kPi);
  SphCoeffs out = SphCoeffs::zeros(L_f_, fill_negative_);
  for (int l = 0; l <= L_f_; ++l) {
    for (int m = -l; m <= l; ++m) {
      const int idx = coeff_index(l, m);
      if (seen_[idx]) {
        out.at(l, m) = integrals_[idx] / (scale * h00_);
      } else if (fill_negative_ && m < 0 && seen_[coeff_index(l, -m)]) {
        const double sign = (m & 1) ? -1.0 : 1.0;
        out.at(l, m) =
            sign * std::conj(integrals_[coeff_index(l, -m)] / (scale * h00_));
      } else {
        throw ValidationError("distribution component missing for inversion");
      }
    }
  }
  return out;
}

ComponentSink InverseAccumulator::sink() {
  return [this](int l, int m, const So3Volume& v) { consume(l, m, v); };
}

}  // namespace slsht
