#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slsht/harmonics.hpp"
#include "slsht/transform.hpp"

namespace slsht::io {

/// Extra header fields of a window coefficient file.
struct WindowMeta {
  double theta_c = 0.0;
  double a = 0.0;
  double lambda = 0.0;
};

/// Text format: header "# shcoeff v1 L=<int>" with an optional
/// " window theta_c=<f> a=<f> lambda=<f>" suffix, then one line "l m re im"
/// per coefficient, printed with 17 significant digits.
void write_coeff_file(const std::filesystem::path& path, const SphCoeffs& c,
                      const std::optional<WindowMeta>& window = std::nullopt);

struct CoeffFile {
  SphCoeffs coeffs;
  std::optional<WindowMeta> window;
};
CoeffFile read_coeff_file(const std::filesystem::path& path);

struct DistributionManifest {
  int L_f = 0;
  int L_h = 0;
  int L_g = 0;
  int lmax = 0;
  int n_alpha = 0;
  int n_beta = 0;
  int n_gamma = 0;
  bool real_signal = false;
  std::vector<std::pair<int, int>> components;  // (l, m), sorted
};

std::string component_filename(int l, int m);

/// Directory-backed distribution: one little-endian binary file of (re, im)
/// double pairs per component, n_alpha-major then n_beta then n_gamma, plus
/// manifest.json written on finalize.
class DistributionWriter {
 public:
  DistributionWriter(std::filesystem::path dir, int L_f, int L_h, int lmax,
                     bool real_signal);
  void write_component(int l, int m, const So3Volume& volume);
  void finalize();
  ComponentSink sink();

 private:
  std::filesystem::path dir_;
  DistributionManifest manifest_;
  bool finalized_ = false;
};

DistributionManifest read_manifest(const std::filesystem::path& dir);
So3Volume read_component(const std::filesystem::path& dir,
                         const DistributionManifest& manifest, int l, int m);

/// CSV rows "theta,phi,re,im" with a header row, 17 significant digits.
struct MapCsvRow {
  double theta = 0.0;
  double phi = 0.0;
  std::complex<double> value{0.0, 0.0};
};
void write_map_csv(const std::filesystem::path& path,
                   const std::vector<MapCsvRow>& rows);
std::vector<MapCsvRow> read_map_csv(const std::filesystem::path& path);

}  // namespace slsht::io
