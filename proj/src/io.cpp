#include "slsht/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "slsht/errors.hpp"

namespace slsht::io {

namespace {

using cplx = std::complex<double>;
namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open for writing: " + tmp.string());
    out << text;
    if (!out) throw ValidationError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::size_t volume_byte_size(int L_h) {
  const std::size_t n = 2 * static_cast<std::size_t>(L_h) + 1;
  return 16 * n * n * (L_h + 1);
}

}  // namespace

void write_coeff_file(const fs::path& path, const SphCoeffs& c,
                      const std::optional<WindowMeta>& window) {
  std::ostringstream out;
  out << "# shcoeff v1 L=" << c.band_limit;
  if (window)
    out << " window theta_c=" << format_double(window->theta_c)
        << " a=" << format_double(window->a)
        << " lambda=" << format_double(window->lambda);
  out << "\n";
  for (int l = 0; l <= c.band_limit; ++l)
    for (int m = -l; m <= l; ++m)
      out << l << " " << m << " " << format_double(c.at(l, m).real()) << " "
          << format_double(c.at(l, m).imag()) << "\n";
  atomic_write_text(path, out.str());
}

CoeffFile read_coeff_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open coefficient file: " + path.string());
  std::string header;
  if (!std::getline(in, header))
    throw ValidationError("empty coefficient file: " + path.string());

  CoeffFile file;
  int L = -1;
  {
    std::istringstream hs(header);
    std::string tok;
    hs >> tok;
    if (tok != "#") throw ValidationError("bad coefficient header");
    hs >> tok;
    if (tok != "shcoeff") throw ValidationError("bad coefficient header");
    hs >> tok;
    if (tok != "v1") throw ValidationError("unsupported coefficient version");
    hs >> tok;
    if (tok.rfind("L=", 0) != 0) throw ValidationError("missing band limit");
    L = std::stoi(tok.substr(2));
    if (hs >> tok) {
      if (tok != "window") throw ValidationError("bad coefficient header");
      WindowMeta meta;
      auto field = [&hs](const char* name) {
        std::string t;
        if (!(hs >> t)) throw ValidationError("truncated window header");
        const std::string prefix = std::string(name) + "=";
        if (t.rfind(prefix, 0) != 0)
          throw ValidationError("bad window header field");
        return std::stod(t.substr(prefix.size()));
      };
      meta.theta_c = field("theta_c");
      meta.a = field("a");
      meta.lambda = field("lambda");
      file.window = meta;
    }
  }
  if (L < 0) throw ValidationError("negative band limit in header");

  file.coeffs = SphCoeffs::zeros(L);
  std::vector<char> seen(coeff_count(L), 0);
  int l, m;
  double re, im;
  while (in >> l >> m >> re >> im) {
    if (l < 0 || l > L || std::abs(m) > l)
      throw ValidationError("coefficient line out of range");
    const int idx = coeff_index(l, m);
    if (seen[idx]) throw ValidationError("duplicate coefficient line");
    seen[idx] = 1;
    file.coeffs.at(l, m) = cplx(re, im);
  }
  if (!std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; }))
    throw ValidationError("coefficient file is missing entries");

  // conjugate symmetry within printing precision marks a real signal
  bool real = true;
  for (int ll = 0; ll <= L && real; ++ll)
    for (int mm = 0; mm <= ll && real; ++mm) {
      const cplx a = file.coeffs.at(ll, mm);
      const cplx b = ((mm & 1) ? -1.0 : 1.0) * std::conj(file.coeffs.at(ll, -mm));
      if (std::abs(a - b) > 1e-13 * std::max(1.0, std::abs(a))) real = false;
    }
  file.coeffs.real_signal = real;
  return file;
}

std::string component_filename(int l, int m) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "g_L%03d_M%+04d.bin", l, m);
  return buf;
}

DistributionWriter::DistributionWriter(fs::path dir, int L_f, int L_h,
                                       int lmax, bool real_signal)
    : dir_(std::move(dir)) {
  fs::create_directories(dir_);
  manifest_.L_f = L_f;
  manifest_.L_h = L_h;
  manifest_.L_g = L_f + L_h;
  manifest_.lmax = lmax;
  manifest_.n_alpha = 2 * L_h + 1;
  manifest_.n_beta = L_h + 1;
  manifest_.n_gamma = 2 * L_h + 1;
  manifest_.real_signal = real_signal;
}

void DistributionWriter::write_component(int l, int m, const So3Volume& volume) {
  if (finalized_) throw ValidationError("writer already finalized");
  if (volume.band_limit != manifest_.L_h)
    throw ValidationError("volume band limit does not match distribution");
  const fs::path path = dir_ / component_filename(l, m);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open for writing: " + tmp.string());
    // little-endian IEEE doubles, the native layout here
    out.write(reinterpret_cast<const char*>(volume.values.data()),
              static_cast<std::streamsize>(volume.values.size() * sizeof(cplx)));
    if (!out) throw ValidationError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
  manifest_.components.emplace_back(l, m);
}

void DistributionWriter::finalize() {
  if (finalized_) return;
  finalized_ = true;
  std::sort(manifest_.components.begin(), manifest_.components.end());
  nlohmann::json j;
  j["format"] = "slsht-dist v1";
  j["L_f"] = manifest_.L_f;
  j["L_h"] = manifest_.L_h;
  j["L_g"] = manifest_.L_g;
  j["lmax"] = manifest_.lmax;
  j["n_alpha"] = manifest_.n_alpha;
  j["n_beta"] = manifest_.n_beta;
  j["n_gamma"] = manifest_.n_gamma;
  j["real_signal"] = manifest_.real_signal;
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& [l, m] : manifest_.components) {
    nlohmann::json c;
    c["l"] = l;
    c["m"] = m;
    c["file"] = component_filename(l, m);
    comps.push_back(c);
  }
  j["components"] = comps;
  atomic_write_text(dir_ / "manifest.json", j.dump(2) + "\n");
}

ComponentSink DistributionWriter::sink() {
  return [this](int l, int m, const So3Volume& v) { write_component(l, m, v); };
}

DistributionManifest read_manifest(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in)
    throw ValidationError("cannot open manifest: " +
                          (dir / "manifest.json").string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
  DistributionManifest m;
  try {
    if (j.at("format").get<std::string>() != "slsht-dist v1")
      throw ValidationError("unsupported distribution format");
    m.L_f = j.at("L_f").get<int>();
    m.L_h = j.at("L_h").get<int>();
    m.L_g = j.at("L_g").get<int>();
    m.lmax = j.at("lmax").get<int>();
    m.n_alpha = j.at("n_alpha").get<int>();
    m.n_beta = j.at("n_beta").get<int>();
    m.n_gamma = j.at("n_gamma").get<int>();
    m.real_signal = j.value("real_signal", false);
    for (const auto& c : j.at("components"))
      m.components.emplace_back(c.at("l").get<int>(), c.at("m").get<int>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
  if (m.L_g != m.L_f + m.L_h || m.n_alpha != 2 * m.L_h + 1 ||
      m.n_beta != m.L_h + 1 || m.n_gamma != 2 * m.L_h + 1)
    throw ValidationError("inconsistent manifest grid parameters");
  for (const auto& [l, mm] : m.components) {
    if (l < 0 || l > m.lmax || std::abs(mm) > l)
      throw ValidationError("manifest component out of range");
    const fs::path p = dir / component_filename(l, mm);
    std::error_code ec;
    const auto size = fs::file_size(p, ec);
    if (ec) throw ValidationError("missing component file: " + p.string());
    if (size != volume_byte_size(m.L_h))
      throw ValidationError("component file has wrong size: " + p.string());
  }
  return m;
}

So3Volume read_component(const fs::path& dir,
                         const DistributionManifest& manifest, int l, int m) {
  if (std::find(manifest.components.begin(), manifest.components.end(),
                std::make_pair(l, m)) == manifest.components.end())
    throw ValidationError("component not present in manifest");
  const fs::path path = dir / component_filename(l, m);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open component: " + path.string());
  So3Volume v = So3Volume::zeros(manifest.L_h);
  in.read(reinterpret_cast<char*>(v.values.data()),
          static_cast<std::streamsize>(v.values.size() * sizeof(cplx)));
  if (static_cast<std::size_t>(in.gcount()) != v.values.size() * sizeof(cplx))
    throw ValidationError("component file truncated: " + path.string());
  return v;
}

void write_map_csv(const fs::path& path, const std::vector<MapCsvRow>& rows) {
  std::ostringstream out;
  out << "theta,phi,re,im\n";
  for (const MapCsvRow& r : rows)
    out << format_double(r.theta) << "," << format_double(r.phi) << ","
        << format_double(r.value.real()) << "," << format_double(r.value.imag())
        << "\n";
  atomic_write_text(path, out.str());
}

std::vector<MapCsvRow> read_map_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open csv: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "theta,phi,re,im")
    throw ValidationError("bad csv header");
  std::vector<MapCsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    MapCsvRow r;
    double re = 0.0, im = 0.0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &r.theta, &r.phi, &re,
                    &im) != 4)
      throw ValidationError("bad csv row");
    r.value = cplx(re, im);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace slsht::io
