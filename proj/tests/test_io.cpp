#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "slsht/errors.hpp"
#include "slsht/io.hpp"
#include "slsht/signals.hpp"
#include "slsht/transform.hpp"

using namespace slsht;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("slsht_io_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("coefficient file round trip is byte identical") {
  TempDir tmp;
  const SphCoeffs c = random_coeffs(9, 123, true);
  const fs::path p1 = tmp.path / "a.shc";
  const fs::path p2 = tmp.path / "b.shc";
  io::write_coeff_file(p1, c);
  const io::CoeffFile loaded = io::read_coeff_file(p1);
  CHECK(loaded.coeffs.band_limit == 9);
  CHECK(loaded.coeffs.real_signal);
  CHECK(!loaded.window.has_value());
  for (int i = 0; i < coeff_count(9); ++i)
    CHECK(loaded.coeffs.data[i] == c.data[i]);
  io::write_coeff_file(p2, loaded.coeffs);
  CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("window header round trips") {
  TempDir tmp;
  const SphCoeffs c = random_coeffs(4, 5, true);
  const io::WindowMeta meta{0.5235987755982988, 0.536688744988256, 0.9012345};
  const fs::path p = tmp.path / "win.shc";
  io::write_coeff_file(p, c, meta);
  const io::CoeffFile loaded = io::read_coeff_file(p);
  REQUIRE(loaded.window.has_value());
  CHECK(loaded.window->theta_c == meta.theta_c);
  CHECK(loaded.window->a == meta.a);
  CHECK(loaded.window->lambda == meta.lambda);

  const fs::path p2 = tmp.path / "win2.shc";
  io::write_coeff_file(p2, loaded.coeffs, loaded.window);
  CHECK(slurp(p) == slurp(p2));
}

TEST_CASE("coefficient file validation") {
  TempDir tmp;
  const fs::path p = tmp.path / "bad.shc";
  {
    std::ofstream out(p);
    out << "# shcoeff v1 L=1\n0 0 1 0\n1 -1 0 0\n1 0 0 0\n";
    // (1,1) missing
  }
  CHECK_THROWS_AS(io::read_coeff_file(p), ValidationError);
  {
    std::ofstream out(p);
    out << "# shcoeff v1 L=0\n0 0 1 0\n0 0 2 0\n";
  }
  CHECK_THROWS_AS(io::read_coeff_file(p), ValidationError);
  {
    std::ofstream out(p);
    out << "# other v1 L=0\n0 0 1 0\n";
  }
  CHECK_THROWS_AS(io::read_coeff_file(p), ValidationError);
  CHECK_THROWS_AS(io::read_coeff_file(tmp.path / "absent.shc"),
                  ValidationError);
}

TEST_CASE("distribution directory round trip") {
  TempDir tmp;
  const int L_f = 2, L_h = 1;
  const SphCoeffs f = random_coeffs(L_f, 3, true);
  SphCoeffs h = random_coeffs(L_h, 4, true);
  h.at(0, 0) += 1.0;
  const double n = h.norm();
  for (auto& v : h.data) v /= n;

  const SlshtDistribution dist = forward_fast(f, h);
  const fs::path dir = tmp.path / "dist";
  io::DistributionWriter writer(dir, L_f, L_h, dist.lmax, true);
  for (int l = 0; l <= dist.lmax; ++l)
    for (int m = -l; m <= l; ++m)
      writer.write_component(l, m, dist.component(l, m));
  writer.finalize();

  const io::DistributionManifest manifest = io::read_manifest(dir);
  CHECK(manifest.L_f == L_f);
  CHECK(manifest.L_h == L_h);
  CHECK(manifest.L_g == L_f + L_h);
  CHECK(manifest.n_alpha == 2 * L_h + 1);
  CHECK(manifest.components.size() ==
        static_cast<std::size_t>(coeff_count(dist.lmax)));
  CHECK(manifest.real_signal);

  // component files carry exactly 16 (2L_h+1)^2 (L_h+1) bytes
  const auto n_bytes =
      fs::file_size(dir / io::component_filename(0, 0));
  CHECK(n_bytes == 16u * (2 * L_h + 1) * (2 * L_h + 1) * (L_h + 1));

  for (int l = 0; l <= dist.lmax; ++l)
    for (int m = -l; m <= l; ++m) {
      const So3Volume v = io::read_component(dir, manifest, l, m);
      const auto& ref = dist.component(l, m).values;
      REQUIRE(v.values.size() == ref.size());
      for (std::size_t i = 0; i < ref.size(); ++i)
        CHECK(v.values[i] == ref[i]);
    }
}

TEST_CASE("tampered manifest is rejected") {
  TempDir tmp;
  const fs::path dir = tmp.path / "dist";
  SphCoeffs f = SphCoeffs::zeros(1);
  f.at(0, 0) = 1.0;
  SphCoeffs h = SphCoeffs::zeros(1);
  h.at(0, 0) = 1.0;
  const SlshtDistribution dist = forward_fast(f, h);
  io::DistributionWriter writer(dir, 1, 1, dist.lmax, false);
  for (int l = 0; l <= dist.lmax; ++l)
    for (int m = -l; m <= l; ++m)
      writer.write_component(l, m, dist.component(l, m));
  writer.finalize();
  CHECK_NOTHROW(io::read_manifest(dir));

  // corrupt L_h so grid sizes and file sizes disagree
  std::string text = slurp(dir / "manifest.json");
  const auto pos = text.find("\"L_h\": 1");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 8, "\"L_h\": 2");
  {
    std::ofstream out(dir / "manifest.json", std::ios::trunc);
    out << text;
  }
  CHECK_THROWS_AS(io::read_manifest(dir), ValidationError);
}

TEST_CASE("map csv round trip") {
  TempDir tmp;
  std::vector<io::MapCsvRow> rows;
  for (int i = 0; i < 12; ++i)
    rows.push_back({0.1 * i, 0.2 * i, {1.0 / (i + 1), -0.5 * i}});
  const fs::path p = tmp.path / "map.csv";
  io::write_map_csv(p, rows);
  const std::vector<io::MapCsvRow> back = io::read_map_csv(p);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].theta == rows[i].theta);
    CHECK(back[i].phi == rows[i].phi);
    CHECK(back[i].value == rows[i].value);
  }
}
