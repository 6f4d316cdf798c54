#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace slsht::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

int run_window(double theta_c, double a, int lh, int oversample,
               const std::string& out_path);
int run_synth(const std::string& kind, int lf, std::uint64_t seed,
              const std::string& out_path);
int run_forward(const std::string& f_path, const std::string& h_path,
                const std::string& engine, const std::string& out_dir,
                int lmax = -1);
int run_inverse(const std::string& dist_dir, const std::string& h_path,
                const std::string& out_path);
int run_bench(const std::vector<int>& lf_list, int lh, int repeats,
              const std::string& out_csv);
int run_slice(const std::string& dist_dir, int l, int m, int gamma_index,
              const std::string& out_csv);
int run_verify_coeffs(const std::string& path_a, const std::string& path_b);
int run_verify_dist(const std::string& dir_a, const std::string& dir_b);

}  // namespace slsht::cli
