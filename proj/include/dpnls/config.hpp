// Run configuration for the command-line front end (YAML, with dotted-key overrides).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpnls/pde.hpp"
#include "dpnls/phase.hpp"
#include "dpnls/scattering.hpp"

namespace dpnls {

struct ProfileSource {
  std::string csv;            // x,re,im file; empty for a built-in profile
  std::string kind = "sech";  // sech | gaussian
  double amplitude = 1.0;
  double width = 1.0;   // sech
  double center = 0.0;  // gaussian
  double chirp = 0.0;   // gaussian
  double x_lo = -30.0, x_hi = 30.0;
  std::size_t points = 6001;

  InitialProfile build() const;
};

struct RunConfig {
  std::string command;
  std::string output_dir = "dpnls_out";

  // exactly one data source
  std::optional<ProfileSource> profile;
  std::optional<std::string> data_file;
  std::optional<std::vector<DiscreteDatum>> discrete;

  struct {
    double z_lo = -8.0, z_hi = 8.0;
    std::size_t z_points = 801;
    Box box{cplx(-4.0, 0.05), cplx(4.0, 4.0)};
    bool find_zeros = true;
    JostOptions jost;
    double zero_tol = 1e-6;
    double ratio_tol = 1e-6;
  } scatter;

  struct {
    double x_lo = -20.0, x_hi = 20.0;
    std::size_t x_points = 401;
    double t_lo = 0.0, t_hi = 1.0;
    std::size_t t_points = 11;
  } soliton;

  struct {
    Cone cone{-1.0, 1.0, -0.5, 0.5};
    std::vector<double> times{20.0, 40.0, 80.0};
    std::size_t x_points = 41;
    double t_min = 5.0;
  } asymptote;

  struct {
    PeriodicGrid grid;
    double dt = 1e-3;
    std::vector<double> save_times{0.0, 1.0};
  } evolve;

  struct {
    std::vector<int> criteria{1, 2, 3, 4, 5, 6, 7};
    std::string fixtures;  // empty: the fixture directory compiled into the build
  } verify;

  struct {
    std::string field_a, field_b;  // field directories; b empty: closed-form soliton field
    double x_lo = -20.0, x_hi = 20.0;
    double scale_exponent = 0.0;
  } compare;

  /// Loads the data source into ScatteringData (profiles are not scattered here).
  ScatteringData load_data() const;
  void validate() const;
};

/// The commented default configuration; parse_config starts from it.
const std::string& reference_config();

/// Defaults, then the YAML text, then "a.b.c=value" overrides. Throws InputError.
RunConfig parse_config(const std::string& yaml_text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

}  // namespace dpnls
