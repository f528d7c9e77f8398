// JSON documents for scattering data, CSV tables and field directories.
#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "dpnls/pde.hpp"
#include "dpnls/scattering.hpp"

namespace dpnls {

/// 17 significant digits, '.' as decimal point, independent of the locale.
std::string format_number(double v);

/// ScatteringData as JSON:
///   { "z_grid": {"lo", "step", "size"}, "r": [[re, im], ...], "s11": [...], "s21": [...],
///     "discrete": [{"z": [re, im], "order", "c0": [..], "c1": [..], "b"?: [..], "d"?: [..]}] }
/// z_grid/r may be omitted for purely discrete (reflectionless) data.
std::string scattering_to_json(const ScatteringData& data);
ScatteringData scattering_from_json(const std::string& text);

void write_scattering(const std::filesystem::path& path, const ScatteringData& data);
/// Throws InputError when the file is missing or malformed.
ScatteringData read_scattering(const std::filesystem::path& path);

/// Comma separated table with a header line; values formatted by format_number.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void close();

 private:
  std::ofstream* out();
  std::filesystem::path path_;
  std::size_t columns_;
  std::unique_ptr<std::ofstream> stream_;
};

/// r(z) table: z, Re r, Im r, |r|.
void write_reflection_csv(const std::filesystem::path& path, const ScatteringData& data);

/// Field directory: manifest.json (grid, dt, slice times, file names) plus one
/// slice_NNNNN.csv per time slice with columns x, Re q, Im q.
void write_field(const std::filesystem::path& dir, const SpaceTimeField& field);
SpaceTimeField read_field(const std::filesystem::path& dir);

}  // namespace dpnls
