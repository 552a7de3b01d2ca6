#pragma once

#include "acns/spectral.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace acns {

/// Shortest round-trip decimal form (17 significant digits).
std::string fmt_g17(double v);

/// Plain CSV writer; numeric cells are written with fmt_g17.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);
  void close() { out_.close(); }

 private:
  std::ofstream out_;
  std::size_t n_cols_;
};

/// FNV-1a 64-bit, used for stable config and output hashes.
std::uint64_t fnv1a(const void* data, std::size_t n,
                    std::uint64_t h = 0xcbf29ce484222325ull);
std::uint64_t fnv1a(const std::string& s);
std::uint64_t fnv1a_file(const std::filesystem::path& p);

// -- field snapshots -----------------------------------------------------------
// One-line JSON header {grid dims, box size, field kind, time} followed by
// little-endian IEEE-754 float64 payload, row-major over (i, j); spectral
// fields are stored as interleaved re/im per component.

void write_scalar_snapshot(const std::filesystem::path& p,
                           const SpectralGrid& g, const ScalarField& f,
                           double time);
void write_solenoidal_snapshot(const std::filesystem::path& p,
                               const SpectralGrid& g, const SolenoidalField& u,
                               double time);
ScalarField read_scalar_snapshot(const std::filesystem::path& p,
                                 const SpectralGrid& g, double* time = nullptr);
SolenoidalField read_solenoidal_snapshot(const std::filesystem::path& p,
                                         const SpectralGrid& g,
                                         double* time = nullptr);

// -- run manifest ---------------------------------------------------------------

struct Manifest {
  std::uint64_t config_hash = 0;
  std::string code_version;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> outputs;
  std::vector<std::uint64_t> output_hashes;
  double wall_clock_s = 0;

  void write(const std::filesystem::path& path) const;
};

inline constexpr const char* kCodeVersion = "0.1.0";

}  // namespace acns
