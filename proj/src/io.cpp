#include "acns/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstring>

namespace acns {

std::string fmt_g17(double v) {
  if (v == 0.0) v = 0.0;  // fold -0 into 0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& columns)
    : out_(path), n_cols_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot open " + path.string());
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != n_cols_)
    throw std::invalid_argument("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << fmt_g17(values[i]) << (i + 1 < values.size() ? "," : "");
  out_ << "\n";
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_)
    throw std::invalid_argument("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i)
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "");
  out_ << "\n";
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a(const std::string& s) { return fnv1a(s.data(), s.size()); }

std::uint64_t fnv1a_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
    h = fnv1a(buf, static_cast<std::size_t>(in.gcount()), h);
  return h;
}

namespace {

void write_header(std::ofstream& out, const SpectralGrid& g,
                  const std::string& kind, double time) {
  nlohmann::json j;
  j["nx"] = g.nx();
  j["ny"] = g.ny();
  j["Lx"] = g.Lx();
  j["Ly"] = g.Ly();
  j["kind"] = kind;
  j["time"] = time;
  out << j.dump() << "\n";
}

nlohmann::json read_header(std::ifstream& in, const SpectralGrid& g,
                           const std::string& kind) {
  std::string line;
  std::getline(in, line);
  nlohmann::json j = nlohmann::json::parse(line);
  if (j["nx"] != g.nx() || j["ny"] != g.ny() || j["kind"] != kind)
    throw std::runtime_error("snapshot header mismatch");
  return j;
}

void write_doubles(std::ofstream& out, const double* p, std::size_t n) {
  out.write(reinterpret_cast<const char*>(p),
            static_cast<std::streamsize>(n * sizeof(double)));
}

void read_doubles(std::ifstream& in, double* p, std::size_t n) {
  in.read(reinterpret_cast<char*>(p),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw std::runtime_error("snapshot payload truncated");
}

}  // namespace

void write_scalar_snapshot(const std::filesystem::path& p,
                           const SpectralGrid& g, const ScalarField& f,
                           double time) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + p.string());
  write_header(out, g, "phi", time);
  std::vector<double> buf;
  buf.reserve(static_cast<std::size_t>(g.nx()) * g.ny());
  for (int i = 0; i < g.nx(); ++i)       // row-major over (i, j)
    for (int j = 0; j < g.ny(); ++j) buf.push_back(f.v(i, j));
  write_doubles(out, buf.data(), buf.size());
}

void write_solenoidal_snapshot(const std::filesystem::path& p,
                               const SpectralGrid& g, const SolenoidalField& u,
                               double time) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + p.string());
  write_header(out, g, "u", time);
  std::vector<double> buf;
  buf.reserve(static_cast<std::size_t>(g.nx()) * g.ny() * 4);
  for (const auto* comp : {&u.ux, &u.uy})
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny(); ++j) {
        buf.push_back((*comp)(i, j).real());
        buf.push_back((*comp)(i, j).imag());
      }
  write_doubles(out, buf.data(), buf.size());
}

ScalarField read_scalar_snapshot(const std::filesystem::path& p,
                                 const SpectralGrid& g, double* time) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  nlohmann::json j = read_header(in, g, "phi");
  if (time) *time = j["time"].get<double>();
  std::vector<double> buf(static_cast<std::size_t>(g.nx()) * g.ny());
  read_doubles(in, buf.data(), buf.size());
  ScalarField f = ScalarField::zero(g);
  std::size_t k = 0;
  for (int i = 0; i < g.nx(); ++i)
    for (int jj = 0; jj < g.ny(); ++jj) f.v(i, jj) = buf[k++];
  return f;
}

SolenoidalField read_solenoidal_snapshot(const std::filesystem::path& p,
                                         const SpectralGrid& g, double* time) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  nlohmann::json j = read_header(in, g, "u");
  if (time) *time = j["time"].get<double>();
  std::vector<double> buf(static_cast<std::size_t>(g.nx()) * g.ny() * 4);
  read_doubles(in, buf.data(), buf.size());
  SolenoidalField u = SolenoidalField::zero(g);
  std::size_t k = 0;
  for (auto* comp : {&u.ux, &u.uy})
    for (int i = 0; i < g.nx(); ++i)
      for (int jj = 0; jj < g.ny(); ++jj) {
        const double re = buf[k++];
        const double im = buf[k++];
        (*comp)(i, jj) = Complex(re, im);
      }
  return u;
}

void Manifest::write(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["config_hash"] = config_hash;
  j["code_version"] = code_version;
  j["seeds"] = seeds;
  nlohmann::json outs = nlohmann::json::array();
  for (std::size_t i = 0; i < outputs.size(); ++i)
    outs.push_back({{"path", outputs[i]}, {"fnv64", output_hashes[i]}});
  j["outputs"] = outs;
  j["wall_clock_s"] = wall_clock_s;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace acns
