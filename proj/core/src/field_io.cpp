#include "bbmlab/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "bbmlab/errors.hpp"

namespace bbm {
namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void put_u64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  os.write(bytes.data(), 8);
}

std::uint64_t get_u64(std::istream& is) {
  std::array<unsigned char, 8> bytes{};
  is.read(reinterpret_cast<char*>(bytes.data()), 8);
  if (!is) throw ConfigError("truncated binary field");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

}  // namespace

void write_field_csv(const Field& f, std::ostream& os) {
  const GridSpec& g = f.grid();
  os << (g.dim == 1 ? "x,value\n" : "x,y,value\n");
  const std::size_t ny = g.ny();
  for (std::size_t ix = 0; ix < g.nx(); ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      os << fmt17(g.coordinate(0, ix)) << ',';
      if (g.dim == 2) os << fmt17(g.coordinate(1, iy)) << ',';
      os << fmt17(f.at(ix, iy)) << '\n';
    }
  }
}

Field read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty field CSV");
  const int dim = std::count(line.begin(), line.end(), ',') == 1 ? 1 : 2;
  std::vector<std::array<double, 3>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::array<double, 3> r{};
    char comma = 0;
    ls >> r[0] >> comma >> r[1];
    if (dim == 2) ls >> comma >> r[2];
    if (!ls) throw ConfigError("malformed field CSV row: " + line);
    rows.push_back(r);
  }
  auto axis_info = [&](int col) {
    std::map<double, int> uniq;
    for (const auto& r : rows) uniq[r[col]] = 0;
    if (uniq.size() < 2) throw ConfigError("field CSV needs at least two nodes per axis");
    const double x0 = uniq.begin()->first;
    const double x1 = std::next(uniq.begin())->first;
    const double dx = x1 - x0;
    return std::pair{uniq.size(), dx * static_cast<double>(uniq.size())};
  };
  GridSpec grid;
  if (dim == 1) {
    const auto [n, len] = axis_info(0);
    grid = GridSpec::line(len, n);
  } else {
    const auto [nx, lx] = axis_info(0);
    const auto [ny, ly] = axis_info(1);
    grid = GridSpec::plane(lx, ly, nx, ny);
  }
  if (rows.size() != grid.size()) throw ConfigError("field CSV row count does not match its grid");
  std::vector<double> samples(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) samples[i] = rows[i][dim];
  return Field(grid, std::move(samples));
}

void write_field_binary(const Field& f, std::ostream& os) {
  const GridSpec& g = f.grid();
  put_u64(os, static_cast<std::uint64_t>(g.dim));
  for (int a = 0; a < g.dim; ++a) put_f64(os, g.length[a]);
  for (int a = 0; a < g.dim; ++a) put_u64(os, g.points[a]);
  for (double v : f.samples()) put_f64(os, v);
}

Field read_field_binary(std::istream& is) {
  GridSpec g;
  g.dim = static_cast<int>(get_u64(is));
  if (g.dim != 1 && g.dim != 2) throw ConfigError("binary field has invalid dimension");
  for (int a = 0; a < g.dim; ++a) g.length[a] = get_f64(is);
  for (int a = 0; a < g.dim; ++a) g.points[a] = static_cast<std::size_t>(get_u64(is));
  g.validate();
  std::vector<double> samples(g.size());
  for (double& v : samples) v = get_f64(is);
  return Field(g, std::move(samples));
}

void save_field(const Field& f, const std::filesystem::path& path) {
  const bool csv = path.extension() == ".csv";
  std::ofstream os(path, csv ? std::ios::out : std::ios::out | std::ios::binary);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  if (csv) {
    write_field_csv(f, os);
  } else {
    write_field_binary(f, os);
  }
}

Field load_field(const std::filesystem::path& path) {
  const bool csv = path.extension() == ".csv";
  std::ifstream is(path, csv ? std::ios::in : std::ios::in | std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path.string());
  return csv ? read_field_csv(is) : read_field_binary(is);
}

}  // namespace bbm
