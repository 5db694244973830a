#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>
#include <type_traits>
#include <vector>

#include "symrad/errors.hpp"
#include "symrad/grid.hpp"
#include "symrad/radon.hpp"
#include "symrad/states.hpp"
#include "symrad/wigner.hpp"

namespace symrad {

static_assert(std::endian::native == std::endian::little,
              "grid files are little-endian and written with plain stores");

namespace detail {

constexpr int kMaxFileDims = 16;
// Caps a single payload at 2 GiB so a corrupt header cannot trigger a huge
// allocation before the size check runs.
constexpr std::uint64_t kMaxFileBytes = std::uint64_t{1} << 31;

inline std::ofstream open_out(const std::string& path, const char* fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("FileError", std::string(fn) + ": cannot open " + path);
  return out;
}

inline std::ifstream open_in(const std::string& path, const char* fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("FileError", std::string(fn) + ": cannot open " + path);
  return in;
}

template <class T>
void write_raw(std::ostream& out, const T& v) {
  static_assert(std::is_trivially_copyable_v<T>);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void read_raw(std::istream& in, T& v, const char* fn) {
  static_assert(std::is_trivially_copyable_v<T>);
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(T)))
    throw ValidationError("TruncatedFile", std::string(fn) + ": unexpected end of file");
}

inline void write_header(std::ostream& out, const char* magic, std::uint32_t dims, double hbar,
                         const std::vector<Axis>& axes) {
  out.write(magic, 8);
  write_raw(out, std::uint32_t{1});
  write_raw(out, dims);
  write_raw(out, hbar);
  for (const Axis& a : axes) {
    write_raw(out, a.min);
    write_raw(out, a.max);
    write_raw(out, a.count);
  }
}

// Returns the axes; dims and hbar through the out-parameters.  Every header
// field is validated here so the payload read can trust the sizes.
inline std::vector<Axis> read_header(std::istream& in, const char* magic, std::uint32_t& dims,
                                     double& hbar, const char* fn) {
  char got[8] = {};
  in.read(got, 8);
  if (in.gcount() != 8 || std::memcmp(got, magic, 8) != 0)
    throw ValidationError("BadMagic", std::string(fn) + ": magic bytes mismatch");
  std::uint32_t version = 0;
  read_raw(in, version, fn);
  if (version != 1)
    throw ValidationError("BadMagic", std::string(fn) + ": unsupported format version");
  read_raw(in, dims, fn);
  if (dims < 1 || dims > kMaxFileDims)
    throw ValidationError("InvalidGrid", std::string(fn) + ": dimension count out of range");
  read_raw(in, hbar, fn);
  std::vector<Axis> axes(dims);
  for (Axis& a : axes) {
    read_raw(in, a.min, fn);
    read_raw(in, a.max, fn);
    read_raw(in, a.count, fn);
  }
  check_axes(axes, fn);
  std::uint64_t bytes = sizeof(double);
  for (const Axis& a : axes) {
    bytes *= a.count;
    if (bytes > kMaxFileBytes)
      throw ValidationError("InvalidGrid", std::string(fn) + ": grid exceeds the payload cap");
  }
  return axes;
}

inline void require_eof(std::istream& in, const char* fn) {
  if (in.peek() != std::char_traits<char>::eof())
    throw ValidationError("TruncatedFile", std::string(fn) + ": trailing bytes after the payload");
}

template <class T>
void read_payload(std::istream& in, std::vector<T>& values, std::size_t count, const char* fn) {
  values.resize(count);
  const std::streamsize bytes = static_cast<std::streamsize>(count * sizeof(T));
  in.read(reinterpret_cast<char*>(values.data()), bytes);
  if (in.gcount() != bytes)
    throw ValidationError("TruncatedFile", std::string(fn) + ": payload shorter than the grid");
  require_eof(in, fn);
}

inline void check_finite_payload(const double* data, std::size_t count, const char* fn) {
  for (std::size_t k = 0; k < count; ++k)
    if (!std::isfinite(data[k]))
      throw ValidationError("InvalidState", std::string(fn) + ": non-finite sample in payload");
}

inline void append_g17(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  line += buf;
}

}  // namespace detail

// WF1: "SYMRADWF", u32 version=1, u32 n, f64 hbar, per axis (f64 min, f64
// max, u32 count), then the samples as interleaved (re, im) f64, row-major.
inline void write_wavefunction(const std::string& path, const WaveFunction& wf) {
  check_wavefunction(wf, "write_wavefunction");
  auto out = detail::open_out(path, "write_wavefunction");
  detail::write_header(out, "SYMRADWF", static_cast<std::uint32_t>(wf.n), wf.hbar, wf.axes);
  out.write(reinterpret_cast<const char*>(wf.values.data()),
            static_cast<std::streamsize>(wf.values.size() * sizeof(Cplx)));
  if (!out)
    throw ValidationError("FileError", std::string("write_wavefunction: write failed on ") + path);
}

inline WaveFunction read_wavefunction(const std::string& path) {
  auto in = detail::open_in(path, "read_wavefunction");
  WaveFunction wf;
  std::uint32_t dims = 0;
  wf.axes = detail::read_header(in, "SYMRADWF", dims, wf.hbar, "read_wavefunction");
  wf.n = static_cast<int>(dims);
  detail::read_payload(in, wf.values, total_points(wf.axes), "read_wavefunction");
  check_wavefunction(wf, "read_wavefunction");
  detail::check_finite_payload(reinterpret_cast<const double*>(wf.values.data()),
                               2 * wf.values.size(), "read_wavefunction");
  return wf;
}

// WG1: "SYMRADWG", u32 version=1, u32 two_n, f64 hbar, per axis (f64 min,
// f64 max, u32 count), then f64 samples row-major over (x..., p...).
inline void write_wigner(const std::string& path, const WignerFunction& w) {
  if (w.n < 1 || static_cast<int>(w.axes.size()) != 2 * w.n ||
      w.values.size() != total_points(w.axes))
    throw ValidationError("DimensionMismatch", "write_wigner: grid and sample sizes disagree");
  auto out = detail::open_out(path, "write_wigner");
  detail::write_header(out, "SYMRADWG", static_cast<std::uint32_t>(2 * w.n), w.hbar, w.axes);
  out.write(reinterpret_cast<const char*>(w.values.data()),
            static_cast<std::streamsize>(w.values.size() * sizeof(double)));
  if (!out) throw ValidationError("FileError", std::string("write_wigner: write failed on ") + path);
}

inline WignerFunction read_wigner(const std::string& path) {
  auto in = detail::open_in(path, "read_wigner");
  WignerFunction w;
  std::uint32_t dims = 0;
  w.axes = detail::read_header(in, "SYMRADWG", dims, w.hbar, "read_wigner");
  if (dims % 2 != 0)
    throw ValidationError("InvalidGrid", "read_wigner: axis count must be even (x then p)");
  w.n = static_cast<int>(dims / 2);
  detail::read_payload(in, w.values, total_points(w.axes), "read_wigner");
  if (!(w.hbar > 0.0) || !std::isfinite(w.hbar))
    throw ValidationError("InvalidState", "read_wigner: hbar must be positive and finite");
  detail::check_finite_payload(w.values.data(), w.values.size(), "read_wigner");
  return w;
}

// Sinogram CSV: header "X,theta,value", rows ordered by angle then X, all
// numbers at 17 significant digits so values survive the round trip exactly.
inline void write_sinogram_csv(const std::string& path, const Sinogram& sg) {
  if (sg.values.size() != static_cast<std::size_t>(sg.angles) * sg.x_axis.count)
    throw ValidationError("DimensionMismatch", "write_sinogram_csv: size mismatch");
  auto out = detail::open_out(path, "write_sinogram_csv");
  std::string line = "X,theta,value\n";
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  for (std::uint32_t j = 0; j < sg.angles; ++j) {
    const double theta = sg.theta(j);
    for (std::uint32_t k = 0; k < sg.x_axis.count; ++k) {
      line.clear();
      detail::append_g17(line, sg.x_axis.point(k));
      line += ',';
      detail::append_g17(line, theta);
      line += ',';
      detail::append_g17(line, sg.values[static_cast<std::size_t>(j) * sg.x_axis.count + k]);
      line += '\n';
      out.write(line.data(), static_cast<std::streamsize>(line.size()));
    }
  }
  if (!out)
    throw ValidationError("FileError", std::string("write_sinogram_csv: write failed on ") + path);
}

// The CSV stores midpoints, so the axis is rebuilt from the first block's
// step; hbar does not travel in the file and must be supplied.
inline Sinogram read_sinogram_csv(const std::string& path, double hbar = 1.0) {
  auto in = detail::open_in(path, "read_sinogram_csv");
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError("TruncatedFile", "read_sinogram_csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "X,theta,value")
    throw ValidationError("BadMagic", "read_sinogram_csv: header mismatch");

  std::vector<double> xs, thetas, values;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const char* s = line.c_str();
    char* end = nullptr;
    const double x = std::strtod(s, &end);
    if (end == s || *end != ',')
      throw ValidationError("TruncatedFile", "read_sinogram_csv: malformed row");
    s = end + 1;
    const double t = std::strtod(s, &end);
    if (end == s || *end != ',')
      throw ValidationError("TruncatedFile", "read_sinogram_csv: malformed row");
    s = end + 1;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
      throw ValidationError("TruncatedFile", "read_sinogram_csv: malformed row");
    xs.push_back(x);
    thetas.push_back(t);
    values.push_back(v);
  }
  if (values.empty()) throw ValidationError("TruncatedFile", "read_sinogram_csv: no data rows");

  std::size_t block = 1;
  while (block < thetas.size() && thetas[block] == thetas[0]) ++block;
  if (block < 2 || values.size() % block != 0)
    throw ValidationError("TruncatedFile", "read_sinogram_csv: ragged angle blocks");
  const std::uint32_t count = static_cast<std::uint32_t>(block);
  const std::uint32_t angles = static_cast<std::uint32_t>(values.size() / block);

  const double h = xs[1] - xs[0];
  if (!(h > 0.0))
    throw ValidationError("InvalidGrid", "read_sinogram_csv: X must increase within a block");
  Sinogram sg;
  sg.x_axis = Axis{xs[0] - 0.5 * h, xs[0] + (static_cast<double>(count) - 0.5) * h, count};
  sg.angles = angles;
  sg.hbar = hbar;
  sg.values = std::move(values);
  for (std::uint32_t j = 0; j < angles; ++j) {
    const double want = static_cast<double>(j) * M_PI / static_cast<double>(angles);
    if (std::abs(thetas[static_cast<std::size_t>(j) * count] - want) > 1e-9)
      throw ValidationError("InvalidGrid",
                            "read_sinogram_csv: angles are not the even half-circle set");
  }
  return sg;
}

// Lossless plot export, one row per sample: x1..xn,re,im.
inline void wavefunction_csv(const std::string& path, const WaveFunction& wf) {
  check_wavefunction(wf, "wavefunction_csv");
  auto out = detail::open_out(path, "wavefunction_csv");
  std::string line;
  for (int d = 0; d < wf.n; ++d) {
    line += 'x';
    line += std::to_string(d + 1);
    line += ',';
  }
  line += "re,im\n";
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  std::vector<std::uint32_t> pos(static_cast<std::size_t>(wf.n), 0);
  for (std::size_t f = 0; f < wf.values.size(); ++f) {
    line.clear();
    for (int d = 0; d < wf.n; ++d) {
      detail::append_g17(line, wf.axes[static_cast<std::size_t>(d)].point(pos[static_cast<std::size_t>(d)]));
      line += ',';
    }
    detail::append_g17(line, wf.values[f].real());
    line += ',';
    detail::append_g17(line, wf.values[f].imag());
    line += '\n';
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    for (int d = wf.n - 1; d >= 0; --d) {
      if (++pos[static_cast<std::size_t>(d)] < wf.axes[static_cast<std::size_t>(d)].count) break;
      pos[static_cast<std::size_t>(d)] = 0;
    }
  }
  if (!out)
    throw ValidationError("FileError", std::string("wavefunction_csv: write failed on ") + path);
}

// Lossless plot export, one row per sample: x1..xn,p1..pn,value.
inline void wigner_csv(const std::string& path, const WignerFunction& w) {
  if (w.n < 1 || static_cast<int>(w.axes.size()) != 2 * w.n ||
      w.values.size() != total_points(w.axes))
    throw ValidationError("DimensionMismatch", "wigner_csv: grid and sample sizes disagree");
  auto out = detail::open_out(path, "wigner_csv");
  std::string line;
  for (int d = 0; d < w.n; ++d) {
    line += 'x';
    line += std::to_string(d + 1);
    line += ',';
  }
  for (int d = 0; d < w.n; ++d) {
    line += 'p';
    line += std::to_string(d + 1);
    line += ',';
  }
  line += "value\n";
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  const int dims = 2 * w.n;
  std::vector<std::uint32_t> pos(static_cast<std::size_t>(dims), 0);
  for (std::size_t f = 0; f < w.values.size(); ++f) {
    line.clear();
    for (int d = 0; d < dims; ++d) {
      detail::append_g17(line, w.axes[static_cast<std::size_t>(d)].point(pos[static_cast<std::size_t>(d)]));
      line += ',';
    }
    detail::append_g17(line, w.values[f]);
    line += '\n';
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    for (int d = dims - 1; d >= 0; --d) {
      if (++pos[static_cast<std::size_t>(d)] < w.axes[static_cast<std::size_t>(d)].count) break;
      pos[static_cast<std::size_t>(d)] = 0;
    }
  }
  if (!out) throw ValidationError("FileError", std::string("wigner_csv: write failed on ") + path);
}

}  // namespace symrad
