#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "symrad/symrad.hpp"

namespace {

using nlohmann::json;
using namespace symrad;

Axis parse_axis(const std::string& text, const char* flag) {
  const char* s = text.c_str();
  char* end = nullptr;
  const double lo = std::strtod(s, &end);
  if (end == s || *end != ':')
    throw ValidationError("InvalidGrid", std::string(flag) + ": expected min:max:count");
  s = end + 1;
  const double hi = std::strtod(s, &end);
  if (end == s || *end != ':')
    throw ValidationError("InvalidGrid", std::string(flag) + ": expected min:max:count");
  s = end + 1;
  const unsigned long count = std::strtoul(s, &end, 10);
  if (end == s || *end != '\0' || count == 0 || count > (1ul << 30))
    throw ValidationError("InvalidGrid", std::string(flag) + ": expected min:max:count");
  return Axis{lo, hi, static_cast<std::uint32_t>(count)};
}

std::vector<double> parse_reals(const std::string& text, const char* flag) {
  std::vector<double> out;
  const char* s = text.c_str();
  while (true) {
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s)
      throw ValidationError("InvalidState", std::string(flag) + ": expected comma-separated reals");
    out.push_back(v);
    if (*end == '\0') break;
    if (*end != ',')
      throw ValidationError("InvalidState", std::string(flag) + ": expected comma-separated reals");
    s = end + 1;
  }
  return out;
}

SquareMatrix parse_matrix(const std::string& text, const char* flag) {
  const std::vector<double> entries = parse_reals(text, flag);
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(entries.size()))));
  if (n < 1 || static_cast<std::size_t>(n) * static_cast<std::size_t>(n) != entries.size())
    throw ValidationError("DimensionMismatch",
                          std::string(flag) + ": entry count must be a perfect square");
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = entries[static_cast<std::size_t>(i) * n + j];
  return m;
}

SquareMatrix matrix_from_json(const json& rows, int n, const char* what) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    throw ValidationError("DimensionMismatch", std::string(what) + ": expected n rows");
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ValidationError("DimensionMismatch", std::string(what) + ": expected n columns");
    for (int j = 0; j < n; ++j) m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return m;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("FileError", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("ConfigError", path + ": " + e.what());
  }
}

// Profile CSV: x1..xn,value rows at full precision, row-major.
void profile_csv(const std::string& path, const RadonProfile& p) {
  auto out = detail::open_out(path, "profile_csv");
  std::string line;
  for (int d = 0; d < p.n; ++d) {
    line += 'x';
    line += std::to_string(d + 1);
    line += ',';
  }
  line += "value\n";
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  std::vector<std::uint32_t> pos(static_cast<std::size_t>(p.n), 0);
  for (std::size_t f = 0; f < p.values.size(); ++f) {
    line.clear();
    for (int d = 0; d < p.n; ++d) {
      detail::append_g17(line, p.axes[static_cast<std::size_t>(d)].point(pos[static_cast<std::size_t>(d)]));
      line += ',';
    }
    detail::append_g17(line, p.values[f]);
    line += '\n';
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    for (int d = p.n - 1; d >= 0; --d) {
      if (++pos[static_cast<std::size_t>(d)] < p.axes[static_cast<std::size_t>(d)].count) break;
      pos[static_cast<std::size_t>(d)] = 0;
    }
  }
  if (!out) throw ValidationError("FileError", "profile_csv: write failed on " + path);
}

void dump_plan_json(const std::string& path, const MetaplecticPlan& plan) {
  json j;
  if (plan.split)
    j["theta"] = plan.theta;
  else
    j["theta"] = nullptr;
  j["factors"] = json::array();
  for (const QuadraticFourierSpec& f : plan.factors) {
    json jf;
    jf["m"] = f.maslov;
    auto rows = [&](const SquareMatrix& m) {
      json r = json::array();
      for (int i = 0; i < m.n; ++i) {
        json row = json::array();
        for (int k = 0; k < m.n; ++k) row.push_back(m(i, k));
        r.push_back(row);
      }
      return r;
    };
    jf["P"] = rows(f.P);
    jf["Q"] = rows(f.Q);
    jf["R"] = rows(f.R);
    j["factors"].push_back(jf);
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("FileError", "cannot open " + path);
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Subcommand bodies.  Each prints exactly one summary line on success.

struct GaussianOpts {
  std::string v_text, w_text, out;
  std::vector<std::string> axes_text;
  double hbar = 1.0;
};

void cmd_gaussian(const GaussianOpts& o) {
  const SquareMatrix v = parse_matrix(o.v_text, "--V");
  const SquareMatrix w =
      o.w_text.empty() ? SquareMatrix(v.n) : parse_matrix(o.w_text, "--W");
  const GaussianState g(v, w, o.hbar);
  if (static_cast<int>(o.axes_text.size()) != g.n)
    throw ValidationError("DimensionMismatch", "gaussian: need one --axis per dimension");
  std::vector<Axis> axes;
  for (const std::string& t : o.axes_text) axes.push_back(parse_axis(t, "--axis"));
  const WaveFunction wf = sample_gaussian(g, axes);
  write_wavefunction(o.out, wf);
  std::printf("norm=%.6f\n", l2_norm(wf));
}

struct WignerOpts {
  std::string in, out;
  int pad = 4;
};

void cmd_wigner(const WignerOpts& o) {
  const WaveFunction wf = read_wavefunction(o.in);
  const WignerFunction w = wigner(wf, o.pad);
  write_wigner(o.out, w);
  double mass = 0.0, lo = w.values[0], hi = w.values[0];
  for (double v : w.values) {
    mass += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::printf("norm=%.6f min=%.6g max=%.6g\n", mass * cell_volume(w.axes), lo, hi);
}

struct FrameOpts {
  std::string a_text, b_text, frame_path;
  double theta = 0.0;
  bool has_theta = false;
};

RadonFrame build_frame(const FrameOpts& o, int n) {
  if (o.has_theta) {
    if (n != 1)
      throw ValidationError("DimensionNotOne", "--theta applies to one-dimensional states only");
    return frame_from_direction(std::cos(o.theta), std::sin(o.theta));
  }
  if (!o.frame_path.empty()) {
    const json j = load_json(o.frame_path);
    if (!j.contains("n") || !j.contains("A") || !j.contains("B"))
      throw ValidationError("ConfigError", o.frame_path + ": frame file needs n, A, B");
    const int fn = j["n"].get<int>();
    return make_frame(matrix_from_json(j["A"], fn, "frame A"),
                      matrix_from_json(j["B"], fn, "frame B"));
  }
  if (o.a_text.empty() || o.b_text.empty())
    throw ValidationError("ConfigError", "frame needs --A and --B, or --theta, or --frame");
  return make_frame(parse_matrix(o.a_text, "--A"), parse_matrix(o.b_text, "--B"));
}

struct RadonOpts {
  std::string in, out, plan_path;
  FrameOpts frame;
  std::vector<std::string> x_text;
};

void cmd_radon(const RadonOpts& o) {
  const WaveFunction wf = read_wavefunction(o.in);
  const RadonFrame f = build_frame(o.frame, wf.n);
  if (static_cast<int>(o.x_text.size()) != wf.n)
    throw ValidationError("DimensionMismatch", "radon: need one --X axis per dimension");
  std::vector<Axis> axes;
  for (const std::string& t : o.x_text) axes.push_back(parse_axis(t, "--X"));
  if (!o.plan_path.empty()) dump_plan_json(o.plan_path, plan_metaplectic(f));
  const RadonProfile p = radon_profile(wf, f, axes);
  profile_csv(o.out, p);
  double mass = 0.0, lo = p.values[0], hi = p.values[0];
  for (double v : p.values) {
    mass += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::printf("norm=%.6f min=%.6g max=%.6g\n", mass * cell_volume(p.axes), lo, hi);
}

struct SinogramOpts {
  std::string in, out, x_text;
  std::uint32_t angles = 0;
};

void cmd_sinogram(const SinogramOpts& o) {
  const WaveFunction wf = read_wavefunction(o.in);
  const Axis xa = parse_axis(o.x_text, "--X");
  const Sinogram sg = sinogram(wf, o.angles, xa);
  write_sinogram_csv(o.out, sg);
  const double h = xa.spacing();
  double mean = 0.0, lo = sg.values[0], hi = sg.values[0];
  for (std::uint32_t j = 0; j < sg.angles; ++j) {
    double row = 0.0;
    for (std::uint32_t k = 0; k < xa.count; ++k) {
      const double v = sg.values[static_cast<std::size_t>(j) * xa.count + k];
      row += v * h;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    mean += row;
  }
  std::printf("norm=%.6f min=%.6g max=%.6g\n", mean / sg.angles, lo, hi);
}

struct InvertOpts {
  std::string in, out, x_text, p_text, oracle;
  double hbar = 1.0;
};

void cmd_invert(const InvertOpts& o) {
  const Sinogram sg = read_sinogram_csv(o.in, o.hbar);
  // Default output: a centered square over the inner quarter of the covered
  // radius, stepped like the profiles. Backprojection error concentrates
  // toward the coverage boundary, so the default stays well inside it.
  const double hw = 0.25 * std::min(-sg.x_axis.min, sg.x_axis.max);
  if (o.x_text.empty() || o.p_text.empty()) {
    if (!(hw > 0.0))
      throw ValidationError("InvalidGrid",
                            "invert: default axes need profiles covering the origin; pass --x/--p");
  }
  const std::uint32_t cnt = static_cast<std::uint32_t>(
      std::max<long>(8, std::lround(2.0 * hw / sg.x_axis.spacing())));
  const Axis xa = o.x_text.empty() ? Axis{-hw, hw, cnt} : parse_axis(o.x_text, "--x");
  const Axis pa = o.p_text.empty() ? Axis{-hw, hw, cnt} : parse_axis(o.p_text, "--p");
  const WignerFunction rec = inverse_radon(sg, xa, pa);
  write_wigner(o.out, rec);
  double mass = 0.0;
  for (double v : rec.values) mass += v;
  mass *= cell_volume(rec.axes);
  if (!o.oracle.empty()) {
    // --oracle gaussian:V:W compares against the closed-form Wigner function.
    const std::string prefix = "gaussian:";
    const std::size_t colon = o.oracle.find(':', prefix.size());
    if (o.oracle.rfind(prefix, 0) != 0 || colon == std::string::npos)
      throw ValidationError("ConfigError", "--oracle expects gaussian:V:W");
    char* end = nullptr;
    const std::string v_text = o.oracle.substr(prefix.size(), colon - prefix.size());
    const std::string w_text = o.oracle.substr(colon + 1);
    const double ov = std::strtod(v_text.c_str(), &end);
    if (end == v_text.c_str() || *end != '\0')
      throw ValidationError("ConfigError", "--oracle expects gaussian:V:W");
    const double ow = std::strtod(w_text.c_str(), &end);
    if (end == w_text.c_str() || *end != '\0')
      throw ValidationError("ConfigError", "--oracle expects gaussian:V:W");
    const GaussianState g(SquareMatrix(1, {ov}), SquareMatrix(1, {ow}), o.hbar);
    const GaussianWigner exact = gaussian_wigner(g);
    double num = 0.0, den = 0.0;
    for (std::uint32_t i = 0; i < xa.count; ++i)
      for (std::uint32_t j = 0; j < pa.count; ++j) {
        const double want = exact(Vec{xa.point(i), pa.point(j)});
        const double got = rec.values[static_cast<std::size_t>(i) * pa.count + j];
        num += (got - want) * (got - want);
        den += want * want;
      }
    std::printf("norm=%.6f residual=%.6g\n", mass, std::sqrt(num / den));
  } else {
    double lo = rec.values[0], hi = rec.values[0];
    for (double v : rec.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    std::printf("norm=%.6f min=%.6g max=%.6g\n", mass, lo, hi);
  }
}

struct PauliOpts {
  std::string in, x_text;
  double a_max = 8.0;
};

void cmd_pauli(const PauliOpts& o) {
  const WaveFunction wf = read_wavefunction(o.in);
  if (wf.n != 1)
    throw ValidationError("DimensionNotOne", "pauli: state must be one-dimensional");
  const Axis xa = parse_axis(o.x_text, "--X");
  const RadonProfile marginal = radon_profile(wf, frame_from_direction(1.0, 0.0), {xa});
  const double h = xa.spacing();
  double mass = 0.0, second = 0.0;
  for (std::uint32_t k = 0; k < xa.count; ++k) {
    const double x = xa.point(k);
    mass += marginal.values[k] * h;
    second += x * x * marginal.values[k] * h;
  }
  if (!(mass > 0.0)) throw GuardError("DegenerateFit", "pauli: marginal carries no mass");
  const double sigma_xx = second / mass;
  const auto oracle = [&](double a, double b) {
    return fit_gaussian_m(radon_profile(wf, frame_from_direction(a, b), {xa}));
  };
  const double sigma_xp = pauli_recover(oracle, sigma_xx, wf.hbar, o.a_max);
  std::printf("sigma_xx=%.9g sigma_xp=%.9g\n", sigma_xx, sigma_xp);
}

// Fast cross-route invariants, one line each; any FAIL flips the exit code.
int cmd_validate() {
  int failures = 0;
  const auto report = [&](const char* name, bool ok) {
    std::printf("%s %s\n", ok ? "PASS" : "FAIL", name);
    if (!ok) ++failures;
  };
  const auto g1 = [](double v, double w, double hbar) {
    return GaussianState(SquareMatrix(1, {v}), SquareMatrix(1, {w}), hbar);
  };
  const Axis wide{-12.0, 12.0, 256};

  {
    bool ok = true;
    const Axis xa{-4.0, 4.0, 64};
    for (const auto& vw : {std::pair{1.3, 0.4}, std::pair{0.7, -0.9}}) {
      const GaussianState g = g1(vw.first, vw.second, 1.0);
      const WaveFunction wf = sample_gaussian(g, {wide});
      for (double theta : {0.2, M_PI / 4.0, 1.2}) {
        const RadonFrame f = frame_from_direction(std::cos(theta), std::sin(theta));
        const GaussianRadonForm form = gaussian_radon_closed_form(g, f);
        const RadonProfile numeric = radon_profile(wf, f, {xa});
        for (std::uint32_t k = 0; k < xa.count; ++k)
          if (std::abs(numeric.values[k] - form(Vec{xa.point(k)})) > 1e-5 * form.normalization)
            ok = false;
      }
    }
    report("closed-form-agreement", ok);
  }

  {
    bool ok = true;
    const WaveFunction wf = sample_gaussian(g1(1.3, 0.4, 1.0), {wide});
    const Axis xa{-6.0, 6.0, 64};
    const RadonProfile p10 = radon_profile(wf, frame_from_direction(1.0, 0.0), {xa});
    for (std::uint32_t k = 0; k < xa.count; ++k) {
      const double x = xa.point(k);
      const double want = std::sqrt(1.3 / M_PI) * std::exp(-1.3 * x * x);
      if (std::abs(p10.values[k] - want) > 1e-6) ok = false;
    }
    const RadonProfile p01 = radon_profile(wf, frame_from_direction(0.0, 1.0), {xa});
    const WaveFunction ft = fourier_transform_onto(wf, {xa});
    for (std::uint32_t k = 0; k < xa.count; ++k)
      if (std::abs(p01.values[k] - std::norm(ft.values[k])) > 1e-6) ok = false;
    report("marginal-reduction", ok);
  }

  {
    bool ok = true;
    const WaveFunction wf = sample_gaussian(g1(1.1, -0.3, 1.0), {Axis{-8.0, 8.0, 128}});
    const WignerFunction w = wigner(wf, 2);
    const Axis& pa = w.p_axis(0);
    for (std::uint32_t i = 0; i < w.x_axis(0).count; ++i) {
      double marg = 0.0;
      for (std::uint32_t j = 0; j < pa.count; ++j)
        marg += w.values[static_cast<std::size_t>(i) * pa.count + j];
      marg *= pa.spacing();
      if (std::abs(marg - std::norm(wf.values[i])) > 1e-6) ok = false;
    }
    report("wigner-marginal", ok);
  }

  {
    bool ok = true;
    const WaveFunction wf = sample_gaussian(g1(0.9, 0.6, 1.0), {wide});
    for (double theta : {0.3, 0.9, 1.4}) {
      const RadonFrame f = frame_from_direction(std::cos(theta), std::sin(theta));
      const WaveFunction out = metaplectic_apply(plan_metaplectic(f), wf);
      if (std::abs(l2_norm(out) - 1.0) > 1e-9) ok = false;
    }
    report("metaplectic-unitarity", ok);
  }

  {
    bool ok = true;
    const WaveFunction wf = sample_gaussian(g1(1.6, 0.5, 1.0), {wide});
    const Axis xa{-10.0, 10.0, 200};
    const Sinogram sg = sinogram(wf, 32, xa);
    for (std::uint32_t j = 0; j < sg.angles; ++j) {
      double row = 0.0;
      for (std::uint32_t k = 0; k < xa.count; ++k)
        row += sg.values[static_cast<std::size_t>(j) * xa.count + k];
      if (std::abs(row * xa.spacing() - 1.0) > 1e-6) ok = false;
    }
    report("sinogram-row-mass", ok);
  }

  return failures == 0 ? 0 : 3;
}

struct ExportOpts {
  std::string in, out;
};

void cmd_export(const ExportOpts& o) {
  std::ifstream probe(o.in, std::ios::binary);
  if (!probe) throw ValidationError("FileError", "cannot open " + o.in);
  char magic[8] = {};
  probe.read(magic, 8);
  probe.close();
  std::size_t rows = 0;
  if (std::string(magic, 8) == "SYMRADWF") {
    const WaveFunction wf = read_wavefunction(o.in);
    wavefunction_csv(o.out, wf);
    rows = wf.values.size();
  } else if (std::string(magic, 8) == "SYMRADWG") {
    const WignerFunction w = read_wigner(o.in);
    wigner_csv(o.out, w);
    rows = w.values.size();
  } else {
    throw ValidationError("BadMagic", o.in + ": not a grid file");
  }
  std::printf("rows=%zu\n", rows);
}

// Rewrites a JSON job description as an argv list: {"command": "radon", "X":
// ["-4:4:64"], ...} becomes {"radon", "--X", "-4:4:64", ...}.
std::vector<std::string> args_from_config(const std::string& path) {
  const json j = load_json(path);
  if (!j.is_object() || !j.contains("command") || !j["command"].is_string())
    throw ValidationError("ConfigError", path + ": config needs a \"command\" string");
  std::vector<std::string> args;
  args.push_back(j["command"].get<std::string>());
  const auto value_text = [](const json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "command") continue;
    const std::string flag = "--" + key;
    if (value.is_array()) {
      for (const auto& item : value) {
        args.push_back(flag);
        args.push_back(value_text(item));
      }
    } else if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else {
      args.push_back(flag);
      args.push_back(value_text(value));
    }
  }
  return args;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"symplectic Radon transforms of quantum states"};
  app.require_subcommand(0, 1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON job description; keys mirror the long flags");

  int rc = 0;

  GaussianOpts go;
  auto* cg = app.add_subcommand("gaussian", "sample a centered Gaussian state onto a grid");
  cg->add_option("--V", go.v_text, "covariance matrix, row-major comma list")->required();
  cg->add_option("--W", go.w_text, "phase matrix, row-major comma list (default zero)");
  cg->add_option("--hbar", go.hbar, "Planck constant")->capture_default_str();
  cg->add_option("--axis", go.axes_text, "grid axis min:max:count, one per dimension")->required();
  cg->add_option("-o,--output", go.out, "WF1 output path")->required();
  cg->callback([&] { cmd_gaussian(go); });

  WignerOpts wo;
  auto* cw = app.add_subcommand("wigner", "Wigner function of a sampled state");
  cw->add_option("-i,--input", wo.in, "WF1 input path")->required();
  cw->add_option("--pad", wo.pad, "zero-padding factor for the momentum grid")->capture_default_str();
  cw->add_option("-o,--output", wo.out, "WG1 output path")->required();
  cw->callback([&] { cmd_wigner(wo); });

  RadonOpts ro;
  auto* cr = app.add_subcommand("radon", "Radon profile of a state along a frame");
  cr->add_option("-i,--input", ro.in, "WF1 input path")->required();
  cr->add_option("--A", ro.frame.a_text, "frame block A, row-major comma list");
  cr->add_option("--B", ro.frame.b_text, "frame block B, row-major comma list");
  cr->add_option("--frame", ro.frame.frame_path, "frame JSON file with n, A, B");
  cr->add_option("--theta", ro.frame.theta, "direction angle shorthand (cos t, sin t)")
      ->each([&](const std::string&) { ro.frame.has_theta = true; });
  cr->add_option("--X", ro.x_text, "profile axis min:max:count, one per dimension")->required();
  cr->add_option("--dump-plan", ro.plan_path, "write the operator plan as JSON");
  cr->add_option("-o,--output", ro.out, "profile CSV output path")->required();
  cr->callback([&] { cmd_radon(ro); });

  SinogramOpts so;
  auto* cs = app.add_subcommand("sinogram", "profiles over the even half-circle of angles");
  cs->add_option("-i,--input", so.in, "WF1 input path")->required();
  cs->add_option("--angles", so.angles, "number of angles over the half circle")->required();
  cs->add_option("--X", so.x_text, "profile axis min:max:count")->required();
  cs->add_option("-o,--output", so.out, "sinogram CSV output path")->required();
  cs->callback([&] { cmd_sinogram(so); });

  InvertOpts io_;
  auto* ci = app.add_subcommand("invert", "filtered back-projection of a sinogram");
  ci->add_option("-i,--input", io_.in, "sinogram CSV input path")->required();
  ci->add_option("--x", io_.x_text,
                 "output x axis min:max:count (default: inner quarter of the covered radius)");
  ci->add_option("--p", io_.p_text, "output p axis min:max:count (default as --x)");
  ci->add_option("--hbar", io_.hbar, "Planck constant of the recorded profiles")->capture_default_str();
  ci->add_option("--oracle", io_.oracle, "gaussian:V:W closed-form comparison");
  ci->add_option("-o,--output", io_.out, "WG1 output path")->required();
  ci->callback([&] { cmd_invert(io_); });

  PauliOpts po;
  auto* cp = app.add_subcommand("pauli", "recover the cross covariance from profiles");
  cp->add_option("-i,--input", po.in, "WF1 input path")->required();
  cp->add_option("--X", po.x_text, "profile axis min:max:count")->required();
  cp->add_option("--a-max", po.a_max, "scan halfwidth for the frame coefficient")->capture_default_str();
  cp->callback([&] { cmd_pauli(po); });

  auto* cv = app.add_subcommand("validate", "run the cross-route invariant suite");
  cv->callback([&] { rc = cmd_validate(); });

  ExportOpts eo;
  auto* ce = app.add_subcommand("export", "convert a WF1 or WG1 file to CSV");
  ce->add_option("-i,--input", eo.in, "WF1 or WG1 input path")->required();
  ce->add_option("-o,--output", eo.out, "CSV output path")->required();
  ce->callback([&] { cmd_export(eo); });

  try {
    if (argc >= 2 && std::string(argv[1]) == "--config") {
      if (argc != 3)
        throw ValidationError("ConfigError", "--config stands alone with one file argument");
      std::vector<std::string> args = args_from_config(argv[2]);
      std::reverse(args.begin(), args.end());
      app.parse(args);
    } else {
      app.parse(argc, argv);
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const GuardError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
