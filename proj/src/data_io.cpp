// Copyright 2026 The QCPM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qcpm/data_io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace qcpm {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct TextRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// A parsed `# key: value` / columns / rows file.
struct TextFile {
  std::string path;
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<TextRow> rows;

  std::optional<std::string> get(std::string_view key) const {
    for (const auto& [k, v] : header) {
      if (k == key) return v;
    }
    return std::nullopt;
  }

  std::string require(std::string_view key) const {
    auto v = get(key);
    if (!v) throw ParseError(path, 0, "missing header key '" + std::string(key) + "'");
    return *v;
  }

  std::vector<std::string> all(std::string_view key) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : header) {
      if (k == key) out.push_back(v);
    }
    return out;
  }
};

// `columns` is the expected column-name line; it may be absent when
// `columns_optional` is set.
TextFile read_text(const std::string& path, std::string_view columns, bool columns_optional) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  TextFile file;
  file.path = path;
  bool seen_columns = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string body = trim(std::string_view(line).substr(1));
      const auto colon = body.find(':');
      if (colon != std::string::npos) {
        file.header.emplace_back(trim(std::string_view(body).substr(0, colon)),
                                 trim(std::string_view(body).substr(colon + 1)));
      }
      continue;
    }
    if (!seen_columns && file.rows.empty()) {
      seen_columns = true;
      if (line == columns) continue;
      if (!columns_optional) {
        throw ParseError(path, line_no, "expected column line '" + std::string(columns) + "'");
      }
    }
    file.rows.push_back({line_no, split(line, ',')});
  }
  return file;
}

double parse_double(std::string_view text, const std::string& path, std::size_t line) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(path, line, "invalid number '" + std::string(text) + "'");
  }
  return value;
}

long long parse_int(std::string_view text, const std::string& path, std::size_t line) {
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(path, line, "invalid integer '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_u64(std::string_view text, const std::string& path, std::size_t line) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(path, line, "invalid unsigned integer '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_list(std::string_view text, const std::string& path) {
  std::vector<double> out;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) out.push_back(parse_double(token, path, 0));
  return out;
}

std::string join(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += format_double(values[i]);
  }
  return out;
}

std::pair<double, double> parse_range(std::string_view text, const std::string& path) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ParseError(path, 0, "range must be 'lo,hi', got '" + std::string(text) + "'");
  return {parse_double(parts[0], path, 0), parse_double(parts[1], path, 0)};
}

std::string format_range(double lo, double hi) { return format_double(lo) + "," + format_double(hi); }

class Writer {
 public:
  explicit Writer(const std::string& path) : path_(path), out_(path) {
    if (!out_) throw IoError("cannot write '" + path + "'");
  }
  void meta(std::string_view key, std::string_view value) {
    out_ << "# " << key << ": " << value << '\n';
  }
  std::ostream& stream() { return out_; }
  void close() {
    out_.flush();
    if (!out_) throw IoError("write failed for '" + path_ + "'");
  }

 private:
  std::string path_;
  std::ofstream out_;
};

void write_box(Writer& w, const DomainBox& box) {
  w.meta("z_range", format_range(box.x_lo, box.x_hi));
  w.meta("q_range", format_range(box.y_lo, box.y_hi));
  w.meta("z_axis", to_string(box.x_axis));
  w.meta("q_axis", to_string(box.y_axis));
}

DomainBox read_box(const TextFile& f) {
  DomainBox box;
  std::tie(box.x_lo, box.x_hi) = parse_range(f.require("z_range"), f.path);
  std::tie(box.y_lo, box.y_hi) = parse_range(f.require("q_range"), f.path);
  box.x_axis = parse_axis_transform(f.get("z_axis").value_or("linear"));
  box.y_axis = parse_axis_transform(f.require("q_axis"));
  box.validate();
  return box;
}

void write_arch(Writer& w, const Architecture& arch) {
  w.meta("n_qubits", std::to_string(arch.n_qubits));
  w.meta("depth", std::to_string(arch.depth));
  w.meta("use_correlation", arch.use_correlation ? "1" : "0");
  w.meta("entangler", to_string(arch.entangler));
}

Architecture read_arch(const TextFile& f) {
  Architecture arch;
  arch.n_qubits = static_cast<int>(parse_int(f.require("n_qubits"), f.path, 0));
  arch.depth = static_cast<int>(parse_int(f.require("depth"), f.path, 0));
  arch.use_correlation = parse_int(f.require("use_correlation"), f.path, 0) != 0;
  arch.entangler = parse_entangler(f.require("entangler"));
  arch.validate();
  return arch;
}

std::string optional_r2(const std::optional<double>& r2) {
  return r2 ? format_double(*r2) : std::string("degenerate");
}

std::optional<double> parse_optional_r2(std::string_view text, const std::string& path) {
  if (text == "degenerate") return std::nullopt;
  return parse_double(text, path, 0);
}

std::string sanitize(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return text;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

TargetGrid read_grid(const std::string& path, std::optional<int> expected_n,
                     const std::optional<DomainBox>& expected_box) {
  const TextFile f = read_text(path, "z,Q,value", /*columns_optional=*/true);
  TargetGrid grid;
  grid.label = f.get("label").value_or(std::filesystem::path(path).stem().string());
  grid.n_qubits = static_cast<int>(parse_int(f.require("n_qubits"), path, 0));
  if (grid.n_qubits < 1 || grid.n_qubits > kMaxQubitsPerRegister) {
    throw ValidationError(path + ": n_qubits " + std::to_string(grid.n_qubits) + " out of range");
  }
  grid.box = read_box(f);
  if (expected_n && *expected_n != grid.n_qubits) {
    throw ValidationError(path + ": grid is for N=" + std::to_string(grid.n_qubits) +
                          ", expected N=" + std::to_string(*expected_n));
  }
  if (expected_box && !(*expected_box == grid.box)) {
    throw ValidationError(path + ": grid box or axis transforms differ from the configured box");
  }
  for (const auto& row : f.rows) {
    if (row.fields.size() != 3) {
      throw ParseError(path, row.line, "expected 3 fields z,Q,value, got " +
                                           std::to_string(row.fields.size()));
    }
    grid.points.push_back({parse_double(row.fields[0], path, row.line),
                           parse_double(row.fields[1], path, row.line),
                           parse_double(row.fields[2], path, row.line)});
  }
  try {
    validate_lattice(grid);
  } catch (const LatticeMismatchError& e) {
    throw LatticeMismatchError(path + ": " + e.what(), e.missing(), e.extra());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  } catch (const DomainError& e) {
    throw ValidationError(path + ": " + e.what());
  }
  normalize_to_unit_max(grid);
  return grid;
}

void write_grid(const TargetGrid& grid, const std::string& path) {
  Writer w(path);
  w.meta("label", grid.label);
  w.meta("z_range", format_range(grid.box.x_lo, grid.box.x_hi));
  w.meta("q_range", format_range(grid.box.y_lo, grid.box.y_hi));
  if (grid.box.x_axis != AxisTransform::kLinear) w.meta("z_axis", to_string(grid.box.x_axis));
  w.meta("q_axis", to_string(grid.box.y_axis));
  w.meta("n_qubits", std::to_string(grid.n_qubits));
  auto& out = w.stream();
  out << "z,Q,value\n";
  std::vector<GridPoint> rows = grid.points;
  sort_points(rows);
  for (const auto& p : rows) {
    out << format_double(p.z) << ',' << format_double(p.q) << ','
        << format_double(p.value * grid.scale) << '\n';
  }
  w.close();
}

std::string_view to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::kTeacherStudent:
      return "teacher_student";
    case SynthKind::kGaussian2d:
      return "gaussian_2d";
    case SynthKind::kSeparableBeta:
      return "separable_beta";
  }
  return "?";
}

SynthKind parse_synth_kind(std::string_view text) {
  for (auto kind : {SynthKind::kTeacherStudent, SynthKind::kGaussian2d, SynthKind::kSeparableBeta}) {
    if (text == to_string(kind)) return kind;
  }
  throw ValidationError("unknown synthetic target '" + std::string(text) +
                        "' (expected teacher_student, gaussian_2d or separable_beta)");
}

QcpmParams teacher_params(const Architecture& arch, std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x7eac4e5u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  QcpmParams params;
  params.theta.resize(arch.angles_per_register());
  params.vartheta.resize(arch.angles_per_register());
  for (double& a : params.theta) a = angle(rng);
  for (double& a : params.vartheta) a = angle(rng);
  return params;
}

TargetGrid synth_target(SynthKind kind, const SynthOptions& options, std::uint64_t seed) {
  options.arch.validate();
  const DomainBox& box = options.box;
  TargetGrid grid;
  switch (kind) {
    case SynthKind::kTeacherStudent: {
      const QcpmParams teacher = teacher_params(options.arch, seed);
      const auto lattice = training_lattice(make_grid(options.arch.n_qubits));
      const auto values = predict(teacher, options.arch, lattice);
      std::size_t i = 0;
      grid = make_lattice_grid(options.arch.n_qubits, box,
                               "teacher_student(seed=" + std::to_string(seed) + ")",
                               [&](ChebPoint) { return values[i++]; });
      break;
    }
    case SynthKind::kGaussian2d: {
      const double rho = options.correlation;
      if (!(std::abs(rho) < 1.0)) throw ValidationError("gaussian_2d: |correlation| must be < 1");
      grid = make_lattice_grid(
          options.arch.n_qubits, box, "gaussian_2d(rho=" + format_double(rho) + ")",
          [&](ChebPoint p) {
            const double du = (p.u - options.center_u) / options.sigma_u;
            const double dv = (p.v - options.center_v) / options.sigma_v;
            return std::exp(-(du * du - 2.0 * rho * du * dv + dv * dv) / (2.0 * (1.0 - rho * rho)));
          });
      break;
    }
    case SynthKind::kSeparableBeta: {
      grid = make_lattice_grid(options.arch.n_qubits, box, "separable_beta", [&](ChebPoint p) {
        const ProblemPoint x = from_chebyshev_domain(p, box);
        const double z_part = std::pow(x.x, options.beta_a) * std::pow(1.0 - x.x, options.beta_b);
        const double q_part = std::pow(1.0 + std::log10(x.y), -options.q_power);
        return z_part * q_part;
      });
      break;
    }
  }
  normalize_to_unit_max(grid);
  return grid;
}

// ---------------------------------------------------------------------------
// Trained models
// ---------------------------------------------------------------------------

void write_model(const TrainedModel& model, const std::string& path) {
  Writer w(path);
  w.meta("qcpm-model", "1");
  w.meta("label", sanitize(model.label));
  write_arch(w, model.arch);
  write_box(w, model.box);
  w.meta("target_scale", format_double(model.target_scale));
  w.meta("alpha", format_double(model.params.alpha));
  w.meta("beta", format_double(model.params.beta));
  w.meta("theta", join(model.params.theta));
  w.meta("vartheta", join(model.params.vartheta));
  w.close();
}

TrainedModel read_model(const std::string& path) {
  const TextFile f = read_text(path, "", true);
  if (!f.get("qcpm-model")) throw ParseError(path, 0, "not a model parameter file");
  TrainedModel m;
  m.label = f.get("label").value_or("");
  m.arch = read_arch(f);
  m.box = read_box(f);
  m.target_scale = parse_double(f.require("target_scale"), path, 0);
  m.params.alpha = parse_double(f.require("alpha"), path, 0);
  m.params.beta = parse_double(f.require("beta"), path, 0);
  m.params.theta = parse_list(f.require("theta"), path);
  m.params.vartheta = parse_list(f.require("vartheta"), path);
  m.params.validate(m.arch);
  return m;
}

// ---------------------------------------------------------------------------
// Train records
// ---------------------------------------------------------------------------

void write_results(const TrainRecord& record, const std::string& path) {
  const TrainConfig& c = record.config;
  Writer w(path);
  w.meta("qcpm-train-record", "1");
  w.meta("label", sanitize(record.label));
  write_arch(w, c.arch);
  w.meta("epochs", std::to_string(c.epochs));
  w.meta("learning_rates", join(c.learning_rates));
  w.meta("adam_beta1", format_double(c.adam.beta1));
  w.meta("adam_beta2", format_double(c.adam.beta2));
  w.meta("adam_epsilon", format_double(c.adam.epsilon));
  w.meta("seed", std::to_string(c.seed));
  w.meta("diagnostics_cadence", std::to_string(c.diagnostics_cadence));
  w.meta("alpha_beta", to_string(c.alpha_beta));
  w.meta("init", to_string(c.init));
  w.meta("init_distribution", c.init == InitMode::kRandom
                                  ? "angles uniform in [-pi, pi]; alpha=1; beta=0"
                                  : "theta uniform in [-pi, pi]; vartheta=0; alpha=1; beta=0");
  w.meta("target_scale", format_double(record.target_scale));
  auto& out = w.stream();
  out << "epoch,loss,r2,nonpurity\n";
  for (std::size_t e = 0; e < record.loss.size(); ++e) {
    out << e + 1 << ',' << format_double(record.loss[e]) << ',' << format_double(record.r2[e])
        << ',' << format_double(record.nonpurity[e]) << '\n';
  }
  out << "# summary: final\n";
  w.meta("best_learning_rate", format_double(record.best_learning_rate));
  w.meta("final_loss", format_double(record.final_loss));
  w.meta("final_r2", optional_r2(record.final_r2));
  w.meta("alpha", format_double(record.final_params.alpha));
  w.meta("beta", format_double(record.final_params.beta));
  w.meta("theta", join(record.final_params.theta));
  w.meta("vartheta", join(record.final_params.vartheta));
  for (const auto& b : record.branches) {
    w.meta("branch", format_double(b.learning_rate) + "," + (b.ok ? "ok" : "failed") + "," +
                         format_double(b.final_loss) + "," + optional_r2(b.final_r2) + "," +
                         sanitize(b.message));
  }
  w.close();
}

TrainRecord read_record(const std::string& path) {
  const TextFile f = read_text(path, "epoch,loss,r2,nonpurity", false);
  if (!f.get("qcpm-train-record")) throw ParseError(path, 0, "not a train record");
  TrainRecord r;
  TrainConfig& c = r.config;
  r.label = f.get("label").value_or("");
  c.arch = read_arch(f);
  c.epochs = static_cast<int>(parse_int(f.require("epochs"), path, 0));
  c.learning_rates = parse_list(f.require("learning_rates"), path);
  c.adam.beta1 = parse_double(f.require("adam_beta1"), path, 0);
  c.adam.beta2 = parse_double(f.require("adam_beta2"), path, 0);
  c.adam.epsilon = parse_double(f.require("adam_epsilon"), path, 0);
  c.seed = parse_u64(f.require("seed"), path, 0);
  c.diagnostics_cadence = static_cast<int>(parse_int(f.require("diagnostics_cadence"), path, 0));
  c.alpha_beta = parse_alpha_beta_mode(f.require("alpha_beta"));
  c.init = parse_init_mode(f.require("init"));
  r.target_scale = parse_double(f.require("target_scale"), path, 0);
  for (const auto& row : f.rows) {
    if (row.fields.size() != 4) throw ParseError(path, row.line, "expected 4 fields");
    r.loss.push_back(parse_double(row.fields[1], path, row.line));
    r.r2.push_back(parse_double(row.fields[2], path, row.line));
    r.nonpurity.push_back(parse_double(row.fields[3], path, row.line));
  }
  r.best_learning_rate = parse_double(f.require("best_learning_rate"), path, 0);
  r.final_loss = parse_double(f.require("final_loss"), path, 0);
  r.final_r2 = parse_optional_r2(f.require("final_r2"), path);
  r.final_params.alpha = parse_double(f.require("alpha"), path, 0);
  r.final_params.beta = parse_double(f.require("beta"), path, 0);
  r.final_params.theta = parse_list(f.require("theta"), path);
  r.final_params.vartheta = parse_list(f.require("vartheta"), path);
  for (const auto& text : f.all("branch")) {
    const auto parts = split(text, ',');
    if (parts.size() != 5) throw ParseError(path, 0, "malformed branch line '" + text + "'");
    BranchResult b;
    b.learning_rate = parse_double(parts[0], path, 0);
    b.ok = parts[1] == "ok";
    b.final_loss = parse_double(parts[2], path, 0);
    b.final_r2 = parse_optional_r2(parts[3], path);
    b.message = parts[4];
    r.branches.push_back(std::move(b));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Histograms
// ---------------------------------------------------------------------------

void write_results(const SampleHistogram& hist, const DomainBox& box, const std::string& path) {
  Writer w(path);
  w.meta("qcpm-histogram", "1");
  w.meta("mode", "shots");
  w.meta("n_qubits", std::to_string(hist.n_qubits));
  w.meta("extension", std::to_string(hist.extension));
  w.meta("shots", std::to_string(hist.shots));
  w.meta("seed", std::to_string(hist.seed));
  write_box(w, box);
  auto& out = w.stream();
  out << "z,Q,count,probability\n";
  for (const auto& row : to_problem_domain(hist, box)) {
    out << format_double(row.z) << ',' << format_double(row.q) << ',' << row.count << ','
        << format_double(row.probability) << '\n';
  }
  w.close();
}

void write_results(const ProbabilityTable& dist, const DomainBox& box, const std::string& path) {
  Writer w(path);
  w.meta("qcpm-histogram", "1");
  w.meta("mode", "exact");
  w.meta("n_qubits", std::to_string(dist.n_qubits));
  w.meta("extension", std::to_string(dist.extension));
  w.meta("shots", "0");
  write_box(w, box);
  auto& out = w.stream();
  out << "z,Q,probability\n";
  for (const auto& row : to_problem_domain(dist, box)) {
    out << format_double(row.z) << ',' << format_double(row.q) << ','
        << format_double(row.probability) << '\n';
  }
  w.close();
}

HistogramFile read_histogram(const std::string& path) {
  // Peek at the mode to know which column line to expect.
  const TextFile probe = read_text(path, "", true);
  if (!probe.get("qcpm-histogram")) throw ParseError(path, 0, "not a histogram file");
  const bool exact = probe.require("mode") == "exact";
  const TextFile f = read_text(path, exact ? "z,Q,probability" : "z,Q,count,probability", false);
  HistogramFile h;
  h.exact = exact;
  h.n_qubits = static_cast<int>(parse_int(f.require("n_qubits"), path, 0));
  h.extension = static_cast<int>(parse_int(f.require("extension"), path, 0));
  h.shots = parse_u64(f.require("shots"), path, 0);
  h.seed = exact ? 0 : parse_u64(f.require("seed"), path, 0);
  h.box = read_box(f);
  const std::size_t fields = exact ? 3 : 4;
  for (const auto& row : f.rows) {
    if (row.fields.size() != fields) throw ParseError(path, row.line, "wrong field count");
    HistogramRow r;
    r.z = parse_double(row.fields[0], path, row.line);
    r.q = parse_double(row.fields[1], path, row.line);
    if (exact) {
      r.probability = parse_double(row.fields[2], path, row.line);
    } else {
      r.count = parse_u64(row.fields[2], path, row.line);
      r.probability = parse_double(row.fields[3], path, row.line);
    }
    h.rows.push_back(r);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Diagnostic series
// ---------------------------------------------------------------------------

void write_results(const DiagnosticSeries& series, const std::string& path) {
  Writer w(path);
  w.meta("qcpm-series", "1");
  w.meta("kind", to_string(series.kind));
  for (const auto& [k, v] : series.metadata) w.meta(k, sanitize(v));
  auto& out = w.stream();
  out << "kind,abscissa,ordinate,tag\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << to_string(series.kind) << ',' << format_double(series.abscissa[i]) << ','
        << format_double(series.ordinate[i]) << ',' << sanitize(series.tags[i]) << '\n';
  }
  w.close();
}

DiagnosticSeries read_series(const std::string& path) {
  const TextFile f = read_text(path, "kind,abscissa,ordinate,tag", false);
  if (!f.get("qcpm-series")) throw ParseError(path, 0, "not a series file");
  DiagnosticSeries s;
  s.kind = parse_series_kind(f.require("kind"));
  for (const auto& [k, v] : f.header) {
    if (k != "qcpm-series" && k != "kind") s.metadata.emplace_back(k, v);
  }
  for (const auto& row : f.rows) {
    if (row.fields.size() != 4) throw ParseError(path, row.line, "expected 4 fields");
    if (parse_series_kind(row.fields[0]) != s.kind) {
      throw ParseError(path, row.line, "row kind differs from header kind");
    }
    s.add(parse_double(row.fields[1], path, row.line), parse_double(row.fields[2], path, row.line),
          row.fields[3]);
  }
  return s;
}

}  // namespace qcpm
