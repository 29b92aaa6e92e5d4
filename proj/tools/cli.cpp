#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "adlab/ed_oracle.hpp"
#include "adlab/errors.hpp"
#include "adlab/ising_ff.hpp"
#include "adlab/kernels.hpp"
#include "adlab/quench_lab.hpp"
#include "adlab/scaling.hpp"
#include "table.hpp"

namespace adlab::cli {
namespace {

constexpr double kVerifyThreshold = 1e-8;
constexpr int kVerifyMaxSites = 10;
constexpr int kQuenchEdMaxSites = 10;
const std::vector<int> kVerifySizes{4, 6, 8, 10};
const std::vector<double> kVerifyFields{0.25, 0.5, 0.9, 1.0, 1.1, 2.0};

using Json = nlohmann::ordered_json;

template <class T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

Json meta_json(const RunConfig& c) {
  Json m;
  m["command"] = c.command;
  m["model"] = c.model;
  m["sizes"] = c.sizes;
  m["fields"] = c.fields;
  if (c.model == "lmg") m["gamma"] = c.gamma;
  if (!c.tau0.empty()) m["tau0"] = c.tau0;
  if (c.target_f) m["target_f"] = *c.target_f;
  if (c.target_f) m["tau_max"] = c.tau_max;
  if (c.dt > 0.0) m["dt"] = c.dt;
  return m;
}

/// Where data and summary go for one command invocation.
class Sink {
 public:
  Sink(const RunConfig& c, std::ostream& out, std::ostream& err) : config_(c), out_(out), err_(err) {}

  std::ostream& summary() { return config_.output.empty() ? err_ : out_; }

  void write(const Table& table, const Json& extra = Json::object()) {
    std::ostringstream buf;
    if (config_.format == OutputFormat::Json) {
      Json doc;
      doc["meta"] = meta_json(config_);
      doc["rows"] = table.rows_json();
      for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
      buf << doc.dump(2) << '\n';
    } else {
      table.write_csv(buf);
    }
    emit(config_.output, buf.str());
  }

  void write_side_table(const std::string& suffix, const Table& table) {
    if (config_.output.empty() || config_.format == OutputFormat::Json) return;
    std::ostringstream buf;
    table.write_csv(buf);
    emit(with_suffix(config_.output, suffix), buf.str());
  }

  void write_plot(const Table& table, int block_column) {
    if (config_.plot.empty()) return;
    std::ostringstream buf;
    table.write_gnuplot(buf, block_column);
    emit(config_.plot, buf.str());
  }

  static std::string with_suffix(const std::string& path, const std::string& suffix) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + suffix;
    return path.substr(0, dot) + suffix + path.substr(dot);
  }

 private:
  void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open output file " + path);
    f << text;
    if (!f) throw InvalidArgument("failed writing output file " + path);
  }

  const RunConfig& config_;
  std::ostream& out_;
  std::ostream& err_;
};

/// Runs body(i) for i in [0, n) on the OpenMP pool; the first exception is
/// rethrown after the loop.
template <class F>
void parallel_for(std::size_t n, F body) {
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(adlab_cli_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void require_nonempty(const RunConfig& c, bool sizes, bool fields) {
  if (sizes && c.sizes.empty()) throw InvalidArgument("--sizes must not be empty");
  if (fields && c.fields.empty()) throw InvalidArgument("--fields must not be empty");
}

ed::ModelKind model_kind(const RunConfig& c) { return c.model == "lmg" ? ed::ModelKind::Lmg : ed::ModelKind::Ising; }

void validate_sizes(const RunConfig& c, const std::vector<int>& sizes, bool ed_caps) {
  for (int n : sizes) {
    if (c.model == "ising") {
      if (ed_caps) {
        ed::SpinModelSpec{ed::ModelKind::Ising, n, 0.0, 0.0}.validate();
      } else {
        ising::ChainSpec{n, 0.0}.validate();
      }
    } else {
      ed::SpinModelSpec{ed::ModelKind::Lmg, n, 0.0, c.gamma}.validate();
    }
  }
}

double lmg_chi_f(const ed::ModelFamily& family, double h) {
  const auto dec = eigh(family.at(h));
  if (dec.ground_gap() < ed::kDegeneracyTol) {
    throw DegenerateGroundState("LMG ground state degenerate at h=" + format_double(h));
  }
  return ed::chi_f_perturbative(dec, family.driving);
}

void print_fit(std::ostream& os, const std::string& label, const scaling::ScalingFit& fit) {
  os << label << ": d_a=" << format_double(fit.d_a) << " kappa=" << format_double(fit.kappa)
     << " r2=" << format_double(fit.r2) << " log_correction=" << (fit.log_correction ? "true" : "false") << '\n';
}

Json fit_json(const scaling::ScalingFit& fit) {
  Json j;
  j["d_a"] = fit.d_a;
  j["kappa"] = fit.kappa;
  j["r2"] = fit.r2;
  j["log_correction"] = fit.log_correction;
  j["residual_max"] = fit.residual_max;
  j["window_start"] = fit.window_start;
  j["local_slopes"] = fit.local_slopes;
  return j;
}

int cmd_chi_scan(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_nonempty(c, true, true);
  const auto sizes = sorted_unique(c.sizes);
  const auto fields = sorted_unique(c.fields);
  validate_sizes(c, sizes, false);
  for (double h : fields) {
    if (!(h >= 0.0) || !std::isfinite(h)) throw InvalidArgument("fields must be finite and >= 0");
  }

  std::vector<double> chi(sizes.size() * fields.size());
  if (c.model == "ising") {
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      for (std::size_t j = 0; j < fields.size(); ++j) chi[i * fields.size() + j] = ising::chi_f(sizes[i], fields[j]);
    }
  } else {
    std::vector<ed::ModelFamily> families;
    families.reserve(sizes.size());
    for (int n : sizes) families.push_back(ed::lmg_family(n, c.gamma));
    parallel_for(chi.size(), [&](std::size_t idx) {
      chi[idx] = lmg_chi_f(families[idx / fields.size()], fields[idx % fields.size()]);
    });
  }

  Table table{{"model", "N", "h", "chi_f", "chi_f_per_N"}, {}};
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const double v = chi[i * fields.size() + j];
      table.rows.push_back({c.model, static_cast<long long>(sizes[i]), fields[j], v, v / sizes[i]});
    }
  }
  Sink sink(c, out, err);
  sink.write(table);

  Table plot{{"N", "chi_f", "h"}, {}};
  for (std::size_t j = 0; j < fields.size(); ++j) {
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      plot.rows.push_back({static_cast<long long>(sizes[i]), chi[i * fields.size() + j], fields[j]});
    }
  }
  sink.write_plot(plot, 2);

  auto& s = sink.summary();
  s << "chi-scan: model=" << c.model << " rows=" << table.rows.size() << '\n';
  if (sizes.size() >= scaling::kMinFitSamples) {
    for (std::size_t j = 0; j < fields.size(); ++j) {
      std::vector<scaling::ScalingSample> samples;
      for (std::size_t i = 0; i < sizes.size(); ++i) samples.push_back({double(sizes[i]), chi[i * fields.size() + j]});
      try {
        print_fit(s, "  fit h=" + format_double(fields[j]), scaling::fit_power_law(samples));
      } catch (const Error&) {
        s << "  fit h=" << format_double(fields[j]) << ": not available\n";
      }
    }
  }
  return kOk;
}

int cmd_ed_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.model != "ising") throw InvalidArgument("ed-verify compares against the free-fermion solution; use --model ising");
  std::vector<int> sizes;
  for (int n : sorted_unique(c.sizes.empty() ? kVerifySizes : c.sizes)) {
    if (n > kVerifyMaxSites) {
      err << "warning: SizeCap: N=" << n << " exceeds the verification cap " << kVerifyMaxSites << ", skipped\n";
      continue;
    }
    sizes.push_back(n);
  }
  const auto fields = sorted_unique(c.fields.empty() ? kVerifyFields : c.fields);
  if (sizes.empty()) throw InvalidArgument("ed-verify: no sizes left to verify");
  validate_sizes(c, sizes, true);

  std::vector<double> chi_ed(sizes.size() * fields.size());
  parallel_for(sizes.size(), [&](std::size_t i) {
    const auto family = ed::ising_family(sizes[i]);
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const auto dec = eigh(family.at(fields[j]));
      chi_ed[i * fields.size() + j] = ed::chi_f_perturbative(dec, family.driving);
    }
  });

  Table table{{"N", "h", "chi_f_ed", "chi_f_free_fermion", "rel_err", "pass"}, {}};
  double worst = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    for (std::size_t j = 0; j < fields.size(); ++j) {
      double ed_value = chi_ed[i * fields.size() + j];
      if (c.inject_fault) ed_value = -ed_value;
      const double ff = ising::chi_f(sizes[i], fields[j]);
      const double rel = std::abs(ed_value - ff) / std::abs(ff);
      worst = std::max(worst, rel);
      table.rows.push_back({static_cast<long long>(sizes[i]), fields[j], ed_value, ff, rel, rel < kVerifyThreshold});
    }
  }
  const bool pass = worst < kVerifyThreshold;
  Sink sink(c, out, err);
  Json extra;
  extra["max_rel_err"] = worst;
  extra["threshold"] = kVerifyThreshold;
  extra["pass"] = pass;
  sink.write(table, extra);
  sink.summary() << "ed-verify: " << (pass ? "PASS" : "FAIL") << " max_rel_err=" << format_double(worst)
                 << " threshold=" << format_double(kVerifyThreshold) << " points=" << table.rows.size() << '\n';
  return pass ? kOk : kVerificationFailed;
}

bool use_ed_path(const RunConfig& c, int n) {
  if (c.model == "lmg") return true;
  if (c.path == "ed") return true;
  if (c.path == "ff") return false;
  return n <= kQuenchEdMaxSites;
}

quench::FidelityOfTau quench_fidelity(const RunConfig& c, int n, double hi, double hf) {
  if (use_ed_path(c, n)) {
    const auto spec = ed::SpinModelSpec{model_kind(c), n, hi, c.gamma};
    spec.validate();
    return quench::ed_fidelity(ed::family_for(spec), hi, hf, c.dt);
  }
  return quench::ising_free_fermion_fidelity(n, hi, hf, c.dt);
}

int cmd_quench(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_nonempty(c, true, false);
  if (c.tau0.empty() && !c.target_f) throw InvalidArgument("quench needs --tau0 and/or --target-f");
  if (c.model == "lmg" && c.path == "ff") throw InvalidArgument("the free-fermion path exists only for --model ising");
  const std::vector<double> fields = c.fields.empty() ? std::vector<double>{3.0, 0.0} : c.fields;
  if (fields.size() != 2) throw InvalidArgument("quench: --fields takes exactly two values h_start,h_end");
  const double hi = fields[0];
  const double hf = fields[1];
  if (hi == hf) throw InvalidArgument("quench: h_start and h_end must differ");
  if (c.target_f && !(*c.target_f > 0.0 && *c.target_f < 1.0)) throw InvalidArgument("--target-f must lie in (0, 1)");
  const auto sizes = sorted_unique(c.sizes);
  const auto taus = sorted_unique(c.tau0);
  for (double t : taus) {
    if (!(t > 0.0)) throw InvalidArgument("--tau0 values must be positive");
  }
  for (int n : sizes) {
    if (use_ed_path(c, n)) {
      validate_sizes(c, {n}, true);
    } else {
      validate_sizes(c, {n}, false);
    }
  }

  std::vector<quench::FidelityOfTau> fidelity;
  for (int n : sizes) fidelity.push_back(quench_fidelity(c, n, hi, hf));

  std::vector<double> grid(sizes.size() * taus.size());
  parallel_for(grid.size(), [&](std::size_t idx) { grid[idx] = fidelity[idx / taus.size()](taus[idx % taus.size()]); });

  Table table{{"N", "tau0", "fidelity", "path"}, {}};
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    for (std::size_t j = 0; j < taus.size(); ++j) {
      table.rows.push_back({static_cast<long long>(sizes[i]), taus[j], grid[i * taus.size() + j],
                            std::string(use_ed_path(c, sizes[i]) ? "ed" : "ff")});
    }
  }

  Sink sink(c, out, err);
  Json extra = Json::object();
  Table tau_table{{"N", "tau0_star"}, {}};
  std::optional<scaling::ScalingFit> fit;
  if (c.target_f) {
    quench::TauSearchOptions search;
    search.upper = c.tau_max;
    std::vector<double> tau_star(sizes.size());
    parallel_for(sizes.size(), [&](std::size_t i) { tau_star[i] = quench::critical_tau_search(fidelity[i], *c.target_f, search); });
    std::vector<scaling::ScalingSample> samples;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      tau_table.rows.push_back({static_cast<long long>(sizes[i]), tau_star[i]});
      samples.push_back({double(sizes[i]), tau_star[i]});
    }
    extra["tau_star"] = tau_table.rows_json();
    if (samples.size() >= scaling::kMinFitSamples) {
      fit = scaling::fit_power_law(samples);
      extra["tau_star_fit"] = fit_json(*fit);
    }
  }
  sink.write(table, extra);
  if (c.target_f) sink.write_side_table("_tau_star", tau_table);
  Table plot{{"tau0", "fidelity", "N"}, {}};
  for (const auto& row : table.rows) plot.rows.push_back({row[1], row[2], row[0]});
  sink.write_plot(plot, 2);

  auto& s = sink.summary();
  s << "quench: h " << format_double(hi) << " -> " << format_double(hf) << " rows=" << table.rows.size() << '\n';
  for (const auto& row : tau_table.rows) {
    s << "  N=" << format_cell(row[0]) << " tau0_star=" << format_cell(row[1]) << '\n';
  }
  if (fit) print_fit(s, "  tau0_star fit", *fit);
  return kOk;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

bool parse_number(const std::string& s, double& v) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size();
}

int find_column(const std::vector<std::string>& header, std::initializer_list<const char*> names) {
  for (const char* name : names) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
  }
  return -1;
}

std::vector<scaling::ScalingSample> read_samples(const RunConfig& c) {
  if (c.input.empty()) throw InvalidArgument("scaling-fit needs an input table");
  std::ifstream f(c.input);
  if (!f) throw InvalidArgument("cannot open input table " + c.input);

  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(f, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    lines.push_back(split_csv_line(line));
  }
  if (lines.empty()) throw InvalidArgument("input table is empty");

  int l_col = 0, v_col = 1, h_col = -1;
  std::size_t first = 0;
  double probe = 0.0;
  const bool has_header = std::any_of(lines[0].begin(), lines[0].end(), [&](const auto& s) { return !parse_number(s, probe); });
  if (has_header) {
    const auto& header = lines[0];
    l_col = find_column(header, {"L", "N", "length"});
    v_col = find_column(header, {"value", "chi_f", "tau0_star"});
    h_col = find_column(header, {"h"});
    if (l_col < 0 || v_col < 0) throw InvalidArgument("input header needs an L/N column and a value/chi_f/tau0_star column");
    first = 1;
  }

  std::set<double> field_values;
  std::vector<std::pair<double, scaling::ScalingSample>> rows;
  for (std::size_t r = first; r < lines.size(); ++r) {
    const auto& cells = lines[r];
    const auto need = static_cast<std::size_t>(std::max({l_col, v_col, h_col}) + 1);
    double l = 0.0, v = 0.0, h = 0.0;
    if (cells.size() < need || !parse_number(cells[l_col], l) || !parse_number(cells[v_col], v) ||
        (h_col >= 0 && !parse_number(cells[h_col], h))) {
      throw InvalidArgument("malformed input at data row " + std::to_string(r - first + 1));
    }
    field_values.insert(h);
    rows.push_back({h, {l, v}});
  }

  std::vector<scaling::ScalingSample> samples;
  if (h_col >= 0 && field_values.size() > 1) {
    if (c.fields.size() != 1) throw InvalidArgument("input holds several fields; select one with --fields");
    for (const auto& [h, s] : rows) {
      if (h == c.fields[0]) samples.push_back(s);
    }
  } else {
    for (const auto& [h, s] : rows) samples.push_back(s);
  }
  return samples;
}

int cmd_scaling_fit(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto samples = read_samples(c);
  auto fit = c.windowed ? scaling::fit_power_law_windowed(samples) : scaling::fit_power_law(samples);
  bool log_checked = false;
  if (samples.size() >= scaling::kMinLogSamples) {
    try {
      const auto log_fit = scaling::detect_log_correction(samples);
      log_checked = true;
      if (log_fit.log_correction) fit = log_fit;
    } catch (const TooFewSamples&) {
      // sizes span fewer than two decades: keep the pure power law
    }
  }

  Table table{{"d_a", "kappa", "r2", "log_correction", "residual_max", "window_start", "samples"}, {}};
  table.rows.push_back({fit.d_a, fit.kappa, fit.r2, fit.log_correction, fit.residual_max, fit.window_start,
                        static_cast<long long>(samples.size())});
  Sink sink(c, out, err);
  Json extra;
  extra["local_slopes"] = fit.local_slopes;
  extra["log_correction_checked"] = log_checked;
  sink.write(table, extra);
  print_fit(sink.summary(), "scaling-fit", fit);
  return kOk;
}

void register_options(CLI::App& app, RunConfig& c) {
  app.add_option("--model", c.model, "Model family")->check(CLI::IsMember({"ising", "lmg"}));
  app.add_option("--sizes", c.sizes, "System sizes N")->delimiter(',');
  app.add_option("--fields", c.fields, "Transverse fields h (quench: h_start,h_end)")->delimiter(',');
  app.add_option("--gamma", c.gamma, "LMG anisotropy");
  app.add_option("--tau0", c.tau0, "Quench durations tau0")->delimiter(',');
  app.add_option("--target-f", c.target_f, "Target fidelity for the tau0* search");
  app.add_option("--tau-max", c.tau_max, "quench: upper bound of the tau0* search")->check(CLI::PositiveNumber);
  app.add_option("--dt", c.dt, "Integrator step (default: automatic)");
  app.add_option("--format", c.format, "Output format")
      ->transform(CLI::CheckedTransformer(std::map<std::string, OutputFormat>{{"csv", OutputFormat::Csv},
                                                                              {"json", OutputFormat::Json}}));
  app.add_option("--output", c.output, "Data file (default: standard output)");
  app.add_option("--plot", c.plot, "Gnuplot-compatible column file");
  app.add_option("--threads", c.threads, "Worker threads (default: available parallelism)")->check(CLI::NonNegativeNumber);
  app.add_option("--input", c.input, "scaling-fit: input table");
  app.add_option("--path", c.path, "quench: auto, ff (free fermion) or ed")->check(CLI::IsMember({"auto", "ff", "ed"}));
  app.add_flag("--windowed", c.windowed, "scaling-fit: drop small sizes until d_a is stable");
  app.add_flag("--inject-fault", c.inject_fault, "ed-verify: flip the sign of the ED result (self-test)");
  app.set_config("--config", "", "key=value configuration file; flags override it");
}

}  // namespace

int run_config(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.threads > 0) parallel::set_threads(c.threads);
    if (c.command == "chi-scan") return cmd_chi_scan(c, out, err);
    if (c.command == "ed-verify") return cmd_ed_verify(c, out, err);
    if (c.command == "quench") return cmd_quench(c, out, err);
    if (c.command == "scaling-fit") return cmd_scaling_fit(c, out, err);
    err << "error: unknown command '" << c.command << "'\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::Config ? kConfigError : kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Fidelity susceptibility and adiabatic quench laboratory", "adlab"};
  app.fallthrough();
  app.require_subcommand(1);
  register_options(app, config);
  app.add_subcommand("chi-scan", "chi_F over a (N, h) grid");
  app.add_subcommand("ed-verify", "exact diagonalization against the free-fermion chi_F");
  app.add_subcommand("quench", "final fidelity of linear quenches and tau0* search");
  auto* fit = app.add_subcommand("scaling-fit", "power-law fit of an (L, value) table");
  fit->add_option("input", config.input, "Input table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    const int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? kOk : kConfigError;
  }
  config.command = app.get_subcommands().front()->get_name();
  return run_config(config, out, err);
}

}  // namespace adlab::cli
