#include "bem_annulus/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "bem_annulus/bem_annulus.hpp"
#include "bem_annulus/svg.hpp"

namespace bem::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string fem;
  std::string out = ".";
  std::string grid;
  std::string points;
  std::string solution;
  std::string reference;
  std::string computed;
  std::string reference_function = "log_r";
  std::string n_list;
  std::uint64_t seed = 1;
  std::size_t count = 10000;
  bool svg = false;
};

// Temp file + rename so readers never see a half-written output.
void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    if (!out) throw ConfigError("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const std::string& path, ErrorCategory category) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(category, "cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ScenarioConfig config_from(const Options& o) {
  return o.config.empty() ? ScenarioConfig{} : load_config(o.config);
}

class Manifest {
 public:
  Manifest(std::string subcommand, const Options& o)
      : subcommand_(std::move(subcommand)), options_(o), started_(std::chrono::steady_clock::now()) {}

  void input(const std::string& role, const std::string& path) {
    if (!path.empty()) inputs_[role] = path;
  }
  void output(const fs::path& path) { outputs_.push_back(path.string()); }

  void write(const fs::path& dir) const {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand_;
    j["config"] = options_.config;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["seed"] = options_.seed;
    j["tool_version"] = BEM_ANNULUS_VERSION;
    j["wall_clock_seconds"] = seconds;
    write_atomic(dir / "manifest.json", j.dump(2) + "\n");
  }

 private:
  std::string subcommand_;
  Options options_;
  std::chrono::steady_clock::time_point started_;
  nlohmann::ordered_json inputs_ = nlohmann::ordered_json::object();
  std::vector<std::string> outputs_;
};

GridSpec parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() != 6) throw ConfigError("--grid expects x0,x1,y0,y1,nx,ny");
  try {
    return {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]), std::stod(parts[3]),
            static_cast<std::size_t>(std::stoul(parts[4])), static_cast<std::size_t>(std::stoul(parts[5]))};
  } catch (const std::exception&) {
    throw ConfigError("--grid has an unparsable entry: " + text);
  }
}

std::vector<std::size_t> parse_n_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      out.push_back(static_cast<std::size_t>(std::stoul(item)));
    } catch (const std::exception&) {
      throw ConfigError("--n has an unparsable entry: " + item);
    }
  }
  return out;
}

std::vector<Point2> read_points(const std::string& path) {
  std::istringstream in(read_file(path, ErrorCategory::InputData));
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty points file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y") throw FormatError(path + ": expected header 'x,y'");
  std::vector<Point2> points;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("");
      std::size_t used = 0;
      const double x = std::stod(line.substr(0, comma), &used);
      const double y = std::stod(line.substr(comma + 1));
      points.push_back({x, y});
    } catch (const std::exception&) {
      throw FormatError(path + " line " + std::to_string(line_no) + ": expected 'x,y'");
    }
  }
  return points;
}

std::string field_csv(const std::vector<FieldSample>& samples) {
  std::ostringstream out;
  out << "x,y,class,value,near_boundary\n";
  for (const auto& s : samples) {
    out << format_double(s.point.x) << ',' << format_double(s.point.y) << ','
        << to_string(s.edge_factor.classification) << ',' << (s.value ? format_double(*s.value) : "")
        << ',' << (s.near_boundary ? 1 : 0) << '\n';
  }
  return out.str();
}

// Picks the `value` (or `calculated`) column of a CSV file.
std::vector<double> read_value_column(const std::string& path) {
  std::istringstream in(read_file(path, ErrorCategory::InputData));
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  {
    std::stringstream hs(line);
    for (std::string h; std::getline(hs, h, ',');) header.push_back(h);
  }
  std::size_t column = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "value" || header[i] == "calculated") column = i;
  }
  if (column == header.size()) throw FormatError(path + ": no 'value' or 'calculated' column");
  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
    if (column >= fields.size() || fields[column].empty()) {
      throw DataError(path + " line " + std::to_string(line_no) + ": missing value");
    }
    try {
      values.push_back(std::stod(fields[column]));
    } catch (const std::exception&) {
      throw FormatError(path + " line " + std::to_string(line_no) + ": unparsable value");
    }
  }
  return values;
}

int cmd_mesh(const Options& o) {
  const ScenarioConfig cfg = config_from(o);
  const AnnulusMesh mesh = cfg.mesh();
  std::ostringstream csv;
  csv << "index,circle,start_x,start_y,end_x,end_y,mid_x,mid_y,length,normal_x,normal_y\n";
  for (std::size_t k = 0; k < mesh.size(); ++k) {
    const auto& e = mesh[k];
    csv << k + 1 << ',' << (mesh.is_outer(k) ? "outer" : "inner") << ',' << format_double(e.start().x)
        << ',' << format_double(e.start().y) << ',' << format_double(e.end().x) << ','
        << format_double(e.end().y) << ',' << format_double(e.midpoint().x) << ','
        << format_double(e.midpoint().y) << ',' << format_double(e.length()) << ','
        << format_double(e.normal().x) << ',' << format_double(e.normal().y) << '\n';
  }
  Manifest manifest("mesh", o);
  const fs::path out = fs::path(o.out) / "mesh.csv";
  write_atomic(out, csv.str());
  manifest.output(out);
  manifest.write(o.out);
  std::cout << "wrote " << mesh.size() << " elements to " << out.string() << '\n';
  return kSuccess;
}

int cmd_synth(const Options& o) {
  const ScenarioConfig cfg = config_from(o);
  const AnnulusMesh mesh = cfg.mesh();
  const auto ref = oracle::parse_reference(o.reference_function, cfg.outer.center);
  const FemBoundaryData data = sample_fem_data(mesh, [&](Point2 p) { return ref.value(p); }, ref.name());
  std::ostringstream csv;
  write_fem_csv(csv, data);
  Manifest manifest("synth", o);
  const fs::path out = fs::path(o.out) / "fem.csv";
  write_atomic(out, csv.str());
  manifest.output(out);
  manifest.write(o.out);
  std::cout << "wrote synthetic " << ref.name() << " boundary data for " << mesh.size() << " elements to "
            << out.string() << '\n';
  return kSuccess;
}

int cmd_solve(const Options& o) {
  const ScenarioConfig cfg = config_from(o);
  const AnnulusMesh mesh = cfg.mesh();
  std::istringstream fem_text(read_file(o.fem, ErrorCategory::InputData));
  const FemBoundaryData fem = parse_fem_csv(fem_text, mesh, cfg.position_tol, o.fem);
  const ScenarioResult result = run_scenario(cfg, fem);
  const BoundarySolution& sol = result.solution;

  Manifest manifest("solve", o);
  manifest.input("fem", o.fem);
  const fs::path dir = o.out;
  std::ostringstream sol_text;
  write_solution(sol_text, sol);
  write_atomic(dir / "solution.txt", sol_text.str());
  manifest.output(dir / "solution.txt");
  write_atomic(dir / "plate.csv", field_csv(result.plate_samples));
  manifest.output(dir / "plate.csv");
  if (result.report) {
    manifest.input("reference", cfg.reference_fixture->string());
    write_atomic(dir / "report.txt", format_error_report(*result.table, *result.report));
    manifest.output(dir / "report.txt");
  }
  manifest.write(dir);

  std::cout << "elements: " << sol.a_bar.size() << '\n'
            << "residual_norm: " << format_double(sol.residual_norm) << '\n'
            << "condition_estimate: " << format_double(sol.condition_estimate) << '\n'
            << "p_bar_min: " << format_double(sol.p_bar.minCoeff()) << '\n'
            << "p_bar_max: " << format_double(sol.p_bar.maxCoeff()) << '\n';
  for (const auto& w : sol.warnings) std::cerr << "warning: " << w << '\n';
  if (result.report) std::cout << "average_error_percent: " << format_double(result.report->average) << '\n';
  return kSuccess;
}

int cmd_eval(const Options& o) {
  if (o.points.empty() == o.grid.empty()) throw ConfigError("eval needs exactly one of --points or --grid");
  std::istringstream sol_text(read_file(o.solution, ErrorCategory::InputData));
  const BoundarySolution sol = read_solution(sol_text);
  Manifest manifest("eval", o);
  manifest.input("solution", o.solution);
  const fs::path dir = o.out;

  std::vector<FieldSample> samples;
  std::optional<FieldGrid> grid;
  if (!o.grid.empty()) {
    grid = field_map(sol, parse_grid(o.grid));
    samples = grid->samples;
  } else {
    manifest.input("points", o.points);
    for (const Point2 p : read_points(o.points)) {
      FieldSample s = sample_point(sol, p);
      if (s.edge_factor.classification == PointClass::Exterior) {
        std::cerr << "warning: point (" << p.x << ", " << p.y << ") is outside the annulus\n";
      }
      samples.push_back(s);
    }
  }
  write_atomic(dir / "field.csv", field_csv(samples));
  manifest.output(dir / "field.csv");
  if (o.svg && grid) {
    write_atomic(dir / "field.svg", svg::heatmap(*grid, "Magnetic vector potential"));
    manifest.output(dir / "field.svg");
  }
  manifest.write(dir);
  std::cout << "evaluated " << samples.size() << " points\n";
  return kSuccess;
}

int cmd_report(const Options& o) {
  std::istringstream ref_text(read_file(o.reference, ErrorCategory::InputData));
  ReferenceTable table = read_reference_table(ref_text);
  if (!o.computed.empty()) {
    const auto values = read_value_column(o.computed);
    if (values.size() != table.rows.size()) {
      throw DataError("computed file has " + std::to_string(values.size()) + " values, reference has " +
                      std::to_string(table.rows.size()) + " rows");
    }
    for (std::size_t i = 0; i < values.size(); ++i) table.rows[i].calculated = values[i];
  }
  const ErrorReport report = relative_error_report(table);
  const std::string text = format_error_report(table, report);
  std::cout << text;
  if (o.out != ".") {
    Manifest manifest("report", o);
    manifest.input("reference", o.reference);
    manifest.input("computed", o.computed);
    write_atomic(fs::path(o.out) / "report.txt", text);
    manifest.output(fs::path(o.out) / "report.txt");
    manifest.write(o.out);
  }
  return kSuccess;
}

int cmd_converge(const Options& o) {
  ScenarioConfig cfg = config_from(o);
  if (!o.n_list.empty()) cfg.convergence_n = parse_n_list(o.n_list);
  const ConvergenceRecord record =
      convergence_study(cfg.outer, cfg.inner, cfg.convergence_reference, cfg.convergence_n);
  std::ostringstream csv;
  csv << "n_total,max_error,avg_error,net_flux\n";
  svg::Series max_s{"max error", {}, {}}, avg_s{"average error", {}, {}};
  for (const auto& e : record.entries) {
    csv << e.n_total << ',' << format_double(e.max_error) << ',' << format_double(e.avg_error) << ','
        << format_double(e.net_flux) << '\n';
    max_s.x.push_back(static_cast<double>(e.n_total));
    max_s.y.push_back(e.max_error);
    avg_s.x.push_back(static_cast<double>(e.n_total));
    avg_s.y.push_back(e.avg_error);
  }
  Manifest manifest("converge", o);
  const fs::path dir = o.out;
  write_atomic(dir / "convergence.csv", csv.str());
  manifest.output(dir / "convergence.csv");
  if (o.svg) {
    write_atomic(dir / "convergence.svg",
                 svg::loglog_plot({max_s, avg_s}, "Neumann data error (" + record.reference + ")",
                                  "number of elements", "relative error"));
    manifest.output(dir / "convergence.svg");
  }
  manifest.write(dir);
  std::cout << csv.str();
  return kSuccess;
}

int cmd_oracle_check(const Options& o, const Hooks& hooks) {
  if (o.count == 0) throw ConfigError("--count must be positive");
  const auto cases = oracle::kernel_sweep(o.seed, o.count, hooks.kernels);
  std::ostringstream csv;
  csv << "case_id,kernel,regime,closed_form,quadrature,abs_diff,tolerance,pass\n";
  std::size_t failures = 0;
  for (const auto& c : cases) {
    csv << c.id << ",F" << c.kernel << ',' << oracle::to_string(c.regime) << ','
        << format_double(c.closed_form) << ',' << format_double(c.quadrature) << ','
        << format_double(c.abs_diff()) << ',' << format_double(c.tolerance) << ',' << (c.pass() ? 1 : 0)
        << '\n';
    if (!c.pass()) ++failures;
  }
  Manifest manifest("oracle-check", o);
  const fs::path dir = o.out;
  write_atomic(dir / "oracle_check.csv", csv.str());
  manifest.output(dir / "oracle_check.csv");
  manifest.write(dir);
  std::cout << cases.size() << " comparisons, " << failures << " outside tolerance\n";
  return failures == 0 ? kSuccess : kOracleMismatch;
}

int exit_code_for(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Config: return kUsage;
    case ErrorCategory::InputData: return kInputData;
    case ErrorCategory::Numerical: return kNumerical;
    case ErrorCategory::Domain: return kUsage;
  }
  return kUsage;
}

}  // namespace

int run(int argc, char** argv, const Hooks& hooks) {
  CLI::App app{"Constant-element BEM for Laplace problems on annuli"};
  app.set_version_flag("--version", std::string(BEM_ANNULUS_VERSION));
  app.require_subcommand(1);
  Options o;

  auto* mesh = app.add_subcommand("mesh", "Write the boundary mesh as CSV");
  mesh->add_option("--config", o.config, "Scenario config (JSON)")->check(CLI::ExistingFile);
  mesh->add_option("--out", o.out, "Output directory");

  auto* synth = app.add_subcommand("synth", "Write synthetic FEM boundary data from a harmonic function");
  synth->add_option("--config", o.config, "Scenario config (JSON)")->check(CLI::ExistingFile);
  synth->add_option("--reference", o.reference_function,
                    "constant, linear_x, linear_y, log_r or harmonic_poly2");
  synth->add_option("--out", o.out, "Output directory");

  auto* solve = app.add_subcommand("solve", "Solve for Neumann data from FEM boundary potentials");
  solve->add_option("--config", o.config, "Scenario config (JSON)")->check(CLI::ExistingFile);
  solve->add_option("--fem", o.fem, "FEM boundary CSV (index,x,y,a)")->required();
  solve->add_option("--out", o.out, "Output directory");

  auto* eval = app.add_subcommand("eval", "Evaluate the potential at points or on a grid");
  eval->add_option("--solution", o.solution, "Solution file written by solve")->required();
  eval->add_option("--points", o.points, "CSV with header x,y");
  eval->add_option("--grid", o.grid, "x0,x1,y0,y1,nx,ny");
  eval->add_option("--out", o.out, "Output directory");
  eval->add_flag("--svg", o.svg, "Also write an SVG heatmap (grid mode)");

  auto* report = app.add_subcommand("report", "Relative-error table against a reference fixture");
  report->add_option("--reference", o.reference, "Reference fixture (measured,calculated)")->required();
  report->add_option("--computed", o.computed, "CSV with a value or calculated column");
  report->add_option("--out", o.out, "Output directory");

  auto* converge = app.add_subcommand("converge", "Mesh-refinement study against an analytic solution");
  converge->add_option("--config", o.config, "Scenario config (JSON)")->check(CLI::ExistingFile);
  converge->add_option("--n", o.n_list, "Comma-separated total element counts");
  converge->add_option("--out", o.out, "Output directory");
  converge->add_flag("--svg", o.svg, "Also write an SVG plot");

  auto* oracle_check = app.add_subcommand("oracle-check", "Compare closed-form kernels with quadrature");
  oracle_check->add_option("--seed", o.seed, "Random seed");
  oracle_check->add_option("--count", o.count, "Number of separated cases");
  oracle_check->add_option("--out", o.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*mesh) return cmd_mesh(o);
    if (*synth) return cmd_synth(o);
    if (*solve) return cmd_solve(o);
    if (*eval) return cmd_eval(o);
    if (*report) return cmd_report(o);
    if (*converge) return cmd_converge(o);
    if (*oracle_check) return cmd_oracle_check(o, hooks);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.category());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace bem::cli
