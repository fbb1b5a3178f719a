#include "bem_annulus/coupling_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>

#include "bem_annulus/error.hpp"

namespace bem {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<std::size_t> to_index(std::string_view s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// Line-oriented reader that remembers byte offsets for error messages.
class LineReader {
 public:
  explicit LineReader(std::istream& in)
      : text_(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    line_start_ = pos_;
    const auto nl = text_.find('\n', pos_);
    const std::size_t end = nl == std::string::npos ? text_.size() : nl;
    line = std::string_view(text_).substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = nl == std::string::npos ? text_.size() : nl + 1;
    ++line_no_;
    return true;
  }

  std::size_t line_start() const { return line_start_; }
  std::size_t line_no() const { return line_no_; }
  std::size_t size() const { return text_.size(); }

 private:
  std::string text_;
  std::size_t pos_ = 0;
  std::size_t line_start_ = 0;
  std::size_t line_no_ = 0;
};

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

Eigen::VectorXd FemBoundaryData::dirichlet() const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) v[static_cast<Eigen::Index>(i)] = entries[i].a_value;
  return v;
}

FemBoundaryData parse_fem_csv(std::istream& in, const AnnulusMesh& mesh, double position_tol,
                              std::string source) {
  LineReader reader(in);
  std::string_view line;
  if (!reader.next(line) || trim(line) != "index,x,y,a") {
    throw FormatError(source + ": expected header 'index,x,y,a'");
  }
  const std::size_t n = mesh.size();
  std::map<std::size_t, FemEntry> by_index;
  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    const std::string where = source + " line " + std::to_string(reader.line_no());
    const auto fields = split(line, ',');
    if (fields.size() != 4) throw FormatError(where + ": expected 4 columns");
    const auto index = to_index(fields[0]);
    if (!index || *index < 1 || *index > n) {
      throw FormatError(where + ": element index '" + std::string(fields[0]) + "' outside 1.." +
                        std::to_string(n));
    }
    const auto x = to_double(fields[1]);
    const auto y = to_double(fields[2]);
    const auto a = to_double(fields[3]);
    if (!x || !y || !a) throw FormatError(where + ": unparsable number");
    if (!std::isfinite(*x) || !std::isfinite(*y) || !std::isfinite(*a)) {
      throw DataError(where + ": non-finite value for element " + std::to_string(*index));
    }
    if (by_index.contains(*index)) {
      throw FormatError(where + ": duplicate element index " + std::to_string(*index));
    }
    by_index[*index] = {*index, *x, *y, *a};
  }
  for (std::size_t k = 1; k <= n; ++k) {
    if (!by_index.contains(k)) throw FormatError(source + ": missing element index " + std::to_string(k));
  }

  FemBoundaryData data{{}, std::move(source)};
  data.entries.reserve(n);
  std::size_t worst = 0;
  double worst_distance = 0.0;
  for (const auto& [k, entry] : by_index) {
    const double dist = distance({entry.x, entry.y}, mesh[k - 1].midpoint());
    if (dist > worst_distance) {
      worst_distance = dist;
      worst = k;
    }
    data.entries.push_back(entry);
  }
  if (worst_distance > position_tol) {
    std::ostringstream msg;
    msg << data.source << ": element " << worst << " is " << worst_distance
        << " m from its collocation point (tolerance " << position_tol << " m)";
    throw AlignmentError(msg.str(), worst, worst_distance);
  }
  return data;
}

void write_fem_csv(std::ostream& out, const FemBoundaryData& data) {
  out << "index,x,y,a\n";
  for (const auto& e : data.entries) {
    out << e.element << ',' << format_double(e.x) << ',' << format_double(e.y) << ','
        << format_double(e.a_value) << '\n';
  }
}

ReferenceTable read_reference_table(std::istream& in) {
  LineReader reader(in);
  ReferenceTable table;
  std::string_view line;
  bool header = false;
  while (reader.next(line)) {
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      constexpr std::string_view key = "# label:";
      if (t.starts_with(key)) table.label = std::string(trim(t.substr(key.size())));
      continue;
    }
    if (!header) {
      if (t != "measured,calculated") throw FormatError("reference table: expected header 'measured,calculated'");
      header = true;
      continue;
    }
    const auto fields = split(t, ',');
    const auto m = fields.size() == 2 ? to_double(fields[0]) : std::nullopt;
    const auto c = fields.size() == 2 ? to_double(fields[1]) : std::nullopt;
    if (!m || !c) {
      throw FormatError("reference table line " + std::to_string(reader.line_no()) +
                        ": expected two numbers");
    }
    table.rows.push_back({*m, *c});
  }
  if (!header) throw FormatError("reference table: missing header");
  if (table.rows.empty()) throw FormatError("reference table has no rows");
  return table;
}

ErrorReport relative_error_report(const ReferenceTable& table) {
  if (table.rows.empty()) throw PreconditionError("reference table has no rows");
  ErrorReport report;
  double sum = 0.0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (row.measured == 0.0) {
      throw DataError("row " + std::to_string(i + 1) +
                      ": measured value is zero, relative error undefined");
    }
    const double err = std::abs(row.measured - row.calculated) / std::abs(row.measured) * 100.0;
    report.row_errors.push_back(err);
    sum += err;
  }
  report.average = sum / static_cast<double>(table.rows.size());
  return report;
}

std::string format_error_report(const ReferenceTable& table, const ErrorReport& report) {
  std::ostringstream out;
  if (!table.label.empty()) out << table.label << '\n';
  out << std::left << std::setw(16) << "Measured" << std::setw(16) << "Calculated" << std::setw(10)
      << "Error" << "Average error\n";
  out << std::setw(16) << "value (T m)" << std::setw(16) << "value (T m)" << '\n';
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    std::ostringstream m, c, e;
    m << table.rows[i].measured;
    c << table.rows[i].calculated;
    e << std::fixed << std::setprecision(2) << report.row_errors[i] << '%';
    out << std::setw(16) << m.str() << std::setw(16) << c.str() << std::setw(10) << e.str();
    if (i == 0) out << std::fixed << std::setprecision(2) << report.average << '%';
    out << '\n';
  }
  return out.str();
}

void write_solution(std::ostream& out, const BoundarySolution& sol) {
  if (!sol.mesh) throw PreconditionError("cannot serialize a solution without its mesh");
  const auto& mesh = *sol.mesh;
  const auto circle = [&](std::string_view name, const CircleSpec& c) {
    out << name << "_center " << format_double(c.center.x) << ' ' << format_double(c.center.y) << '\n'
        << name << "_radius " << format_double(c.radius) << '\n'
        << name << "_elements " << c.elements << '\n'
        << name << "_start_angle " << format_double(c.start_angle) << '\n';
  };
  out << kSolutionMagic << " v" << kSolutionMajorVersion << '\n';
  circle("outer", mesh.outer_spec());
  circle("inner", mesh.inner_spec());
  out << "residual_norm " << format_double(sol.residual_norm) << '\n';
  out << "condition_estimate " << format_double(sol.condition_estimate) << '\n';
  out << "warnings " << sol.warnings.size() << '\n';
  for (const auto& w : sol.warnings) out << "warning " << w << '\n';
  out << "elements " << sol.a_bar.size() << '\n';
  for (Eigen::Index k = 0; k < sol.a_bar.size(); ++k) {
    out << k + 1 << ' ' << format_double(sol.a_bar[k]) << ' ' << format_double(sol.p_bar[k]) << '\n';
  }
  out << "end\n";
}

namespace {

class SolutionParser {
 public:
  explicit SolutionParser(std::istream& in) : reader_(in) {}

  std::vector<std::string_view> line() {
    std::string_view l;
    if (!reader_.next(l)) throw ParseError("solution file truncated", reader_.size());
    return split_ws(l);
  }

  std::vector<std::string_view> keyed(std::string_view key, std::size_t values) {
    auto tokens = line();
    if (tokens.size() != values + 1 || tokens[0] != key) {
      fail("expected '" + std::string(key) + "' with " + std::to_string(values) + " value(s)");
    }
    return tokens;
  }

  double number(std::string_view token) {
    const auto v = to_double(token);
    if (!v) fail("unparsable number '" + std::string(token) + "'");
    return *v;
  }

  std::size_t count(std::string_view token) {
    const auto v = to_index(token);
    if (!v) fail("unparsable count '" + std::string(token) + "'");
    return *v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("solution file line " + std::to_string(reader_.line_no()) + " (byte " +
                         std::to_string(reader_.line_start()) + "): " + what,
                     reader_.line_start());
  }

  std::string rest_after(std::string_view key) {
    std::string_view l;
    if (!reader_.next(l)) throw ParseError("solution file truncated", reader_.size());
    if (!l.starts_with(key) || l.size() <= key.size() || l[key.size()] != ' ') {
      fail("expected '" + std::string(key) + "'");
    }
    return std::string(l.substr(key.size() + 1));
  }

 private:
  static std::vector<std::string_view> split_ws(std::string_view l) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < l.size()) {
      while (i < l.size() && (l[i] == ' ' || l[i] == '\t')) ++i;
      const std::size_t start = i;
      while (i < l.size() && l[i] != ' ' && l[i] != '\t') ++i;
      if (i > start) out.push_back(l.substr(start, i - start));
    }
    return out;
  }

  LineReader reader_;
};

}  // namespace

BoundarySolution read_solution(std::istream& in) {
  SolutionParser p(in);
  const auto magic = p.line();
  if (magic.size() != 2 || magic[0] != kSolutionMagic || !magic[1].starts_with("v")) {
    p.fail("not a bem-annulus solution file");
  }
  const auto version = magic[1].substr(1);
  const auto major = to_index(version.substr(0, version.find('.')));
  if (!major) p.fail("unreadable version '" + std::string(magic[1]) + "'");
  if (*major != static_cast<std::size_t>(kSolutionMajorVersion)) {
    throw VersionError("solution file version " + std::string(magic[1]) + " is not supported (expected v" +
                       std::to_string(kSolutionMajorVersion) + ")");
  }

  const auto circle = [&](std::string_view name) {
    const std::string n(name);
    CircleSpec c;
    const auto center = p.keyed(n + "_center", 2);
    c.center = {p.number(center[1]), p.number(center[2])};
    c.radius = p.number(p.keyed(n + "_radius", 1)[1]);
    c.elements = p.count(p.keyed(n + "_elements", 1)[1]);
    c.start_angle = p.number(p.keyed(n + "_start_angle", 1)[1]);
    return c;
  };
  const CircleSpec outer = circle("outer");
  const CircleSpec inner = circle("inner");

  BoundarySolution sol;
  sol.residual_norm = p.number(p.keyed("residual_norm", 1)[1]);
  sol.condition_estimate = p.number(p.keyed("condition_estimate", 1)[1]);
  const std::size_t n_warnings = p.count(p.keyed("warnings", 1)[1]);
  for (std::size_t i = 0; i < n_warnings; ++i) sol.warnings.push_back(p.rest_after("warning"));

  const std::size_t n = p.count(p.keyed("elements", 1)[1]);
  if (n != outer.elements + inner.elements) p.fail("element count does not match mesh parameters");
  sol.mesh = std::make_shared<const AnnulusMesh>(outer, inner);
  sol.a_bar.resize(static_cast<Eigen::Index>(n));
  sol.p_bar.resize(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const auto row = p.line();
    if (row.size() != 3 || p.count(row[0]) != k + 1) p.fail("expected row for element " + std::to_string(k + 1));
    sol.a_bar[static_cast<Eigen::Index>(k)] = p.number(row[1]);
    sol.p_bar[static_cast<Eigen::Index>(k)] = p.number(row[2]);
  }
  p.keyed("end", 0);
  return sol;
}

}  // namespace bem
