#include "nlcd/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlcd/errors.hpp"

namespace nlcd {

namespace {

// Context fields are quoted so free-text stays a single CSV cell.
std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);  // binary keeps line endings identical everywhere
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open " + path + " for writing");
  return f;
}

}  // namespace

std::string format_full(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw Error(ErrorCode::InvalidArgument, "cannot create directory " + path + ": " + ec.message());
}

void write_snapshot_csv(const std::string& path, const FieldState& state) {
  std::ofstream f = open_out(path);
  f << "x,u\n";
  for (int i = 0; i < state.grid.n; ++i) {
    f << format_full(state.grid.x(i)) << "," << format_full(state.values[static_cast<size_t>(i)])
      << "\n";
  }
}

FieldState read_snapshot_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ConfigParse, "cannot open " + path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("x,u", 0) != 0) {
    throw Error(ErrorCode::ConfigParse, path + ": expected header x,u");
  }
  std::vector<double> xs;
  std::vector<double> us;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const size_t comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::ConfigParse, path + ": malformed row " + line);
    try {
      xs.push_back(std::stod(line.substr(0, comma)));
      us.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigParse, path + ": malformed number in row " + line);
    }
  }
  if (xs.size() < 2) throw Error(ErrorCode::ConfigParse, path + ": needs >= 2 rows");
  FieldState state;
  state.grid = make_grid(xs.front(), xs.back(), static_cast<int>(xs.size()));
  state.values = std::move(us);
  state.u_minus = state.values.front();
  state.u_plus = state.values.back();
  return state;
}

void write_norms_csv(const std::string& path, const std::vector<NormReport>& reports) {
  std::ofstream f = open_out(path);
  f << "time,err_rar_p1,err_rar_p2,err_rar_pinf,err_w_p1,err_w_p2,err_w_pinf,"
       "ux_p1,ux_p2,ux_pinf,gn_p1,gn_p2,gn_pinf,l1_log_ratio\n";
  for (const NormReport& r : reports) {
    f << format_full(r.time);
    for (double v : r.err_rarefaction) f << "," << format_full(v);
    for (double v : r.err_viscous) f << "," << format_full(v);
    for (double v : r.deriv_norm) f << "," << format_full(v);
    for (double v : r.gn_ratio) f << "," << format_full(v);
    f << "," << format_full(r.err_viscous[0] / std::log(2.0 + r.time)) << "\n";
  }
}

void write_checks_csv(const std::string& path, const std::vector<CheckResult>& checks) {
  std::ofstream f = open_out(path);
  f << "name,passed,measured,bound,tolerance,context\n";
  for (const CheckResult& c : checks) {
    f << c.name << "," << (c.passed ? "true" : "false") << "," << format_full(c.measured) << ","
      << format_full(c.bound) << "," << format_full(c.tolerance) << "," << csv_quote(c.context)
      << "\n";
  }
}

std::string checks_summary(const std::vector<CheckResult>& checks) {
  std::ostringstream out;
  for (const CheckResult& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": measured " << format_short(c.measured)
        << " vs bound " << format_short(c.bound) << " + tol " << format_short(c.tolerance) << "\n";
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f = open_out(path);
  f << content;
}

}  // namespace nlcd
