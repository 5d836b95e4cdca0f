#include "mbm/table_io.hpp"

#include "mbm/errors.hpp"

#include <cerrno>
#include <cmath>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

namespace mbm {

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw LookupError("table has no column '" + name + "'");
}

std::vector<std::size_t> Table::numbered_columns(const std::string& prefix) const {
  std::vector<std::size_t> out;
  for (int i = 1;; ++i) {
    const std::string name = prefix + std::to_string(i);
    bool found = false;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == name) {
        out.push_back(c);
        found = true;
        break;
      }
    }
    if (!found) return out;
  }
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_number(const std::string& text) {
  if (text.empty()) throw InputError("empty numeric cell");
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
  if (end == text.c_str() || *end != '\0') throw InputError("not a number: '" + text + "'");
  return value;
}

namespace {

std::string quote_if_needed(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

void append_vector(std::vector<std::string>& row, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(format_number(v[i]));
}

void append_names(std::vector<std::string>& header, const std::string& prefix, Eigen::Index count) {
  for (Eigen::Index i = 1; i <= count; ++i) header.push_back(prefix + std::to_string(i));
}

}  // namespace

std::string to_csv(const Table& table) {
  std::ostringstream out;
  const auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << quote_if_needed(row[i]);
    out << '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
  return out.str();
}

Table parse_csv(const std::string& text) {
  Table table;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split_line(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw InputError("row " + std::to_string(table.rows.size() + 1) + " has " +
                       std::to_string(cells.size()) + " cells, header has " +
                       std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw InputError("table has no header row");
  return table;
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

void write_csv_atomic(const std::filesystem::path& path, const Table& table) {
  write_text_atomic(path, to_csv(table));
}

Table trace_table(const RunTrace& trace, int n, int m) {
  Table table;
  table.header = {"k", "tau"};
  append_names(table.header, "x", n);
  append_names(table.header, "f", m);
  table.header.insert(table.header.end(), {"phi", "inner_iterations", "inner_status"});
  append_names(table.header, "alpha", m);
  table.header.push_back("kkt_residual");

  for (const TraceRow& r : trace.rows) {
    std::vector<std::string> row{std::to_string(r.k), format_number(r.tau)};
    append_vector(row, r.x);
    append_vector(row, r.f);
    row.push_back(format_number(r.phi));
    row.push_back(std::to_string(r.inner_iterations));
    row.emplace_back(to_string(r.inner_status));
    if (r.weights) {
      append_vector(row, r.weights->alpha);
      row.push_back(format_number(r.weights->residual));
    } else {
      row.resize(row.size() + static_cast<std::size_t>(m) + 1);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table front_table(const std::vector<SweepResult>& results, int n, int m,
                  const std::vector<std::optional<Classification>>& classes) {
  Eigen::Index params = 0;
  for (const auto& r : results) params = std::max(params, r.phi.parameters().size());

  Table table;
  table.header = {"index"};
  append_names(table.header, "p", params);
  append_names(table.header, "x", n);
  append_names(table.header, "f", m);
  table.header.insert(table.header.end(), {"status", "classification"});

  for (std::size_t i = 0; i < results.size(); ++i) {
    const SweepResult& r = results[i];
    std::vector<std::string> row{std::to_string(r.index)};
    append_vector(row, r.phi.parameters());
    row.resize(1 + static_cast<std::size_t>(params));
    if (r.x_final.size() == n) {
      append_vector(row, r.x_final);
    } else {
      row.resize(row.size() + static_cast<std::size_t>(n));
    }
    if (r.f_final.size() == m) {
      append_vector(row, r.f_final);
    } else {
      row.resize(row.size() + static_cast<std::size_t>(m));
    }
    row.emplace_back(to_string(r.status));
    row.push_back(i < classes.size() && classes[i] ? std::string(to_string(*classes[i])) : "");
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<Vector> read_points(const Table& table, int n) {
  const auto cols = table.numbered_columns("x");
  if (static_cast<int>(cols.size()) < n) {
    throw InputError("table needs columns x1..x" + std::to_string(n));
  }
  std::vector<Vector> points;
  for (const auto& row : table.rows) {
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = parse_number(row[cols[static_cast<std::size_t>(i)]]);
    points.push_back(std::move(x));
  }
  return points;
}

}  // namespace mbm
