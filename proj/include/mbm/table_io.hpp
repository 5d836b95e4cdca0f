#pragma once

#include "mbm/mbm.hpp"
#include "mbm/oracles.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mbm {

/// Comma-separated table with a header row. Cells are kept as text.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; LookupError if absent.
  std::size_t column(const std::string& name) const;
  /// Indices of the columns named prefix1, prefix2, ... in order.
  std::vector<std::size_t> numbered_columns(const std::string& prefix) const;
};

/// 17 significant digits, so values survive a text round trip exactly.
std::string format_number(double value);
/// Strict decimal parse; InputError on trailing junk or an empty cell.
double parse_number(const std::string& text);

std::string to_csv(const Table& table);
Table parse_csv(const std::string& text);
Table read_csv(const std::filesystem::path& path);

/// Writes via a temporary sibling file and a rename, so readers never see
/// a partial file. Creates missing parent directories.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_csv_atomic(const std::filesystem::path& path, const Table& table);

/// Columns k, tau, x1..xn, f1..fm, phi, inner_iterations, inner_status,
/// alpha1..alpham, kkt_residual. Alpha and residual cells are blank for rows
/// without recovered weights.
Table trace_table(const RunTrace& trace, int n, int m);

/// One row per family member: index, p1..pk (family parameters), x1..xn,
/// f1..fm, status, classification (blank when not classified).
Table front_table(const std::vector<SweepResult>& results, int n, int m,
                  const std::vector<std::optional<Classification>>& classes = {});

/// Rows of x1..xn read back from a table (e.g. a candidate file).
std::vector<Vector> read_points(const Table& table, int n);

}  // namespace mbm
