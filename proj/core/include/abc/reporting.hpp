#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "abc/model.hpp"
#include "abc/serialization.hpp"

namespace abc {

struct MatrixStats {
  std::string matrix_id;
  std::string category_ref;
  std::size_t scope_size = 0;
  std::uint64_t cells = 0;
  std::uint64_t unresolved = 0;
  std::uint64_t eliminated = 0;
  std::uint64_t merged = 0;
  std::uint64_t documented = 0;
  std::uint64_t scenarios = 0;

  bool operator==(const MatrixStats&) const = default;
};

struct ModelStats {
  // Highest step with work recorded (1 system model, 2 categories,
  // 3 matrices, 4 risk scores); 0 for an empty model.
  int steps_covered = 0;
  std::uint64_t categories = 0;
  std::uint64_t excluded_categories = 0;
  std::uint64_t matrices = 0;
  // Threat cases before reduction (every cell).
  std::uint64_t total_cells = 0;
  // Cases left after reduction: documented plus still unresolved cells.
  std::uint64_t remaining_cells = 0;
  std::uint64_t unresolved_cells = 0;
  std::uint64_t distilled_scenarios = 0;
  std::uint64_t scored_scenarios = 0;
  std::vector<MatrixStats> per_matrix;

  bool operator==(const ModelStats&) const = default;
};

ModelStats compute_stats(const ThreatModel& model);
Json stats_to_json(const ModelStats& stats);

// Column label for a zero-based index: A..Z, AA, AB, ...
std::string column_label(std::size_t index);

// Display glyph per cell (see render_matrix_text).
std::map<CellCoordinate, std::string> cell_glyphs(const CollusionMatrix& matrix);

// ASCII grid. Rows are attacker sets and columns target sets, both in
// canonical order. Glyphs: "." unresolved, "X" eliminated, "->B3" merged
// into column B row 3, "D<k>" documented with k scenarios.
std::string render_matrix_text(const CollusionMatrix& matrix);

enum class ReportFormat { Markdown, Structured };

ReportFormat report_format_from_string(std::string_view text);

// Markdown report, or for Structured the canonical model JSON.
std::string export_report(const ThreatModel& model, ReportFormat format);

}  // namespace abc
