#include "abc/reporting.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "abc/collusion.hpp"
#include "abc/error.hpp"
#include "abc/risk.hpp"

namespace abc {

namespace {

std::string escape_cell(std::string text) {
  std::string out;
  for (char c : text) {
    if (c == '|') {
      out += "\\|";
    } else if (c == '\n') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += sep;
    out += item;
  }
  return out;
}

std::string pad(const std::string& text, std::size_t width) {
  return text.size() >= width ? text : text + std::string(width - text.size(), ' ');
}

}  // namespace

ModelStats compute_stats(const ThreatModel& model) {
  ModelStats stats;
  if (!model.roles.empty() || !model.assets.empty() || !model.modules.empty()) {
    stats.steps_covered = 1;
  }
  if (!model.categories.empty()) stats.steps_covered = 2;
  if (!model.matrices.empty()) stats.steps_covered = 3;
  if (!model.scores.empty()) stats.steps_covered = 4;
  stats.categories = model.categories.size();
  stats.excluded_categories = static_cast<std::uint64_t>(
      std::count_if(model.categories.begin(), model.categories.end(),
                    [](const ThreatCategory& c) { return c.excluded(); }));
  stats.matrices = model.matrices.size();
  std::set<std::string> distilled;
  for (const auto& m : model.matrices) {
    const Coverage cov = coverage(m);
    const auto ids = documented_scenario_ids(m);
    distilled.insert(ids.begin(), ids.end());
    stats.per_matrix.push_back({m.id, m.category_ref, m.role_scope.size(), cov.total,
                                cov.unresolved, cov.eliminated, cov.merged, cov.documented,
                                ids.size()});
    stats.total_cells += cov.total;
    stats.unresolved_cells += cov.unresolved;
    stats.remaining_cells += cov.documented + cov.unresolved;
  }
  stats.distilled_scenarios = distilled.size();
  stats.scored_scenarios = model.scores.size();
  return stats;
}

Json stats_to_json(const ModelStats& stats) {
  Json rows = Json::array();
  for (const auto& r : stats.per_matrix) {
    rows.push_back(Json{{"matrix_id", r.matrix_id},
                        {"category_ref", r.category_ref},
                        {"scope_size", r.scope_size},
                        {"cells", r.cells},
                        {"unresolved", r.unresolved},
                        {"eliminated", r.eliminated},
                        {"merged", r.merged},
                        {"documented", r.documented},
                        {"scenarios", r.scenarios}});
  }
  return Json{{"steps_covered", stats.steps_covered},
              {"categories", stats.categories},
              {"excluded_categories", stats.excluded_categories},
              {"matrices", stats.matrices},
              {"total_cells", stats.total_cells},
              {"remaining_cells", stats.remaining_cells},
              {"unresolved_cells", stats.unresolved_cells},
              {"distilled_scenarios", stats.distilled_scenarios},
              {"scored_scenarios", stats.scored_scenarios},
              {"per_matrix", std::move(rows)}};
}

std::string column_label(std::size_t index) {
  std::string label;
  ++index;
  while (index > 0) {
    --index;
    label.insert(label.begin(), static_cast<char>('A' + index % 26));
    index /= 26;
  }
  return label;
}

std::map<CellCoordinate, std::string> cell_glyphs(const CollusionMatrix& matrix) {
  const auto rows = attacker_sets(matrix.role_scope);
  const auto cols = target_sets(matrix.role_scope);
  std::map<PartySet, std::size_t> row_index;
  std::map<PartySet, std::size_t> col_index;
  for (std::size_t i = 0; i < rows.size(); ++i) row_index[rows[i]] = i;
  for (std::size_t i = 0; i < cols.size(); ++i) col_index[cols[i]] = i;

  std::map<CellCoordinate, std::string> out;
  for (const auto& [coord, r] : matrix.cells) {
    std::string g = "?";
    switch (r.state) {
      case CellState::Unresolved: g = "."; break;
      case CellState::Eliminated: g = "X"; break;
      case CellState::Merged: {
        g = "->?";
        if (!r.merge_target) break;
        auto ri = row_index.find(r.merge_target->attackers);
        auto ci = col_index.find(r.merge_target->targets);
        if (ri != row_index.end() && ci != col_index.end()) {
          g = "->" + column_label(ci->second) + std::to_string(ri->second + 1);
        }
        break;
      }
      case CellState::Documented: g = "D" + std::to_string(r.scenario_refs.size()); break;
    }
    out.emplace(coord, std::move(g));
  }
  return out;
}

std::string render_matrix_text(const CollusionMatrix& matrix) {
  const auto rows = attacker_sets(matrix.role_scope);
  const auto cols = target_sets(matrix.role_scope);
  const auto glyphs = cell_glyphs(matrix);
  auto glyph = [&](const CellCoordinate& coord) -> std::string {
    auto it = glyphs.find(coord);
    return it == glyphs.end() ? "?" : it->second;
  };

  std::vector<std::string> row_labels;
  std::size_t label_width = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    row_labels.push_back(std::to_string(i + 1) + " " + rows[i].to_string());
    label_width = std::max(label_width, row_labels.back().size());
  }
  std::vector<std::vector<std::string>> grid(rows.size());
  std::vector<std::size_t> widths(cols.size(), 0);
  for (std::size_t c = 0; c < cols.size(); ++c) widths[c] = column_label(c).size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      grid[r].push_back(glyph(CellCoordinate(rows[r], cols[c])));
      widths[c] = std::max(widths[c], grid[r][c].size());
    }
  }

  std::ostringstream out;
  out << "matrix " << matrix.id << " [" << matrix.category_ref << "] scope: "
      << join(matrix.role_scope, ", ") << "\n";
  out << "targets:";
  for (std::size_t c = 0; c < cols.size(); ++c) {
    out << " " << column_label(c) << "=" << cols[c].to_string();
  }
  out << "\n";
  out << pad("attackers", label_width);
  for (std::size_t c = 0; c < cols.size(); ++c) out << " | " << pad(column_label(c), widths[c]);
  out << "\n";
  out << std::string(label_width, '-');
  for (std::size_t c = 0; c < cols.size(); ++c) out << "-+-" << std::string(widths[c], '-');
  out << "\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << pad(row_labels[r], label_width);
    for (std::size_t c = 0; c < cols.size(); ++c) out << " | " << pad(grid[r][c], widths[c]);
    out << "\n";
  }
  return out.str();
}

ReportFormat report_format_from_string(std::string_view text) {
  if (text == "markdown") return ReportFormat::Markdown;
  if (text == "structured") return ReportFormat::Structured;
  throw Error(ErrorCode::InvalidArgument, "unknown report format: " + std::string(text));
}

std::string export_report(const ThreatModel& model, ReportFormat format) {
  if (format == ReportFormat::Structured) return canonical_dump(Json(model));

  std::ostringstream out;
  out << "# Threat model: " << (model.name.empty() ? "(unnamed)" : model.name) << "\n\n";
  out << "Model version " << model.version << ".\n\n";

  out << "## System model\n\n### Roles\n\n";
  if (model.roles.empty()) out << "_None._\n";
  for (const auto& r : model.roles) {
    out << "- **" << r.name << "**" << (r.description.empty() ? "" : ": " + r.description)
        << "\n";
  }
  out << "\n### Assets\n\n";
  if (model.assets.empty()) {
    out << "_None._\n";
  } else {
    out << "| Asset | Kind | Requirements | Instances |\n|---|---|---|---|\n";
    for (const auto& a : model.assets) {
      std::vector<std::string> reqs;
      for (const auto& r : a.security_requirements) reqs.push_back(r.id + ": " + r.statement);
      out << "| " << escape_cell(a.name) << " | " << to_string(a.kind) << " | "
          << escape_cell(join(reqs, "; ")) << " | " << escape_cell(join(a.instance_tags, ", "))
          << " |\n";
    }
  }
  out << "\n### Modules\n\n";
  if (model.modules.empty()) out << "_None._\n";
  for (const auto& m : model.modules) {
    out << "- **" << m.name << "** (assets: " << join(m.asset_refs, ", ") << "; "
        << m.network_model.nodes.size() << " nodes, " << m.network_model.edges.size()
        << " edges)" << (m.description.empty() ? "" : ": " + m.description) << "\n";
  }
  out << "\n### Assumptions\n\n";
  if (model.assumptions.empty()) out << "_None._\n";
  for (const auto& a : model.assumptions) out << "- " << a << "\n";
  out << "\n### Dependencies\n\n";
  if (model.dependencies.empty()) out << "_None._\n";
  for (const auto& d : model.dependencies) out << "- " << d << "\n";

  out << "\n## Threat categories\n\n";
  if (model.categories.empty()) {
    out << "_None._\n";
  } else {
    out << "| Asset | Threat category | Description | Origin | Status |\n"
           "|---|---|---|---|---|\n";
    for (const auto& c : model.categories) {
      std::string asset = c.asset_ref + (c.instance_tag ? " (" + *c.instance_tag + ")" : "");
      std::string status = c.excluded() ? "excluded: " + *c.exclusion : "included";
      out << "| " << escape_cell(asset) << " | " << escape_cell(c.name) << " | "
          << escape_cell(c.description) << " | " << to_string(c.origin) << " | "
          << escape_cell(status) << " |\n";
    }
    bool any_notes = false;
    for (const auto& c : model.categories) {
      if (c.notes.empty()) continue;
      if (!any_notes) out << "\nCoverage notes:\n\n";
      any_notes = true;
      out << "- `" << c.id << "`: " << c.notes << "\n";
    }
  }

  out << "\n## Collusion matrices\n\n";
  if (model.matrices.empty()) out << "_None._\n";
  for (const auto& m : model.matrices) {
    const Coverage cov = coverage(m);
    out << "### " << m.id << ": " << m.category_ref << "\n\n";
    out << "Coverage: " << (cov.total - cov.unresolved) << "/" << cov.total
        << " resolved (" << cov.eliminated << " eliminated, " << cov.merged << " merged, "
        << cov.documented << " documented, " << cov.unresolved << " unresolved).\n\n";
    out << "```\n" << render_matrix_text(m) << "```\n\n";
    bool header = false;
    for (const auto& [coord, res] : m.cells) {
      if (res.state != CellState::Eliminated && res.state != CellState::Merged) continue;
      if (!header) out << "Rationale:\n\n";
      header = true;
      out << "- `" << coord.to_string() << "` " << to_string(res.state);
      if (res.merge_target) out << " into `" << res.merge_target->to_string() << "`";
      out << ": " << res.rationale << "\n";
    }
    if (header) out << "\n";
  }
  out << "Coverage that spans matrices is recorded as an elimination whose rationale names the "
         "covering matrix.\n";

  out << "\n## Distilled threat scenarios\n\n";
  const auto ranked = ranked_scenarios(model);
  if (ranked.empty()) out << "_None._\n";
  for (const auto& [s, score] : ranked) {
    out << "### " << s.id << ": " << (s.title.empty() ? s.description : s.title) << "\n\n";
    if (score) {
      out << "Risk score " << score->score << " (likelihood " << score->likelihood
          << " x severity " << score->severity << ")"
          << (score->notes.empty() ? "" : ": " + score->notes) << "\n\n";
    } else {
      out << "Not scored.\n\n";
    }
    out << "- Attackers: " << s.attackers.to_string() << "\n";
    out << "- Targets: " << s.targets.to_string() << "\n";
    out << "- Assets: " << join(s.asset_refs, ", ") << "\n";
    out << "- Description: " << s.description << "\n";
    out << "- Action flow:\n";
    for (std::size_t i = 0; i < s.action_flow.size(); ++i) {
      out << "  " << (i + 1) << ". " << s.action_flow[i] << "\n";
    }
    if (!s.preconditions.empty()) {
      out << "- Preconditions:\n";
      for (const auto& p : s.preconditions) out << "  - " << p << "\n";
    }
    if (!s.capabilities.empty()) {
      out << "- Capabilities:\n";
      for (const auto& c : s.capabilities) out << "  - " << c << "\n";
    }
    std::vector<std::string> sources;
    for (const auto& src : s.source_cells) {
      sources.push_back(src.matrix_id + ":" + src.cell.to_string());
    }
    out << "- Source cells: " << join(sources, ", ") << "\n\n";
  }

  const ModelStats stats = compute_stats(model);
  out << "## Statistics\n\n";
  out << "| Aspect | Value |\n|---|---|\n";
  out << "| Steps covered | " << (stats.steps_covered == 0 ? "none" : "1 - " + std::to_string(stats.steps_covered)) << " |\n";
  out << "| Threat categories | " << stats.categories << " (" << stats.excluded_categories
      << " excluded) |\n";
  out << "| Collusion matrices | " << stats.matrices << " |\n";
  out << "| Total threat cases | " << stats.total_cells << " |\n";
  out << "| Cases after reduction | " << stats.remaining_cells << " |\n";
  out << "| Unresolved cases | " << stats.unresolved_cells << " |\n";
  out << "| Distilled threat scenarios | " << stats.distilled_scenarios << " |\n";
  out << "| Scored scenarios | " << stats.scored_scenarios << " |\n";
  return out.str();
}

}  // namespace abc
