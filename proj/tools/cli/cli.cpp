#include "cli.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "abc/abc.hpp"
#include "http/api_server.hpp"

namespace abc::cli {

namespace {

namespace fs = std::filesystem;

struct Globals {
  std::string model_path;
  bool json = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_json_file(const std::string& path) {
  try {
    return parse_json_text(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) {
      throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
    throw;
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

// "id|statement" or "id|statement|threat name".
SecurityRequirement parse_requirement(const std::string& text) {
  auto parts = split(text, '|');
  if (parts.size() < 2 || parts.size() > 3 || parts[0].empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "--req expects 'id|statement' or 'id|statement|threat name', got '" + text + "'");
  }
  return {parts[0], parts[1], parts.size() == 3 ? parts[2] : std::string{}};
}

class Session {
 public:
  Session(const Globals& g, std::ostream& out, std::ostream& err, Workbench::Clock clock)
      : g_(g), out_(out), err_(err), clock_(std::move(clock)) {}

  Workbench open() const { return Workbench::open(g_.model_path, clock_); }

  ModelDocument load_doc() const { return load(g_.model_path); }

  void mutate(const Operation& op) const {
    auto wb = open();
    auto doc = wb.apply(op);
    report(*doc, op);
  }

  void report(const ModelDocument& doc, const Operation& op) const {
    if (g_.json) {
      out_ << canonical_dump(Json{{"op", op.name}, {"version", doc.model.version}});
    } else {
      out_ << op.name << ": ok (model version " << doc.model.version << ")\n";
    }
  }

  void emit(const Json& j, const std::string& text) const {
    if (g_.json) {
      out_ << canonical_dump(j);
    } else {
      out_ << text;
    }
  }

  void warn(const std::string& message) const {
    if (!g_.json) err_ << "warning: " << message << "\n";
  }

  const Globals& globals() const { return g_; }
  std::ostream& out() const { return out_; }
  const Workbench::Clock& clock() const { return clock_; }

 private:
  const Globals& g_;
  std::ostream& out_;
  std::ostream& err_;
  Workbench::Clock clock_;
};

std::string stats_text(const ModelStats& s) {
  std::ostringstream out;
  out << "steps covered:             " << s.steps_covered << "\n"
      << "threat categories:         " << s.categories << " (" << s.excluded_categories
      << " excluded)\n"
      << "collusion matrices:        " << s.matrices << "\n"
      << "total threat cases:        " << s.total_cells << "\n"
      << "remaining after reduction: " << s.remaining_cells << "\n"
      << "unresolved cells:          " << s.unresolved_cells << "\n"
      << "distilled scenarios:       " << s.distilled_scenarios << "\n"
      << "scored scenarios:          " << s.scored_scenarios << "\n";
  for (const auto& m : s.per_matrix) {
    out << "  " << m.matrix_id << " [" << m.category_ref << "] scope " << m.scope_size << ": "
        << m.cells << " cells, " << m.unresolved << " unresolved, " << m.eliminated
        << " eliminated, " << m.merged << " merged, " << m.documented << " documented, "
        << m.scenarios << " scenarios\n";
  }
  return out.str();
}

std::string severity_name(Severity s) { return s == Severity::Error ? "error" : "warning"; }

std::string validation_text(const ValidationReport& report) {
  std::ostringstream out;
  for (const auto& issue : report.issues) {
    out << severity_name(issue.severity) << ": " << issue.location << ": " << issue.message << "\n";
  }
  out << report.error_count() << " error(s), " << report.warning_count() << " warning(s)\n";
  return out.str();
}

Json validation_json(const ValidationReport& report) {
  Json issues = Json::array();
  for (const auto& issue : report.issues) {
    issues.push_back({{"severity", severity_name(issue.severity)},
                      {"message", issue.message},
                      {"location", issue.location}});
  }
  return Json{{"issues", issues},
              {"errors", report.error_count()},
              {"warnings", report.warning_count()}};
}

volatile std::sig_atomic_t g_stop_requested = 0;

}  // namespace

Workbench::Clock clock_from_env() {
  if (const char* fixed = std::getenv("ABC_FIXED_TIMESTAMP"); fixed && *fixed) {
    std::string value = fixed;
    return [value] { return value; };
  }
  return utc_timestamp;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Workbench::Clock& clock) {
  Globals g;
  if (const char* env = std::getenv("ABC_MODEL_PATH"); env && *env) {
    g.model_path = env;
  } else {
    g.model_path = kDefaultModelPath;
  }

  CLI::App app{"Asset-based threat modeling workbench", "abc"};
  app.require_subcommand(1);
  app.add_option("-m,--model", g.model_path, "Model document (env ABC_MODEL_PATH)");
  app.add_flag("--json", g.json, "Machine-readable output and errors");

  Session s(g, out, err, clock);
  std::function<void()> action;

  // init
  auto* init = app.add_subcommand("init", "Create an empty model file");
  std::string init_name;
  bool init_force = false;
  init->add_option("name", init_name, "Model name")->required();
  init->add_flag("--force", init_force, "Overwrite an existing file");
  init->callback([&] {
    action = [&] {
      if (fs::exists(g.model_path) && !init_force) {
        throw Error(ErrorCode::IoError,
                    "'" + g.model_path + "' already exists (use --force to overwrite)");
      }
      Workbench wb(ModelDocument{}, fs::path(g.model_path), s.clock());
      const Operation op{"init", {{"name", init_name}}};
      s.report(*wb.apply(op), op);
    };
  });

  // role add|rm
  auto* role = app.add_subcommand("role", "Edit participant roles");
  role->require_subcommand(1);
  auto* role_add = role->add_subcommand("add", "Add or update a role");
  Role role_value;
  role_add->add_option("name", role_value.name)->required();
  role_add->add_option("-d,--description", role_value.description);
  role_add->callback([&] { action = [&] { s.mutate({"upsert_role", {{"role", role_value}}}); }; });
  auto* role_rm = role->add_subcommand("rm", "Remove a role");
  std::string role_rm_name;
  role_rm->add_option("name", role_rm_name)->required();
  role_rm->callback([&] { action = [&] { s.mutate({"remove_role", {{"name", role_rm_name}}}); }; });

  // asset add|rm
  auto* asset = app.add_subcommand("asset", "Edit assets");
  asset->require_subcommand(1);
  auto* asset_add = asset->add_subcommand("add", "Add or update an asset");
  std::string asset_name, asset_kind = "concrete", asset_class, asset_desc, asset_file;
  std::vector<std::string> asset_reqs, asset_tags;
  asset_add->add_option("name", asset_name, "Asset name (omit with --file)");
  asset_add->add_option("--kind", asset_kind, "concrete|abstract");
  asset_add->add_option("--class", asset_class, "Catalog asset class");
  asset_add->add_option("-d,--description", asset_desc);
  asset_add->add_option("--req", asset_reqs, "Requirement 'id|statement[|threat name]'");
  asset_add->add_option("--tag", asset_tags, "Instance tag");
  asset_add->add_option("--file", asset_file, "Asset as JSON");
  asset_add->callback([&] {
    action = [&] {
      Asset a;
      if (!asset_file.empty()) {
        a = read_json_file(asset_file).get<Asset>();
      } else {
        if (asset_name.empty()) throw Error(ErrorCode::InvalidArgument, "asset name is required");
        a.name = asset_name;
        a.kind = asset_kind_from_string(asset_kind);
        a.asset_class = asset_class;
        a.description = asset_desc;
        for (const auto& r : asset_reqs) a.security_requirements.push_back(parse_requirement(r));
        a.instance_tags = asset_tags;
      }
      s.mutate({"upsert_asset", {{"asset", a}}});
    };
  });
  auto* asset_rm = asset->add_subcommand("rm", "Remove an asset");
  std::string asset_rm_name;
  asset_rm->add_option("name", asset_rm_name)->required();
  asset_rm->callback([&] { action = [&] { s.mutate({"remove_asset", {{"name", asset_rm_name}}}); }; });

  // module add
  auto* module = app.add_subcommand("module", "Edit system modules");
  module->require_subcommand(1);
  auto* module_add = module->add_subcommand("add", "Add or update a module");
  std::string module_name, module_desc, module_net, module_file;
  std::vector<std::string> module_assets;
  module_add->add_option("name", module_name, "Module name (omit with --file)");
  module_add->add_option("-d,--description", module_desc);
  module_add->add_option("--asset", module_assets, "Asset handled by the module");
  module_add->add_option("--network-file", module_net, "Network model as JSON {nodes, edges}");
  module_add->add_option("--file", module_file, "Module as JSON");
  module_add->callback([&] {
    action = [&] {
      SystemModule m;
      if (!module_file.empty()) {
        m = read_json_file(module_file).get<SystemModule>();
      } else {
        if (module_name.empty()) throw Error(ErrorCode::InvalidArgument, "module name is required");
        m.name = module_name;
        m.description = module_desc;
        m.asset_refs = module_assets;
        if (!module_net.empty()) m.network_model = read_json_file(module_net).get<NetworkGraph>();
      }
      s.mutate({"upsert_module", {{"module", m}}});
    };
  });

  // assumption add / dependency add
  auto* assumption = app.add_subcommand("assumption", "Record system assumptions");
  assumption->require_subcommand(1);
  auto* assumption_add = assumption->add_subcommand("add", "Add an assumption");
  std::string assumption_text;
  assumption_add->add_option("text", assumption_text)->required();
  assumption_add->callback(
      [&] { action = [&] { s.mutate({"add_assumption", {{"text", assumption_text}}}); }; });
  auto* dependency = app.add_subcommand("dependency", "Record external dependencies");
  dependency->require_subcommand(1);
  auto* dependency_add = dependency->add_subcommand("add", "Add a dependency");
  std::string dependency_text;
  dependency_add->add_option("text", dependency_text)->required();
  dependency_add->callback(
      [&] { action = [&] { s.mutate({"add_dependency", {{"text", dependency_text}}}); }; });

  // category add
  auto* category = app.add_subcommand("category", "Edit threat categories");
  category->require_subcommand(1);
  auto* category_add = category->add_subcommand("add", "Add a manual category");
  std::string cat_asset, cat_name, cat_tag, cat_desc, cat_id, cat_notes, cat_file;
  std::vector<std::string> cat_negates;
  category_add->add_option("asset", cat_asset, "Asset name (omit with --file)");
  category_add->add_option("name", cat_name, "Category name");
  category_add->add_option("--tag", cat_tag, "Instance tag");
  category_add->add_option("--id", cat_id, "Explicit category id");
  category_add->add_option("-d,--description", cat_desc);
  category_add->add_option("--negates", cat_negates, "Negated requirement id");
  category_add->add_option("--notes", cat_notes);
  category_add->add_option("--file", cat_file, "Category as JSON");
  category_add->callback([&] {
    action = [&] {
      ThreatCategory c;
      if (!cat_file.empty()) {
        c = read_json_file(cat_file).get<ThreatCategory>();
      } else {
        c.id = cat_id;
        c.asset_ref = cat_asset;
        if (!cat_tag.empty()) c.instance_tag = cat_tag;
        c.name = cat_name;
        c.description = cat_desc;
        c.negates = cat_negates;
        c.notes = cat_notes;
      }
      s.mutate({"add_category", {{"category", c}}});
    };
  });

  // derive
  auto* derive = app.add_subcommand("derive", "Apply the catalog and derive categories");
  std::string derive_catalog;
  derive->add_option("--catalog", derive_catalog, "Replacement catalog file");
  derive->callback([&] {
    action = [&] {
      Json a = Json::object();
      if (!derive_catalog.empty()) {
        a["catalog"] = catalog_to_json(catalog_from_json(read_json_file(derive_catalog)));
      }
      auto wb = s.open();
      const auto before = wb.snapshot();
      // Surface unmatched catalog patterns before committing.
      const Catalog cat = a.contains("catalog") ? catalog_from_json(a["catalog"]) : default_catalog();
      for (const auto& w : apply_catalog(before->model, cat).warnings) s.warn(w);
      const Operation op{"derive", a};
      auto doc = wb.apply(op);
      if (!g.json) {
        out << "categories: " << before->model.categories.size() << " -> "
            << doc->model.categories.size() << "\n";
      }
      s.report(*doc, op);
    };
  });

  // exclude-category
  auto* exclude = app.add_subcommand("exclude-category", "Exclude a category with a rationale");
  std::string exclude_id, exclude_why;
  exclude->add_option("category-id", exclude_id)->required();
  exclude->add_option("--why", exclude_why, "Rationale")->required();
  exclude->callback([&] {
    action = [&] {
      s.mutate({"exclude_category", {{"category_id", exclude_id}, {"rationale", exclude_why}}});
    };
  });

  // matrix gen|show|list
  auto* matrix = app.add_subcommand("matrix", "Collusion matrices");
  matrix->require_subcommand(1);
  auto* matrix_gen = matrix->add_subcommand("gen", "Generate a collusion matrix");
  std::string gen_category, gen_scope;
  matrix_gen->add_option("category-id", gen_category)->required();
  matrix_gen->add_option("--scope", gen_scope, "Comma-separated role scope (default: all roles)");
  matrix_gen->callback([&] {
    action = [&] {
      Json a{{"category_id", gen_category}};
      if (!gen_scope.empty()) a["scope"] = split(gen_scope, ',');
      auto wb = s.open();
      const Operation op{"generate_matrix", a};
      auto doc = wb.apply(op);
      const auto& m = doc->model.matrices.back();
      if (auto w = scope_warning(m.role_scope.size())) s.warn(*w);
      if (g.json) {
        out << canonical_dump(Json{{"op", op.name},
                                   {"version", doc->model.version},
                                   {"matrix_id", m.id},
                                   {"cells", m.cells.size()}});
      } else {
        out << "generated " << m.id << " for " << m.category_ref << ": " << m.cells.size()
            << " cells (model version " << doc->model.version << ")\n";
      }
    };
  });
  auto* matrix_show = matrix->add_subcommand("show", "Render a matrix");
  std::string show_id;
  matrix_show->add_option("matrix-id", show_id)->required();
  matrix_show->callback([&] {
    action = [&] {
      const auto doc = s.load_doc();
      const auto& m = require_matrix(doc.model, show_id);
      std::string text = render_matrix_text(m);
      for (const auto& [coord, res] : m.cells) {
        if (res.state == CellState::Unresolved) continue;
        text += coord.to_string() + ": " + std::string(to_string(res.state));
        if (res.merge_target) text += " into " + res.merge_target->to_string();
        if (!res.rationale.empty()) text += " (" + res.rationale + ")";
        text += "\n";
      }
      s.emit(Json(m), text);
    };
  });
  auto* matrix_list = matrix->add_subcommand("list", "List matrices with coverage");
  matrix_list->callback([&] {
    action = [&] {
      const auto doc = s.load_doc();
      Json j = Json::array();
      std::ostringstream text;
      for (const auto& m : doc.model.matrices) {
        const auto c = coverage(m);
        j.push_back({{"id", m.id},
                     {"category_ref", m.category_ref},
                     {"role_scope", m.role_scope},
                     {"total", c.total},
                     {"unresolved", c.unresolved}});
        text << m.id << "  " << m.category_ref << "  cells " << c.total << "  unresolved "
             << c.unresolved << "\n";
      }
      s.emit(j, text.str());
    };
  });

  // cell eliminate|merge|document|reopen
  auto* cell = app.add_subcommand("cell", "Resolve collusion matrix cells");
  cell->require_subcommand(1);
  std::string cell_matrix, cell_id, cell_why, cell_into, cell_scenarios;
  auto cell_args = [&](CLI::App* sub) {
    sub->add_option("matrix-id", cell_matrix)->required();
    sub->add_option("cell-id", cell_id, "e.g. client+external->server")->required();
  };
  auto* cell_elim = cell->add_subcommand("eliminate", "Rule out a cell");
  cell_args(cell_elim);
  cell_elim->add_option("--why", cell_why, "Rationale")->required();
  cell_elim->callback([&] {
    action = [&] {
      s.mutate({"eliminate", {{"matrix_id", cell_matrix}, {"cell", cell_id}, {"rationale", cell_why}}});
    };
  });
  auto* cell_merge = cell->add_subcommand("merge", "Reduce a cell to another cell");
  cell_args(cell_merge);
  cell_merge->add_option("--into", cell_into, "Target cell id")->required();
  cell_merge->add_option("--why", cell_why, "Rationale")->required();
  cell_merge->callback([&] {
    action = [&] {
      s.mutate({"merge",
                {{"matrix_id", cell_matrix}, {"cell", cell_id}, {"into", cell_into}, {"rationale", cell_why}}});
    };
  });
  auto* cell_doc = cell->add_subcommand("document", "Document threat scenarios for a cell");
  cell_args(cell_doc);
  cell_doc->add_option("--scenario-file", cell_scenarios, "JSON scenario, list or {scenarios}")
      ->required();
  cell_doc->callback([&] {
    action = [&] {
      Json j = read_json_file(cell_scenarios);
      if (j.is_object() && j.contains("scenarios")) j = j.at("scenarios");
      if (j.is_object()) j = Json::array({j});
      s.mutate({"document", {{"matrix_id", cell_matrix}, {"cell", cell_id}, {"scenarios", j}}});
    };
  });
  auto* cell_reopen = cell->add_subcommand("reopen", "Return a cell to unresolved");
  cell_args(cell_reopen);
  cell_reopen->callback([&] {
    action = [&] { s.mutate({"reopen", {{"matrix_id", cell_matrix}, {"cell", cell_id}}}); };
  });

  // replay
  auto* replay_cmd = app.add_subcommand("replay", "Apply a recorded operation log");
  std::string replay_file;
  replay_cmd->add_option("log-file", replay_file)->required()->check(CLI::ExistingFile);
  replay_cmd->callback([&] {
    action = [&] {
      const auto ops = operations_from_json(read_json_file(replay_file));
      ModelDocument doc = fs::exists(g.model_path) ? load(g.model_path) : ModelDocument{};
      // The whole log is applied in memory and written once, so a failing
      // entry leaves the file untouched.
      for (std::size_t i = 0; i < ops.size(); ++i) {
        try {
          doc = record(doc, ops[i], s.clock()());
        } catch (const Error& e) {
          throw Error(e.code(), "log entry " + std::to_string(i + 1) + " (" + ops[i].name +
                                    "): " + e.what());
        }
      }
      save(doc, g.model_path);
      if (g.json) {
        out << canonical_dump(Json{{"op", "replay"},
                                   {"applied", ops.size()},
                                   {"version", doc.model.version}});
      } else {
        out << "replayed " << ops.size() << " operation(s) (model version " << doc.model.version
            << ")\n";
      }
    };
  });

  // score
  auto* score = app.add_subcommand("score", "Score a distilled scenario");
  std::string score_id, score_notes;
  int likelihood = 0, severity = 0;
  score->add_option("scenario-id", score_id)->required();
  score->add_option("--likelihood", likelihood, "1..5")->required();
  score->add_option("--severity", severity, "1..5")->required();
  score->add_option("--notes", score_notes);
  score->callback([&] {
    action = [&] {
      s.mutate({"score",
                {{"scenario_id", score_id},
                 {"likelihood", likelihood},
                 {"severity", severity},
                 {"notes", score_notes}}});
    };
  });

  // scenarios
  auto* scenarios = app.add_subcommand("scenarios", "List distilled scenarios by risk score");
  scenarios->callback([&] {
    action = [&] {
      const auto doc = s.load_doc();
      Json j = Json::array();
      std::ostringstream text;
      for (const auto& [sc, sco] : ranked_scenarios(doc.model)) {
        j.push_back({{"id", sc.id}, {"title", sc.title}, {"score", sco ? Json(sco->score) : Json()}});
        text << (sco ? std::to_string(sco->score) : std::string("-")) << "\t" << sc.id << "\t"
             << sc.title << "\n";
      }
      s.emit(j, text.str());
    };
  });

  // deposit
  auto* deposit = app.add_subcommand("deposit", "Minimum penalty deposit and deterrence check");
  std::string dep_cheat, dep_honest, dep_p = "1", dep_deposit;
  deposit->add_option("--cheat", dep_cheat, "Cheating payoff")->required();
  deposit->add_option("--honest", dep_honest, "Honest payoff")->required();
  deposit->add_option("--p", dep_p, "Detection probability in (0, 1]");
  deposit->add_option("--deposit", dep_deposit, "Deposit to check (default: the minimum)");
  deposit->callback([&] {
    action = [&] {
      IncentiveGame game;
      game.cheat_payoff = parse_rational(dep_cheat);
      game.honest_payoff = parse_rational(dep_honest);
      game.detection_probability = parse_rational(dep_p);
      const Rational minimum =
          min_deposit(game.cheat_payoff, game.honest_payoff, game.detection_probability);
      game.deposit = dep_deposit.empty() ? minimum : parse_rational(dep_deposit);
      validate_game(game);
      const auto result = is_deterred(game);
      Json j = game_to_json(game);
      j["min_deposit"] = rational_to_json(minimum);
      j["deterred"] = result.deterred;
      j["expected_cheat_payoff"] = rational_to_json(result.expected_cheat_payoff);
      std::ostringstream text;
      text << "min_deposit: " << format_rational(minimum) << "\n"
           << "deposit " << format_rational(game.deposit) << ": expected cheating payoff "
           << format_rational(result.expected_cheat_payoff) << " vs honest "
           << format_rational(game.honest_payoff) << " -> "
           << (result.deterred ? "deterred" : "NOT deterred") << "\n";
      s.emit(j, text.str());
    };
  });

  // stats
  auto* stats = app.add_subcommand("stats", "Model statistics");
  stats->callback([&] {
    action = [&] {
      const auto st = compute_stats(s.load_doc().model);
      s.emit(stats_to_json(st), stats_text(st));
    };
  });

  // report
  auto* report = app.add_subcommand("report", "Export the threat model report");
  std::string report_format = "markdown", report_output;
  report->add_option("--format", report_format, "markdown|structured");
  report->add_option("-o,--output", report_output, "Write to a file instead of stdout");
  report->callback([&] {
    action = [&] {
      const auto doc = s.load_doc();
      const auto format = report_format_from_string(report_format);
      const std::string text = format == ReportFormat::Structured ? serialize_document(doc)
                                                                  : export_report(doc.model, format);
      if (report_output.empty()) {
        out << text;
      } else {
        std::ofstream f(report_output, std::ios::binary);
        if (!f) throw Error(ErrorCode::IoError, "cannot write '" + report_output + "'");
        f << text;
      }
    };
  });

  // validate
  auto* validate = app.add_subcommand("validate", "Validate the model");
  validate->callback([&] {
    action = [&] {
      const auto r = validate_model(s.load_doc().model);
      s.emit(validation_json(r), validation_text(r));
      if (r.has_errors()) throw Error(ErrorCode::InvariantViolation, "model has validation errors");
    };
  });

  // serve
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API on loopback");
  int serve_port = http::kDefaultPort;
  std::string serve_host = http::kDefaultHost;
  serve->add_option("--port", serve_port, "Port (default 8750)");
  serve->add_option("--host", serve_host, "Bind address");
  serve->callback([&] {
    action = [&] {
      Workbench wb = Workbench::open(g.model_path, s.clock());
      http::ApiServer server(wb);
      if (!server.bind(serve_host, serve_port)) {
        throw Error(ErrorCode::IoError,
                    "cannot bind " + serve_host + ":" + std::to_string(serve_port));
      }
      err << "serving " << g.model_path << " on http://" << serve_host << ":" << serve_port
          << "\n";
      std::signal(SIGINT, [](int) { g_stop_requested = 1; });
      std::signal(SIGTERM, [](int) { g_stop_requested = 1; });
      std::thread watcher([&] {
        while (!g_stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        server.stop();
      });
      server.listen();
      g_stop_requested = 1;
      watcher.join();
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (action) action();
    return 0;
  } catch (const Error& e) {
    if (g.json) {
      out << canonical_dump(
          Json{{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}});
    } else {
      err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    }
    return 1;
  } catch (const Json::exception& e) {
    if (g.json) {
      out << canonical_dump(Json{{"error", {{"code", "InvalidArgument"}, {"message", e.what()}}}});
    } else {
      err << "error [InvalidArgument]: " << e.what() << "\n";
    }
    return 1;
  }
}

}  // namespace abc::cli
