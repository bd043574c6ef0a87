#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pmk/budget.hpp"
#include "pmk/camera.hpp"
#include "pmk/layout.hpp"
#include "pmk/model_io.hpp"
#include "pmk/msc.hpp"

using json = nlohmann::ordered_json;
using namespace pmk;

namespace {

constexpr int kOk = 0;
constexpr int kFindings = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
  out << text;
}

ModelDoc load_model(const std::string& path) {
  std::string text = read_file(path);
  try {
    return parse_model(text);
  } catch (const ParseError& e) {
    throw UsageError(path + ":" + e.what());
  }
}

const ColouredNet& pick_net(const ModelDoc& doc, const std::string& name) {
  if (const ColouredNet* n = doc.find_net(name)) return *n;
  throw UsageError("model has no net '" + name + "'");
}

json triple_json(const Triple& t) {
  return json{{"best", t.best}, {"expected", t.expected}, {"worst", t.worst}};
}

json envelope_json(const CostEnvelope& c) {
  return json{{"time", triple_json(c.time)}, {"energy", triple_json(c.energy)}};
}

json assignment_json(const DeploymentAssignment& a) {
  json out = json::object();
  for (const auto& [op, t] : a) out[op] = std::string(to_string(t));
  return out;
}

json report_json(const ReadabilityReport& r) {
  json switches = json::object();
  for (const auto& [c, k] : r.side_switches) switches[c] = k;
  return json{{"crossings", r.crossings},
              {"side_switches", switches},
              {"side_switches_total", r.side_switches_total},
              {"sync_arrows", r.sync_arrows},
              {"unsided", r.unsided},
              {"composite", r.composite}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

DeploymentMatrix matrix_of(const ModelDoc& doc) { return doc.matrix.value_or(camera_deployment_matrix()); }
ResourceProfile profile_of(const ModelDoc& doc) { return doc.profile.value_or(camera_default_profile()); }
BudgetConfig config_of(const ModelDoc& doc) { return doc.config.value_or(BudgetConfig{}); }

// The lexicographically first allowed target for every operation of the net.
DeploymentAssignment first_allowed(const ColouredNet& net, const DeploymentMatrix& matrix) {
  DeploymentAssignment a;
  for (const auto& op : net_operations(net)) {
    auto opts = deployment_options(op, matrix);
    if (!opts.empty()) a[op] = *opts.begin();
  }
  return a;
}

DeploymentAssignment first_allowed(const ModelDoc& doc, const DeploymentMatrix& matrix) {
  DeploymentAssignment a;
  for (const auto& net : doc.nets) {
    for (const auto& [op, t] : first_allowed(net, matrix)) a.emplace(op, t);
  }
  return a;
}

// ---- check

struct CheckOutput {
  std::string text;
  std::size_t findings = 0;
};

CheckOutput run_check(const ModelDoc& doc) {
  CheckOutput out;
  std::ostringstream os;
  for (const auto& net : doc.nets) {
    auto v = validate_net(net);
    out.findings += v.size();
    os << "net " << net.name << ": " << (v.empty() ? "ok" : std::to_string(v.size()) + " violation(s)") << "\n";
    for (const auto& x : v) os << "  " << x.kind << ": " << x.message << "\n";
  }
  for (const auto& a : doc.automata) {
    try {
      (void)a.leaf_transitions();
      os << "automaton " << a.name() << ": ok\n";
    } catch (const ModeError& e) {
      ++out.findings;
      os << "automaton " << a.name() << ": " << e.what() << "\n";
    }
  }
  if (doc.profile) {
    try {
      check_profile(*doc.profile, matrix_of(doc));
      os << "profile: ok\n";
    } catch (const BudgetError& e) {
      ++out.findings;
      os << "profile: " << e.what() << "\n";
    }
  }
  if (doc.config) {
    try {
      check_config(*doc.config);
      os << "config: ok\n";
    } catch (const BudgetError& e) {
      ++out.findings;
      os << "config: " << e.what() << "\n";
    }
  }
  out.text = os.str();
  return out;
}

// ---- simulate

std::vector<CameraEvent> load_scenario(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError("scenario '" + path + "': " + e.what());
  }
  if (!j.is_object() || !j.contains("events") || !j["events"].is_array()) {
    throw UsageError("scenario '" + path + "': expected an object with an 'events' array");
  }
  std::vector<CameraEvent> events;
  for (const auto& e : j["events"]) {
    if (!e.is_object() || !e.contains("kind") || !e["kind"].is_string() || !e.contains("at") ||
        !e["at"].is_number_integer()) {
      throw UsageError("scenario '" + path + "': each event needs a string 'kind' and an integer 'at'");
    }
    auto kind = camera_event_from_string(e["kind"].get<std::string>());
    if (!kind) throw UsageError("scenario '" + path + "': unknown event '" + e["kind"].get<std::string>() + "'");
    events.push_back({*kind, e["at"].get<std::int64_t>()});
  }
  return events;
}

json scenario_json(const ScenarioResult& r, std::uint64_t seed, const DeploymentAssignment& a) {
  json trace = json::array();
  for (const auto& f : r.trace) trace.push_back({{"at", f.at}, {"mode", f.mode}, {"transition", f.transition}});
  json timeline = json::array();
  for (const auto& t : r.timeline) {
    json e{{"at", t.at}, {"from", t.from}, {"to", t.to}, {"event", t.event}};
    e["frame"] = t.frame ? json(*t.frame) : json(nullptr);
    timeline.push_back(e);
  }
  return json{{"seed", seed},
              {"assignment", assignment_json(a)},
              {"trace", trace},
              {"timeline", timeline},
              {"final_mode", r.final_mode},
              {"frames_shot", r.frames_shot},
              {"cost", envelope_json(r.cost)}};
}

json simulate(const ModelDoc& doc, const std::vector<CameraEvent>& events, std::uint64_t seed) {
  DeploymentMatrix matrix = matrix_of(doc);
  DeploymentAssignment a = first_allowed(doc, matrix);
  if (a.empty()) a = first_allowed(build_hs_net(), matrix);
  ScenarioResult r = run_scenario(events, config_of(doc), a, profile_of(doc));
  return scenario_json(r, seed, a);
}

// ---- budget

std::string mode_net(const ModelDoc& doc, const std::string& mode) {
  for (const auto& a : doc.automata) {
    const Mode* m = a.find_mode(mode);
    if (m && m->refinement) return m->refinement->name;
  }
  throw UsageError("no automaton refines mode '" + mode + "'");
}

json budget(const ModelDoc& doc, Objective objective, const std::string& mode, const std::string& net_name) {
  std::string chosen = net_name.empty() ? mode_net(doc, mode) : net_name;
  const ColouredNet& net = pick_net(doc, chosen);
  BudgetConfig cfg = config_of(doc);
  AssignmentResult r = optimize_assignment(net, matrix_of(doc), profile_of(doc), objective, mode);
  auto burst = burst_feasibility(cfg);
  return json{{"objective", std::string(to_string(objective))},
              {"mode", mode},
              {"net", chosen},
              {"feasible", true},
              {"assignment", assignment_json(r.assignment)},
              {"objective_value", r.objective},
              {"envelope", envelope_json(r.cost)},
              {"first_delayed_frame", burst ? json(*burst) : json(nullptr)},
              {"max_frames", max_frames(cfg)}};
}

// ---- layout

struct LayoutOutput {
  json report;
  std::string dot;
  std::string baseline_dot;
};

LayoutOutput layout(const ModelDoc& doc, const std::string& net_name, bool optimize,
                    const std::string& swap_after) {
  const ColouredNet& net = pick_net(doc, net_name);
  std::map<std::string, std::string> colours;
  if (auto it = doc.colours.find(net_name); it != doc.colours.end()) colours = it->second;
  Diagram d = layered_layout(net, colours);
  if (!swap_after.empty()) {
    if (!d.find(swap_after)) throw UsageError("net has no node '" + swap_after + "'");
    d = swap_lanes_after(d, swap_after);
  }
  LayoutOutput out;
  out.baseline_dot = render_dot(d);
  json report{{"net", net_name}, {"optimized", optimize}};
  if (optimize) {
    LayoutResult r = optimize_layout(net, d);
    report["before"] = report_json(r.before);
    report["after"] = report_json(r.after);
    report["side_switches_after"] = r.after.side_switches_total;
    report["equivalence_checked"] = r.equivalence_checked;
    report["diagnostic"] = r.diagnostic ? json(*r.diagnostic) : json(nullptr);
    out.dot = render_dot(r.diagram);
  } else {
    ReadabilityReport r = readability(d);
    report["before"] = report_json(r);
    report["after"] = report_json(r);
    report["side_switches_after"] = r.side_switches_total;
    report["equivalence_checked"] = false;
    report["diagnostic"] = nullptr;
    out.dot = out.baseline_dot;
  }
  out.report = report;
  return out;
}

// ---- export-msc

std::string export_msc(const ModelDoc& doc, const std::string& automaton, const std::string& net_name,
                       const std::vector<std::string>& trace) {
  DeploymentMatrix matrix = matrix_of(doc);
  DeploymentAssignment a = first_allowed(doc, matrix);
  if (!net_name.empty()) {
    const ColouredNet& net = pick_net(doc, net_name);
    std::vector<std::string> steps = trace.empty() ? canonical_trace(net) : trace;
    return render_msc(trace_to_msc(net, steps, a, net_name));
  }
  const ModeAutomaton* aut = automaton.empty() ? (doc.automata.empty() ? nullptr : &doc.automata.front())
                                               : doc.find_automaton(automaton);
  if (!aut) throw UsageError("model has no automaton '" + automaton + "'");
  return render_msc(modes_to_hmsc(*aut, a));
}

// ---- demo-camera

std::vector<CameraEvent> burst_script() {
  return {{CameraEventKind::FullPress, 0}, {CameraEventKind::Hold, 100}, {CameraEventKind::Release, 120}};
}

std::vector<CameraEvent> single_script() {
  return {{CameraEventKind::SelectSF, 0}, {CameraEventKind::FullPress, 10}, {CameraEventKind::Release, 20}};
}

json script_json(const std::vector<CameraEvent>& events) {
  json arr = json::array();
  for (const auto& e : events) arr.push_back({{"kind", std::string(to_string(e.kind))}, {"at", e.at}});
  return json{{"events", arr}};
}

void demo_camera(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  ModelDoc doc = camera_model_doc();
  write_file(dir / "camera.pmk", serialize_model(doc));
  write_file(dir / "check.txt", run_check(doc).text);

  LayoutOutput lay = layout(doc, "HS", true, "do AS");
  write_file(dir / "hs_baseline.dot", lay.baseline_dot);
  write_file(dir / "hs_optimized.dot", lay.dot);
  write_file(dir / "layout_report.json", dump(lay.report));

  write_file(dir / "budget_time.json", dump(budget(doc, Objective::MinWorstTime, "HS", "")));
  write_file(dir / "budget_energy.json", dump(budget(doc, Objective::MinWorstEnergy, "HS", "")));
  write_file(dir / "budget_idle.json", dump(budget(doc, Objective::MinWorstEnergy, "IDLE", "")));

  write_file(dir / "camera.msc", export_msc(doc, "CameraMode", "", {}));

  write_file(dir / "scenario_burst.json", dump(script_json(burst_script())));
  write_file(dir / "scenario_single.json", dump(script_json(single_script())));
  write_file(dir / "simulate_burst.json", dump(simulate(doc, burst_script(), 1)));
  write_file(dir / "simulate_single.json", dump(simulate(doc, single_script(), 1)));
}

std::vector<std::string> split_trace(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) std::cout << text;
  else write_file(out_path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pmkit: coloured nets, mode automata and resource budgets for the camera case study"};
  app.require_subcommand(1);

  std::string model_path, scenario_path, objective_name = "time", mode = "HS", net_name, out_path,
                                         report_path, swap_after, automaton, trace, out_dir = "demo";
  std::uint64_t seed = 1;
  bool optimize = false;

  auto* check = app.add_subcommand("check", "Validate every net, automaton, profile and config");
  check->add_option("model", model_path, "Model file")->required();

  auto* sim = app.add_subcommand("simulate", "Run a camera scenario and print trace and timeline JSON");
  sim->add_option("model", model_path, "Model file")->required();
  sim->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  sim->add_option("--seed", seed, "Seed recorded in the report");
  sim->add_option("--out", out_path, "Write JSON here instead of stdout");

  auto* bud = app.add_subcommand("budget", "Optimal deployment assignment and cost envelope");
  bud->add_option("model", model_path, "Model file")->required();
  bud->add_option("--objective", objective_name, "time or energy")
      ->check(CLI::IsMember({"time", "energy"}));
  bud->add_option("--mode", mode, "Mode context (IDLE excludes DSP)");
  bud->add_option("--net", net_name, "Net to assign (defaults to the mode's refinement)");
  bud->add_option("--out", out_path, "Write JSON here instead of stdout");

  auto* lay = app.add_subcommand("layout", "Layered diagram, readability report and DOT");
  lay->add_option("model", model_path, "Model file")->required();
  lay->add_option("--net", net_name, "Net to draw")->required();
  lay->add_flag("--optimize", optimize, "Apply the readability rules");
  lay->add_option("--swap-after", swap_after, "Swap the coloured sides below this node first");
  lay->add_option("--out", out_path, "DOT output file")->required();
  lay->add_option("--report", report_path, "Write the JSON report here instead of stdout");

  auto* msc = app.add_subcommand("export-msc", "Message sequence charts");
  msc->add_option("model", model_path, "Model file")->required();
  msc->add_option("--automaton", automaton, "Automaton for the high-level chart");
  msc->add_option("--net", net_name, "Chart a single net instead");
  msc->add_option("--trace", trace, "Comma-separated transitions (default: canonical trace)");
  msc->add_option("--out", out_path, "Write here instead of stdout");

  auto* demo = app.add_subcommand("demo-camera", "Regenerate all camera artifacts");
  demo->add_option("--out-dir", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*check) {
      CheckOutput out = run_check(load_model(model_path));
      std::cout << out.text;
      return out.findings ? kFindings : kOk;
    }
    if (*sim) {
      ModelDoc doc = load_model(model_path);
      emit(dump(simulate(doc, load_scenario(scenario_path), seed)), out_path);
      return kOk;
    }
    if (*bud) {
      ModelDoc doc = load_model(model_path);
      Objective o = objective_name == "time" ? Objective::MinWorstTime : Objective::MinWorstEnergy;
      try {
        emit(dump(budget(doc, o, mode, net_name)), out_path);
      } catch (const BudgetError& e) {
        emit(dump(json{{"objective", std::string(to_string(o))}, {"mode", mode}, {"feasible", false},
                       {"error", e.what()}}),
             out_path);
        return kFindings;
      }
      return kOk;
    }
    if (*lay) {
      LayoutOutput out = layout(load_model(model_path), net_name, optimize, swap_after);
      write_file(out_path, out.dot);
      emit(dump(out.report), report_path);
      return out.report["diagnostic"].is_null() ? kOk : kFindings;
    }
    if (*msc) {
      emit(export_msc(load_model(model_path), automaton, net_name, split_trace(trace)), out_path);
      return kOk;
    }
    if (*demo) {
      demo_camera(out_dir);
      return kOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFindings;
  }
  return kUsage;
}
