#include "pmk/camera.hpp"

#include <algorithm>

namespace pmk {

namespace {

Arc arc(std::string place, std::string symbol = "s", std::optional<std::string> sync = std::nullopt) {
  return Arc{std::move(place), {ArcTerm{Expr::constant(1), std::move(symbol)}}, std::move(sync)};
}

Transition transition(std::string name, std::string component, std::vector<Arc> in,
                      std::vector<Arc> out, std::optional<std::string> op = std::nullopt) {
  Transition t;
  t.name = std::move(name);
  t.component = std::move(component);
  t.inputs = std::move(in);
  t.outputs = std::move(out);
  t.operation = std::move(op);
  return t;
}

Place place(std::string name, std::string colour, std::string component,
            std::vector<std::pair<std::string, std::int64_t>> initial = {}) {
  return Place{std::move(name), std::move(colour), std::move(component), std::nullopt,
               std::move(initial)};
}

}  // namespace

ColouredNet build_hs_net(const HsNetOptions& o) {
  ColouredNet n;
  n.name = o.name;
  n.colour_sets = {{"Sig", {"s"}}, {"Img", {"raw", "proc"}}};
  n.components = {{"HS_SHOOT", std::nullopt},
                  {"HS_IMGPROC", std::nullopt},
                  {"Motors", Site::Motors},
                  {"Buffer", Site::Buffer},
                  {"Flash", Site::Flash}};
  n.variables = {
      {"BufSz", VarKind::Global, "", std::nullopt, o.buffer_capacity},
      {"DspEnabled", VarKind::Global, "", std::nullopt, 1},
      {"shotCount", VarKind::Counter, "HS_IMGPROC", o.frames, 0},
      {"storedCount", VarKind::Counter, "HS_IMGPROC", o.frames, 0},
  };

  n.places = {
      place("ready", "Sig", "HS_SHOOT", {{"s", 1}}),
      place("bf_sync", "Sig", "HS_SHOOT", {{"s", 1}}),
      place("focusing", "Sig", "HS_SHOOT"),
      place("focused", "Sig", "HS_SHOOT"),
      place("metered", "Sig", "HS_SHOOT"),
      place("shutter", "Sig", "Motors"),
      place("sensor", "Img", "HS_IMGPROC"),
      place("buffer", "Img", "Buffer"),
      place("shot_sync", "Sig", "HS_IMGPROC"),
      place("check", "Sig", "HS_IMGPROC"),
      place("full", "Sig", "HS_IMGPROC"),
      place("store_idle", "Sig", "HS_IMGPROC", {{"s", 1}}),
      place("flash", "Img", "Flash"),
  };
  for (auto& p : n.places) {
    if (p.name == "buffer") p.capacity = o.buffer_capacity;
  }

  const std::string occupancy = "shotCount - storedCount";
  auto& ts = n.transitions;
  ts.push_back(transition("Shoot_Sync", "HS_SHOOT", {arc("ready"), arc("bf_sync", "s", "storedCount")},
                          {arc("focusing")}));
  ts.push_back(transition("do AF", "HS_SHOOT", {arc("focusing")}, {arc("focused")}, "AF"));
  ts.push_back(transition("do AE", "HS_SHOOT", {arc("focused")}, {arc("metered")}, "AE"));
  ts.push_back(transition("do AS", "HS_SHOOT", {arc("metered")}, {arc("shutter")}, "AS"));
  ts.push_back(transition("Shoot", "Motors", {arc("shutter")}, {arc("sensor", "raw"), arc("ready")}));

  Transition ib = transition("do IB", "HS_IMGPROC", {arc("sensor", "raw")},
                             {arc("buffer", "raw"), arc("shot_sync", "s", "shotCount"), arc("check")},
                             "IB");
  ib.assignments = {{"shotCount", parse_expr("shotCount + 1")}};
  ts.push_back(ib);
  // IP works on the buffered image in place.
  ts.push_back(transition("do IP", "HS_IMGPROC", {arc("buffer", "raw")}, {arc("buffer", "proc")}, "IP"));

  Transition on_bf = transition("on BF", "HS_IMGPROC", {arc("check")}, {arc("full")}, "BC");
  Transition no_bf = transition("no BF", "HS_IMGPROC", {arc("check")},
                                {arc("bf_sync", "s", "storedCount")}, "BC");
  Transition bf_sync = transition("BF_Sync", "HS_IMGPROC", {arc("full")},
                                  {arc("bf_sync", "s", "storedCount")}, "BC");
  bf_sync.guard = parse_expr(occupancy + " < BufSz");
  if (o.probabilistic_bc) {
    no_bf.probability = o.p_no_bf;
    on_bf.probability = o.p_on_bf;
  } else {
    on_bf.guard = parse_expr(occupancy + " == BufSz");
    no_bf.guard = parse_expr(occupancy + " < BufSz");
  }
  ts.push_back(on_bf);
  ts.push_back(no_bf);
  ts.push_back(bf_sync);

  Transition is = transition("do IS", "HS_IMGPROC",
                             {arc("buffer", "proc"), arc("shot_sync", "s", "shotCount"), arc("store_idle")},
                             {arc("flash", "proc"), arc("store_idle")}, "IS");
  is.assignments = {{"storedCount", parse_expr("storedCount + 1")}};
  ts.push_back(is);
  return n;
}

ColouredNet build_idle_net() {
  ColouredNet n;
  n.name = "IDLE";
  n.colour_sets = {{"Sig", {"s"}}};
  n.components = {{"IDLE_CTRL", std::nullopt}};
  n.variables = {
      {"AutoAF", VarKind::Global, "", std::nullopt, 1},
      {"AutoAE", VarKind::Global, "", std::nullopt, 1},
      {"DspEnabled", VarKind::Global, "", std::nullopt, 0},
  };
  n.places = {place("half_pressed", "Sig", "IDLE_CTRL", {{"s", 1}}),
              place("focused", "Sig", "IDLE_CTRL"),
              place("metered", "Sig", "IDLE_CTRL")};
  Transition af = transition("do AF", "IDLE_CTRL", {arc("half_pressed")}, {arc("focused")}, "AF");
  af.guard = parse_expr("AutoAF == 1");
  Transition skip_af = transition("skip AF", "IDLE_CTRL", {arc("half_pressed")}, {arc("focused")});
  skip_af.guard = parse_expr("AutoAF == 0");
  Transition ae = transition("do AE", "IDLE_CTRL", {arc("focused")}, {arc("metered")}, "AE");
  ae.guard = parse_expr("AutoAE == 1");
  Transition skip_ae = transition("skip AE", "IDLE_CTRL", {arc("focused")}, {arc("metered")});
  skip_ae.guard = parse_expr("AutoAE == 0");
  n.transitions = {af, skip_af, ae, skip_ae};
  return n;
}

std::map<std::string, std::string> hs_path_colours(const ColouredNet& hs) {
  static const std::set<std::string> red{"store_idle", "buffer", "do IS", "flash"};
  static const std::set<std::string> uncoloured{"shot_sync", "bf_sync"};
  std::map<std::string, std::string> out;
  for (const auto& p : hs.places) {
    if (uncoloured.count(p.name)) continue;
    out[p.name] = red.count(p.name) ? "red" : "green";
  }
  for (const auto& t : hs.transitions) out[t.name] = red.count(t.name) ? "red" : "green";
  return out;
}

namespace {

const char* const kSubmodes[] = {"FE", "F", "E", "0"};

std::vector<Assignment> submode_entry(const std::string& s) {
  bool af = s == "FE" || s == "F";
  bool ae = s == "FE" || s == "E";
  return {{"AutoAF", Expr::constant(af ? 1 : 0)}, {"AutoAE", Expr::constant(ae ? 1 : 0)}};
}

std::vector<ModeTransition> auto_transitions() {
  std::vector<ModeTransition> out;
  auto flip = [](const std::string& s, bool af) {
    bool has_af = s == "FE" || s == "F";
    bool has_ae = s == "FE" || s == "E";
    if (af) has_af = !has_af;
    else has_ae = !has_ae;
    if (has_af && has_ae) return std::string("FE");
    if (has_af) return std::string("F");
    if (has_ae) return std::string("E");
    return std::string("0");
  };
  for (const char* s : kSubmodes) {
    out.push_back({s, "toggle-AF", std::nullopt, flip(s, true), std::nullopt});
    out.push_back({s, "toggle-AE", std::nullopt, flip(s, false), std::nullopt});
  }
  return out;
}

Mode leaf(std::string name, std::vector<Assignment> entry = {},
          std::shared_ptr<const ColouredNet> net = nullptr) {
  Mode m;
  m.name = std::move(name);
  m.on_entry = std::move(entry);
  m.refinement = std::move(net);
  return m;
}

Mode composite(std::string name, std::vector<Mode> children, std::string initial,
               std::vector<Assignment> entry = {}) {
  Mode m;
  m.name = std::move(name);
  m.children = std::move(children);
  m.initial_child = std::move(initial);
  m.on_entry = std::move(entry);
  return m;
}

std::vector<Assignment> dsp(int v) { return {{"DspEnabled", Expr::constant(v)}}; }

const std::vector<std::string> kCameraEvents{"half-press",  "full-press",   "release",
                                             "buffer-full", "buffer-freed", "shoot-complete"};

std::vector<ModeTransition> camera_transitions() {
  return {
      {"IDLE", "half-press", std::nullopt, "IDLE", std::nullopt},
      {"IDLE", "full-press", std::nullopt, "SF", 0.5},
      {"IDLE", "full-press", std::nullopt, "MF", 0.5},
      {"SF", "shoot-complete", std::nullopt, "IDLE", std::nullopt},
      {"HS", "buffer-full", std::nullopt, "LS", std::nullopt},
      {"LS", "buffer-freed", std::nullopt, "LS", std::nullopt},
      {"MF", "release", std::nullopt, "IDLE", std::nullopt},
  };
}

}  // namespace

CameraAutomata build_camera_automata(const BudgetConfig& cfg) {
  HsNetOptions hs_opts;
  hs_opts.buffer_capacity = cfg.buffer_capacity;
  auto hs = std::make_shared<const ColouredNet>(build_hs_net(hs_opts));
  hs_opts.frames = 1;
  hs_opts.name = "SF";
  auto sf = std::make_shared<const ColouredNet>(build_hs_net(hs_opts));
  auto idle = std::make_shared<const ColouredNet>(build_idle_net());

  Mode camera_root = composite(
      "Camera",
      {leaf("IDLE", dsp(0), idle), leaf("SF", dsp(1), sf),
       composite("MF", {leaf("HS", {}, hs), leaf("LS", {}, hs)}, "HS", dsp(1))},
      "IDLE");
  ModeAutomaton camera("CameraMode", camera_root, kCameraEvents, camera_transitions(),
                       {{"DspEnabled", 0}});

  std::vector<Mode> subs;
  for (const char* s : kSubmodes) subs.push_back(leaf(s, submode_entry(s)));
  ModeAutomaton autofocus("AutoMode", composite("Auto", subs, "FE"), {"toggle-AF", "toggle-AE"},
                          auto_transitions(), {{"AutoAF", 1}, {"AutoAE", 1}});

  // Hierarchical form: each camera leaf owns the four submodes.
  auto with_submodes = [](const std::string& mode, std::vector<Assignment> entry) {
    std::vector<Mode> children;
    for (const char* s : kSubmodes) children.push_back(leaf(mode + "." + s, submode_entry(s)));
    return composite(mode, std::move(children), mode + ".FE", std::move(entry));
  };
  Mode h_root = composite(
      "Camera",
      {with_submodes("IDLE", dsp(0)), with_submodes("SF", dsp(1)),
       composite("MF", {with_submodes("HS", {}), with_submodes("LS", {})}, "HS", dsp(1))},
      "IDLE");
  std::vector<ModeTransition> h_trans;
  for (const auto& t : camera_transitions()) {
    for (const std::string& src_leaf : camera.leaves()) {
      auto path = camera.path_to(src_leaf);
      if (std::find(path.begin(), path.end(), t.source) == path.end()) continue;
      std::string dst_leaf = camera.entry_leaf(t.target);
      for (const char* s : kSubmodes) {
        h_trans.push_back({src_leaf + "." + s, t.event, t.guard, dst_leaf + "." + s, t.probability});
      }
    }
  }
  for (const std::string& cam_leaf : camera.leaves()) {
    for (const auto& t : auto_transitions()) {
      h_trans.push_back({cam_leaf + "." + t.source, t.event, std::nullopt, cam_leaf + "." + t.target,
                         std::nullopt});
    }
  }
  std::vector<std::string> events = kCameraEvents;
  events.push_back("toggle-AF");
  events.push_back("toggle-AE");
  ModeAutomaton hierarchical("Camera", h_root, events, h_trans,
                             {{"DspEnabled", 0}, {"AutoAF", 1}, {"AutoAE", 1}});

  ProductAutomaton parallel = parallel_product(camera, autofocus);
  return CameraAutomata{std::move(camera), std::move(autofocus), std::move(hierarchical),
                        std::move(parallel)};
}

CameraDefaults default_matrix_and_profile() {
  return {camera_deployment_matrix(), camera_default_profile(), BudgetConfig{}};
}

std::string_view to_string(CameraEventKind k) {
  switch (k) {
    case CameraEventKind::HalfPress: return "half-press";
    case CameraEventKind::FullPress: return "full-press";
    case CameraEventKind::Hold: return "hold";
    case CameraEventKind::Release: return "release";
    case CameraEventKind::SelectSF: return "select-SF";
    case CameraEventKind::SelectMF: return "select-MF";
    case CameraEventKind::ToggleAF: return "toggle-AF";
    case CameraEventKind::ToggleAE: return "toggle-AE";
  }
  return "?";
}

std::optional<CameraEventKind> camera_event_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(CameraEventKind::ToggleAE); ++i) {
    auto k = static_cast<CameraEventKind>(i);
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

ScenarioError::ScenarioError(std::size_t index, const std::string& msg)
    : std::runtime_error("event " + std::to_string(index) + ": " + msg), index_(index) {}

namespace {

class Driver {
 public:
  Driver(const BudgetConfig& cfg, const DeploymentAssignment& assignment,
         const ResourceProfile& profile)
      : cfg_(cfg),
        assignment_(assignment),
        profile_(profile),
        automata_(build_camera_automata(cfg)),
        camera_(initial_config(automata_.camera)),
        submode_(initial_config(automata_.autofocus)),
        max_frames_(max_frames(cfg)) {
    for (const auto& net : {build_hs_net(), build_idle_net()}) {
      for (const auto& t : net.transitions) operations_[t.name] = t.operation;
    }
  }

  void handle(std::size_t index, const CameraEvent& ev) {
    if (ev.at < last_time_) throw ScenarioError(index, "time goes backwards");
    last_time_ = ev.at;
    settle(ev.at, ev.kind == CameraEventKind::Release);
    switch (ev.kind) {
      case CameraEventKind::SelectSF: preferred_ = "SF"; break;
      case CameraEventKind::SelectMF: preferred_ = "MF"; break;
      case CameraEventKind::ToggleAF:
      case CameraEventKind::ToggleAE:
        submode_ = step(automata_.autofocus, submode_, to_string(ev.kind)).config;
        break;
      case CameraEventKind::HalfPress:
        if (mode() == "IDLE") {
          camera_event("half-press", ev.at);
          fire_idle(ev.at);
        }
        break;
      case CameraEventKind::FullPress:
        if (mode() == "IDLE") press(ev.at);
        break;
      case CameraEventKind::Hold:
        break;
      case CameraEventKind::Release:
        held_ = false;
        if (mode() == "HS" || mode() == "LS") {
          std::int64_t done = drain_storage();
          camera_event("release", std::max(ev.at, done));
        }
        break;
    }
  }

  ScenarioResult finish() {
    settle(last_time_, false);
    if (sf_done_) settle(*sf_done_, false);
    drain_storage();
    held_ = false;
    result_.final_mode = mode();
    result_.frames_shot = frames_shot_;
    std::stable_sort(result_.trace.begin(), result_.trace.end(),
                     [](const FiringRecord& a, const FiringRecord& b) { return a.at < b.at; });
    return result_;
  }

 private:
  const std::string& mode() const { return camera_.active; }

  void record(std::int64_t at, const std::string& name) {
    result_.trace.push_back({at, mode(), name});
    const auto& op = operations_.at(name);
    if (op) {
      auto target = assignment_.find(*op);
      if (target == assignment_.end()) throw BudgetError("operation '" + *op + "' is not assigned");
      const CostEntry& e = profile_.at(*op, target->second);
      result_.cost = result_.cost + CostEnvelope{{e.bcet, e.acet, e.wcet}, {e.bcec, e.acec, e.wcec}};
    }
  }

  void camera_event(const std::string& event, std::int64_t at, std::optional<std::int64_t> frame = {}) {
    std::string from = mode();
    auto selector = [this](const std::vector<const LeafTransition*>& alts) -> std::size_t {
      if (preferred_) {
        std::string want = automata_.camera.entry_leaf(*preferred_);
        for (std::size_t i = 0; i < alts.size(); ++i) {
          if (alts[i]->target == want) return i;
        }
      }
      return select_most_likely(alts);
    };
    camera_ = step(automata_.camera, camera_, event, selector).config;
    if (mode() != from) result_.timeline.push_back({at, from, mode(), event, frame});
  }

  void fire_idle(std::int64_t at) {
    record(at, submode_.globals.at("AutoAF") ? "do AF" : "skip AF");
    record(at, submode_.globals.at("AutoAE") ? "do AE" : "skip AE");
  }

  void press(std::int64_t at) {
    camera_event("full-press", at);
    next_shot_ = at;
    burst_frames_ = 0;
    after_full_ = false;
    if (mode() == "SF") {
      shoot_frame(at, false);
      sf_done_ = completions_.back();
    } else {
      held_ = true;
    }
  }

  void shoot_frame(std::int64_t at, bool after_full) {
    if (burst_frames_ > 0) record(at, after_full ? "BF_Sync" : "no BF");
    record(at, "Shoot_Sync");
    if (submode_.globals.at("AutoAF")) record(at, "do AF");
    if (submode_.globals.at("AutoAE")) record(at, "do AE");
    record(at, "do AS");
    record(at, "Shoot");
    record(at, "do IB");
    record(at, "do IP");
    std::int64_t start = completions_.empty() ? at : std::max(at, completions_.back());
    completions_.push_back(start + cfg_.store_period);
    ++frames_shot_;
    ++burst_frames_;
  }

  // Storage completions up to and including `now`.
  void store_until(std::int64_t now) {
    while (stored_ < completions_.size() && completions_[stored_] <= now) {
      record(completions_[stored_], "do IS");
      ++stored_;
    }
  }

  std::int64_t drain_storage() {
    std::int64_t last = last_time_;
    if (!completions_.empty() && stored_ < completions_.size()) last = completions_.back();
    store_until(last);
    return last;
  }

  // Runs the burst and storage up to `until` (exclusive when releasing).
  void settle(std::int64_t until, bool exclusive) {
    if (sf_done_ && *sf_done_ <= until) {
      store_until(*sf_done_);
      camera_event("shoot-complete", *sf_done_);
      sf_done_.reset();
    }
    while (held_ && (mode() == "HS" || mode() == "LS") && frames_shot_ < max_frames_ &&
           (exclusive ? next_shot_ < until : next_shot_ <= until)) {
      std::int64_t now = next_shot_;
      store_until(now);
      std::size_t occupancy = completions_.size() - stored_;
      if (static_cast<std::int64_t>(occupancy) >= cfg_.buffer_capacity) {
        record(now, "on BF");
        if (mode() == "HS") camera_event("buffer-full", now, frames_shot_);
        next_shot_ = completions_[stored_];
        after_full_ = true;
        continue;
      }
      if (after_full_ && mode() == "LS") camera_event("buffer-freed", now, frames_shot_);
      shoot_frame(now, after_full_);
      after_full_ = false;
      next_shot_ = now + cfg_.shoot_period;
    }
    store_until(until);
  }

  BudgetConfig cfg_;
  const DeploymentAssignment& assignment_;
  const ResourceProfile& profile_;
  CameraAutomata automata_;
  ModeConfig camera_;
  ModeConfig submode_;
  std::int64_t max_frames_;
  std::map<std::string, std::optional<std::string>> operations_;
  std::optional<std::string> preferred_;
  bool held_ = false;
  std::int64_t next_shot_ = 0;
  std::int64_t last_time_ = 0;
  std::int64_t frames_shot_ = 0;
  std::int64_t burst_frames_ = 0;
  bool after_full_ = false;
  std::vector<std::int64_t> completions_;
  std::size_t stored_ = 0;
  std::optional<std::int64_t> sf_done_;
  ScenarioResult result_;
};

}  // namespace

ScenarioResult run_scenario(const std::vector<CameraEvent>& script, const BudgetConfig& cfg,
                            const DeploymentAssignment& assignment,
                            const ResourceProfile& profile) {
  check_config(cfg);
  Driver d(cfg, assignment, profile);
  for (std::size_t i = 0; i < script.size(); ++i) d.handle(i, script[i]);
  return d.finish();
}

}  // namespace pmk
