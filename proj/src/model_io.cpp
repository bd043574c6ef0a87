#include "pmk/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "pmk/camera.hpp"

namespace pmk {

const ColouredNet* ModelDoc::find_net(std::string_view name) const {
  for (const auto& n : nets) {
    if (n.name == name) return &n;
  }
  return nullptr;
}

const ModeAutomaton* ModelDoc::find_automaton(std::string_view name) const {
  for (const auto& a : automata) {
    if (a.name() == name) return &a;
  }
  return nullptr;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

constexpr std::string_view kMagic = "pmkit";

std::optional<VarKind> var_kind_from(std::string_view s) {
  if (s == "local") return VarKind::Local;
  if (s == "global") return VarKind::Global;
  if (s == "counter") return VarKind::Counter;
  if (s == "clock") return VarKind::Clock;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : ts_(tokenize(text)) {}

  ModelDoc parse() {
    ModelDoc doc;
    if (ts_.at_end()) ts_.fail("missing header");
    if (!ts_.peek_keyword(kMagic)) ts_.fail("missing header 'pmkit-model'");
    ts_.next();
    ts_.expect_symbol("-");
    ts_.expect_keyword("model");
    const Token& vt = ts_.peek();
    long long version = ts_.expect_integer("format version");
    if (version != 1) ts_.fail_at(vt, "unsupported format version " + std::to_string(version));
    doc.version = static_cast<int>(version);

    while (!ts_.at_end()) {
      const Token& tok = ts_.peek();
      if (ts_.accept_keyword("net")) {
        ColouredNet net = parse_net(tok);
        if (doc.find_net(net.name)) ts_.fail_at(tok, "duplicate identifier: net '" + net.name + "'");
        doc.nets.push_back(std::move(net));
      } else if (ts_.accept_keyword("automaton")) {
        std::string name = ts_.expect_name("automaton name");
        if (doc.find_automaton(name)) ts_.fail_at(tok, "duplicate identifier: automaton '" + name + "'");
        doc.automata.push_back(parse_automaton(doc, tok, name));
      } else if (ts_.accept_keyword("matrix")) {
        if (doc.matrix) ts_.fail_at(tok, "duplicate identifier: matrix section");
        doc.matrix = parse_matrix();
      } else if (ts_.accept_keyword("profile")) {
        if (doc.profile) ts_.fail_at(tok, "duplicate identifier: profile section");
        doc.profile = parse_profile();
      } else if (ts_.accept_keyword("colours")) {
        const Token& nt = ts_.peek();
        std::string net = ts_.expect_name("net name");
        const ColouredNet* found = doc.find_net(net);
        check_exists(found != nullptr, nt, "net '" + net + "'");
        if (doc.colours.count(net)) ts_.fail_at(tok, "duplicate identifier: colours of '" + net + "'");
        doc.colours[net] = parse_colours(*found);
      } else if (ts_.accept_keyword("config")) {
        if (doc.config) ts_.fail_at(tok, "duplicate identifier: config section");
        doc.config = parse_config();
      } else {
        ts_.fail_at(tok, "unknown section '" + tok.text + "'");
      }
    }
    return doc;
  }

 private:
  double parse_number(std::string_view what) {
    const Token& t = ts_.peek();
    bool negative = false;
    if (t.kind == TokenKind::Symbol && t.text == "-") {
      ts_.next();
      negative = true;
    }
    const Token& n = ts_.peek();
    if (n.kind != TokenKind::Integer && n.kind != TokenKind::Decimal) {
      ts_.fail_at(n, "expected " + std::string(what));
    }
    double v = 0;
    auto res = std::from_chars(n.text.data(), n.text.data() + n.text.size(), v);
    if (res.ec != std::errc() || res.ptr != n.text.data() + n.text.size()) {
      ts_.fail_at(n, "bad number '" + n.text + "'");
    }
    ts_.next();
    return negative ? -v : v;
  }

  std::vector<std::pair<std::string, std::int64_t>> parse_tokens() {
    std::vector<std::pair<std::string, std::int64_t>> out;
    do {
      std::int64_t count = ts_.expect_integer("token count");
      ts_.expect_symbol("`");
      out.emplace_back(ts_.expect_name("colour value"), count);
    } while (ts_.accept_symbol("++"));
    return out;
  }

  std::vector<ArcTerm> parse_terms() {
    std::vector<ArcTerm> out;
    do {
      ArcTerm term;
      term.count = parse_expr(ts_);
      ts_.expect_symbol("`");
      term.symbol = ts_.expect_name("arc symbol");
      out.push_back(std::move(term));
    } while (ts_.accept_symbol("++"));
    return out;
  }

  void check_unique(std::set<std::string>& seen, const Token& at, const std::string& kind,
                    const std::string& name) {
    if (!seen.insert(name).second) ts_.fail_at(at, "duplicate identifier: " + kind + " '" + name + "'");
  }

  void check_exists(bool ok, const Token& at, const std::string& what) {
    if (!ok) ts_.fail_at(at, "dangling reference: " + what);
  }

  ColouredNet parse_net(const Token&) {
    ColouredNet net;
    net.name = ts_.expect_name("net name");
    ts_.expect_symbol("{");
    std::set<std::string> colours, components, variables, places, transitions;
    while (!ts_.accept_symbol("}")) {
      const Token& tok = ts_.peek();
      if (ts_.accept_keyword("colour")) {
        ColourSet cs;
        cs.name = ts_.expect_name("colour set name");
        check_unique(colours, tok, "colour set", cs.name);
        ts_.expect_symbol("=");
        ts_.expect_symbol("{");
        if (!ts_.peek_symbol("}")) {
          do {
            const Token& vt = ts_.peek();
            std::string v = ts_.expect_name("colour value");
            if (cs.index_of(v)) ts_.fail_at(vt, "duplicate identifier: colour value '" + v + "'");
            cs.values.push_back(v);
          } while (ts_.accept_symbol(","));
        }
        ts_.expect_symbol("}");
        ts_.expect_symbol(";");
        net.colour_sets.push_back(std::move(cs));
      } else if (ts_.accept_keyword("component")) {
        Component c;
        c.name = ts_.expect_name("component name");
        check_unique(components, tok, "component", c.name);
        if (ts_.accept_keyword("site")) {
          const Token& st = ts_.peek();
          auto site = site_from_string(ts_.expect_name("site"));
          if (!site) ts_.fail_at(st, "unknown site '" + st.text + "'");
          c.site = site;
        }
        ts_.expect_symbol(";");
        net.components.push_back(std::move(c));
      } else if (ts_.accept_keyword("var")) {
        Variable v;
        const Token& kt = ts_.peek();
        auto kind = var_kind_from(ts_.expect_identifier("variable kind"));
        if (!kind) ts_.fail_at(kt, "unknown variable kind '" + kt.text + "'");
        v.kind = *kind;
        v.name = ts_.expect_name("variable name");
        check_unique(variables, tok, "variable", v.name);
        if (ts_.accept_keyword("in")) {
          const Token& at = ts_.peek();
          v.scope = ts_.expect_name("scope component");
          check_exists(components.count(v.scope) > 0, at, "component '" + v.scope + "'");
        }
        if (ts_.accept_keyword("bound")) v.bound = ts_.expect_integer("bound");
        ts_.expect_symbol("=");
        v.initial = ts_.expect_integer("initial value");
        ts_.expect_symbol(";");
        net.variables.push_back(std::move(v));
      } else if (ts_.accept_keyword("place")) {
        Place p;
        p.name = ts_.expect_name("place name");
        check_unique(places, tok, "place", p.name);
        ts_.expect_symbol(":");
        const Token& ct = ts_.peek();
        p.colour = ts_.expect_name("colour set");
        check_exists(colours.count(p.colour) > 0, ct, "colour set '" + p.colour + "'");
        ts_.expect_keyword("in");
        const Token& mt = ts_.peek();
        p.component = ts_.expect_name("component");
        check_exists(components.count(p.component) > 0, mt, "component '" + p.component + "'");
        if (ts_.accept_keyword("capacity")) p.capacity = ts_.expect_integer("capacity");
        if (ts_.accept_symbol("=")) p.initial = parse_tokens();
        ts_.expect_symbol(";");
        net.places.push_back(std::move(p));
      } else if (ts_.accept_keyword("transition")) {
        Transition t;
        t.name = ts_.expect_name("transition name");
        check_unique(transitions, tok, "transition", t.name);
        ts_.expect_keyword("in");
        const Token& mt = ts_.peek();
        t.component = ts_.expect_name("component");
        check_exists(components.count(t.component) > 0, mt, "component '" + t.component + "'");
        ts_.expect_symbol("{");
        parse_transition_body(t, places, variables);
        net.transitions.push_back(std::move(t));
      } else {
        ts_.fail_at(tok, "unknown key '" + tok.text + "' in net");
      }
    }
    return net;
  }

  void parse_transition_body(Transition& t, const std::set<std::string>& places,
                             const std::set<std::string>& variables) {
    while (!ts_.accept_symbol("}")) {
      const Token& tok = ts_.peek();
      if (ts_.accept_keyword("label")) {
        t.label = ts_.expect_name("label");
      } else if (ts_.accept_keyword("op")) {
        t.operation = ts_.expect_name("operation");
      } else if (ts_.accept_keyword("guard")) {
        t.guard = parse_expr(ts_);
      } else if (ts_.accept_keyword("prob")) {
        t.probability = parse_number("probability");
      } else if (ts_.peek_keyword("in") || ts_.peek_keyword("out")) {
        bool input = ts_.next().text == "in";
        Arc a;
        const Token& pt = ts_.peek();
        a.place = ts_.expect_name("place");
        check_exists(places.count(a.place) > 0, pt, "place '" + a.place + "'");
        ts_.expect_symbol(":");
        a.terms = parse_terms();
        if (ts_.accept_keyword("sync")) {
          const Token& vt = ts_.peek();
          a.sync_role = ts_.expect_name("counter");
          check_exists(variables.count(*a.sync_role) > 0, vt, "variable '" + *a.sync_role + "'");
        }
        (input ? t.inputs : t.outputs).push_back(std::move(a));
      } else if (ts_.accept_keyword("assign")) {
        Assignment a;
        const Token& vt = ts_.peek();
        a.variable = ts_.expect_name("variable");
        check_exists(variables.count(a.variable) > 0, vt, "variable '" + a.variable + "'");
        ts_.expect_symbol(":=");
        a.value = parse_expr(ts_);
        t.assignments.push_back(std::move(a));
      } else {
        ts_.fail_at(tok, "unknown key '" + tok.text + "' in transition");
      }
      ts_.expect_symbol(";");
    }
  }

  Mode parse_mode(const ModelDoc& doc, std::set<std::string>& names) {
    const Token& tok = ts_.peek();
    Mode m;
    m.name = ts_.expect_name("mode name");
    check_unique(names, tok, "mode", m.name);
    if (ts_.accept_keyword("initial")) m.initial_child = ts_.expect_name("initial child");
    if (ts_.accept_keyword("refines")) {
      const Token& nt = ts_.peek();
      std::string net = ts_.expect_name("net name");
      const ColouredNet* found = doc.find_net(net);
      check_exists(found != nullptr, nt, "net '" + net + "'");
      m.refinement = std::make_shared<const ColouredNet>(*found);
    }
    if (ts_.accept_symbol(";")) return m;
    ts_.expect_symbol("{");
    while (!ts_.accept_symbol("}")) {
      const Token& kt = ts_.peek();
      if (ts_.accept_keyword("entry")) {
        Assignment a;
        a.variable = ts_.expect_name("global");
        ts_.expect_symbol(":=");
        a.value = parse_expr(ts_);
        ts_.expect_symbol(";");
        m.on_entry.push_back(std::move(a));
      } else if (ts_.accept_keyword("mode")) {
        m.children.push_back(parse_mode(doc, names));
      } else {
        ts_.fail_at(kt, "unknown key '" + kt.text + "' in mode");
      }
    }
    return m;
  }

  ModeAutomaton parse_automaton(const ModelDoc& doc, const Token& start, const std::string& name) {
    ts_.expect_symbol("{");
    std::vector<std::string> events;
    std::map<std::string, std::int64_t> globals;
    std::optional<Mode> root;
    std::vector<ModeTransition> transitions;
    std::set<std::string> mode_names;
    while (!ts_.accept_symbol("}")) {
      const Token& tok = ts_.peek();
      if (ts_.accept_keyword("events")) {
        do {
          const Token& et = ts_.peek();
          std::string e = ts_.expect_name("event");
          if (std::find(events.begin(), events.end(), e) != events.end()) {
            ts_.fail_at(et, "duplicate identifier: event '" + e + "'");
          }
          events.push_back(e);
        } while (ts_.accept_symbol(","));
        ts_.expect_symbol(";");
      } else if (ts_.accept_keyword("global")) {
        std::string g = ts_.expect_name("global");
        if (globals.count(g)) ts_.fail_at(tok, "duplicate identifier: global '" + g + "'");
        ts_.expect_symbol("=");
        globals[g] = ts_.expect_integer("initial value");
        ts_.expect_symbol(";");
      } else if (ts_.accept_keyword("mode")) {
        if (root) ts_.fail_at(tok, "automaton has a single root mode");
        root = parse_mode(doc, mode_names);
      } else if (ts_.accept_keyword("trans")) {
        ModeTransition t;
        t.source = ts_.expect_name("source mode");
        ts_.expect_symbol("--");
        t.event = ts_.expect_name("event");
        ts_.expect_symbol("-->");
        t.target = ts_.expect_name("target mode");
        if (ts_.accept_keyword("when")) t.guard = parse_expr(ts_);
        if (ts_.accept_keyword("prob")) t.probability = parse_number("probability");
        ts_.expect_symbol(";");
        transitions.push_back(std::move(t));
      } else {
        ts_.fail_at(tok, "unknown key '" + tok.text + "' in automaton");
      }
    }
    if (!root) ts_.fail_at(start, "automaton '" + name + "' has no root mode");
    try {
      return ModeAutomaton(name, std::move(*root), std::move(events), std::move(transitions),
                           std::move(globals));
    } catch (const ModeError& e) {
      ts_.fail_at(start, e.what());
    }
  }

  DeploymentMatrix parse_matrix() {
    DeploymentMatrix m;
    ts_.expect_symbol("{");
    while (!ts_.accept_symbol("}")) {
      const Token& tok = ts_.peek();
      std::string row = ts_.expect_name("operation or mode");
      if (m.rows.count(row)) ts_.fail_at(tok, "duplicate identifier: matrix row '" + row + "'");
      ts_.expect_symbol(":");
      std::set<Target> targets;
      if (!ts_.peek_symbol(";")) {
        do {
          const Token& tt = ts_.peek();
          auto t = target_from_string(ts_.expect_name("target"));
          if (!t) ts_.fail_at(tt, "unknown target '" + tt.text + "'");
          targets.insert(*t);
        } while (ts_.accept_symbol(","));
      }
      ts_.expect_symbol(";");
      m.rows[row] = std::move(targets);
    }
    return m;
  }

  ResourceProfile parse_profile() {
    ResourceProfile p;
    ts_.expect_symbol("{");
    while (!ts_.accept_symbol("}")) {
      const Token& tok = ts_.peek();
      std::string op = ts_.expect_name("operation");
      ts_.expect_keyword("on");
      const Token& tt = ts_.peek();
      auto target = target_from_string(ts_.expect_name("target"));
      if (!target) ts_.fail_at(tt, "unknown target '" + tt.text + "'");
      if (p.entries.count({op, *target})) {
        ts_.fail_at(tok, "duplicate identifier: profile entry (" + op + ", " + tt.text + ")");
      }
      ts_.expect_symbol(":");
      CostEntry e;
      ts_.expect_keyword("time");
      e.bcet = parse_number("bcet");
      e.acet = parse_number("acet");
      e.wcet = parse_number("wcet");
      ts_.expect_keyword("energy");
      e.bcec = parse_number("bcec");
      e.acec = parse_number("acec");
      e.wcec = parse_number("wcec");
      ts_.expect_symbol(";");
      p.entries[{op, *target}] = e;
    }
    return p;
  }

  std::map<std::string, std::string> parse_colours(const ColouredNet& net) {
    std::map<std::string, std::string> out;
    ts_.expect_symbol("{");
    while (!ts_.accept_symbol("}")) {
      const Token& tok = ts_.peek();
      std::string node = ts_.expect_name("node");
      check_exists(net.find_place(node) || net.find_transition(node), tok, "node '" + node + "'");
      if (out.count(node)) ts_.fail_at(tok, "duplicate identifier: colour of '" + node + "'");
      ts_.expect_symbol(":");
      out[node] = ts_.expect_name("colour tag");
      ts_.expect_symbol(";");
    }
    return out;
  }

  BudgetConfig parse_config() {
    BudgetConfig c;
    std::set<std::string> seen;
    ts_.expect_symbol("{");
    while (!ts_.accept_symbol("}")) {
      const Token& tok = ts_.peek();
      std::string key = ts_.expect_identifier("config key");
      check_unique(seen, tok, "config key", key);
      if (key == "bufferCapacity") c.buffer_capacity = ts_.expect_integer("frames");
      else if (key == "cardSize") c.card_size = ts_.expect_integer("size");
      else if (key == "imageSize") c.image_size = ts_.expect_integer("size");
      else if (key == "shootPeriod") c.shoot_period = ts_.expect_integer("period");
      else if (key == "storePeriod") c.store_period = ts_.expect_integer("period");
      else if (key == "compression") {
        c.compression.num = ts_.expect_integer("numerator");
        ts_.expect_symbol("/");
        c.compression.den = ts_.expect_integer("denominator");
      } else {
        ts_.fail_at(tok, "unknown key '" + key + "' in config");
      }
      ts_.expect_symbol(";");
    }
    return c;
  }

  TokenStream ts_;
};

std::string name(std::string_view s) { return quote_name(s); }

std::string tokens_text(const std::vector<std::pair<std::string, std::int64_t>>& ts) {
  std::string out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) out += " ++ ";
    out += std::to_string(ts[i].second) + "`" + name(ts[i].first);
  }
  return out;
}

void write_net(std::ostream& os, const ColouredNet& net) {
  os << "net " << name(net.name) << " {\n";
  for (const auto& cs : net.colour_sets) {
    os << "  colour " << name(cs.name) << " = {";
    for (std::size_t i = 0; i < cs.values.size(); ++i) os << (i ? ", " : " ") << name(cs.values[i]);
    os << (cs.values.empty() ? "};\n" : " };\n");
  }
  for (const auto& c : net.components) {
    os << "  component " << name(c.name);
    if (c.site) os << " site " << to_string(*c.site);
    os << ";\n";
  }
  for (const auto& v : net.variables) {
    os << "  var ";
    switch (v.kind) {
      case VarKind::Local: os << "local"; break;
      case VarKind::Global: os << "global"; break;
      case VarKind::Counter: os << "counter"; break;
      case VarKind::Clock: os << "clock"; break;
    }
    os << " " << name(v.name);
    if (!v.scope.empty()) os << " in " << name(v.scope);
    if (v.bound) os << " bound " << *v.bound;
    os << " = " << v.initial << ";\n";
  }
  for (const auto& p : net.places) {
    os << "  place " << name(p.name) << " : " << name(p.colour) << " in " << name(p.component);
    if (p.capacity) os << " capacity " << *p.capacity;
    if (!p.initial.empty()) os << " = " << tokens_text(p.initial);
    os << ";\n";
  }
  for (const auto& t : net.transitions) {
    os << "  transition " << name(t.name) << " in " << name(t.component) << " {\n";
    if (!t.label.empty()) os << "    label " << name(t.label) << ";\n";
    if (t.operation) os << "    op " << name(*t.operation) << ";\n";
    if (t.guard) os << "    guard " << to_string(*t.guard) << ";\n";
    if (t.probability) os << "    prob " << format_double(*t.probability) << ";\n";
    auto arcs = [&](const char* dir, const std::vector<Arc>& list) {
      for (const auto& a : list) {
        os << "    " << dir << " " << name(a.place) << " :";
        for (std::size_t i = 0; i < a.terms.size(); ++i) {
          os << (i ? " ++ " : " ") << to_string(a.terms[i].count) << "`" << name(a.terms[i].symbol);
        }
        if (a.sync_role) os << " sync " << name(*a.sync_role);
        os << ";\n";
      }
    };
    arcs("in", t.inputs);
    arcs("out", t.outputs);
    for (const auto& a : t.assignments) {
      os << "    assign " << name(a.variable) << " := " << to_string(a.value) << ";\n";
    }
    os << "  }\n";
  }
  os << "}\n";
}

void write_mode(std::ostream& os, const Mode& m, const ModelDoc& doc, int depth) {
  std::string pad(2 * depth, ' ');
  os << pad << "mode " << name(m.name);
  if (m.initial_child) os << " initial " << name(*m.initial_child);
  if (m.refinement) {
    const ColouredNet* net = doc.find_net(m.refinement->name);
    if (!net || !(*net == *m.refinement)) {
      throw ModeError("refinement of mode '" + m.name + "' is not a net of the document");
    }
    os << " refines " << name(net->name);
  }
  if (m.on_entry.empty() && m.children.empty()) {
    os << ";\n";
    return;
  }
  os << " {\n";
  for (const auto& a : m.on_entry) {
    os << pad << "  entry " << name(a.variable) << " := " << to_string(a.value) << ";\n";
  }
  for (const auto& c : m.children) write_mode(os, c, doc, depth + 1);
  os << pad << "}\n";
}

void write_automaton(std::ostream& os, const ModeAutomaton& a, const ModelDoc& doc) {
  os << "automaton " << name(a.name()) << " {\n";
  if (!a.events().empty()) {
    os << "  events";
    for (std::size_t i = 0; i < a.events().size(); ++i) os << (i ? ", " : " ") << name(a.events()[i]);
    os << ";\n";
  }
  for (const auto& [g, v] : a.globals()) os << "  global " << name(g) << " = " << v << ";\n";
  write_mode(os, a.root(), doc, 1);
  for (const auto& t : a.transitions()) {
    os << "  trans " << name(t.source) << " --" << name(t.event) << "--> " << name(t.target);
    if (t.guard) os << " when " << to_string(*t.guard);
    if (t.probability) os << " prob " << format_double(*t.probability);
    os << ";\n";
  }
  os << "}\n";
}

}  // namespace

ModelDoc parse_model(std::string_view text) { return Parser(text).parse(); }

std::string serialize_model(const ModelDoc& doc) {
  std::ostringstream os;
  os << "pmkit-model " << doc.version << "\n";
  for (const auto& n : doc.nets) {
    os << "\n";
    write_net(os, n);
  }
  for (const auto& a : doc.automata) {
    os << "\n";
    write_automaton(os, a, doc);
  }
  for (const auto& [net, tags] : doc.colours) {
    os << "\ncolours " << name(net) << " {\n";
    for (const auto& [node, tag] : tags) os << "  " << name(node) << ": " << name(tag) << ";\n";
    os << "}\n";
  }
  if (doc.matrix) {
    os << "\nmatrix {\n";
    for (const auto& [row, targets] : doc.matrix->rows) {
      os << "  " << name(row) << ":";
      std::size_t i = 0;
      for (Target t : targets) os << (i++ ? ", " : " ") << to_string(t);
      os << ";\n";
    }
    os << "}\n";
  }
  if (doc.profile) {
    os << "\nprofile {\n";
    for (const auto& [key, e] : doc.profile->entries) {
      os << "  " << name(key.first) << " on " << to_string(key.second) << ": time "
         << format_double(e.bcet) << " " << format_double(e.acet) << " " << format_double(e.wcet)
         << " energy " << format_double(e.bcec) << " " << format_double(e.acec) << " "
         << format_double(e.wcec) << ";\n";
    }
    os << "}\n";
  }
  if (doc.config) {
    const BudgetConfig& c = *doc.config;
    os << "\nconfig {\n"
       << "  bufferCapacity " << c.buffer_capacity << ";\n"
       << "  cardSize " << c.card_size << ";\n"
       << "  imageSize " << c.image_size << ";\n"
       << "  compression " << c.compression.num << "/" << c.compression.den << ";\n"
       << "  shootPeriod " << c.shoot_period << ";\n"
       << "  storePeriod " << c.store_period << ";\n"
       << "}\n";
  }
  return os.str();
}

ModelDoc camera_model_doc() {
  CameraDefaults defaults = default_matrix_and_profile();
  CameraAutomata automata = build_camera_automata(defaults.config);
  ModelDoc doc;
  HsNetOptions hs;
  hs.buffer_capacity = defaults.config.buffer_capacity;
  doc.nets.push_back(build_hs_net(hs));
  hs.frames = 1;
  hs.name = "SF";
  doc.nets.push_back(build_hs_net(hs));
  doc.nets.push_back(build_idle_net());
  doc.automata = {automata.camera, automata.autofocus, automata.hierarchical};
  doc.matrix = defaults.matrix;
  doc.profile = defaults.profile;
  doc.config = defaults.config;
  doc.colours["HS"] = hs_path_colours(doc.nets[0]);
  doc.colours["SF"] = hs_path_colours(doc.nets[1]);
  return doc;
}

}  // namespace pmk
