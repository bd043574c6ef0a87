#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmk/budget.hpp"
#include "pmk/cpn.hpp"
#include "pmk/lexer.hpp"
#include "pmk/mode.hpp"

namespace pmk {

struct ModelDoc {
  int version = 1;
  std::vector<ColouredNet> nets;
  std::vector<ModeAutomaton> automata;
  std::optional<DeploymentMatrix> matrix;
  std::optional<ResourceProfile> profile;
  std::optional<BudgetConfig> config;
  /// Path colour tags per net, keyed by node name.
  std::map<std::string, std::map<std::string, std::string>> colours;

  const ColouredNet* find_net(std::string_view name) const;
  const ModeAutomaton* find_automaton(std::string_view name) const;

  friend bool operator==(const ModelDoc&, const ModelDoc&) = default;
};

/// Throws ParseError with the location of the first problem.
ModelDoc parse_model(std::string_view text);

/// Canonical text. Every mode refinement must name a net of the document.
std::string serialize_model(const ModelDoc& doc);

/// The full camera model: HS, SF and IDLE nets, the mode automata, the
/// component table, the synthetic profile and the default budget config.
ModelDoc camera_model_doc();

/// Shortest text that reads back as the same double.
std::string format_double(double v);

}  // namespace pmk
