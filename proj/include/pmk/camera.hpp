#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmk/budget.hpp"
#include "pmk/cpn.hpp"
#include "pmk/mode.hpp"

namespace pmk {

struct HsNetOptions {
  std::string name = "HS";
  std::int64_t buffer_capacity = 4;
  /// Bound of both counters, i.e. the longest burst explored.
  std::int64_t frames = 4;
  /// Replace the buffer-check guards by branch probabilities.
  bool probabilistic_bc = false;
  double p_no_bf = 0.9;
  double p_on_bf = 0.1;
};

ColouredNet build_hs_net(const HsNetOptions& options = {});

/// AF/AE work done while idle, gated by the AutoAF/AutoAE globals.
ColouredNet build_idle_net();

/// Path colour of each net node: "green" for shooting, "red" for storage.
std::map<std::string, std::string> hs_path_colours(const ColouredNet& hs);

struct CameraAutomata {
  ModeAutomaton camera;
  ModeAutomaton autofocus;
  /// Every camera leaf carries the four auto submodes.
  ModeAutomaton hierarchical;
  ProductAutomaton parallel;
};

CameraAutomata build_camera_automata(const BudgetConfig& cfg = {});

struct CameraDefaults {
  DeploymentMatrix matrix;
  ResourceProfile profile;
  BudgetConfig config;
};

CameraDefaults default_matrix_and_profile();

enum class CameraEventKind { HalfPress, FullPress, Hold, Release, SelectSF, SelectMF, ToggleAF, ToggleAE };

std::string_view to_string(CameraEventKind k);
std::optional<CameraEventKind> camera_event_from_string(std::string_view s);

struct CameraEvent {
  CameraEventKind kind;
  std::int64_t at = 0;
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::size_t index, const std::string& msg);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

struct TimelineEntry {
  std::int64_t at = 0;
  std::string from;
  std::string to;
  std::string event;
  /// Frame index for shooting-related switches.
  std::optional<std::int64_t> frame;
};

struct FiringRecord {
  std::int64_t at = 0;
  std::string mode;
  std::string transition;
};

struct ScenarioResult {
  std::vector<FiringRecord> trace;
  std::vector<TimelineEntry> timeline;
  CostEnvelope cost;
  std::string final_mode;
  std::int64_t frames_shot = 0;
};

ScenarioResult run_scenario(const std::vector<CameraEvent>& script, const BudgetConfig& cfg,
                            const DeploymentAssignment& assignment,
                            const ResourceProfile& profile);

}  // namespace pmk
