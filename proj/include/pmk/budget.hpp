#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmk/cpn.hpp"

namespace pmk {

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Target { GPP, DSP, Motors };

std::string_view to_string(Target t);
std::optional<Target> target_from_string(std::string_view s);

/// Allowed targets per operation, mode or submode name.
struct DeploymentMatrix {
  std::map<std::string, std::set<Target>> rows;

  friend bool operator==(const DeploymentMatrix&, const DeploymentMatrix&) = default;
};

/// The camera's component table.
DeploymentMatrix camera_deployment_matrix();

std::set<Target> deployment_options(const std::string& op, const DeploymentMatrix& matrix);

struct CostEntry {
  double bcet = 0, acet = 0, wcet = 0;
  double bcec = 0, acec = 0, wcec = 0;

  friend bool operator==(const CostEntry&, const CostEntry&) = default;
};

struct ResourceProfile {
  std::map<std::pair<std::string, Target>, CostEntry> entries;

  /// Throws BudgetError naming (operation, target) when absent.
  const CostEntry& at(const std::string& op, Target t) const;

  friend bool operator==(const ResourceProfile&, const ResourceProfile&) = default;
};

/// Synthetic profile: DSP runs twice as fast as GPP at twice the energy.
ResourceProfile camera_default_profile();

/// Throws BudgetError when an entry breaks best <= average <= worst or targets
/// a disallowed site.
void check_profile(const ResourceProfile& profile, const DeploymentMatrix& matrix);

using DeploymentAssignment = std::map<std::string, Target>;

struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  friend bool operator==(const Rational&, const Rational&) = default;
};

struct BudgetConfig {
  std::int64_t buffer_capacity = 4;
  std::int64_t card_size = 1000;
  std::int64_t image_size = 25;
  Rational compression{1, 5};
  std::int64_t shoot_period = 10;
  std::int64_t store_period = 40;

  friend bool operator==(const BudgetConfig&, const BudgetConfig&) = default;
};

/// Throws BudgetError for non-positive fields or compression outside (0, 1].
void check_config(const BudgetConfig& cfg);

struct Triple {
  double best = 0, expected = 0, worst = 0;

  friend bool operator==(const Triple&, const Triple&) = default;
};

struct CostEnvelope {
  Triple time;
  Triple energy;

  friend bool operator==(const CostEnvelope&, const CostEnvelope&) = default;
};

CostEnvelope operator+(const CostEnvelope& a, const CostEnvelope& b);

/// Sequential cost of a firing sequence given by transition names.
/// Transitions without an operation cost nothing.
CostEnvelope trace_cost(const ColouredNet& net, const std::vector<std::string>& trace,
                        const ResourceProfile& profile, const DeploymentAssignment& assignment);

enum class CostMethod { Exact, MonteCarlo };

struct ExpectedCostOptions {
  /// Maximum number of firings per run.
  std::size_t horizon = 1000;
  CostMethod method = CostMethod::Exact;
  std::size_t runs = 10000;
  std::uint64_t seed = 1;
};

struct ExpectedCost {
  double time = 0;
  double energy = 0;
  /// Standard errors of the sample means (zero for exact).
  double time_stderr = 0;
  double energy_stderr = 0;
  std::size_t runs = 0;
};

/// Expected average-case time and energy. The scheduler always fires the
/// lowest-indexed enabled binding; when that binding is in conflict with other
/// enabled bindings, the group is resolved by the transitions' probabilities.
ExpectedCost expected_cost(const ColouredNet& net, const DeploymentAssignment& assignment,
                           const ResourceProfile& profile, const ExpectedCostOptions& options);

/// Index of the first delayed frame, or nullopt when storage keeps pace.
std::optional<std::int64_t> burst_feasibility(const BudgetConfig& cfg);

std::int64_t max_frames(const BudgetConfig& cfg);

enum class Objective { MinWorstTime, MinWorstEnergy };

std::string_view to_string(Objective o);
std::optional<Objective> objective_from_string(std::string_view s);

struct AssignmentResult {
  DeploymentAssignment assignment;
  CostEnvelope cost;
  double objective = 0;
};

/// Operations used by the net's transitions, sorted by name.
std::vector<std::string> net_operations(const ColouredNet& net);

/// One-shot cost of firing each transition of the net once.
CostEnvelope net_cost(const ColouredNet& net, const ResourceProfile& profile,
                      const DeploymentAssignment& assignment);

double objective_value(const CostEnvelope& c, Objective o);

/// Exhaustive search. `context` "IDLE" excludes DSP.
AssignmentResult optimize_assignment(const ColouredNet& net, const DeploymentMatrix& matrix,
                                     const ResourceProfile& profile, Objective objective,
                                     const std::string& context = "");

}  // namespace pmk
