#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "amc/config.hpp"
#include "amc/scenarios.hpp"

namespace amc {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Rows produced by a recipe's config plus the config itself.
struct RecipeRun {
  RunConfig config;
  std::vector<SweepRow> rows;
};

struct RecipeCheck {
  std::string name;
  std::function<CheckResult(const RecipeRun&)> run;
};

/// One figure of the study: the config that regenerates its data and the
/// properties the data must satisfy.
struct FigureRecipe {
  int figure = 0;
  std::string id;
  std::string config_file;  ///< relative to the recipe directory
  std::string title;
  std::vector<RecipeCheck> checks;
};

/// Figures 3 to 10, in order.
std::vector<FigureRecipe> list_recipes();

/// Directory holding the recipe configs; AMC_RECIPE_DIR when set in the
/// environment, else the source tree's recipes/.
std::string recipe_directory();

struct RecipeReport {
  RecipeRun run;
  std::vector<CheckResult> checks;
  [[nodiscard]] bool passed() const;
};

/// Loads the recipe's config, optionally overriding the oracle trial count,
/// runs the sweep and evaluates every check.
RecipeReport run_recipe(const FigureRecipe& recipe,
                        std::optional<std::uint64_t> trials = std::nullopt,
                        const std::string& directory = recipe_directory());

/// BEP_RTAR <= BEP_REAR + eps <= BEP_NAR + eps at every (parameter, knowledge).
CheckResult check_ordering(const std::vector<SweepRow>& rows, double eps = 1e-10);

}  // namespace amc
