#pragma once

#include <filesystem>

#include "fedsim/objective.hpp"

namespace fedsim {

// Plain-text problem container (see docs/formats.md). Doubles are written
// with 17 significant digits, so save followed by load reproduces every
// matrix entry exactly.
void save_problem(const FederatedProblem& problem,
                  const std::filesystem::path& path);

FederatedProblem load_problem(const std::filesystem::path& path);

}  // namespace fedsim
