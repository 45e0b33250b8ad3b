#ifndef TORUSFIT_CLI_HPP
#define TORUSFIT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "torusfit/model.hpp"

namespace torusfit {

// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInternal = 2 };

// Runs one subcommand: fit, simulate, gof, compare, moments, heatmap, simstudy.
// Domain, parse and I/O problems print to `err` and return 1; anything
// unexpected returns 2.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

// Inverse of to_json(FittedParams) for the given family.
FittedParams params_from_json(Family family, const nlohmann::json& j);

}  // namespace torusfit

#endif  // TORUSFIT_CLI_HPP
