#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "poisest/estimators.hpp"
#include "poisest/model.hpp"

namespace poisest::cli {

enum class OutputFormat { json, tsv };

enum ExitCode : int { kOk = 0, kInputError = 2, kSimulationQuality = 3 };

/// Parses "key=value" items into a map; throws ValidationError on a
/// malformed item, a duplicate key or a non-numeric value.
std::map<std::string, double> parse_params(const std::vector<std::string>& items);

/// Builds an estimator from its CLI name (mean, ratio, product, exp-ratio,
/// exp-product, exp-alpha, difference, general, member:<id>) and parameters.
/// Free member parameters not given in `params` take their closed-form
/// optimum under `conv`.
EstimatorSpec make_estimator(const std::string& name, const std::map<std::string, double>& params,
                             const GammaTriple& g, std::int64_t n, MomentConvention conv);

/// Entry point shared by the executable and the tests. Writes the result
/// document to `out` and diagnostics to `err`; returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload for tests: args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace poisest::cli
