#pragma once

#include <string>
#include <vector>

namespace lpc {

/// Batch command surface: encode, decode, hybrid, pipeline, fs, validate.
/// Returns the process exit status: 0 exactly when the run's declared checks
/// all pass. Diagnostics go to the provided streams.
int run_cli(const std::vector<std::string>& args);

} // namespace lpc
