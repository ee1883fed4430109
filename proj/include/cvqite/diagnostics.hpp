#pragma once

#include <functional>
#include <string_view>

namespace cvqite {

/// Receives non-fatal numerical warnings (truncation, degenerate variance,
/// estimator fallbacks). The default handler writes to stderr.
using WarningHandler = std::function<void(std::string_view)>;

/// Installs `handler` and returns the previous one. Passing an empty handler
/// silences warnings.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

}  // namespace cvqite
