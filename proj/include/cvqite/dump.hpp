#pragma once

#include <json.hpp>

#include "cvqite/fock.hpp"

namespace cvqite {

// Amplitude/operator dumps: {"kind", "n_cutoff", "n_modes", "data"} where
// "data" is a flat row-major array of [re, im] pairs in the basis order fixed
// by TruncationSpec (mode 0 slowest).

nlohmann::json dump_state(const TruncatedState& state);
nlohmann::json dump_operator(const ModeOperator& op);

TruncatedState load_state(const nlohmann::json& j);
ModeOperator load_operator(const nlohmann::json& j);

}  // namespace cvqite
