#pragma once

#include <string>

#include "coocmatch/optimizer.hpp"

namespace coocmatch {

// AttackConfig <-> JSON, used for config files and manifest snapshots.
// Parsing starts from the defaults and rejects unknown keys so config
// typos fail loudly instead of silently running defaults.
std::string attack_config_to_json(const AttackConfig& cfg);
AttackConfig attack_config_from_json(const std::string& text);

}  // namespace coocmatch
