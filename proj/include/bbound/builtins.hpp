#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bbound {

// Built-in scenario configs shipped with the binary; the same JSON text
// lives under scenarios/ for editing and diffing.
const std::vector<std::pair<std::string, std::string>>& builtin_scenarios();
std::optional<std::string> builtin_scenario(const std::string& name);

}  // namespace bbound
