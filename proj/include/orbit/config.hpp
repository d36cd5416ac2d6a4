#pragma once

// Flat key = value configuration files ('#' starts a comment).  Required
// keys: alpha, profile.  Optional: dimension, coefficient, anisotropy,
// beta, m0, r0.

#include <map>
#include <string>

#include "orbit/potential.hpp"

namespace orbit {

std::map<std::string, std::string> parse_kv_file(const std::string& path);

PotentialSpec potential_from_config(const std::map<std::string, std::string>& kv);
PotentialSpec load_potential_config(const std::string& path);

}  // namespace orbit
