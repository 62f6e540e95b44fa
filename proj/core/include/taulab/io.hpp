#pragma once

#include <string>

#include "taulab/linsys.hpp"

namespace taulab::io {

// {"A": [[[re,im],...],...], "B": ..., "C": ..., "flags": ["scattering"]}
LinearSystem system_from_json(const std::string& text);
std::string system_to_json(const LinearSystem& sys);
LinearSystem load_system(const std::string& path);

}  // namespace taulab::io
