#pragma once

// JSON checkpoints: a config header plus layer-ordered weight/bias arrays.
// Layout: {"nets": [{"config": {...}, "layers": [{"w": [[row-major]], "b":
// [...]}, ...]}, ...]} where w[r][c] multiplies input c into output r.

#include <string>
#include <vector>

#include "dem/mlp.hpp"

namespace dem::io {

void save_checkpoint(const std::string& path,
                     const std::vector<nn::MlpConfig>& configs,
                     const std::vector<nn::MlpParams>& params);

struct Checkpoint {
  std::vector<nn::MlpConfig> configs;
  std::vector<nn::MlpParams> params;
};

Checkpoint load_checkpoint(const std::string& path);

}  // namespace dem::io
