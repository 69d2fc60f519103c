#pragma once

#include <cstdint>

namespace dem::train {

enum class Engine { Auto, Tape, Batched };

struct TrainConfig {
  int epochs = 5000;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_hat = 1e-8;
  // Step decay; 0 disables.
  int decay_every = 0;
  double decay_factor = 0.5;
  std::uint64_t seed = 0;
  int diag_every = 100;
  // Early stop when the smoothed loss moves less than rel_tol over
  // `window` epochs; window 0 disables.
  int window = 200;
  double rel_tol = 1e-7;
  int smooth_span = 50;
  int checkpoint_every = 0;
  Engine engine = Engine::Auto;
};

}  // namespace dem::train
