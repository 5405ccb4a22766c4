// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "soccerdqn/checkpoint.hpp"
#include "soccerdqn/config.hpp"

namespace sdqn {

/// One progress record, emitted every `log_every` frames and at the end.
struct TrainMetrics {
  std::int64_t step = 0;     ///< environment frames so far
  std::int64_t updates = 0;  ///< gradient updates so far
  double epsilon = 0.0;
  std::optional<double> loss;  ///< mean loss over the window; empty before the gate opens
  double mean_reward = 0.0;    ///< mean team reward over the window
  int goals_for = 0;           ///< goals in the window
  int goals_against = 0;
};

/// Line-delimited JSON form of a metrics record.
std::string metrics_json(const TrainMetrics& m);

struct TrainOptions {
  /// Written every `checkpoint_every` frames and at the end. Empty: no file.
  std::string checkpoint_path;
  /// Continue from this checkpoint's network, step and update counters.
  std::string resume_from;
  std::function<void(const TrainMetrics&)> on_metrics;
};

struct TrainSummary {
  Checkpoint checkpoint;
  std::int64_t steps_run = 0;  ///< frames simulated by this call
  bool stopped_on_plateau = false;
};

/// The learned team plays Home against `trainer.opponent` until
/// `trainer.total_steps` frames have been simulated in total. One
/// transition is stored per frame; a half ending or a goal marks it
/// terminal. Fails before any training when the checkpoint path is not
/// writable.
TrainSummary train(const Config& cfg, const TrainOptions& options = {});

}  // namespace sdqn
