#ifndef RTCLAB_CLI_SETTINGS_H_
#define RTCLAB_CLI_SETTINGS_H_

#include <filesystem>
#include <string>
#include <vector>

#include "rtclab/env/rtc_env.h"
#include "rtclab/eval/evaluate.h"
#include "rtclab/ppo/trainer.h"
#include "rtclab/trace/trace.h"
#include "rtclab/ukf/ukf_estimator.h"

namespace rtclab::cli {

// Everything a command may tune through --set key=value.
struct Settings {
  TraceGenConfig gen;
  EnvConfig env;
  TrainConfig train;
  UkfEstimatorConfig ukf;
  int eval_workers = 1;
  double constant_kbps = 1000.0;
};

// Throws ValidationError for an unknown key or a malformed value.
void ApplyOverride(Settings& s, const std::string& key_value);
void ApplyOverrides(Settings& s, const std::vector<std::string>& overrides);

// Sorted list of accepted keys, for help output.
std::vector<std::string> OverrideKeys();

// Every *.txt file of the directory, sorted by name; the id is the file
// stem. Throws ValidationError if the directory is missing or holds no
// trace files, or for a malformed file (message starts with its path).
std::vector<TraceEntry> LoadTraceDir(const std::filesystem::path& dir);

}  // namespace rtclab::cli

#endif  // RTCLAB_CLI_SETTINGS_H_
