#ifndef RTCLAB_CLI_COMMANDS_H_
#define RTCLAB_CLI_COMMANDS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "rtclab/cli/settings.h"
#include "rtclab/env/estimator.h"

namespace rtclab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitValidation = 2,
  kExitRuntime = 3,
};

struct RunConfig {
  std::string traces_dir;
  std::string eval_traces_dir;  // train: held-out traces for checkpointing
  std::string trace_file;       // replay
  std::string checkpoint;
  std::string out_dir = ".";
  uint64_t seed = 1;
  int count = 1150;  // gen-traces
  std::string estimator = "policy";  // eval, replay
  std::string estimator_a = "ukf";   // compare
  std::string estimator_b = "policy";
  bool emit_series = false;
  std::vector<std::string> overrides;
};

// Estimator names: ukf, policy (needs a checkpoint), oracle, constant.
EstimatorFactory MakeEstimatorFactory(const std::string& name,
                                      const RunConfig& run,
                                      const Settings& settings);

// Trace files are named trace_<seed>_<idx>.txt; trace idx is sampled with
// seed EpisodeSeed(seed, idx).
std::string TraceFileName(uint64_t seed, int idx);

void CmdGenTraces(const RunConfig& run, const Settings& s, std::ostream& log);
void CmdTrain(const RunConfig& run, const Settings& s, std::ostream& log);
void CmdEval(const RunConfig& run, const Settings& s, std::ostream& log);
void CmdCompare(const RunConfig& run, const Settings& s, std::ostream& log);
void CmdReplay(const RunConfig& run, const Settings& s, std::ostream& log);

// Runs `fn` and maps exceptions to exit codes, printing the message to err.
int GuardedRun(const std::function<void()>& fn, std::ostream& err);

}  // namespace rtclab::cli

#endif  // RTCLAB_CLI_COMMANDS_H_
