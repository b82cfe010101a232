#include "rtclab/cli/settings.h"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>

#include "rtclab/common/errors.h"

namespace rtclab::cli {
namespace {

double ParseDouble(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || v.empty())
    throw ValidationError("--set " + key + ": '" + v + "' is not a number");
  return out;
}

int64_t ParseInt(const std::string& key, const std::string& v) {
  int64_t out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || v.empty())
    throw ValidationError("--set " + key + ": '" + v + "' is not an integer");
  return out;
}

bool ParseBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1")
    return true;
  if (v == "false" || v == "0")
    return false;
  throw ValidationError("--set " + key + ": '" + v + "' is not a boolean");
}

using Setter = std::function<void(Settings&, const std::string& key,
                                  const std::string& value)>;

template <typename F>
Setter RealField(F field) {
  return [field](Settings& s, const std::string& k, const std::string& v) {
    field(s) = ParseDouble(k, v);
  };
}

template <typename F>
Setter IntField(F field) {
  return [field](Settings& s, const std::string& k, const std::string& v) {
    field(s) = static_cast<std::remove_reference_t<decltype(field(s))>>(
        ParseInt(k, v));
  };
}

template <typename F>
Setter BoolField(F field) {
  return [field](Settings& s, const std::string& k, const std::string& v) {
    field(s) = ParseBool(k, v);
  };
}

#define RTCLAB_FIELD(expr) [](Settings& s) -> auto& { return s.expr; }

const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> setters = {
      {"gen.capacity_min_kbps", RealField(RTCLAB_FIELD(gen.capacity_kbps.min))},
      {"gen.capacity_max_kbps", RealField(RTCLAB_FIELD(gen.capacity_kbps.max))},
      {"gen.delay_min_ms", RealField(RTCLAB_FIELD(gen.delay_ms.min))},
      {"gen.delay_max_ms", RealField(RTCLAB_FIELD(gen.delay_ms.max))},
      {"gen.loss_min", RealField(RTCLAB_FIELD(gen.loss.min))},
      {"gen.loss_max", RealField(RTCLAB_FIELD(gen.loss.max))},
      {"gen.segment_min_s", RealField(RTCLAB_FIELD(gen.segment_duration_s.min))},
      {"gen.segment_max_s", RealField(RTCLAB_FIELD(gen.segment_duration_s.max))},
      {"gen.duration_s", RealField(RTCLAB_FIELD(gen.duration_s))},
      {"env.warmup_kbps", RealField(RTCLAB_FIELD(env.warmup_estimate_kbps))},
      {"env.action_map",
       [](Settings& s, const std::string& k, const std::string& v) {
         if (v == "linear")
           s.env.action_map = ActionMap::kLinear;
         else if (v == "log")
           s.env.action_map = ActionMap::kLog;
         else
           throw ValidationError("--set " + k + ": expected linear or log");
       }},
      {"ppo.gamma", RealField(RTCLAB_FIELD(train.ppo.gamma))},
      {"ppo.gae_lambda", RealField(RTCLAB_FIELD(train.ppo.gae_lambda))},
      {"ppo.clip_epsilon", RealField(RTCLAB_FIELD(train.ppo.clip_epsilon))},
      {"ppo.epochs", IntField(RTCLAB_FIELD(train.ppo.epochs))},
      {"ppo.chunk_len", IntField(RTCLAB_FIELD(train.ppo.chunk_len))},
      {"ppo.minibatch_chunks", IntField(RTCLAB_FIELD(train.ppo.minibatch_chunks))},
      {"ppo.horizon", IntField(RTCLAB_FIELD(train.ppo.horizon))},
      {"ppo.num_envs", IntField(RTCLAB_FIELD(train.ppo.num_envs))},
      {"ppo.workers", IntField(RTCLAB_FIELD(train.ppo.workers))},
      {"ppo.value_coef", RealField(RTCLAB_FIELD(train.ppo.value_coef))},
      {"ppo.entropy_coef", RealField(RTCLAB_FIELD(train.ppo.entropy_coef))},
      {"ppo.max_grad_norm", RealField(RTCLAB_FIELD(train.ppo.max_grad_norm))},
      {"ppo.lr", RealField(RTCLAB_FIELD(train.ppo.adam.lr))},
      {"ppo.normalize_advantages",
       BoolField(RTCLAB_FIELD(train.ppo.normalize_advantages))},
      {"ppo.scale_rewards", BoolField(RTCLAB_FIELD(train.ppo.scale_rewards))},
      {"ppo.hidden_size", IntField(RTCLAB_FIELD(train.ppo.policy.hidden_size))},
      {"ppo.trunk_size", IntField(RTCLAB_FIELD(train.ppo.policy.trunk_size))},
      {"ppo.init_log_std", RealField(RTCLAB_FIELD(train.ppo.policy.init_log_std))},
      {"train.iterations", IntField(RTCLAB_FIELD(train.iterations))},
      {"train.max_env_steps", IntField(RTCLAB_FIELD(train.max_env_steps))},
      {"train.eval_interval", IntField(RTCLAB_FIELD(train.eval_interval))},
      {"ukf.overuse_threshold_ms",
       RealField(RTCLAB_FIELD(ukf.controller.overuse_threshold_ms))},
      {"ukf.underuse_threshold_ms",
       RealField(RTCLAB_FIELD(ukf.controller.underuse_threshold_ms))},
      {"ukf.up_factor", RealField(RTCLAB_FIELD(ukf.controller.up_factor))},
      {"ukf.down_factor", RealField(RTCLAB_FIELD(ukf.controller.down_factor))},
      {"ukf.ut_alpha", RealField(RTCLAB_FIELD(ukf.filter.ut.alpha))},
      {"ukf.ut_beta", RealField(RTCLAB_FIELD(ukf.filter.ut.beta))},
      {"ukf.ut_kappa", RealField(RTCLAB_FIELD(ukf.filter.ut.kappa))},
      {"ukf.gradient_span", IntField(RTCLAB_FIELD(ukf.gradient_span))},
      {"ukf.rate_average_windows",
       IntField(RTCLAB_FIELD(ukf.rate_average_windows))},
      {"eval.workers", IntField(RTCLAB_FIELD(eval_workers))},
      {"constant.kbps", RealField(RTCLAB_FIELD(constant_kbps))},
  };
  return setters;
}

#undef RTCLAB_FIELD

}  // namespace

void ApplyOverride(Settings& s, const std::string& key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ValidationError("--set expects key=value, got '" + key_value + "'");
  const std::string key = key_value.substr(0, eq);
  const std::string value = key_value.substr(eq + 1);
  const auto it = Setters().find(key);
  if (it == Setters().end())
    throw ValidationError("--set: unknown key '" + key + "'");
  it->second(s, key, value);
}

void ApplyOverrides(Settings& s, const std::vector<std::string>& overrides) {
  for (const std::string& kv : overrides)
    ApplyOverride(s, kv);
}

std::vector<std::string> OverrideKeys() {
  std::vector<std::string> keys;
  for (const auto& [k, v] : Setters())
    keys.push_back(k);
  return keys;
}

std::vector<TraceEntry> LoadTraceDir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw ValidationError("trace directory " + dir.string() +
                          " does not exist");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".txt")
      files.push_back(e.path());
  if (files.empty())
    throw ValidationError("trace directory " + dir.string() +
                          " holds no .txt trace files");
  std::sort(files.begin(), files.end());
  std::vector<TraceEntry> out;
  out.reserve(files.size());
  for (const fs::path& f : files)
    out.push_back({f.stem().string(),
                   std::make_shared<NetworkTrace>(ReadTraceFile(f.string()))});
  return out;
}

}  // namespace rtclab::cli
