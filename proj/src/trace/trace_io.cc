#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "rtclab/common/errors.h"
#include "rtclab/trace/trace.h"

namespace rtclab {
namespace {

constexpr std::string_view kMagic = "rtctrace";
constexpr std::string_view kVersion = "v1";
constexpr std::string_view kDurationKey = "duration_ms=";

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> SplitFields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto start = s.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos)
      break;
    auto end = s.find_first_of(" \t", start);
    if (end == std::string_view::npos)
      end = s.size();
    out.push_back(s.substr(start, end - start));
    pos = end;
  }
  return out;
}

template <typename T>
T ParseNumber(std::string_view token, std::size_t line, const char* field) {
  T value{};
  const auto* begin = token.data();
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError(line, field,
                     "expected a number, got '" + std::string(token) + "'");
  return value;
}

template <typename T>
void AppendNumber(std::string& out, T value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

}  // namespace

NetworkTrace ParseTrace(std::string_view text) {
  std::vector<TraceSegment> segments;
  int64_t duration = -1;
  bool have_header = false;
  std::size_t line_no = 0;

  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty())
      continue;

    const auto fields = SplitFields(line);
    if (!have_header) {
      if (fields.size() != 3 || fields[0] != kMagic)
        throw ParseError(line_no, "header",
                         "expected 'rtctrace v1 duration_ms=<int>'");
      if (fields[1] != kVersion)
        throw ParseError(line_no, "version",
                         "unsupported version '" + std::string(fields[1]) +
                             "'");
      if (fields[2].substr(0, kDurationKey.size()) != kDurationKey)
        throw ParseError(line_no, "duration_ms", "missing duration_ms=");
      duration = ParseNumber<int64_t>(fields[2].substr(kDurationKey.size()),
                                      line_no, "duration_ms");
      have_header = true;
      continue;
    }

    if (fields.size() != 4)
      throw ParseError(line_no, "segment",
                       "expected 4 fields, got " +
                           std::to_string(fields.size()));
    TraceSegment seg;
    seg.start_ms = ParseNumber<int64_t>(fields[0], line_no, "start_ms");
    seg.params.capacity_kbps =
        ParseNumber<double>(fields[1], line_no, "capacity_kbps");
    seg.params.one_way_delay_ms =
        ParseNumber<double>(fields[2], line_no, "owd_ms");
    seg.params.loss_rate = ParseNumber<double>(fields[3], line_no, "loss_rate");
    segments.push_back(seg);
  }

  if (!have_header)
    throw ParseError(line_no == 0 ? 1 : line_no, "header", "missing header");
  return NetworkTrace(std::move(segments), duration);
}

std::string SerializeTrace(const NetworkTrace& trace) {
  std::string out = "rtctrace v1 duration_ms=";
  AppendNumber(out, trace.duration_ms());
  out += '\n';
  for (const auto& seg : trace.segments()) {
    AppendNumber(out, seg.start_ms);
    out += ' ';
    AppendNumber(out, seg.params.capacity_kbps);
    out += ' ';
    AppendNumber(out, seg.params.one_way_delay_ms);
    out += ' ';
    AppendNumber(out, seg.params.loss_rate);
    out += '\n';
  }
  return out;
}

NetworkTrace ReadTraceFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open trace file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return ParseTrace(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void WriteTraceFile(const std::string& path, const NetworkTrace& trace) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot write trace file " + path);
  out << SerializeTrace(trace);
  if (!out)
    throw std::runtime_error("write failed for " + path);
}

}  // namespace rtclab
