#include "rtclab/nn/checkpoint.h"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "rtclab/common/errors.h"

namespace rtclab::nn {
namespace {

constexpr std::string_view kMagic = "rtcnn v1";
// Guards against absurd allocations from corrupt headers.
constexpr uint32_t kMaxNameLength = 4096;
constexpr uint64_t kMaxElements = uint64_t{1} << 28;

void PutU32(std::ostream& out, uint32_t v) {
  std::array<char, 4> b;
  for (int i = 0; i < 4; ++i)
    b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

void PutF64(std::ostream& out, double d) {
  const auto v = std::bit_cast<uint64_t>(d);
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i)
    b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

bool GetBytes(std::istream& in, char* dst, std::size_t n) {
  in.read(dst, static_cast<std::streamsize>(n));
  return static_cast<std::size_t>(in.gcount()) == n;
}

uint64_t Decode(const unsigned char* b, int n) {
  uint64_t v = 0;
  for (int i = 0; i < n; ++i)
    v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

uint32_t GetU32(std::istream& in, const std::string& what) {
  unsigned char b[4];
  if (!GetBytes(in, reinterpret_cast<char*>(b), 4))
    throw ValidationError("checkpoint truncated in " + what);
  return static_cast<uint32_t>(Decode(b, 4));
}

}  // namespace

void WriteTensors(std::ostream& out, const std::vector<NamedTensor>& tensors) {
  out.write(kMagic.data(), kMagic.size());
  for (const NamedTensor& t : tensors) {
    PutU32(out, static_cast<uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    PutU32(out, static_cast<uint32_t>(t.value.rows()));
    PutU32(out, static_cast<uint32_t>(t.value.cols()));
    for (double v : t.value.values())
      PutF64(out, v);
  }
}

std::vector<NamedTensor> ReadTensors(std::istream& in) {
  std::array<char, kMagic.size()> magic{};
  if (!GetBytes(in, magic.data(), magic.size()) ||
      std::string_view(magic.data(), magic.size()) != kMagic)
    throw ValidationError("not an rtcnn v1 checkpoint (bad header)");

  std::vector<NamedTensor> out;
  while (in.peek() != std::char_traits<char>::eof()) {
    const std::string index = "tensor #" + std::to_string(out.size());
    const uint32_t name_len = GetU32(in, index + " name length");
    if (name_len == 0 || name_len > kMaxNameLength)
      throw ValidationError(index + ": invalid name length " +
                            std::to_string(name_len));
    std::string name(name_len, '\0');
    if (!GetBytes(in, name.data(), name_len))
      throw ValidationError("checkpoint truncated in " + index + " name");
    const uint32_t rows = GetU32(in, "tensor '" + name + "' rows");
    const uint32_t cols = GetU32(in, "tensor '" + name + "' cols");
    const uint64_t count = uint64_t{rows} * cols;
    if (count > kMaxElements)
      throw ValidationError("tensor '" + name + "': implausible shape " +
                            std::to_string(rows) + "x" + std::to_string(cols));
    std::vector<unsigned char> raw(count * 8);
    if (!GetBytes(in, reinterpret_cast<char*>(raw.data()), raw.size()))
      throw ValidationError("tensor '" + name + "': data truncated");
    std::vector<double> values(count);
    for (uint64_t i = 0; i < count; ++i)
      values[i] = std::bit_cast<double>(Decode(raw.data() + 8 * i, 8));
    out.push_back({name, Tensor2(rows, cols, std::move(values))});
  }
  return out;
}

std::vector<NamedTensor> PolicyToTensors(const PolicyParams& params) {
  std::vector<NamedTensor> out;
  for (const Parameter* p : params.All())
    out.push_back({p->name, p->value});
  return out;
}

PolicyParams PolicyFromTensors(const std::vector<NamedTensor>& tensors) {
  std::map<std::string, const Tensor2*> by_name;
  for (const NamedTensor& t : tensors)
    if (!by_name.emplace(t.name, &t.value).second)
      throw ValidationError("tensor '" + t.name + "': duplicated");

  // Shapes are taken from the file; Validate() checks consistency.
  PolicyParams p = PolicyParams::Init(PolicyConfig{});
  for (Parameter* param : p.All()) {
    auto it = by_name.find(param->name);
    if (it == by_name.end())
      throw ValidationError("tensor '" + param->name + "': missing");
    param->value = *it->second;
    param->grad = Tensor2(param->value.rows(), param->value.cols());
    by_name.erase(it);
  }
  if (!by_name.empty())
    throw ValidationError("tensor '" + by_name.begin()->first +
                          "': not part of the policy");
  try {
    p.Validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("tensor ") + e.what());
  }
  return p;
}

void SaveCheckpoint(const std::string& path, const PolicyParams& params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot write checkpoint " + path);
  WriteTensors(out, PolicyToTensors(params));
  if (!out)
    throw std::runtime_error("write failed for " + path);
}

PolicyParams LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open checkpoint " + path);
  try {
    return PolicyFromTensors(ReadTensors(in));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace rtclab::nn
