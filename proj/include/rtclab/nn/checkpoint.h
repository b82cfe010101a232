#ifndef RTCLAB_NN_CHECKPOINT_H_
#define RTCLAB_NN_CHECKPOINT_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "rtclab/nn/policy.h"
#include "rtclab/nn/tensor.h"

namespace rtclab::nn {

// Binary layout, all integers little-endian:
//   "rtcnn v1"                                   8 bytes
//   repeated until EOF:
//     u32 name length, name bytes
//     u32 rows, u32 cols
//     rows * cols IEEE-754 binary64, row-major
struct NamedTensor {
  std::string name;
  Tensor2 value;

  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

void WriteTensors(std::ostream& out, const std::vector<NamedTensor>& tensors);
// Throws ValidationError naming the tensor being read when the stream is
// malformed or truncated.
std::vector<NamedTensor> ReadTensors(std::istream& in);

void SaveCheckpoint(const std::string& path, const PolicyParams& params);
// Builds the policy from the stored tensors; shapes come from the file.
// Throws ValidationError naming the tensor that is missing, misshapen,
// non-finite or unexpected.
PolicyParams LoadCheckpoint(const std::string& path);
PolicyParams PolicyFromTensors(const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> PolicyToTensors(const PolicyParams& params);

}  // namespace rtclab::nn

#endif  // RTCLAB_NN_CHECKPOINT_H_
