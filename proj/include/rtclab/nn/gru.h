#ifndef RTCLAB_NN_GRU_H_
#define RTCLAB_NN_GRU_H_

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "rtclab/nn/graph.h"
#include "rtclab/nn/tensor.h"

namespace rtclab::nn {

// GRU cell on row-vector batches (x: B x in, h: B x hidden):
//   z  = sigmoid(x W_z + h U_z + b_z)
//   r  = sigmoid(x W_r + h U_r + b_r)
//   n  = tanh(x W_n + r * (h U_n + b_n))
//   h' = (1 - z) * n + z * h
// W_* are in x hidden, U_* hidden x hidden, b_* 1 x hidden.
struct GruCellParams {
  Parameter w_z, w_r, w_n;
  Parameter u_z, u_r, u_n;
  Parameter b_z, b_r, b_n;

  std::size_t input_size() const { return w_z.value.rows(); }
  std::size_t hidden_size() const { return w_z.value.cols(); }

  // Zero-valued parameters named "<prefix>.w_z" etc.
  static GruCellParams Zeros(const std::string& prefix, std::size_t input,
                             std::size_t hidden);
  // Input weights scaled-uniform by fan-in, recurrent weights orthogonal,
  // biases zero.
  static GruCellParams Init(const std::string& prefix, std::size_t input,
                            std::size_t hidden, std::mt19937_64& rng);

  std::vector<Parameter*> All();
  std::vector<const Parameter*> All() const;
  // Throws ValidationError naming the offending tensor.
  void Validate() const;
};

Tensor2 GruCellForward(const GruCellParams& p, const Tensor2& x,
                       const Tensor2& h);

// Graph handles for one GRU's parameters, bound once per graph.
struct GruVars {
  Var w_z, w_r, w_n, u_z, u_r, u_n, b_z, b_r, b_n;
  static GruVars Bind(Graph& g, GruCellParams& p);
};

Var GruCell(Graph& g, const GruVars& p, Var x, Var h);

// Scaled-uniform init: U(-1/sqrt(fan_in), 1/sqrt(fan_in)) times `gain`.
Tensor2 FanInUniform(std::size_t fan_in, std::size_t fan_out,
                     std::mt19937_64& rng, double gain = 1.0);
// Square matrix with orthonormal columns (Gram-Schmidt on a Gaussian draw).
Tensor2 Orthogonal(std::size_t n, std::mt19937_64& rng);

}  // namespace rtclab::nn

#endif  // RTCLAB_NN_GRU_H_
