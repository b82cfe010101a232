#ifndef RTCLAB_NN_GRAPH_H_
#define RTCLAB_NN_GRAPH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "rtclab/nn/tensor.h"

namespace rtclab::nn {

// Trainable tensor with its gradient accumulator.
struct Parameter {
  std::string name;
  Tensor2 value;
  Tensor2 grad;

  Parameter() = default;
  Parameter(std::string n, Tensor2 v)
      : name(std::move(n)), value(std::move(v)),
        grad(value.rows(), value.cols()) {}

  void ZeroGrad() { grad.Fill(0.0); }
};

// Handle to a node in a Graph.
struct Var {
  uint32_t id = 0;
};

// Reverse-mode tape. Each op records its output value; Backward() walks the
// tape in reverse and accumulates gradients, adding parameter gradients into
// Parameter::grad.
//
// Binary elementwise ops broadcast the second operand: its rows must be 1 or
// match, and likewise its columns.
class Graph {
 public:
  Var Input(Tensor2 value);
  Var Param(Parameter& param);

  Var MatMul(Var a, Var b);
  Var Add(Var a, Var b);
  Var Sub(Var a, Var b);
  Var Mul(Var a, Var b);
  Var Minimum(Var a, Var b);  // same shape; ties route to a
  Var Scale(Var a, double s);
  Var AddScalar(Var a, double s);
  Var Sigmoid(Var a);
  Var Tanh(Var a);
  Var LeakyRelu(Var a, double slope = 0.01);
  Var Exp(Var a);
  Var Square(Var a);
  Var Clamp(Var a, double lo, double hi);  // zero gradient outside
  Var Sum(Var a);   // 1 x 1
  Var Mean(Var a);  // 1 x 1
  Var ConcatRows(const std::vector<Var>& parts);

  // Pre: loss is 1 x 1. May be called once per graph.
  void Backward(Var loss);

  const Tensor2& value(Var v) const;
  // Throws StateError before Backward().
  const Tensor2& grad(Var v) const;

  std::size_t size() const { return nodes_.size(); }

 private:
  enum class Op : uint8_t {
    kInput, kParam, kMatMul, kAdd, kSub, kMul, kMinimum, kScale, kAddScalar,
    kSigmoid, kTanh, kLeakyRelu, kExp, kSquare, kClamp, kSum, kMean,
    kConcatRows,
  };

  struct Node {
    Op op;
    Tensor2 value;
    Tensor2 grad;
    uint32_t a = 0;
    uint32_t b = 0;
    double s0 = 0.0;
    double s1 = 0.0;
    Parameter* param = nullptr;
    std::vector<uint32_t> parts;  // ConcatRows inputs
  };

  Var Push(Node node);
  const Node& node(Var v) const;
  Var Broadcast(Op op, Var a, Var b);
  Var Unary(Op op, Var a, Tensor2 out, double s0 = 0.0, double s1 = 0.0);
  void BackwardNode(Node& n);

  std::vector<Node> nodes_;
  bool backward_done_ = false;
};

}  // namespace rtclab::nn

#endif  // RTCLAB_NN_GRAPH_H_
