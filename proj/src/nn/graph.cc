#include "rtclab/nn/graph.h"

#include <cmath>

#include "rtclab/common/errors.h"

namespace rtclab::nn {
namespace {

// Index into a broadcast operand for element (i, j) of the full shape.
inline std::size_t BIndex(const Tensor2& b, std::size_t i, std::size_t j) {
  const std::size_t r = b.rows() == 1 ? 0 : i;
  const std::size_t c = b.cols() == 1 ? 0 : j;
  return r * b.cols() + c;
}

}  // namespace

Var Graph::Push(Node node) {
  node.grad = Tensor2(node.value.rows(), node.value.cols());
  nodes_.push_back(std::move(node));
  return Var{static_cast<uint32_t>(nodes_.size() - 1)};
}

const Graph::Node& Graph::node(Var v) const {
  if (v.id >= nodes_.size())
    throw StateError("unknown graph variable");
  return nodes_[v.id];
}

const Tensor2& Graph::value(Var v) const { return node(v).value; }

const Tensor2& Graph::grad(Var v) const {
  if (!backward_done_)
    throw StateError("gradients queried before Backward()");
  return node(v).grad;
}

Var Graph::Input(Tensor2 value) {
  Node n{};
  n.op = Op::kInput;
  n.value = std::move(value);
  return Push(std::move(n));
}

Var Graph::Param(Parameter& param) {
  Node n{};
  n.op = Op::kParam;
  n.value = param.value;
  n.param = &param;
  return Push(std::move(n));
}

Var Graph::MatMul(Var a, Var b) {
  Node n{};
  n.op = Op::kMatMul;
  n.a = a.id;
  n.b = b.id;
  MatMulInto(node(a).value, node(b).value, n.value);
  return Push(std::move(n));
}

Var Graph::Broadcast(Op op, Var a, Var b) {
  const Tensor2& av = node(a).value;
  const Tensor2& bv = node(b).value;
  const bool rows_ok = bv.rows() == av.rows() || bv.rows() == 1;
  const bool cols_ok = bv.cols() == av.cols() || bv.cols() == 1;
  if (!rows_ok || !cols_ok)
    throw ValidationError("cannot broadcast " + bv.ShapeString() + " onto " +
                          av.ShapeString());
  if (op == Op::kMinimum && !av.SameShape(bv))
    throw ValidationError("minimum requires equal shapes");
  Tensor2 out(av.rows(), av.cols());
  for (std::size_t i = 0; i < av.rows(); ++i) {
    for (std::size_t j = 0; j < av.cols(); ++j) {
      const double x = av(i, j);
      const double y = bv[BIndex(bv, i, j)];
      double r = 0.0;
      switch (op) {
        case Op::kAdd: r = x + y; break;
        case Op::kSub: r = x - y; break;
        case Op::kMul: r = x * y; break;
        case Op::kMinimum: r = x <= y ? x : y; break;
        default: break;
      }
      out(i, j) = r;
    }
  }
  Node n{};
  n.op = op;
  n.a = a.id;
  n.b = b.id;
  n.value = std::move(out);
  return Push(std::move(n));
}

Var Graph::Add(Var a, Var b) { return Broadcast(Op::kAdd, a, b); }
Var Graph::Sub(Var a, Var b) { return Broadcast(Op::kSub, a, b); }
Var Graph::Mul(Var a, Var b) { return Broadcast(Op::kMul, a, b); }
Var Graph::Minimum(Var a, Var b) { return Broadcast(Op::kMinimum, a, b); }

Var Graph::Unary(Op op, Var a, Tensor2 out, double s0, double s1) {
  Node n{};
  n.op = op;
  n.a = a.id;
  n.s0 = s0;
  n.s1 = s1;
  n.value = std::move(out);
  return Push(std::move(n));
}

Var Graph::Scale(Var a, double s) {
  Tensor2 out = node(a).value;
  for (double& v : out.values())
    v *= s;
  return Unary(Op::kScale, a, std::move(out), s);
}

Var Graph::AddScalar(Var a, double s) {
  Tensor2 out = node(a).value;
  for (double& v : out.values())
    v += s;
  return Unary(Op::kAddScalar, a, std::move(out), s);
}

Var Graph::Sigmoid(Var a) {
  Tensor2 out = node(a).value;
  for (double& v : out.values())
    v = nn::Sigmoid(v);
  return Unary(Op::kSigmoid, a, std::move(out));
}

Var Graph::Tanh(Var a) {
  Tensor2 out = node(a).value;
  for (double& v : out.values())
    v = std::tanh(v);
  return Unary(Op::kTanh, a, std::move(out));
}

Var Graph::LeakyRelu(Var a, double slope) {
  return Unary(Op::kLeakyRelu, a, nn::LeakyRelu(node(a).value, slope), slope);
}

Var Graph::Exp(Var a) {
  Tensor2 out = node(a).value;
  for (double& v : out.values())
    v = std::exp(v);
  return Unary(Op::kExp, a, std::move(out));
}

Var Graph::Square(Var a) {
  Tensor2 out = node(a).value;
  for (double& v : out.values())
    v = v * v;
  return Unary(Op::kSquare, a, std::move(out));
}

Var Graph::Clamp(Var a, double lo, double hi) {
  Tensor2 out = node(a).value;
  for (double& v : out.values())
    v = v < lo ? lo : (v > hi ? hi : v);
  return Unary(Op::kClamp, a, std::move(out), lo, hi);
}

Var Graph::Sum(Var a) {
  double s = 0.0;
  for (double v : node(a).value.values())
    s += v;
  return Unary(Op::kSum, a, Tensor2(1, 1, s));
}

Var Graph::Mean(Var a) {
  const Tensor2& v = node(a).value;
  if (v.size() == 0)
    throw ValidationError("mean of an empty tensor");
  double s = 0.0;
  for (double x : v.values())
    s += x;
  return Unary(Op::kMean, a, Tensor2(1, 1, s / static_cast<double>(v.size())));
}

Var Graph::ConcatRows(const std::vector<Var>& parts) {
  if (parts.empty())
    throw ValidationError("concat of no tensors");
  const std::size_t cols = node(parts[0]).value.cols();
  std::size_t rows = 0;
  for (Var p : parts) {
    if (node(p).value.cols() != cols)
      throw ValidationError("concat column mismatch");
    rows += node(p).value.rows();
  }
  Node n{};
  n.op = Op::kConcatRows;
  n.value = Tensor2(rows, cols);
  std::size_t offset = 0;
  for (Var p : parts) {
    const Tensor2& v = node(p).value;
    std::copy(v.data(), v.data() + v.size(), n.value.data() + offset);
    offset += v.size();
    n.parts.push_back(p.id);
  }
  return Push(std::move(n));
}

void Graph::Backward(Var loss) {
  if (backward_done_)
    throw StateError("Backward() already ran on this graph");
  Node& root = nodes_.at(loss.id);
  if (root.value.rows() != 1 || root.value.cols() != 1)
    throw ValidationError("Backward() needs a 1x1 loss");
  root.grad[0] = 1.0;
  for (std::size_t i = loss.id + 1; i-- > 0;)
    BackwardNode(nodes_[i]);
  backward_done_ = true;
}

void Graph::BackwardNode(Node& n) {
  const Tensor2& g = n.grad;
  switch (n.op) {
    case Op::kInput:
      return;
    case Op::kParam: {
      double* dst = n.param->grad.data();
      for (std::size_t i = 0; i < g.size(); ++i)
        dst[i] += g[i];
      return;
    }
    case Op::kMatMul: {
      Node& a = nodes_[n.a];
      Node& b = nodes_[n.b];
      MatMulTransBAccumulate(g, b.value, a.grad);  // dA = G B^T
      MatMulTransAAccumulate(a.value, g, b.grad);  // dB = A^T G
      return;
    }
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul:
    case Op::kMinimum: {
      Node& a = nodes_[n.a];
      Node& b = nodes_[n.b];
      for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
          const double gij = g(i, j);
          const std::size_t bi = BIndex(b.value, i, j);
          switch (n.op) {
            case Op::kAdd:
              a.grad(i, j) += gij;
              b.grad[bi] += gij;
              break;
            case Op::kSub:
              a.grad(i, j) += gij;
              b.grad[bi] -= gij;
              break;
            case Op::kMul:
              a.grad(i, j) += gij * b.value[bi];
              b.grad[bi] += gij * a.value(i, j);
              break;
            case Op::kMinimum:
              if (a.value(i, j) <= b.value[bi])
                a.grad(i, j) += gij;
              else
                b.grad[bi] += gij;
              break;
            default:
              break;
          }
        }
      }
      return;
    }
    default:
      break;
  }

  if (n.op == Op::kConcatRows) {
    std::size_t offset = 0;
    for (uint32_t p : n.parts) {
      Tensor2& pg = nodes_[p].grad;
      for (std::size_t i = 0; i < pg.size(); ++i)
        pg[i] += g[offset + i];
      offset += pg.size();
    }
    return;
  }

  Node& a = nodes_[n.a];
  const std::size_t count = a.grad.size();
  switch (n.op) {
    case Op::kScale:
      for (std::size_t i = 0; i < count; ++i)
        a.grad[i] += n.s0 * g[i];
      break;
    case Op::kAddScalar:
      for (std::size_t i = 0; i < count; ++i)
        a.grad[i] += g[i];
      break;
    case Op::kSigmoid:
      for (std::size_t i = 0; i < count; ++i) {
        const double y = n.value[i];
        a.grad[i] += g[i] * y * (1.0 - y);
      }
      break;
    case Op::kTanh:
      for (std::size_t i = 0; i < count; ++i) {
        const double y = n.value[i];
        a.grad[i] += g[i] * (1.0 - y * y);
      }
      break;
    case Op::kLeakyRelu:
      for (std::size_t i = 0; i < count; ++i)
        a.grad[i] += g[i] * (a.value[i] >= 0.0 ? 1.0 : n.s0);
      break;
    case Op::kExp:
      for (std::size_t i = 0; i < count; ++i)
        a.grad[i] += g[i] * n.value[i];
      break;
    case Op::kSquare:
      for (std::size_t i = 0; i < count; ++i)
        a.grad[i] += g[i] * 2.0 * a.value[i];
      break;
    case Op::kClamp:
      for (std::size_t i = 0; i < count; ++i) {
        const double x = a.value[i];
        if (x >= n.s0 && x <= n.s1)
          a.grad[i] += g[i];
      }
      break;
    case Op::kSum:
      for (std::size_t i = 0; i < count; ++i)
        a.grad[i] += g[0];
      break;
    case Op::kMean: {
      const double share = g[0] / static_cast<double>(count);
      for (std::size_t i = 0; i < count; ++i)
        a.grad[i] += share;
      break;
    }
    default:
      break;
  }
}

}  // namespace rtclab::nn
