#include "rtclab/nn/gru.h"

#include <cmath>

#include "rtclab/common/errors.h"
#include "rtclab/common/random.h"

namespace rtclab::nn {

Tensor2 FanInUniform(std::size_t fan_in, std::size_t fan_out,
                     std::mt19937_64& rng, double gain) {
  const double bound = gain / std::sqrt(static_cast<double>(fan_in));
  Tensor2 t(fan_in, fan_out);
  for (double& v : t.values())
    v = UniformIn(rng, -bound, bound);
  return t;
}

Tensor2 Orthogonal(std::size_t n, std::mt19937_64& rng) {
  Tensor2 q(n, n);
  for (double& v : q.values())
    v = StandardNormal(rng);
  // Modified Gram-Schmidt over columns.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        dot += q(i, j) * q(i, k);
      for (std::size_t i = 0; i < n; ++i)
        q(i, j) -= dot * q(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      norm += q(i, j) * q(i, j);
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i)
      q(i, j) /= norm;
  }
  return q;
}

GruCellParams GruCellParams::Zeros(const std::string& prefix,
                                   std::size_t input, std::size_t hidden) {
  GruCellParams p;
  p.w_z = Parameter(prefix + ".w_z", Tensor2(input, hidden));
  p.w_r = Parameter(prefix + ".w_r", Tensor2(input, hidden));
  p.w_n = Parameter(prefix + ".w_n", Tensor2(input, hidden));
  p.u_z = Parameter(prefix + ".u_z", Tensor2(hidden, hidden));
  p.u_r = Parameter(prefix + ".u_r", Tensor2(hidden, hidden));
  p.u_n = Parameter(prefix + ".u_n", Tensor2(hidden, hidden));
  p.b_z = Parameter(prefix + ".b_z", Tensor2(1, hidden));
  p.b_r = Parameter(prefix + ".b_r", Tensor2(1, hidden));
  p.b_n = Parameter(prefix + ".b_n", Tensor2(1, hidden));
  return p;
}

GruCellParams GruCellParams::Init(const std::string& prefix,
                                  std::size_t input, std::size_t hidden,
                                  std::mt19937_64& rng) {
  GruCellParams p = Zeros(prefix, input, hidden);
  p.w_z.value = FanInUniform(input, hidden, rng);
  p.w_r.value = FanInUniform(input, hidden, rng);
  p.w_n.value = FanInUniform(input, hidden, rng);
  p.u_z.value = Orthogonal(hidden, rng);
  p.u_r.value = Orthogonal(hidden, rng);
  p.u_n.value = Orthogonal(hidden, rng);
  return p;
}

std::vector<Parameter*> GruCellParams::All() {
  return {&w_z, &w_r, &w_n, &u_z, &u_r, &u_n, &b_z, &b_r, &b_n};
}

std::vector<const Parameter*> GruCellParams::All() const {
  return {&w_z, &w_r, &w_n, &u_z, &u_r, &u_n, &b_z, &b_r, &b_n};
}

void GruCellParams::Validate() const {
  const std::size_t in = input_size();
  const std::size_t hid = hidden_size();
  for (const Parameter* w : {&w_z, &w_r, &w_n})
    RequireShape(w->value, in, hid, w->name);
  for (const Parameter* u : {&u_z, &u_r, &u_n})
    RequireShape(u->value, hid, hid, u->name);
  for (const Parameter* b : {&b_z, &b_r, &b_n})
    RequireShape(b->value, 1, hid, b->name);
}

Tensor2 GruCellForward(const GruCellParams& p, const Tensor2& x,
                       const Tensor2& h) {
  const std::size_t hid = p.hidden_size();
  if (x.cols() != p.input_size() || h.cols() != hid || x.rows() != h.rows())
    throw ValidationError("gru_cell: x " + x.ShapeString() + ", h " +
                          h.ShapeString() + " do not fit the cell");

  Tensor2 z = MatMul(x, p.w_z.value);
  Tensor2 r = MatMul(x, p.w_r.value);
  Tensor2 n = MatMul(x, p.w_n.value);
  const Tensor2 hz = MatMul(h, p.u_z.value);
  const Tensor2 hr = MatMul(h, p.u_r.value);
  const Tensor2 hn = MatMul(h, p.u_n.value);

  Tensor2 out(h.rows(), hid);
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t j = 0; j < hid; ++j) {
      const double zg = Sigmoid(z(i, j) + hz(i, j) + p.b_z.value[j]);
      const double rg = Sigmoid(r(i, j) + hr(i, j) + p.b_r.value[j]);
      const double ng = std::tanh(n(i, j) + rg * (hn(i, j) + p.b_n.value[j]));
      out(i, j) = (1.0 - zg) * ng + zg * h(i, j);
    }
  }
  return out;
}

GruVars GruVars::Bind(Graph& g, GruCellParams& p) {
  return {g.Param(p.w_z), g.Param(p.w_r), g.Param(p.w_n),
          g.Param(p.u_z), g.Param(p.u_r), g.Param(p.u_n),
          g.Param(p.b_z), g.Param(p.b_r), g.Param(p.b_n)};
}

Var GruCell(Graph& g, const GruVars& p, Var x, Var h) {
  const Var z = g.Sigmoid(
      g.Add(g.Add(g.MatMul(x, p.w_z), g.MatMul(h, p.u_z)), p.b_z));
  const Var r = g.Sigmoid(
      g.Add(g.Add(g.MatMul(x, p.w_r), g.MatMul(h, p.u_r)), p.b_r));
  const Var n = g.Tanh(g.Add(
      g.MatMul(x, p.w_n), g.Mul(r, g.Add(g.MatMul(h, p.u_n), p.b_n))));
  // h' = n + z * (h - n)
  return g.Add(n, g.Mul(z, g.Sub(h, n)));
}

}  // namespace rtclab::nn
