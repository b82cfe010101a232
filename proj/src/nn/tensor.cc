#include "rtclab/nn/tensor.h"

#include <cmath>

#include "rtclab/common/errors.h"

namespace rtclab::nn {

Tensor2::Tensor2(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_)
    throw ValidationError("tensor value count does not match shape");
}

Tensor2 Tensor2::FromRows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  Tensor2 t(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c)
      throw ValidationError("ragged tensor initializer");
    for (double v : row)
      t.values_[i++] = v;
  }
  return t;
}

std::string Tensor2::ShapeString() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

void Tensor2::Fill(double v) {
  for (double& x : values_)
    x = v;
}

bool Tensor2::AllFinite() const {
  for (double x : values_)
    if (!std::isfinite(x))
      return false;
  return true;
}

void RequireShape(const Tensor2& t, std::size_t rows, std::size_t cols,
                  const std::string& what) {
  if (t.rows() != rows || t.cols() != cols)
    throw ValidationError(what + ": expected shape " + std::to_string(rows) +
                          "x" + std::to_string(cols) + ", got " +
                          t.ShapeString());
}

void MatMulInto(const Tensor2& a, const Tensor2& b, Tensor2& out) {
  if (a.cols() != b.rows())
    throw ValidationError("matmul shape mismatch: " + a.ShapeString() +
                          " * " + b.ShapeString());
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  if (out.rows() != n || out.cols() != m)
    out = Tensor2(n, m);
  else
    out.Fill(0.0);
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  for (std::size_t i = 0; i < n; ++i) {
    double* orow = po + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = pa[i * k + p];
      const double* brow = pb + p * m;
      for (std::size_t j = 0; j < m; ++j)
        orow[j] += av * brow[j];
    }
  }
}

Tensor2 MatMul(const Tensor2& a, const Tensor2& b) {
  Tensor2 out;
  MatMulInto(a, b, out);
  return out;
}

void MatMulTransAAccumulate(const Tensor2& a, const Tensor2& b, Tensor2& out) {
  // a: n x k, b: n x m, out: k x m
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double* brow = pb + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = pa[i * k + p];
      if (av == 0.0)
        continue;
      double* orow = po + p * m;
      for (std::size_t j = 0; j < m; ++j)
        orow[j] += av * brow[j];
    }
  }
}

void MatMulTransBAccumulate(const Tensor2& a, const Tensor2& b, Tensor2& out) {
  // a: n x m, b: k x m, out: n x k
  const std::size_t n = a.rows(), m = a.cols(), k = b.rows();
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = pa + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const double* brow = pb + p * m;
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        acc += arow[j] * brow[j];
      po[i * k + p] += acc;
    }
  }
}

void AddRowInPlace(Tensor2& m, const Tensor2& row) {
  const std::size_t c = m.cols();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < c; ++j)
      m(i, j) += row[j];
}

double Sigmoid(double x) {
  if (x >= 0.0)
    return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double LeakyRelu(double x, double slope) { return x >= 0.0 ? x : slope * x; }

Tensor2 LeakyRelu(const Tensor2& x, double slope) {
  Tensor2 y = x;
  for (double& v : y.values())
    v = LeakyRelu(v, slope);
  return y;
}

}  // namespace rtclab::nn
