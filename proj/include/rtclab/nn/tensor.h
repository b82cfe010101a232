#ifndef RTCLAB_NN_TENSOR_H_
#define RTCLAB_NN_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace rtclab::nn {

// Dense row-major matrix of doubles. Batches live along the rows.
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  Tensor2(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Tensor2 FromRows(
      std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  bool SameShape(const Tensor2& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }
  std::string ShapeString() const;

  double& operator()(std::size_t r, std::size_t c) {
    return values_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  void Fill(double v);
  bool AllFinite() const;

  friend bool operator==(const Tensor2&, const Tensor2&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// out = a * b
void MatMulInto(const Tensor2& a, const Tensor2& b, Tensor2& out);
Tensor2 MatMul(const Tensor2& a, const Tensor2& b);
// out += a^T * b
void MatMulTransAAccumulate(const Tensor2& a, const Tensor2& b, Tensor2& out);
// out += a * b^T
void MatMulTransBAccumulate(const Tensor2& a, const Tensor2& b, Tensor2& out);

// Adds a 1 x cols row to every row of m.
void AddRowInPlace(Tensor2& m, const Tensor2& row);

double Sigmoid(double x);
double LeakyRelu(double x, double slope = 0.01);
Tensor2 LeakyRelu(const Tensor2& x, double slope = 0.01);

// Throws ValidationError with `what` when shapes differ.
void RequireShape(const Tensor2& t, std::size_t rows, std::size_t cols,
                  const std::string& what);

}  // namespace rtclab::nn

#endif  // RTCLAB_NN_TENSOR_H_
