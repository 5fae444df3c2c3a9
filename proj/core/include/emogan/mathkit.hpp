#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace emogan {

using Vec = std::vector<double>;

// Norms below this are treated as zero by every cosine routine.
inline constexpr double kEpsNorm = 1e-12;

// Dense row-major matrix of doubles.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0);
  Mat(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Mat identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const Mat&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct LossAndGrad {
  double loss = 0.0;
  Vec grad;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
bool all_finite(std::span<const double> a);

// dot(a,b)/(|a||b|), or 0 when either norm is below kEpsNorm.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Gradient of cosine_similarity(a, b) with respect to a. Zero when either
// norm is below kEpsNorm.
Vec cosine_similarity_grad(std::span<const double> a, std::span<const double> b);

// Mean squared error and its gradient with respect to pred.
LossAndGrad mse_loss(std::span<const double> pred, std::span<const double> target);

// 1 - cos(pred, target). When pred is (numerically) zero the loss is 1 and
// the gradient is -target/|target|. Throws DegenerateTargetError on a zero
// target.
LossAndGrad cosine_loss(std::span<const double> pred, std::span<const double> target);

// Min-shift followed by sum normalization onto the probability simplex.
// A constant vector maps to the uniform distribution.
Vec normalize_forecast(std::span<const double> v);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  bool operator==(const AdamConfig&) const = default;
};

struct AdamState {
  AdamConfig config;
  Vec m;
  Vec v;
  long long t = 0;

  AdamState() = default;
  AdamState(std::size_t n, AdamConfig cfg = {}) : config(cfg), m(n, 0.0), v(n, 0.0) {}

  bool operator==(const AdamState&) const = default;
};

// One bias-corrected Adam update of params in place; increments state.t.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state);

// y = W x + b
Vec linear_forward(const Mat& w, std::span<const double> b, std::span<const double> x);

struct LinearGrads {
  Mat dw;
  Vec db;
  Vec dx;
};

// Exact gradients of a linear layer given dL/dy.
LinearGrads linear_backward(const Mat& w, std::span<const double> b,
                            std::span<const double> x,
                            std::span<const double> upstream);

// dw += upstream * x^T and db += upstream, without materializing dx.
void accumulate_linear_param_grads(std::span<const double> x,
                                   std::span<const double> upstream, Mat& dw,
                                   std::span<double> db);

// W^T upstream
Vec linear_input_grad(const Mat& w, std::span<const double> upstream);

}  // namespace emogan
