#include "emogan/mathkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "emogan/error.hpp"

namespace emogan {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Mat::Mat(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("Mat: " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                         " needs " + std::to_string(rows_ * cols_) + " values, got " +
                         std::to_string(data_.size()));
  }
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

bool all_finite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size(), "cosine_similarity");
  const double na = norm(a);
  const double nb = norm(b);
  if (na < kEpsNorm || nb < kEpsNorm) return 0.0;
  return dot(a, b) / (na * nb);
}

Vec cosine_similarity_grad(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size(), "cosine_similarity_grad");
  Vec g(a.size(), 0.0);
  const double na = norm(a);
  const double nb = norm(b);
  if (na < kEpsNorm || nb < kEpsNorm) return g;
  // d/da [a.b / (|a||b|)] = b/(|a||b|) - (a.b) a / (|a|^3 |b|)
  const double inv = 1.0 / (na * nb);
  const double c = dot(a, b) * inv / (na * na);
  for (std::size_t i = 0; i < a.size(); ++i) g[i] = b[i] * inv - c * a[i];
  return g;
}

LossAndGrad mse_loss(std::span<const double> pred, std::span<const double> target) {
  require_same_length(pred.size(), target.size(), "mse_loss");
  if (pred.empty()) throw DimensionError("mse_loss: empty input");
  const double n = static_cast<double>(pred.size());
  LossAndGrad out;
  out.grad.resize(pred.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    sum += d * d;
    out.grad[i] = 2.0 * d / n;
  }
  out.loss = sum / n;
  return out;
}

LossAndGrad cosine_loss(std::span<const double> pred, std::span<const double> target) {
  require_same_length(pred.size(), target.size(), "cosine_loss");
  const double nt = norm(target);
  if (nt < kEpsNorm) throw DegenerateTargetError("cosine_loss: target vector is zero");
  LossAndGrad out;
  if (norm(pred) < kEpsNorm) {
    out.loss = 1.0;
    out.grad.resize(target.size());
    for (std::size_t i = 0; i < target.size(); ++i) out.grad[i] = -target[i] / nt;
    return out;
  }
  out.loss = 1.0 - cosine_similarity(pred, target);
  out.grad = cosine_similarity_grad(pred, target);
  for (double& g : out.grad) g = -g;
  return out;
}

Vec normalize_forecast(std::span<const double> v) {
  if (v.empty()) throw DimensionError("normalize_forecast: empty vector");
  if (!all_finite(v)) throw DataError("normalize_forecast: non-finite entry");
  const double lo = *std::min_element(v.begin(), v.end());
  Vec out(v.size());
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i] - lo;
    total += out[i];
  }
  if (total < kEpsNorm) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(v.size()));
    return out;
  }
  for (double& x : out) x /= total;
  return out;
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state) {
  require_same_length(params.size(), grads.size(), "adam_step");
  require_same_length(params.size(), state.m.size(), "adam_step state");
  require_same_length(params.size(), state.v.size(), "adam_step state");
  const AdamConfig& c = state.config;
  state.t += 1;
  const double t = static_cast<double>(state.t);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * g;
    state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * g * g;
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    params[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
  }
}

Vec linear_forward(const Mat& w, std::span<const double> b, std::span<const double> x) {
  require_same_length(w.cols(), x.size(), "linear_forward input");
  require_same_length(w.rows(), b.size(), "linear_forward bias");
  Vec y(w.rows());
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const auto row = w.row(r);
    double s = b[r];
    for (std::size_t c = 0; c < x.size(); ++c) s += row[c] * x[c];
    y[r] = s;
  }
  return y;
}

void accumulate_linear_param_grads(std::span<const double> x,
                                   std::span<const double> upstream, Mat& dw,
                                   std::span<double> db) {
  require_same_length(dw.rows(), upstream.size(), "linear grads upstream");
  require_same_length(dw.cols(), x.size(), "linear grads input");
  require_same_length(db.size(), upstream.size(), "linear grads bias");
  for (std::size_t r = 0; r < dw.rows(); ++r) {
    const double u = upstream[r];
    db[r] += u;
    if (u == 0.0) continue;
    auto row = dw.row(r);
    for (std::size_t c = 0; c < x.size(); ++c) row[c] += u * x[c];
  }
}

Vec linear_input_grad(const Mat& w, std::span<const double> upstream) {
  require_same_length(w.rows(), upstream.size(), "linear_input_grad");
  Vec dx(w.cols(), 0.0);
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const double u = upstream[r];
    const auto row = w.row(r);
    for (std::size_t c = 0; c < dx.size(); ++c) dx[c] += u * row[c];
  }
  return dx;
}

LinearGrads linear_backward(const Mat& w, std::span<const double> b,
                            std::span<const double> x,
                            std::span<const double> upstream) {
  require_same_length(w.cols(), x.size(), "linear_backward input");
  require_same_length(w.rows(), b.size(), "linear_backward bias");
  LinearGrads g{Mat(w.rows(), w.cols()), Vec(w.rows(), 0.0), {}};
  accumulate_linear_param_grads(x, upstream, g.dw, g.db);
  g.dx = linear_input_grad(w, upstream);
  return g;
}

}  // namespace emogan
