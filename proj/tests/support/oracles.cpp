// Copyright 2026 The w2sc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "w2sc/tensor/ops.hpp"

namespace w2sc::testing {

namespace {

double reduce(const ad::Tensor<double>& y, const std::vector<double>& r) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += r[i] * y.values()[i];
  return s;
}

}  // namespace

ad::Tensor<double> random_tensor(ad::Shape shape, std::mt19937_64& rng, double stddev,
                                 bool requires_grad) {
  ad::Tensor<double> t(std::move(shape), requires_grad);
  std::normal_distribution<double> d(0.0, stddev);
  for (double& v : t.values()) v = d(rng);
  return t;
}

GradCheckResult check_gradients(const Forward& f, const ad::TensorList<double>& inputs,
                                std::mt19937_64& rng, std::size_t max_per_tensor, double step) {
  std::vector<double> r;
  {
    ad::Tape<double> probe(ad::Tape<double>::Mode::kNoGrad);
    const auto y = f(probe);
    std::normal_distribution<double> d(0.0, 1.0);
    r.resize(y.size());
    for (double& v : r) v = d(rng);
  }
  for (const auto& p : inputs) {
    ad::Tensor<double> t = p.tensor;
    t.set_requires_grad(true);
    t.zero_grad();
  }
  {
    ad::Tape<double> tape;
    const auto y = f(tape);
    ad::Tensor<double> weights(y.shape(), r);
    tape.backward(ad::sum(tape, ad::mul(tape, y, weights)));
  }
  GradCheckResult result;
  auto value_at = [&] {
    ad::Tape<double> tape(ad::Tape<double>::Mode::kNoGrad);
    return reduce(f(tape), r);
  };
  for (const auto& p : inputs) {
    ad::Tensor<double> t = p.tensor;
    std::vector<std::size_t> idx(t.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t want = std::min(idx.size(), max_per_tensor);
    const std::vector<double> analytic(t.grad().begin(), t.grad().end());
    std::size_t done = 0;
    for (std::size_t i : idx) {
      if (done == want) break;
      double& x = t.values()[i];
      const double saved = x;
      auto central = [&](double h) {
        x = saved + h;
        const double up = value_at();
        x = saved - h;
        const double down = value_at();
        x = saved;
        return (up - down) / (2.0 * h);
      };
      const double numeric = central(step);
      const double half = central(step / 2);
      if (std::abs(numeric - half) >
          kKinkRatio * std::max({std::abs(numeric), std::abs(half), kGradFloor})) {
        ++result.skipped;
        continue;
      }
      const double a = analytic[i];
      const double err =
          std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), kGradFloor});
      ++result.checked;
      ++done;
      if (err >= result.max_rel_error) {
        result.max_rel_error = err;
        std::ostringstream ss;
        ss << p.name << "[" << i << "] analytic " << a << " numeric " << numeric;
        result.worst = ss.str();
      }
    }
  }
  return result;
}

std::vector<double> naive_conv2d(const std::vector<double>& x, std::size_t n, std::size_t c,
                                 std::size_t h, std::size_t w, const std::vector<double>& k,
                                 std::size_t co, std::size_t kh, std::size_t kw, std::size_t sh,
                                 std::size_t sw, std::size_t pad_top, std::size_t pad_left,
                                 std::size_t oh, std::size_t ow) {
  std::vector<double> y(n * co * oh * ow, 0.0);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t o = 0; o < co; ++o)
      for (std::size_t i = 0; i < oh; ++i)
        for (std::size_t j = 0; j < ow; ++j) {
          double s = 0.0;
          for (std::size_t ci = 0; ci < c; ++ci)
            for (std::size_t u = 0; u < kh; ++u)
              for (std::size_t v = 0; v < kw; ++v) {
                const auto r = static_cast<std::ptrdiff_t>(i * sh + u) - static_cast<std::ptrdiff_t>(pad_top);
                const auto q = static_cast<std::ptrdiff_t>(j * sw + v) - static_cast<std::ptrdiff_t>(pad_left);
                if (r < 0 || q < 0 || r >= static_cast<std::ptrdiff_t>(h) || q >= static_cast<std::ptrdiff_t>(w))
                  continue;
                s += x[((b * c + ci) * h + r) * w + q] * k[((o * c + ci) * kh + u) * kw + v];
              }
          y[((b * co + o) * oh + i) * ow + j] = s;
        }
  return y;
}

double top_singular_value(const std::vector<double>& m, std::size_t rows, std::size_t cols) {
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(
      m.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

std::vector<std::complex<double>> naive_rdft(const std::vector<double>& frame) {
  const std::size_t n = frame.size();
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> s = 0.0;
    for (std::size_t t = 0; t < n; ++t)
      s += frame[t] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * t) / n);
    out[k] = s;
  }
  return out;
}

namespace {

double brute(const eval::FeatureMatrix& x, const eval::FeatureMatrix& y, std::size_t i,
             std::size_t j) {
  const double here = eval::frame_distance(x, i, y, j);
  if (i + 1 == x.rows && j + 1 == y.rows) return here;
  double best = std::numeric_limits<double>::infinity();
  if (i + 1 < x.rows) best = std::min(best, brute(x, y, i + 1, j));
  if (j + 1 < y.rows) best = std::min(best, brute(x, y, i, j + 1));
  if (i + 1 < x.rows && j + 1 < y.rows) best = std::min(best, brute(x, y, i + 1, j + 1));
  return here + best;
}

}  // namespace

double brute_force_dtw(const eval::FeatureMatrix& x, const eval::FeatureMatrix& y) {
  return brute(x, y, 0, 0);
}

TempDir::TempDir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  path_ = std::filesystem::temp_directory_path() /
          ("w2sc_" + tag + "_" + std::to_string(rng() % 1000000007ull));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::vector<double> sine(double freq, double seconds, int sample_rate, double amplitude) {
  std::vector<double> x(static_cast<std::size_t>(seconds * sample_rate));
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / sample_rate);
  return x;
}

}  // namespace w2sc::testing
