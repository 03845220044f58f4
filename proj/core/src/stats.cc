//
// Copyright 2026 The augwork Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "augwork/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "augwork/error.h"

namespace augwork::stats {
namespace {

double beta_continued_fraction(double x, double a, double b) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

nlohmann::json TTestResult::to_json() const {
  return {{"t_statistic", t_statistic},
          {"degrees_of_freedom", degrees_of_freedom},
          {"p_value", p_value},
          {"significant", significant}};
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw Error(ErrorCode::kInsufficientData, "mean of empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) throw Error(ErrorCode::kInsufficientData, "variance needs two samples");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

double incomplete_beta(double x, double a, double b) {
  if (a <= 0.0 || b <= 0.0) throw Error(ErrorCode::kInvalidInput, "beta parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double student_t_two_sided(double t, double df) {
  if (df <= 0.0) throw Error(ErrorCode::kInvalidInput, "degrees of freedom must be positive");
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  const double p = incomplete_beta(x, df / 2.0, 0.5);
  return std::min(1.0, std::max(0.0, p));
}

TTestResult t_test(const std::vector<double>& a, const std::vector<double>& b, double alpha) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "t-test needs at least two samples per side");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean(a), mb = mean(b);
  const double pooled =
      ((na - 1.0) * sample_variance(a) + (nb - 1.0) * sample_variance(b)) / (na + nb - 2.0);
  TTestResult r;
  r.degrees_of_freedom = na + nb - 2.0;
  if (pooled == 0.0) {
    if (ma != mb) {
      throw Error(ErrorCode::kDegenerateVariance, "zero pooled variance with unequal means");
    }
    r.t_statistic = 0.0;
    r.p_value = 1.0;
    r.significant = false;
    return r;
  }
  r.t_statistic = (ma - mb) / (std::sqrt(pooled) * std::sqrt(1.0 / na + 1.0 / nb));
  r.p_value = student_t_two_sided(r.t_statistic, r.degrees_of_freedom);
  r.significant = r.p_value < alpha;
  return r;
}

std::vector<bool> flag_significance(const std::vector<double>& p_values, double alpha) {
  std::vector<bool> out;
  out.reserve(p_values.size());
  for (double p : p_values) out.push_back(p < alpha);
  return out;
}

}  // namespace augwork::stats
