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

#ifndef AUGWORK_STATS_H_
#define AUGWORK_STATS_H_

#include <vector>

#include <nlohmann/json.hpp>

namespace augwork::stats {

struct TTestResult {
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
  bool significant = false;

  nlohmann::json to_json() const;
};

double mean(const std::vector<double>& xs);
// Unbiased (n - 1) sample variance.
double sample_variance(const std::vector<double>& xs);

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double incomplete_beta(double x, double a, double b);

// Two-sided tail probability P(|T| >= |t|) for Student's t with df degrees.
double student_t_two_sided(double t, double df);

// Pooled-variance two-sample Student's t-test, two-sided. Throws
// Error(kInsufficientData) if either side has fewer than two samples and
// Error(kDegenerateVariance) if the pooled variance is zero while means
// differ. Equal means with zero variance give t = 0, p = 1.
TTestResult t_test(const std::vector<double>& a, const std::vector<double>& b,
                   double alpha = 0.05);

// p < alpha for each value.
std::vector<bool> flag_significance(const std::vector<double>& p_values, double alpha);

}  // namespace augwork::stats

#endif  // AUGWORK_STATS_H_
