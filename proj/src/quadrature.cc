//
// Copyright 2026 The oneshot-topk Authors
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

#include "oneshot/quadrature.h"

#include <algorithm>
#include <cmath>
#include <queue>

#include "oneshot/errors.h"

namespace oneshot {
namespace {

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss rule at the odd positions. Values from QUADPACK (dqk15),
// evaluated to 80 decimal digits by L. W. Fullerton, Bell Labs, 1981.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double integral;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel Gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  double result_gauss = fc * kWg[3];
  double result_kronrod = fc * kWgk[7];
  double result_abs = std::fabs(result_kronrod);
  double fv1[7], fv2[7];

  for (int j = 0; j < 7; ++j) {
    const double abscissa = half * kXgk[j];
    const double f1 = f(center - abscissa);
    const double f2 = f(center + abscissa);
    fv1[j] = f1;
    fv2[j] = f2;
    result_kronrod += kWgk[j] * (f1 + f2);
    result_abs += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) {
      result_gauss += kWg[j / 2] * (f1 + f2);
    }
  }

  const double mean = 0.5 * result_kronrod;
  double result_asc = kWgk[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    result_asc += kWgk[j] * (std::fabs(fv1[j] - mean) + std::fabs(fv2[j] - mean));
  }
  result_asc *= std::fabs(half);

  double err = std::fabs((result_kronrod - result_gauss) * half);
  if (result_asc != 0.0 && err != 0.0) {
    err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
  }
  return Panel{a, b, result_kronrod * half, err};
}

}  // namespace

QuadratureResult IntegrateAdaptive(const std::function<double(double)>& f,
                                   double a, double b, double abs_tol,
                                   int max_intervals) {
  if (!(abs_tol > 0.0)) {
    throw InvalidParameterError("quadrature tolerance must be positive");
  }
  if (a == b) return {0.0, 0.0};

  std::priority_queue<Panel> panels;
  panels.push(Gk15(f, a, b));
  double total = panels.top().integral;
  double total_err = panels.top().error;
  int count = 1;

  while (total_err > abs_tol && count < max_intervals) {
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval no longer splittable in double precision.
      panels.push(worst);
      break;
    }
    const Panel left = Gk15(f, worst.a, mid);
    const Panel right = Gk15(f, mid, worst.b);
    total += left.integral + right.integral - worst.integral;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  return {total, total_err};
}

QuadratureResult IntegratePiecewise(const std::function<double(double)>& f,
                                    std::vector<double> breakpoints,
                                    double abs_tol,
                                    int max_intervals_per_piece) {
  if (breakpoints.size() < 2) {
    throw InvalidParameterError("piecewise quadrature needs at least two breakpoints");
  }
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                    breakpoints.end());

  const double piece_tol =
      abs_tol / static_cast<double>(std::max<size_t>(breakpoints.size() - 1, 1));
  QuadratureResult total;
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const QuadratureResult piece = IntegrateAdaptive(
        f, breakpoints[i], breakpoints[i + 1], piece_tol, max_intervals_per_piece);
    total.value += piece.value;
    total.error += piece.error;
  }
  return total;
}

}  // namespace oneshot
