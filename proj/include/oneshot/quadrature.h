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

#ifndef ONESHOT_QUADRATURE_H_
#define ONESHOT_QUADRATURE_H_

#include <functional>
#include <vector>

namespace oneshot {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

// Adaptive 15-point Gauss-Kronrod integration of f over [a, b] to absolute
// tolerance abs_tol. The worst-error subinterval is bisected first; gives up
// (returning the current estimate with its error) after max_intervals panels.
QuadratureResult IntegrateAdaptive(const std::function<double(double)>& f,
                                   double a, double b, double abs_tol,
                                   int max_intervals = 4000);

// Integrates f over [breakpoints.front(), breakpoints.back()], splitting at
// the interior breakpoints. Intended for piecewise-smooth integrands: naive
// adaptive rules stall on interior kinks, so each smooth piece is integrated
// separately and the results (and error estimates) summed. Breakpoints need
// not be sorted or distinct.
QuadratureResult IntegratePiecewise(const std::function<double(double)>& f,
                                    std::vector<double> breakpoints,
                                    double abs_tol,
                                    int max_intervals_per_piece = 4000);

}  // namespace oneshot

#endif  // ONESHOT_QUADRATURE_H_
