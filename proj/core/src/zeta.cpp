// Copyright 2026 The gamelab Authors
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

#include "gamelab/zeta.hpp"

#include <cmath>

namespace gamelab {

double zeta(double x) {
  double s = 0.0;
  for (int k = 1; k <= kZetaTerms; ++k) {
    s += std::pow(2.0, -0.5 * k) * std::sin(std::ldexp(x, k));
  }
  return kZetaCenter + kZetaAmplitude * std::sin(s);
}

double zeta_bar(double x) {
  const double z = zeta(x);
  return std::sqrt(z * z - 1.0);
}

}  // namespace gamelab
