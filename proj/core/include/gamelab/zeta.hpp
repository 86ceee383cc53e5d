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

#ifndef GAMELAB_ZETA_HPP_
#define GAMELAB_ZETA_HPP_

namespace gamelab {

// Holder-1/2 volatility profile with values in [1.5, 2] subset of [1, 2]:
//   zeta(x) = 1.75 + 0.25 sin(sum_{k=1..12} 2^{-k/2} sin(2^k x)).
// It oscillates on every dyadic scale down to 2^-12.
inline constexpr int kZetaTerms = 12;
inline constexpr double kZetaCenter = 1.75;
inline constexpr double kZetaAmplitude = 0.25;
// |zeta(x) - zeta(y)| <= kZetaHolder * |x - y|^{1/2}, from
// min(2, u) <= sqrt(2 u) applied termwise.
inline constexpr double kZetaHolder = 0.25 * kZetaTerms * 1.4142135623730951;

double zeta(double x);
// sqrt(zeta^2 - 1), in [sqrt(1.25), sqrt(3)].
double zeta_bar(double x);

}  // namespace gamelab

#endif  // GAMELAB_ZETA_HPP_
