// Copyright 2026 The relaymec Authors
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

#pragma once

namespace relaymec {

// Inputs up to this far below -1/e are treated as the branch point itself.
inline constexpr double kLambertBranchClamp = 1e-15;

// Principal branch W0 of the Lambert W function: the w >= -1 solving
// w e^w = x, for x >= -1/e. Throws ModelDomainError below the clamp band.
double lambert_w0(double x);

}  // namespace relaymec
