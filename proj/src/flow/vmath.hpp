// Copyright 2026 The HybridShape Authors.
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

#include <cstddef>

namespace hybridshape::flow::detail {

// Vectorized through libmvec; accurate to a few ulp.
void sin_cos(const double* x, double* s, double* c, std::size_t n);
void sin_only(const double* x, double* s, std::size_t n);

}  // namespace hybridshape::flow::detail
