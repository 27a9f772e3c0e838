// Copyright 2026 The qpulse Authors
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

#include <complex>
#include <span>
#include <string_view>

// Dense complex kernels on square column-major matrices (Eigen's default
// layout). Every routine has a scalar reference implementation; wider
// variants are selected at runtime and must agree with the reference to
// rounding.

namespace qpulse::kernels {

using cplx = std::complex<double>;
using cspan = std::span<const cplx>;
using mspan = std::span<cplx>;

struct KernelTable {
    std::string_view name;
    // c = a * b
    void (*matmul)(int n, cspan a, cspan b, mspan c);
    // c = a^H * b
    void (*adjoint_matmul)(int n, cspan a, cspan b, mspan c);
    // c = a * b^H
    void (*matmul_adjoint)(int n, cspan a, cspan b, mspan c);
    // Tr(a * b)
    cplx (*trace_product)(int n, cspan a, cspan b);
    // c = a .* b over n*n entries
    void (*hadamard)(int n, cspan a, cspan b, mspan c);
};

const KernelTable& scalar_table();

/// Returns nullptr when the build or the host CPU lacks AVX2+FMA.
const KernelTable* avx2_table();

/// The table used by the library. Chosen once: the widest variant the CPU
/// supports, unless QPULSE_KERNELS=scalar|avx2 overrides it.
const KernelTable& active();

}  // namespace qpulse::kernels
