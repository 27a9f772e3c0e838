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

#include "qpulse/kernels.h"

namespace qpulse::kernels {
namespace {

void matmul(int n, cspan a, cspan b, mspan c) {
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) c[i + j * n] = 0.0;
        for (int k = 0; k < n; ++k) {
            const cplx bkj = b[k + j * n];
            for (int i = 0; i < n; ++i) c[i + j * n] += a[i + k * n] * bkj;
        }
    }
}

void adjoint_matmul(int n, cspan a, cspan b, mspan c) {
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (int k = 0; k < n; ++k) s += std::conj(a[k + i * n]) * b[k + j * n];
            c[i + j * n] = s;
        }
    }
}

void matmul_adjoint(int n, cspan a, cspan b, mspan c) {
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) c[i + j * n] = 0.0;
        for (int k = 0; k < n; ++k) {
            const cplx bjk = std::conj(b[j + k * n]);
            for (int i = 0; i < n; ++i) c[i + j * n] += a[i + k * n] * bjk;
        }
    }
}

cplx trace_product(int n, cspan a, cspan b) {
    cplx s = 0.0;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) s += a[i + k * n] * b[k + i * n];
    return s;
}

void hadamard(int n, cspan a, cspan b, mspan c) {
    const int len = n * n;
    for (int i = 0; i < len; ++i) c[i] = a[i] * b[i];
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{"scalar", matmul, adjoint_matmul, matmul_adjoint,
                                   trace_product, hadamard};
    return table;
}

}  // namespace qpulse::kernels
