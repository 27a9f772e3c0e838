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

// AVX2/FMA variants. One __m256d holds two complex doubles laid out as
// (re0, im0, re1, im1). Odd dimensions finish the last row or pair with
// scalar code.

#include <immintrin.h>

#include "qpulse/kernels.h"

namespace qpulse::kernels {
namespace {

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

// (re, im, re, im) -> (im, re, im, re)
inline __m256d swap_pairs(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// Sum of even lanes minus sum of odd lanes.
inline double hsum_even_minus_odd(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_sub_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// c[:, j] = a * s where s is the j-th column of b (or conj(b)^T row), over the
// even-length prefix of rows; accumulation uses two registers and one addsub.
template <bool ConjB, bool TransB>
void column_products(int n, cspan a, cspan b, mspan c) {
    const int even = n & ~1;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < even; i += 2) {
            __m256d acc_re = _mm256_setzero_pd();
            __m256d acc_im = _mm256_setzero_pd();
            for (int k = 0; k < n; ++k) {
                const cplx s = TransB ? b[j + k * n] : b[k + j * n];
                const double sr = s.real();
                const double si = ConjB ? -s.imag() : s.imag();
                const __m256d av = _mm256_loadu_pd(dp(&a[i + k * n]));
                acc_re = _mm256_fmadd_pd(av, _mm256_set1_pd(sr), acc_re);
                acc_im = _mm256_fmadd_pd(swap_pairs(av), _mm256_set1_pd(si), acc_im);
            }
            _mm256_storeu_pd(dp(&c[i + j * n]), _mm256_addsub_pd(acc_re, acc_im));
        }
        if (even != n) {
            cplx s_acc = 0.0;
            for (int k = 0; k < n; ++k) {
                cplx s = TransB ? b[j + k * n] : b[k + j * n];
                if (ConjB) s = std::conj(s);
                s_acc += a[even + k * n] * s;
            }
            c[even + j * n] = s_acc;
        }
    }
}

void matmul(int n, cspan a, cspan b, mspan c) { column_products<false, false>(n, a, b, c); }

void matmul_adjoint(int n, cspan a, cspan b, mspan c) {
    column_products<true, true>(n, a, b, c);
}

void adjoint_matmul(int n, cspan a, cspan b, mspan c) {
    const int even = n & ~1;
    for (int j = 0; j < n; ++j) {
        const cplx* bj = &b[j * n];
        for (int i = 0; i < n; ++i) {
            const cplx* ai = &a[i * n];
            // conj(x) * y: re = xr yr + xi yi, im = xr yi - xi yr
            __m256d acc_re = _mm256_setzero_pd();
            __m256d acc_im = _mm256_setzero_pd();
            for (int k = 0; k < even; k += 2) {
                const __m256d x = _mm256_loadu_pd(dp(ai + k));
                const __m256d y = _mm256_loadu_pd(dp(bj + k));
                acc_re = _mm256_fmadd_pd(x, y, acc_re);
                acc_im = _mm256_fmadd_pd(x, swap_pairs(y), acc_im);
            }
            cplx s{hsum(acc_re), hsum_even_minus_odd(acc_im)};
            if (even != n) s += std::conj(ai[even]) * bj[even];
            c[i + j * n] = s;
        }
    }
}

cplx trace_product(int n, cspan a, cspan b) {
    // Tr(ab) = sum_k sum_i a(i,k) b(k,i); rows of b are gathered in pairs.
    const int even = n & ~1;
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    cplx tail = 0.0;
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < even; i += 2) {
            const __m256d x = _mm256_loadu_pd(dp(&a[i + k * n]));
            const __m256d y = _mm256_loadu2_m128d(dp(&b[k + (i + 1) * n]), dp(&b[k + i * n]));
            acc_re = _mm256_fmadd_pd(x, y, acc_re);
            acc_im = _mm256_fmadd_pd(x, swap_pairs(y), acc_im);
        }
        if (even != n) tail += a[even + k * n] * b[k + even * n];
    }
    return cplx{hsum_even_minus_odd(acc_re), hsum(acc_im)} + tail;
}

void hadamard(int n, cspan a, cspan b, mspan c) {
    const int len = n * n;
    const int even = len & ~1;
    for (int i = 0; i < even; i += 2) {
        const __m256d x = _mm256_loadu_pd(dp(&a[i]));
        const __m256d y = _mm256_loadu_pd(dp(&b[i]));
        const __m256d y_re = _mm256_movedup_pd(y);
        const __m256d y_im = _mm256_permute_pd(y, 0b1111);
        _mm256_storeu_pd(dp(&c[i]),
                         _mm256_fmaddsub_pd(x, y_re, _mm256_mul_pd(swap_pairs(x), y_im)));
    }
    if (even != len) c[even] = a[even] * b[even];
}

}  // namespace

const KernelTable& avx2_kernels() {
    static const KernelTable table{"avx2", matmul, adjoint_matmul, matmul_adjoint,
                                   trace_product, hadamard};
    return table;
}

}  // namespace qpulse::kernels
