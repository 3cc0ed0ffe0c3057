#pragma once

#include "convspec/model.hpp"

namespace convspec {

// Matrix realizations of a convolutional layer. The linear (zero padded)
// convolution maps input pixel (j1, j2) to output pixel (i1, i2) with
// coefficient t_{i1-j1, i2-j2}, where t_{k,l}[c, d] = K[c, d, h1+k, w1+l].
//
// Two index layouts are used:
//   channel-major (A, C(A)):  row = c * n^2 + i1 * n + i2
//   pixel-major   (T, C, T^g): row = (i1 * n + i2) * c_out + c
// Columns follow the same pattern with d, j1, j2 and c_in.

/// Block matrix of doubly Toeplitz blocks. Requires stride 1.
DenseOperator build_A(const Bundle& bundle);

/// Doubly block Toeplitz matrix with c_out x c_in blocks. Requires stride 1.
DenseOperator build_T(const Bundle& bundle);

/// Doubly block circulant "wrap around" of T. Requires stride 1.
DenseOperator build_C(const Bundle& bundle);

/// Block matrix of doubly circulant blocks (circular convolution in the
/// channel-major layout). Requires stride 1.
DenseOperator build_CA(const Bundle& bundle);

/// Row-subsampled block g-Toeplitz matrix of a stride-g convolution. Output
/// side m = floor((n-1)/g) + 1; block (i, j) is t_{g*i - j} at both levels.
DenseOperator build_T_strided(const Bundle& bundle);

/// Output side of a stride-g convolution over an n x n input.
std::size_t strided_output_side(std::size_t n, std::size_t stride);

}  // namespace convspec
