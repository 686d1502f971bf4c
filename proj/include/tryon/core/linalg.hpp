#pragma once

#include "tryon/core/rng.hpp"
#include "tryon/core/tensor.hpp"

namespace tryon::core {

// Cyclic Jacobi eigendecomposition of a symmetric matrix a (d,d).
// Returns eigenvalues (d) and column eigenvectors (d,d): a = V diag(w) V^T.
struct SymEig {
    Tensor eigenvalues;   // (d)
    Tensor eigenvectors;  // (d,d), column i pairs with eigenvalue i
};
SymEig sym_eig(const Tensor& a);

Tensor matmul_t(const Tensor& a, const Tensor& b);  // plain (m,k)x(k,n)
Tensor transpose_t(const Tensor& a);

// Symmetric PSD square root via eigendecomposition with negative eigenvalues
// clamped at zero.
Tensor sym_sqrt(const Tensor& a);

// Random orthogonal matrix (d,d) via Gram-Schmidt on a Gaussian draw.
Tensor random_orthogonal(Rng& rng, int d);

}  // namespace tryon::core
