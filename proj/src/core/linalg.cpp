#include "tryon/core/linalg.hpp"

#include <cmath>

#include "tryon/core/errors.hpp"

namespace tryon::core {

Tensor matmul_t(const Tensor& a, const Tensor& b) {
    if (a.ndim() != 2 || b.ndim() != 2 || a.dim(1) != b.dim(0))
        throw DimensionError("matmul_t: incompatible shapes");
    int m = a.dim(0), k = a.dim(1), n = b.dim(1);
    Tensor out(Shape{m, n});
    for (int i = 0; i < m; ++i)
        for (int p = 0; p < k; ++p) {
            double av = a.at(i, p);
            if (av == 0.0) continue;
            for (int j = 0; j < n; ++j) out.at(i, j) += av * b.at(p, j);
        }
    return out;
}

Tensor transpose_t(const Tensor& a) {
    if (a.ndim() != 2) throw DimensionError("transpose_t: expected 2-D");
    Tensor out(Shape{a.dim(1), a.dim(0)});
    for (int i = 0; i < a.dim(0); ++i)
        for (int j = 0; j < a.dim(1); ++j) out.at(j, i) = a.at(i, j);
    return out;
}

SymEig sym_eig(const Tensor& input) {
    if (input.ndim() != 2 || input.dim(0) != input.dim(1))
        throw DimensionError("sym_eig: expected square matrix");
    int d = input.dim(0);
    Tensor a = input;
    Tensor v(Shape{d, d});
    for (int i = 0; i < d; ++i) v.at(i, i) = 1.0;

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q) off += a.at(p, q) * a.at(p, q);
        if (off < 1e-30) break;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q) {
                double apq = a.at(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                double app = a.at(p, p), aqq = a.at(q, q);
                double tau = (aqq - app) / (2.0 * apq);
                double t = (tau >= 0 ? 1.0 : -1.0) /
                           (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                for (int i = 0; i < d; ++i) {
                    double aip = a.at(i, p), aiq = a.at(i, q);
                    a.at(i, p) = c * aip - s * aiq;
                    a.at(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < d; ++i) {
                    double api = a.at(p, i), aqi = a.at(q, i);
                    a.at(p, i) = c * api - s * aqi;
                    a.at(q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < d; ++i) {
                    double vip = v.at(i, p), viq = v.at(i, q);
                    v.at(i, p) = c * vip - s * viq;
                    v.at(i, q) = s * vip + c * viq;
                }
            }
    }
    SymEig out;
    out.eigenvalues = Tensor(Shape{d});
    for (int i = 0; i < d; ++i) out.eigenvalues[i] = a.at(i, i);
    out.eigenvectors = std::move(v);
    return out;
}

Tensor sym_sqrt(const Tensor& a) {
    SymEig e = sym_eig(a);
    int d = a.dim(0);
    Tensor out(Shape{d, d});
    for (int k = 0; k < d; ++k) {
        double lam = e.eigenvalues[k];
        double s = lam > 0 ? std::sqrt(lam) : 0.0;
        if (s == 0.0) continue;
        for (int i = 0; i < d; ++i) {
            double vik = e.eigenvectors.at(i, k) * s;
            if (vik == 0.0) continue;
            for (int j = 0; j < d; ++j) out.at(i, j) += vik * e.eigenvectors.at(j, k);
        }
    }
    return out;
}

Tensor random_orthogonal(Rng& rng, int d) {
    Tensor m = rng.normal_tensor({d, d});
    // Gram-Schmidt on columns; redraw on (vanishingly unlikely) degeneracy.
    for (int j = 0; j < d; ++j) {
        for (int prev = 0; prev < j; ++prev) {
            double dot = 0.0;
            for (int i = 0; i < d; ++i) dot += m.at(i, j) * m.at(i, prev);
            for (int i = 0; i < d; ++i) m.at(i, j) -= dot * m.at(i, prev);
        }
        double norm = 0.0;
        for (int i = 0; i < d; ++i) norm += m.at(i, j) * m.at(i, j);
        norm = std::sqrt(norm);
        if (norm < 1e-12) {
            for (int i = 0; i < d; ++i) m.at(i, j) = rng.normal();
            --j;
            continue;
        }
        for (int i = 0; i < d; ++i) m.at(i, j) /= norm;
    }
    return m;
}

}  // namespace tryon::core
