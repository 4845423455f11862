/**
 * Complex linear algebra on C^2 and C^4: tensor products, hermiticity and
 * unitarity predicates, spectral decomposition with eigenvalue clustering,
 * and the basis identification between C^4 and C^2 (x) C^2.
 *
 * Index convention, shared by every module: the product basis element
 * |c_i> (x) |d_j> sits at slot 2*i + j (0-based, row-major). Grids of
 * coincidence outcomes (i, j) use the same flattening.
 */

#ifndef BELLKIT_LINALG_HPP
#define BELLKIT_LINALG_HPP

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace bellkit {

using cdouble = std::complex<double>;
using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

template <int N>
using Vec = Eigen::Matrix<cdouble, N, 1>;
template <int N>
using Mat = Eigen::Matrix<cdouble, N, N>;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kClusterTol = 1e-8;

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.cwiseAbs().maxCoeff();
}

template <int N>
bool is_hermitian(const Mat<N>& m, double tol = kHermitianTol) {
    return max_abs(m - m.adjoint()) <= tol;
}

template <int N>
bool is_unitary(const Mat<N>& m, double tol = kUnitaryTol) {
    return max_abs((m * m.adjoint() - Mat<N>::Identity()).eval()) <= tol;
}

template <int N>
bool is_normalized(const Vec<N>& v, double tol = 1e-9) {
    return std::abs(v.squaredNorm() - 1.0) <= tol;
}

/// a (x) b with entry 2i+j = a_i * b_j.
inline Vec4 tensor_product(const Vec2& a, const Vec2& b) {
    Vec4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(2 * i + j) = a(i) * b(j);
    return out;
}

/// X (x) Y, block layout consistent with tensor_product.
inline Mat4 kron(const Mat2& x, const Mat2& y) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = x(i, j) * y;
    return out;
}

/// Row-major 2x2 amplitude matrix of a C^4 vector: A(i, j) = v(2i+j).
inline Mat2 reshape_2x2(const Vec4& v) {
    Mat2 a;
    a << v(0), v(1), v(2), v(3);
    return a;
}

/// Inverse of reshape_2x2.
inline Vec4 flatten_2x2(const Mat2& a) {
    Vec4 v;
    v << a(0, 0), a(0, 1), a(1, 0), a(1, 1);
    return v;
}

/// Trace out the second factor: (tr_B M)(i, j) = sum_k M(2i+k, 2j+k).
inline Mat2 partial_trace_second(const Mat4& m) {
    Mat2 out = Mat2::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) out(i, j) += m(2 * i + k, 2 * j + k);
    return out;
}

/// Trace out the first factor: (tr_A M)(k, l) = sum_i M(2i+k, 2i+l).
inline Mat2 partial_trace_first(const Mat4& m) {
    Mat2 out = Mat2::Zero();
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
            for (int i = 0; i < 2; ++i) out(k, l) += m(2 * i + k, 2 * i + l);
    return out;
}

/**
 * Outcome values with their orthogonal eigenprojectors.
 *
 * Two uses: the result of spectral_decomposition (distinct clustered
 * eigenvalues, rank-k projectors), and coincidence measurements (four
 * rank-1 projectors in grid order 11, 12, 21, 22, where outcome values
 * may repeat). The orthogonality and completeness invariants hold for both.
 */
template <int N>
struct SpectralFamily {
    std::vector<double> eigenvalues;
    std::vector<Mat<N>> projectors;
    std::vector<int> multiplicities;

    int size() const { return static_cast<int>(eigenvalues.size()); }

    /// Sum of eigenvalue * projector.
    Mat<N> reconstruct() const {
        Mat<N> m = Mat<N>::Zero();
        for (int k = 0; k < size(); ++k) m += eigenvalues[k] * projectors[k];
        return m;
    }

    /// Largest violation of P_k P_l = delta_kl P_k and sum P_k = I.
    double orthogonality_residual() const {
        double r = 0.0;
        Mat<N> sum = Mat<N>::Zero();
        for (int k = 0; k < size(); ++k) {
            sum += projectors[k];
            for (int l = 0; l < size(); ++l) {
                Mat<N> prod = projectors[k] * projectors[l];
                if (k == l) prod -= projectors[k];
                r = std::max(r, max_abs(prod));
            }
        }
        r = std::max(r, max_abs((sum - Mat<N>::Identity()).eval()));
        return r;
    }

    void validate(double tol = kHermitianTol) const {
        if (orthogonality_residual() > tol)
            throw std::invalid_argument("SpectralFamily: projectors are not an orthogonal resolution of identity");
    }
};

using SpectralFamily2 = SpectralFamily<2>;
using SpectralFamily4 = SpectralFamily<4>;

/**
 * Eigendecomposition of a hermitian matrix with eigenvalues merged into
 * clusters of width cluster_tol. Degenerate eigenspaces come back as one
 * rank-k projector, so downstream checks do not depend on an arbitrary
 * eigenvector choice inside the cluster.
 */
template <int N>
SpectralFamily<N> spectral_decomposition(const Mat<N>& m, double cluster_tol = kClusterTol) {
    if (!is_hermitian<N>(m))
        throw std::invalid_argument("spectral_decomposition: matrix is not hermitian");
    Eigen::SelfAdjointEigenSolver<Mat<N>> solver(m);
    const auto& values = solver.eigenvalues();
    const auto& vectors = solver.eigenvectors();

    SpectralFamily<N> family;
    int start = 0;
    while (start < N) {
        int end = start + 1;
        while (end < N && values(end) - values(end - 1) <= cluster_tol) ++end;
        Mat<N> projector = Mat<N>::Zero();
        double mean = 0.0;
        for (int k = start; k < end; ++k) {
            projector += vectors.col(k) * vectors.col(k).adjoint();
            mean += values(k);
        }
        family.eigenvalues.push_back(mean / (end - start));
        family.projectors.push_back(projector);
        family.multiplicities.push_back(end - start);
        start = end;
    }
    return family;
}

/**
 * The identification I between C^4 and C^2 (x) C^2 given by an orthonormal
 * basis x_1..x_4 of C^4 declared to be the preimages of the product basis
 * elements (slot k of the basis matrix maps to product slot k).
 *
 * forward() takes C^4 objects to product coordinates (I v, I M I^-1);
 * inverse() goes back. Stored as the unitary whose columns are the x_k.
 */
class ProductIsomorphism {
public:
    static ProductIsomorphism identity() { return ProductIsomorphism(Mat4::Identity()); }

    explicit ProductIsomorphism(const Mat4& image_basis, double tol = 1e-12) : basis_(image_basis) {
        if (max_abs((basis_.adjoint() * basis_ - Mat4::Identity()).eval()) > tol)
            throw std::invalid_argument("ProductIsomorphism: image basis is not orthonormal");
    }

    /// An identification whose first basis vector is `first` (so I maps it
    /// to product slot 0); the rest completed by Gram-Schmidt. Projections
    /// are subtracted twice so near-parallel candidates stay orthogonal to
    /// machine precision.
    static ProductIsomorphism with_first_vector(const Vec4& first) {
        if (!is_normalized<4>(first))
            throw std::invalid_argument("ProductIsomorphism: first vector must be normalized");
        Mat4 basis = Mat4::Zero();
        basis.col(0) = first;
        int filled = 1;
        for (int e = 0; e < 4 && filled < 4; ++e) {
            Vec4 candidate = Vec4::Unit(e);
            for (int pass = 0; pass < 2; ++pass)
                for (int c = 0; c < filled; ++c)
                    candidate -= basis.col(c) * (basis.col(c).adjoint() * candidate);
            double norm = candidate.norm();
            if (norm > 1e-8) basis.col(filled++) = candidate / norm;
        }
        return ProductIsomorphism(basis);
    }

    /// Precompose the product side with local unitaries u_a, u_b: the new
    /// identification sends v to (u_a (x) u_b) I v.
    ProductIsomorphism composed_with_local(const Mat2& u_a, const Mat2& u_b) const {
        return ProductIsomorphism(basis_ * kron(u_a, u_b).adjoint());
    }

    Vec4 forward(const Vec4& v) const { return basis_.adjoint() * v; }
    Mat4 forward(const Mat4& m) const { return basis_.adjoint() * m * basis_; }
    Vec4 inverse(const Vec4& v) const { return basis_ * v; }
    Mat4 inverse(const Mat4& m) const { return basis_ * m * basis_.adjoint(); }

    const Mat4& image_basis() const { return basis_; }

private:
    Mat4 basis_;
};

inline Vec4 apply_isomorphism(const ProductIsomorphism& iso, const Vec4& v) { return iso.forward(v); }
inline Mat4 apply_isomorphism(const ProductIsomorphism& iso, const Mat4& m) { return iso.forward(m); }

} // namespace bellkit

#endif // BELLKIT_LINALG_HPP
