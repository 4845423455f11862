/**
 * Product-vs-entangled decisions for states, measurements and unitaries,
 * always relative to a ProductIsomorphism.
 *
 * States: Schmidt decomposition of the reshaped amplitude matrix.
 * Operators: realignment + SVD (operator Schmidt rank); a 4x4 operator is
 * a product X (x) Y exactly when the realigned matrix has rank 1, and the
 * recovered factors are then phase-canonicalized before the hermitian or
 * unitary factor check.
 */

#ifndef BELLKIT_ENTANGLEMENT_HPP
#define BELLKIT_ENTANGLEMENT_HPP

#include "linalg.hpp"

#include <algorithm>
#include <optional>
#include <utility>

namespace bellkit {

inline constexpr double kProductTol = 1e-8;

struct SchmidtDecomposition {
    std::array<double, 2> coefficients;  // nonnegative, descending
    std::array<Vec2, 2> left_vectors;
    std::array<Vec2, 2> right_vectors;

    /// Sum of c_k u_k (x) v_k, in product coordinates.
    Vec4 reconstruct() const {
        return coefficients[0] * tensor_product(left_vectors[0], right_vectors[0]) +
               coefficients[1] * tensor_product(left_vectors[1], right_vectors[1]);
    }
};

template <typename Factor>
struct ProductTestReport {
    bool is_product = false;
    double residual = 0.0;  // distance to the nearest product object
    std::optional<std::pair<Factor, Factor>> witnesses;
};

using StateProductReport = ProductTestReport<Vec2>;
using OperatorProductReport = ProductTestReport<Mat2>;

inline SchmidtDecomposition schmidt_decompose(const Vec4& state, const ProductIsomorphism& iso) {
    if (!is_normalized<4>(state))
        throw std::invalid_argument("schmidt_decompose: state is not normalized");
    Mat2 amplitudes = reshape_2x2(iso.forward(state));
    Eigen::JacobiSVD<Mat2> svd(amplitudes, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SchmidtDecomposition out;
    for (int k = 0; k < 2; ++k) {
        out.coefficients[k] = svd.singularValues()(k);
        out.left_vectors[k] = svd.matrixU().col(k);
        out.right_vectors[k] = svd.matrixV().col(k).conjugate();
    }
    return out;
}

inline StateProductReport is_product_state(const Vec4& state, const ProductIsomorphism& iso,
                                           double tol = kProductTol) {
    SchmidtDecomposition schmidt = schmidt_decompose(state, iso);
    StateProductReport report;
    report.residual = schmidt.coefficients[1];
    report.is_product = report.residual <= tol;
    if (report.is_product)
        report.witnesses = {schmidt.left_vectors[0], schmidt.right_vectors[0]};
    return report;
}

/// Realigned matrix R with R(2i+j, 2k+l) = M(2i+k, 2j+l); a product X (x) Y
/// realigns to the rank-1 matrix vec(X) vec(Y)^T.
inline Mat4 realign(const Mat4& m) {
    Mat4 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) r(2 * i + j, 2 * k + l) = m(2 * i + k, 2 * j + l);
    return r;
}

struct OperatorSchmidt {
    int rank = 0;
    double residual = 0.0;  // Frobenius distance to the nearest product operator
    std::array<double, 4> singular_values{};
    Mat2 left, right;  // leading factors, left unit Frobenius norm, weight on right
};

inline OperatorSchmidt operator_schmidt(const Mat4& m, const ProductIsomorphism& iso,
                                        double tol = kProductTol) {
    Mat4 r = realign(iso.forward(m));
    Eigen::JacobiSVD<Mat4> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    OperatorSchmidt out;
    double tail = 0.0;
    for (int k = 0; k < 4; ++k) {
        double sigma = svd.singularValues()(k);
        out.singular_values[k] = sigma;
        if (sigma > tol) ++out.rank;
        if (k > 0) tail += sigma * sigma;
    }
    out.residual = std::sqrt(tail);
    out.left = reshape_2x2(svd.matrixU().col(0));
    out.right = reshape_2x2(svd.matrixV().col(0).conjugate()) * svd.singularValues()(0);
    return out;
}

inline std::pair<int, double> operator_schmidt_rank(const Mat4& m, const ProductIsomorphism& iso,
                                                    double tol = kProductTol) {
    OperatorSchmidt os = operator_schmidt(m, iso, tol);
    return {os.rank, os.residual};
}

namespace detail {

// X (x) Y = (cX) (x) (Y/c): balance the factor magnitudes, then choose the
// phase by theta = arg(tr(X^2)) / 2. If X is a phase times a hermitian H,
// tr(X^2) = e^{2 i theta} |H|_F^2 never vanishes, so dividing it out lands
// exactly on +/-H; the remaining sign flips to put the dominant entry in
// the right half plane. (Rotating the largest entry to be real positive
// instead would break hermitian factors whose dominant entry is a complex
// off-diagonal one.)
inline void canonicalize_factors(Mat2& left, Mat2& right) {
    double ln = left.norm(), rn = right.norm();
    if (ln <= 0.0 || rn <= 0.0) return;
    double scale = std::sqrt(rn / ln);
    left *= scale;
    right /= scale;

    cdouble trace_sq = (left * left).trace();
    if (std::abs(trace_sq) > 1e-14 * ln * rn) {
        cdouble phase = std::polar(1.0, std::arg(trace_sq) / 2.0);
        left /= phase;
        right *= phase;
    }
    int ci = 0, cj = 0;
    double best = -1.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (std::abs(left(i, j)) > best) best = std::abs(left(i, j)), ci = i, cj = j;
    cdouble dominant = left(ci, cj);
    if (dominant.real() < 0.0 || (dominant.real() == 0.0 && dominant.imag() < 0.0)) {
        left = -left;
        right = -right;
    }
}

inline double hermiticity_defect(const Mat2& m) { return max_abs((m - m.adjoint()).eval()); }
inline double unitarity_defect(const Mat2& m) {
    return max_abs((m * m.adjoint() - Mat2::Identity()).eval());
}

} // namespace detail

/**
 * Operator-level product test: does the matrix factor as a hermitian
 * X (x) Y across iso? Note a degenerate coincidence operator can factor
 * even when its 4-outcome refinement cannot (the +1/-1 grid collapses
 * distinct outcomes onto shared eigenvalues); use
 * is_product_coincidence_measurement for the outcome-resolved question.
 */
inline OperatorProductReport is_product_measurement(const Mat4& m, const ProductIsomorphism& iso,
                                                    double tol = kProductTol) {
    if (!is_hermitian<4>(m))
        throw std::invalid_argument("is_product_measurement: operator is not hermitian");
    OperatorSchmidt os = operator_schmidt(m, iso, tol);
    Mat2 left = os.left, right = os.right;
    detail::canonicalize_factors(left, right);
    double defect = std::max(detail::hermiticity_defect(left), detail::hermiticity_defect(right));
    OperatorProductReport report;
    report.residual = std::max(os.residual, defect);
    report.is_product = report.residual <= tol;
    if (report.is_product) report.witnesses = {left, right};
    return report;
}

struct CoincidenceProductReport {
    bool is_product = false;
    double residual = 0.0;
    std::array<double, 4> slot_residuals{};  // entanglement of each outcome vector
    std::optional<std::pair<Mat2, Mat2>> witnesses;  // local +1/-1 observables
};

/**
 * Outcome-resolved product test for a 4-outcome coincidence measurement:
 * every grid projector must be a product projector with the A factor shared
 * along rows and the B factor shared along columns. This is the question
 * "is the measurement a joint measurement of two one-side measurements";
 * it is stricter than the operator test whenever outcome values collide.
 */
inline CoincidenceProductReport is_product_coincidence_measurement(
    const SpectralFamily4& family, const ProductIsomorphism& iso, double tol = kProductTol) {
    if (family.size() != 4)
        throw std::invalid_argument("is_product_coincidence_measurement: need a 4-outcome family");
    family.validate();

    std::array<Mat4, 4> projectors;
    std::array<Vec4, 4> outcome_vectors;
    CoincidenceProductReport report;
    for (int k = 0; k < 4; ++k) {
        projectors[k] = iso.forward(family.projectors[k]);
        Eigen::SelfAdjointEigenSolver<Mat4> solver(projectors[k]);
        outcome_vectors[k] = solver.eigenvectors().col(3);
        // Rank defect counts against productness: a projector of rank != 1
        // cannot be |a x b><a x b|.
        double rank_defect = std::abs(solver.eigenvalues()(3) - 1.0) + std::abs(solver.eigenvalues()(2));
        Mat2 amplitudes = reshape_2x2(outcome_vectors[k]);
        Eigen::JacobiSVD<Mat2> svd(amplitudes);
        report.slot_residuals[k] = std::max(svd.singularValues()(1), rank_defect);
    }

    double consistency = 0.0;
    for (int i = 0; i < 2; ++i)
        consistency = std::max(consistency, max_abs((partial_trace_second(projectors[2 * i]) -
                                                     partial_trace_second(projectors[2 * i + 1]))
                                                        .eval()));
    for (int j = 0; j < 2; ++j)
        consistency = std::max(consistency, max_abs((partial_trace_first(projectors[j]) -
                                                     partial_trace_first(projectors[2 + j]))
                                                        .eval()));

    report.residual = consistency;
    for (double r : report.slot_residuals) report.residual = std::max(report.residual, r);
    report.is_product = report.residual <= tol;
    if (report.is_product) {
        Mat2 a_observable = 2.0 * partial_trace_second(projectors[0]) - Mat2::Identity();
        Mat2 b_observable = 2.0 * partial_trace_first(projectors[0]) - Mat2::Identity();
        report.witnesses = {a_observable, b_observable};
    }
    return report;
}

inline OperatorProductReport is_product_unitary(const Mat4& m, const ProductIsomorphism& iso,
                                                double tol = kProductTol) {
    if (!is_unitary<4>(m))
        throw std::invalid_argument("is_product_unitary: operator is not unitary");
    OperatorSchmidt os = operator_schmidt(m, iso, tol);
    // For a product unitary the leading singular value is 2 and the unit
    // factors are unitary up to scale sqrt(2).
    Mat2 left = os.left * std::sqrt(2.0);
    Mat2 right = os.right / std::sqrt(2.0);
    cdouble det = left.determinant();
    if (std::abs(det) > 1e-12) {
        cdouble half_phase = std::polar(1.0, std::arg(det) / 2.0);
        left /= half_phase;
        right *= half_phase;
    }
    double defect = std::max(detail::unitarity_defect(left), detail::unitarity_defect(right));
    OperatorProductReport report;
    report.residual = std::max(os.residual, defect);
    report.is_product = report.residual <= tol;
    if (report.is_product) report.witnesses = {left, right};
    return report;
}

namespace detail {

// Common eigenbasis of a commuting family of normal 2x2 matrices: eigenbasis
// of a fixed-weight hermitian combination, retried with fresh weights when
// the combination degenerates.
inline Mat2 common_eigenbasis(const std::vector<Mat2>& family) {
    if (family.empty()) return Mat2::Identity();
    double w = 0.6180339887498949;  // advanced by golden-ratio steps
    for (int attempt = 0; attempt < 4; ++attempt) {
        Mat2 h = Mat2::Zero();
        for (const Mat2& x : family) {
            h += w * (x + x.adjoint()) / 2.0;
            w = std::fmod(w + 0.6180339887498949, 1.0);
            h += w * (x - x.adjoint()) / (2.0 * cdouble(0, 1));
            w = std::fmod(w + 0.6180339887498949, 1.0);
        }
        Eigen::SelfAdjointEigenSolver<Mat2> solver(h);
        if (solver.eigenvalues()(1) - solver.eigenvalues()(0) > 1e-9 || attempt == 3)
            return solver.eigenvectors();
    }
    return Mat2::Identity();
}

} // namespace detail

/**
 * Does the measurement admit a product eigenbasis (every spectral projector
 * a sum of product projectors), regardless of whether the outcome values
 * factor? Strictly weaker than is_product_measurement: diag(1,2,3,4) has the
 * product standard eigenbasis but is no product operator.
 *
 * Decision: split the operator into its realignment components, find common
 * local eigenbases, and verify the operator is diagonal in their product.
 */
inline OperatorProductReport has_product_eigenbasis(const Mat4& m, const ProductIsomorphism& iso,
                                                    double tol = kProductTol) {
    if (!is_hermitian<4>(m))
        throw std::invalid_argument("has_product_eigenbasis: operator is not hermitian");
    Mat4 tensor_side = iso.forward(m);
    Mat4 r = realign(tensor_side);
    Eigen::JacobiSVD<Mat4> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    std::vector<Mat2> lefts, rights;
    for (int k = 0; k < 4; ++k) {
        if (svd.singularValues()(k) <= 1e-12) continue;
        lefts.push_back(reshape_2x2(svd.matrixU().col(k)));
        rights.push_back(reshape_2x2(svd.matrixV().col(k).conjugate()));
    }
    Mat2 u_a = detail::common_eigenbasis(lefts);
    Mat2 u_b = detail::common_eigenbasis(rights);
    Mat4 diagonalized = kron(u_a, u_b).adjoint() * tensor_side * kron(u_a, u_b);
    double off = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) off = std::max(off, std::abs(diagonalized(i, j)));
    OperatorProductReport report;
    report.residual = off;
    report.is_product = off <= tol;
    if (report.is_product) report.witnesses = {u_a, u_b};
    return report;
}

struct OutcomeFactorization {
    std::array<double, 4> outcome_probabilities{};  // grid order 11, 12, 21, 22
    std::array<double, 2> marginals_a{}, marginals_b{};
    bool factorizes = false;
    double residual = 0.0;  // max |p_ij - a_i b_j|
};

/// Collapse probabilities of a pure state under a 4-outcome family, and
/// whether they factorize into consistent one-side marginals.
inline OutcomeFactorization outcome_factorization(const Vec4& state, const SpectralFamily4& family,
                                     double tol = 1e-10) {
    if (!is_normalized<4>(state))
        throw std::invalid_argument("outcome_factorization: state is not normalized");
    if (family.size() != 4)
        throw std::invalid_argument("outcome_factorization: need a 4-outcome family");
    family.validate();
    OutcomeFactorization report;
    for (int k = 0; k < 4; ++k)
        report.outcome_probabilities[k] = std::real(cdouble(state.adjoint() * family.projectors[k] * state));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            report.marginals_a[i] += report.outcome_probabilities[2 * i + j];
            report.marginals_b[j] += report.outcome_probabilities[2 * i + j];
        }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            report.residual = std::max(report.residual,
                                       std::abs(report.outcome_probabilities[2 * i + j] -
                                                report.marginals_a[i] * report.marginals_b[j]));
    report.factorizes = report.residual <= tol;
    return report;
}

} // namespace bellkit

#endif // BELLKIT_ENTANGLEMENT_HPP
