/**
 * Explicit Hilbert-space models for Bell experiments.
 *
 * Two constructions: measurement bases that reproduce a prescribed outcome
 * distribution from a fixed state (basis_for_probabilities, behind the
 * per-context animal_acts_model), and the maximal-violation mixed-state
 * model whose four contexts leave the state invariant under the
 * nonselective (Luders) update while tr(rho B) = 4.
 */

#ifndef BELLKIT_MODELS_HPP
#define BELLKIT_MODELS_HPP

#include "datasets.hpp"
#include "entanglement.hpp"
#include "linalg.hpp"
#include "statistics.hpp"

#include <optional>

namespace bellkit {

/// Coincidence outcome values on the grid 11, 12, 21, 22; products of the
/// per-side +1/-1 labels, the convention used by every constructor here.
inline constexpr std::array<double, 4> kGridOutcomeValues{+1.0, -1.0, -1.0, +1.0};

class DensityOperator {
public:
    static DensityOperator pure(const Vec4& state) {
        if (!is_normalized<4>(state))
            throw std::invalid_argument("DensityOperator: state is not normalized");
        return DensityOperator((state * state.adjoint()).eval(), Checked{});
    }

    static DensityOperator mixture(double w1, const Vec4& s1, double w2, const Vec4& s2) {
        if (w1 < 0 || w2 < 0 || std::abs(w1 + w2 - 1.0) > 1e-12)
            throw std::invalid_argument("DensityOperator: weights must be a distribution");
        if (!is_normalized<4>(s1) || !is_normalized<4>(s2))
            throw std::invalid_argument("DensityOperator: mixture states must be normalized");
        Mat4 m = w1 * (s1 * s1.adjoint()) + w2 * (s2 * s2.adjoint());
        return DensityOperator(m, Checked{});
    }

    static DensityOperator maximally_mixed() {
        return DensityOperator((Mat4::Identity() * 0.25).eval(), Checked{});
    }

    explicit DensityOperator(const Mat4& m, double tol = kHermitianTol) : matrix_(m) {
        if (!is_hermitian<4>(matrix_, tol))
            throw std::invalid_argument("DensityOperator: matrix is not hermitian");
        if (std::abs(std::real(matrix_.trace()) - 1.0) > tol || std::abs(std::imag(matrix_.trace())) > tol)
            throw std::invalid_argument("DensityOperator: trace is not 1");
        Eigen::SelfAdjointEigenSolver<Mat4> solver(matrix_);
        if (solver.eigenvalues()(0) < -tol)
            throw std::invalid_argument("DensityOperator: matrix is not positive semidefinite");
    }

    const Mat4& matrix() const { return matrix_; }

private:
    struct Checked {};
    DensityOperator(const Mat4& m, Checked) : matrix_(m) {}
    Mat4 matrix_;
};

/// Born probabilities of a 4-outcome family, mapped to the coincidence grid
/// by the family's slot order.
inline JointTable born_table(const DensityOperator& rho, const SpectralFamily4& family) {
    if (family.size() != 4) throw std::invalid_argument("born_table: need a 4-outcome family");
    family.validate();
    JointTable t;
    for (int k = 0; k < 4; ++k) {
        double p = std::real((rho.matrix() * family.projectors[k]).trace());
        t.p[k / 2][k % 2] = std::max(p, 0.0);
    }
    return t;
}

/// Nonselective measurement update rho -> sum_k P_k rho P_k.
inline DensityOperator luders_update(const DensityOperator& rho, const SpectralFamily4& family) {
    family.validate();
    Mat4 updated = Mat4::Zero();
    for (const Mat4& p : family.projectors) updated += p * rho.matrix() * p;
    return DensityOperator(updated);
}

/**
 * An orthonormal basis e_1..e_4 with |<e_k|state>|^2 = q_k: reflect the
 * state onto the real amplitude vector (sqrt(q_1), ..., sqrt(q_4)) with a
 * single Householder map U (after aligning the global phase) and return the
 * columns of U^dagger as the measurement family, grid outcome values
 * +1, -1, -1, +1.
 */
inline SpectralFamily4 basis_for_probabilities(const Vec4& state, const std::array<double, 4>& q) {
    if (!is_normalized<4>(state))
        throw std::invalid_argument("basis_for_probabilities: state is not normalized");
    double sum = 0.0;
    for (double v : q) {
        if (v < 0.0) throw std::invalid_argument("basis_for_probabilities: negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("basis_for_probabilities: probabilities do not sum to 1");

    Vec4 target;
    for (int k = 0; k < 4; ++k) target(k) = std::sqrt(q[k]);

    cdouble overlap = target.adjoint() * state;
    cdouble phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cdouble(1.0, 0.0);
    Vec4 aligned = state / phase;

    Mat4 u = Mat4::Identity();
    Vec4 w = aligned - target;
    double wnorm2 = w.squaredNorm();
    if (wnorm2 > 1e-30) u -= (2.0 / wnorm2) * (w * w.adjoint());
    u /= phase;  // U state = target

    SpectralFamily4 family;
    Mat4 basis = u.adjoint();
    for (int k = 0; k < 4; ++k) {
        Vec4 e = basis.col(k);
        family.eigenvalues.push_back(kGridOutcomeValues[k]);
        family.projectors.push_back(e * e.adjoint());
        family.multiplicities.push_back(1);
    }
    return family;
}

/// A state plus the four coincidence measurements of a CHSH experiment.
struct QuantumBellModel {
    DensityOperator state;
    std::array<SpectralFamily4, 4> observables;  // AB, AB', A'B, A'B'
    double alpha = 0.0, beta = 0.0;

    Mat4 observable_matrix(Context c) const {
        return observables[static_cast<int>(c)].reconstruct();
    }
};

inline BellData predicted_bell_data(const QuantumBellModel& model) {
    BellData d;
    for (int c = 0; c < 4; ++c) d.tables[c] = born_table(model.state, model.observables[c]);
    return d;
}

/// The CHSH operator B of a model: E_{A'B'} + E_{A'B} + E_{AB'} - E_{AB}.
inline Mat4 chsh_operator(const QuantumBellModel& model) {
    return model.observable_matrix(Context::ApBp) + model.observable_matrix(Context::ApB) +
           model.observable_matrix(Context::ABp) - model.observable_matrix(Context::AB);
}

inline double chsh_operator_expectation(const QuantumBellModel& model) {
    return std::real((model.state.matrix() * chsh_operator(model)).trace());
}

/**
 * The maximal-violation mixed-state model. The state is the equal mixture of
 * |p> = (0, sqrt(.5) e^{i alpha}, sqrt(.5) e^{i beta}, 0) and
 * |q> = (0, sqrt(.5) e^{i alpha}, -sqrt(.5) e^{i beta}, 0); AB measures the
 * standard basis, AB' the basis {|p>, e_1, e_4, |q>}, and A'B, A'B' repeat
 * AB'. Every context leaves rho invariant under the nonselective update, the
 * marginal law holds, and tr(rho B) = 4 for every phase pair.
 */
inline QuantumBellModel nonlocal_box_model(double alpha = 0.0, double beta = 0.0) {
    const double r = std::sqrt(0.5);
    const cdouble ea = std::polar(1.0, alpha), eb = std::polar(1.0, beta);
    Vec4 p, q;
    p << 0.0, r * ea, r * eb, 0.0;
    q << 0.0, r * ea, -r * eb, 0.0;

    SpectralFamily4 ab;
    for (int k = 0; k < 4; ++k) {
        Vec4 e = Vec4::Unit(k);
        ab.eigenvalues.push_back(kGridOutcomeValues[k]);
        ab.projectors.push_back(e * e.adjoint());
        ab.multiplicities.push_back(1);
    }

    // Grid slots of the correlated context: 11 -> |p>, 12 -> e_1, 21 -> e_4,
    // 22 -> |q>, so the +1 outcomes carry the correlated pair.
    SpectralFamily4 abp;
    std::array<Vec4, 4> basis{p, Vec4::Unit(0), Vec4::Unit(3), q};
    for (int k = 0; k < 4; ++k) {
        abp.eigenvalues.push_back(kGridOutcomeValues[k]);
        abp.projectors.push_back(basis[k] * basis[k].adjoint());
        abp.multiplicities.push_back(1);
    }

    QuantumBellModel model{DensityOperator::mixture(0.5, p, 0.5, q), {ab, abp, abp, abp}, alpha, beta};
    return model;
}

/**
 * Per-context entangled-measurement model of a coincidence dataset: from a
 * fixed state (default the uniform product state), build one measurement
 * basis per context whose Born probabilities are exactly the table entries.
 */
inline QuantumBellModel bell_data_model(const BellData& data,
                                        std::optional<Vec4> state = std::nullopt) {
    Vec4 s;
    if (state) {
        s = *state;
    } else {
        s << 0.5, 0.5, 0.5, 0.5;
    }
    QuantumBellModel model{DensityOperator::pure(s), {}, 0.0, 0.0};
    for (int c = 0; c < 4; ++c) {
        const auto& p = data.tables[c].p;
        model.observables[c] = basis_for_probabilities(s, {p[0][0], p[0][1], p[1][0], p[1][1]});
    }
    return model;
}

inline QuantumBellModel animal_acts_model(std::optional<Vec4> state = std::nullopt) {
    return bell_data_model(datasets::animal_acts(), std::move(state));
}

} // namespace bellkit

#endif // BELLKIT_MODELS_HPP
