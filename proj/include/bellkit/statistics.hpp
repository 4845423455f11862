/**
 * Coincidence-table statistics: expectation values, the CHSH quantity in its
 * fixed sign combination and maximized over the standard sign conventions,
 * the shared-setting marginal audit, the rank-1 factorizability test, and
 * the four-type classification of a Bell experiment.
 */

#ifndef BELLKIT_STATISTICS_HPP
#define BELLKIT_STATISTICS_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace bellkit {

inline constexpr double kTableSumTol = 1e-9;
inline constexpr double kLooseTableSumTol = 5e-3;  // experimental tables carry rounding
inline constexpr double kBellTol = 1e-6;
inline constexpr double kMarginalTol = 1e-6;
inline constexpr double kFactorTol = 1e-8;

/// One 2x2 coincidence-probability table; p[i][j] is the probability of
/// outcome pair (i-th A outcome, j-th B outcome). Outcome values default
/// to +1/-1 on each side.
struct JointTable {
    std::array<std::array<double, 2>, 2> p{};
    std::array<double, 2> a_values{+1.0, -1.0};
    std::array<double, 2> b_values{+1.0, -1.0};

    double sum() const { return p[0][0] + p[0][1] + p[1][0] + p[1][1]; }
    std::array<double, 2> row_marginals() const { return {p[0][0] + p[0][1], p[1][0] + p[1][1]}; }
    std::array<double, 2> col_marginals() const { return {p[0][0] + p[1][0], p[0][1] + p[1][1]}; }
};

inline JointTable make_table(double p11, double p12, double p21, double p22) {
    JointTable t;
    t.p = {{{p11, p12}, {p21, p22}}};
    return t;
}

inline void validate_table(const JointTable& t, double sum_tol = kTableSumTol) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (t.p[i][j] < 0.0) throw std::invalid_argument("JointTable: negative probability");
    if (std::abs(t.sum() - 1.0) > sum_tol)
        throw std::invalid_argument("JointTable: probabilities do not sum to 1");
}

inline JointTable normalized_table(const JointTable& t) {
    double s = t.sum();
    if (s <= 0.0) throw std::invalid_argument("JointTable: cannot normalize zero table");
    JointTable out = t;
    for (auto& row : out.p)
        for (double& v : row) v /= s;
    return out;
}

enum class Context { AB = 0, ABp = 1, ApB = 2, ApBp = 3 };

inline constexpr std::array<const char*, 4> kContextNames{"AB", "AB'", "A'B", "A'B'"};

/// The four coincidence tables of one CHSH experiment.
struct BellData {
    std::array<JointTable, 4> tables;  // AB, AB', A'B, A'B'
    std::string label;

    const JointTable& operator[](Context c) const { return tables[static_cast<int>(c)]; }
    JointTable& operator[](Context c) { return tables[static_cast<int>(c)]; }
};

inline void validate_bell_data(const BellData& d, double sum_tol = kTableSumTol) {
    for (const JointTable& t : d.tables) validate_table(t, sum_tol);
}

inline BellData normalized_bell_data(const BellData& d) {
    BellData out = d;
    for (JointTable& t : out.tables) t = normalized_table(t);
    return out;
}

/// E = sum of lambda_a(i) * lambda_b(j) * p(i, j).
inline double expectation(const JointTable& t) {
    double e = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) e += t.a_values[i] * t.b_values[j] * t.p[i][j];
    return e;
}

inline std::array<double, 4> expectations(const BellData& d) {
    return {expectation(d[Context::AB]), expectation(d[Context::ABp]),
            expectation(d[Context::ApB]), expectation(d[Context::ApBp])};
}

struct ChshValue {
    double fixed = 0.0;  // E(A',B') + E(A',B) + E(A,B') - E(A,B)
    double max = 0.0;    // max |S| over the 8 one-minus-sign placements
};

inline ChshValue chsh(const BellData& d) {
    std::array<double, 4> e = expectations(d);  // AB, AB', A'B, A'B'
    ChshValue out;
    out.fixed = e[3] + e[2] + e[1] - e[0];
    double total = e[0] + e[1] + e[2] + e[3];
    for (int k = 0; k < 4; ++k) out.max = std::max(out.max, std::abs(total - 2.0 * e[k]));
    return out;
}

/// Which one-side marginal is compared across which pair of contexts.
struct MarginalDeviation {
    std::string setting;  // "A1", "A2", "A'1", "A'2", "B1", "B2", "B'1", "B'2"
    Context lhs_context, rhs_context;
    double lhs = 0.0, rhs = 0.0;
    double deviation = 0.0;
};

/**
 * All 8 shared-setting comparisons: each A-side setting keeps its marginal
 * when the remote B-side setting changes (and symmetrically). A nonzero
 * deviation means the single-side statistics reveal the remote choice.
 */
inline std::vector<MarginalDeviation> marginal_law_audit(const BellData& d) {
    std::vector<MarginalDeviation> out;
    auto push = [&out](std::string setting, Context lc, Context rc, double lhs, double rhs) {
        out.push_back({std::move(setting), lc, rc, lhs, rhs, std::abs(lhs - rhs)});
    };
    for (int i = 0; i < 2; ++i)
        push("A" + std::to_string(i + 1), Context::AB, Context::ABp,
             d[Context::AB].row_marginals()[i], d[Context::ABp].row_marginals()[i]);
    for (int i = 0; i < 2; ++i)
        push("A'" + std::to_string(i + 1), Context::ApB, Context::ApBp,
             d[Context::ApB].row_marginals()[i], d[Context::ApBp].row_marginals()[i]);
    for (int j = 0; j < 2; ++j)
        push("B" + std::to_string(j + 1), Context::AB, Context::ApB,
             d[Context::AB].col_marginals()[j], d[Context::ApB].col_marginals()[j]);
    for (int j = 0; j < 2; ++j)
        push("B'" + std::to_string(j + 1), Context::ABp, Context::ApBp,
             d[Context::ABp].col_marginals()[j], d[Context::ApBp].col_marginals()[j]);
    return out;
}

inline double max_marginal_deviation(const BellData& d) {
    double m = 0.0;
    for (const MarginalDeviation& dev : marginal_law_audit(d)) m = std::max(m, dev.deviation);
    return m;
}

struct Factorization {
    bool factorizable = false;
    std::array<double, 2> row_factors{}, col_factors{};
    double residual = 0.0;  // |p11 p22 - p12 p21|
};

/// p_ij = a_i b_j with unit-sum factors exists iff the table is rank 1;
/// the factors are then exactly the marginals.
inline Factorization factorizability(const JointTable& t, double tol = kFactorTol) {
    Factorization out;
    out.residual = std::abs(t.p[0][0] * t.p[1][1] - t.p[0][1] * t.p[1][0]);
    out.factorizable = out.residual <= tol;
    out.row_factors = t.row_marginals();
    out.col_factors = t.col_marginals();
    return out;
}

enum class Verdict { NoViolation, Type1, Type2, Type3, Type4 };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::NoViolation: return "NoViolation";
        case Verdict::Type1: return "Type1";
        case Verdict::Type2: return "Type2";
        case Verdict::Type3: return "Type3";
        case Verdict::Type4: return "Type4";
    }
    return "?";
}

inline const char* verdict_description(Verdict v) {
    switch (v) {
        case Verdict::NoViolation: return "no CHSH violation";
        case Verdict::Type1: return "customary quantum modeling";
        case Verdict::Type2: return "nonlocal non-marginal box modeling 1";
        case Verdict::Type3: return "nonlocal non-marginal box modeling 2";
        case Verdict::Type4: return "nonlocal box modeling";
    }
    return "?";
}

struct ClassificationReport {
    std::array<double, 4> expectations{};  // AB, AB', A'B, A'B'
    double chsh_fixed = 0.0;
    double chsh_max = 0.0;
    std::vector<MarginalDeviation> marginal_deviations;
    double max_marginal_deviation = 0.0;
    std::array<Factorization, 4> factorizations;
    Verdict verdict = Verdict::NoViolation;
    double tol_bell = kBellTol;
    double tol_marginal = kMarginalTol;
};

/**
 * Verdict thresholds: no violation up to 2 + tol_bell; within the quantum
 * bound up to 2*sqrt(2) + tol_bell (Type 1 when the marginal law holds to
 * tol_marginal, else Type 2); beyond it Type 4 when the marginal law holds,
 * else Type 3. The verdict is based on chsh_max; raw numbers ride along.
 */
inline ClassificationReport classify(const BellData& d, double tol_bell = kBellTol,
                                     double tol_marginal = kMarginalTol,
                                     double tol_factor = kFactorTol) {
    ClassificationReport report;
    report.expectations = expectations(d);
    ChshValue s = chsh(d);
    report.chsh_fixed = s.fixed;
    report.chsh_max = s.max;
    report.marginal_deviations = marginal_law_audit(d);
    for (const MarginalDeviation& dev : report.marginal_deviations)
        report.max_marginal_deviation = std::max(report.max_marginal_deviation, dev.deviation);
    for (int c = 0; c < 4; ++c) report.factorizations[c] = factorizability(d.tables[c], tol_factor);
    report.tol_bell = tol_bell;
    report.tol_marginal = tol_marginal;

    const double tsirelson = 2.0 * std::sqrt(2.0);
    bool marginal_holds = report.max_marginal_deviation <= tol_marginal;
    if (report.chsh_max <= 2.0 + tol_bell)
        report.verdict = Verdict::NoViolation;
    else if (report.chsh_max <= tsirelson + tol_bell)
        report.verdict = marginal_holds ? Verdict::Type1 : Verdict::Type2;
    else
        report.verdict = marginal_holds ? Verdict::Type4 : Verdict::Type3;
    return report;
}

} // namespace bellkit

#endif // BELLKIT_STATISTICS_HPP
