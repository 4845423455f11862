#include <catch2/catch.hpp>

#include <bellkit/datasets.hpp>
#include <bellkit/statistics.hpp>

#include "support/generators.hpp"

using namespace bellkit;

namespace {

BellData vessels_tables() {
    BellData d;
    d[Context::AB] = make_table(0.0, 0.5, 0.5, 0.0);
    d[Context::ABp] = make_table(1.0, 0.0, 0.0, 0.0);
    d[Context::ApB] = make_table(1.0, 0.0, 0.0, 0.0);
    d[Context::ApBp] = make_table(1.0, 0.0, 0.0, 0.0);
    return d;
}

BellData cats_tables() {
    BellData d;
    d[Context::AB] = make_table(0.0, 0.5, 0.5, 0.0);
    d[Context::ABp] = make_table(0.5, 0.0, 0.0, 0.5);
    d[Context::ApB] = make_table(0.5, 0.0, 0.0, 0.5);
    d[Context::ApBp] = make_table(0.5, 0.0, 0.0, 0.5);
    return d;
}

} // namespace

TEST_CASE("table validation") {
    CHECK_NOTHROW(validate_table(make_table(0.25, 0.25, 0.25, 0.25)));
    CHECK_THROWS_AS(validate_table(make_table(-0.1, 0.5, 0.5, 0.1)), std::invalid_argument);
    CHECK_THROWS_AS(validate_table(make_table(0.3, 0.3, 0.3, 0.3)), std::invalid_argument);
    CHECK_NOTHROW(validate_table(make_table(0.3, 0.3, 0.3, 0.3), kLooseTableSumTol * 300));
    JointTable scaled = normalized_table(make_table(0.2, 0.2, 0.2, 0.2));
    CHECK(scaled.sum() == Approx(1.0).margin(1e-15));
}

TEST_CASE("expectation values") {
    CHECK(expectation(make_table(0.25, 0.25, 0.25, 0.25)) == Approx(0.0).margin(1e-15));
    CHECK(expectation(make_table(0.5, 0.0, 0.0, 0.5)) == Approx(1.0).margin(1e-15));
    // Published 3-decimal coincidence table; the expectation printed next to
    // it (-0.7778) comes from the unrounded counts, hence the 5e-4 margin.
    CHECK(expectation(make_table(0.049, 0.630, 0.259, 0.062)) == Approx(-0.7778).margin(5e-4));
}

TEST_CASE("the 81-participant dataset reproduces its published statistics") {
    BellData d = datasets::animal_acts();
    validate_bell_data(d);
    std::array<double, 4> e = expectations(d);
    CHECK(e[0] == Approx(-0.7778).margin(5e-5));
    CHECK(e[1] == Approx(0.3580).margin(5e-5));
    CHECK(e[2] == Approx(0.6543).margin(5e-5));
    CHECK(e[3] == Approx(0.6296).margin(5e-5));

    ChshValue s = chsh(d);
    CHECK(s.fixed == Approx(2.4197).margin(1e-3));
    CHECK(s.max == Approx(s.fixed).margin(1e-12));  // the fixed combination is the max here

    auto audit = marginal_law_audit(d);
    REQUIRE(audit.size() == 8);
    CHECK(audit[0].setting == "A1");
    CHECK(audit[0].lhs == Approx(0.679).margin(1e-3));
    CHECK(audit[0].rhs == Approx(0.618).margin(1e-3));
    CHECK(audit[0].deviation == Approx(0.061).margin(1e-3));
    CHECK(audit[2].setting == "A'1");
    CHECK(audit[2].lhs == Approx(0.864).margin(1e-3));
    CHECK(audit[2].rhs == Approx(0.234).margin(1e-3));
    CHECK(audit[2].deviation == Approx(0.630).margin(1e-3));

    CHECK_FALSE(factorizability(d[Context::AB]).factorizable);
    CHECK(classify(d).verdict == Verdict::Type2);
}

TEST_CASE("chsh on the deterministic vessel tables and uniform tables") {
    ChshValue vessels = chsh(vessels_tables());
    CHECK(vessels.fixed == 4.0);
    CHECK(vessels.max == 4.0);

    ChshValue flat = chsh(datasets::uniform());
    CHECK(flat.fixed == Approx(0.0).margin(1e-15));
    CHECK(flat.max == Approx(0.0).margin(1e-15));
}

TEST_CASE("marginal audit flags the vessel siphon and clears the cats tables") {
    auto audit = marginal_law_audit(vessels_tables());
    CHECK(audit[0].setting == "A1");
    CHECK(audit[0].lhs == Approx(0.5).margin(1e-15));
    CHECK(audit[0].rhs == Approx(1.0).margin(1e-15));
    CHECK(audit[0].deviation == Approx(0.5).margin(1e-15));

    for (const MarginalDeviation& dev : marginal_law_audit(cats_tables()))
        CHECK(dev.deviation == 0.0);
}

TEST_CASE("factorizability is the rank-1 test with marginal factors") {
    JointTable outer = make_table(0.6 * 0.7, 0.6 * 0.3, 0.4 * 0.7, 0.4 * 0.3);
    Factorization f = factorizability(outer);
    REQUIRE(f.factorizable);
    CHECK(f.row_factors[0] == Approx(0.6).margin(1e-12));
    CHECK(f.row_factors[1] == Approx(0.4).margin(1e-12));
    CHECK(f.col_factors[0] == Approx(0.7).margin(1e-12));
    CHECK(f.col_factors[1] == Approx(0.3).margin(1e-12));

    Factorization corr = factorizability(make_table(0.5, 0.0, 0.0, 0.5));
    CHECK_FALSE(corr.factorizable);
    CHECK(corr.residual == Approx(0.25).margin(1e-15));
}

TEST_CASE("factorizable tables split their expectation") {
    testgen::Rng rng(121);
    std::uniform_real_distribution<double> uniform(0.05, 0.95);
    for (int n = 0; n < 200; ++n) {
        double a = uniform(rng), b = uniform(rng);
        JointTable t = make_table(a * b, a * (1 - b), (1 - a) * b, (1 - a) * (1 - b));
        Factorization f = factorizability(t);
        REQUIRE(f.factorizable);
        double split = (f.row_factors[0] - f.row_factors[1]) * (f.col_factors[0] - f.col_factors[1]);
        REQUIRE(expectation(t) == Approx(split).margin(1e-9));
    }
}

TEST_CASE("classification thresholds") {
    CHECK(classify(datasets::uniform()).verdict == Verdict::NoViolation);
    CHECK(classify(datasets::animal_acts()).verdict == Verdict::Type2);
    CHECK(classify(vessels_tables()).verdict == Verdict::Type3);
    CHECK(classify(cats_tables()).verdict == Verdict::Type4);

    ClassificationReport cats = classify(cats_tables());
    CHECK(cats.chsh_max == 4.0);
    CHECK(cats.max_marginal_deviation == 0.0);
}

TEST_CASE("relabeling one setting's outcomes keeps chsh_max but not chsh_fixed") {
    testgen::Rng rng(232);
    for (int n = 0; n < 100; ++n) {
        Vec4 state = testgen::random_state<4>(rng);
        BellData d = testgen::quantum_product_bell_data(state, testgen::random_isomorphism(rng), rng);
        BellData swapped = d;
        swapped[Context::AB].b_values = {-1.0, +1.0};
        swapped[Context::ApB].b_values = {-1.0, +1.0};
        ChshValue before = chsh(d), after = chsh(swapped);
        REQUIRE(after.max == Approx(before.max).margin(1e-12));
    }
    // A concrete case where the fixed combination changes: the deterministic
    // vessel tables under a B relabel.
    BellData swapped = vessels_tables();
    swapped[Context::AB].b_values = {-1.0, +1.0};
    swapped[Context::ApB].b_values = {-1.0, +1.0};
    CHECK(chsh(swapped).fixed != Approx(chsh(vessels_tables()).fixed).margin(1e-6));
    CHECK(chsh(swapped).max == Approx(4.0).margin(1e-12));
}

TEST_CASE("quantum product-measurement data obeys Tsirelson and the marginal law") {
    testgen::Rng rng(343);
    const double bound = 2.0 * std::sqrt(2.0);
    for (int n = 0; n < 1000; ++n) {
        Vec4 state = testgen::random_state<4>(rng);
        BellData d = testgen::quantum_product_bell_data(state, testgen::random_isomorphism(rng), rng);
        REQUIRE(chsh(d).max <= bound + 1e-9);
        REQUIRE(max_marginal_deviation(d) < 1e-10);
    }
}

TEST_CASE("classification is stable under sub-tolerance perturbations") {
    testgen::Rng rng(454);
    std::uniform_real_distribution<double> noise(-1e-7, 1e-7);
    for (const BellData& d : {datasets::animal_acts(), vessels_tables(), cats_tables()}) {
        Verdict expected = classify(d).verdict;
        for (int n = 0; n < 50; ++n) {
            BellData perturbed = d;
            for (JointTable& t : perturbed.tables) {
                for (auto& row : t.p)
                    for (double& v : row) v = std::max(0.0, v + noise(rng));
                t = normalized_table(t);
            }
            REQUIRE(classify(perturbed).verdict == expected);
        }
    }
}
