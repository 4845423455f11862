#include <catch2/catch.hpp>

#include <bellkit/linalg.hpp>

#include "support/generators.hpp"

#include <algorithm>

using namespace bellkit;

namespace {

Vec2 v2(cdouble a, cdouble b) {
    Vec2 v;
    v << a, b;
    return v;
}

Mat4 diag4(double a, double b, double c, double d) {
    Mat4 m = Mat4::Zero();
    m(0, 0) = a, m(1, 1) = b, m(2, 2) = c, m(3, 3) = d;
    return m;
}

} // namespace

TEST_CASE("tensor_product follows the row-major slot convention") {
    const double r = std::sqrt(0.5);
    Vec4 e00 = tensor_product(v2(1, 0), v2(1, 0));
    CHECK(max_abs((e00 - Vec4::Unit(0)).eval()) < 1e-15);

    Vec4 e01 = tensor_product(v2(1, 0), v2(0, 1));
    CHECK(max_abs((e01 - Vec4::Unit(1)).eval()) < 1e-15);

    Vec4 uniform = tensor_product(v2(r, r), v2(r, r));
    Vec4 expected;
    expected << 0.5, 0.5, 0.5, 0.5;
    CHECK(max_abs((uniform - expected).eval()) < 1e-15);
    CHECK(uniform.norm() == Approx(1.0).margin(1e-14));
}

TEST_CASE("kron blocks agree with the tensor_product convention") {
    CHECK(max_abs((kron(Mat2::Identity(), Mat2::Identity()) - Mat4::Identity()).eval()) < 1e-15);

    Mat2 z;
    z << 1, 0, 0, -1;
    CHECK(max_abs((kron(z, z) - diag4(1, -1, -1, 1)).eval()) < 1e-15);
    CHECK(max_abs((kron(z, Mat2::Identity()) - diag4(1, 1, -1, -1)).eval()) < 1e-15);
}

TEST_CASE("kron and tensor_product are compatible on random inputs") {
    testgen::Rng rng(101);
    for (int n = 0; n < 200; ++n) {
        Mat2 x = testgen::random_matrix<2>(rng), y = testgen::random_matrix<2>(rng);
        Vec2 a = testgen::random_state<2>(rng), b = testgen::random_state<2>(rng);
        Vec4 lhs = kron(x, y) * tensor_product(a, b);
        Vec4 rhs = tensor_product((x * a).eval(), (y * b).eval());
        REQUIRE(max_abs((lhs - rhs).eval()) < 1e-12);
    }
}

TEST_CASE("spectral_decomposition clusters degenerate eigenvalues") {
    SpectralFamily4 family = spectral_decomposition<4>(diag4(1, -1, -1, 1));
    REQUIRE(family.size() == 2);
    CHECK(family.eigenvalues[0] == Approx(-1.0));
    CHECK(family.eigenvalues[1] == Approx(1.0));
    CHECK(family.multiplicities == std::vector<int>{2, 2});
    CHECK(max_abs((family.projectors[0] - diag4(0, 1, 1, 0)).eval()) < 1e-12);
    CHECK(max_abs((family.projectors[1] - diag4(1, 0, 0, 1)).eval()) < 1e-12);
}

TEST_CASE("spectral_decomposition of the identity is a single projector") {
    SpectralFamily4 family = spectral_decomposition<4>(Mat4::Identity());
    REQUIRE(family.size() == 1);
    CHECK(family.eigenvalues[0] == Approx(1.0));
    CHECK(family.multiplicities[0] == 4);
    CHECK(max_abs((family.projectors[0] - Mat4::Identity()).eval()) < 1e-12);
}

TEST_CASE("spectral_decomposition recovers the correlated-context eigenspaces") {
    // The +/-1 coincidence operator whose +1 space is spanned by
    // (0, r, r, 0) and (0, r, -r, 0): as a matrix diag(-1, 1, 1, -1).
    Mat4 m = diag4(-1, 1, 1, -1);
    SpectralFamily4 family = spectral_decomposition<4>(m);
    REQUIRE(family.size() == 2);
    CHECK(family.eigenvalues[0] == Approx(-1.0));
    CHECK(family.eigenvalues[1] == Approx(1.0));

    const double r = std::sqrt(0.5);
    Vec4 p, q;
    p << 0, r, r, 0;
    q << 0, r, -r, 0;
    Mat4 plus_space = p * p.adjoint() + q * q.adjoint();
    CHECK(max_abs((family.projectors[1] - plus_space).eval()) < 1e-12);
}

TEST_CASE("spectral_decomposition rejects non-hermitian input") {
    Mat4 m = Mat4::Zero();
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(spectral_decomposition<4>(m), std::invalid_argument);
}

TEST_CASE("hermiticity and unitarity predicates") {
    CHECK(is_unitary<4>(Mat4::Identity()));
    CHECK(is_hermitian<4>(diag4(1, -1, -1, 1)));
    Mat4 m = Mat4::Zero();
    m(0, 1) = 1.0;
    CHECK_FALSE(is_hermitian<4>(m));
    CHECK_FALSE(is_unitary<4>(m));
}

TEST_CASE("identity isomorphism leaves vectors and matrices alone") {
    ProductIsomorphism iso = ProductIsomorphism::identity();
    Vec4 v = Vec4::Unit(0);
    CHECK(max_abs((apply_isomorphism(iso, v) - v).eval()) < 1e-15);
    Mat4 m = diag4(1, 2, 3, 4);
    CHECK(max_abs((apply_isomorphism(iso, m) - m).eval()) < 1e-15);
}

TEST_CASE("isomorphism requires an orthonormal image basis") {
    Mat4 bad = Mat4::Identity();
    bad(0, 0) = 2.0;
    CHECK_THROWS_AS(ProductIsomorphism(bad), std::invalid_argument);
}

TEST_CASE("isomorphism conjugation preserves spectra") {
    testgen::Rng rng(202);
    for (int n = 0; n < 100; ++n) {
        Mat4 m = testgen::random_hermitian<4>(rng);
        ProductIsomorphism iso = testgen::random_isomorphism(rng);
        SpectralFamily4 before = spectral_decomposition<4>(m);
        SpectralFamily4 after = spectral_decomposition<4>(iso.forward(m));
        std::vector<double> lhs, rhs;
        for (int k = 0; k < before.size(); ++k)
            lhs.insert(lhs.end(), before.multiplicities[k], before.eigenvalues[k]);
        for (int k = 0; k < after.size(); ++k)
            rhs.insert(rhs.end(), after.multiplicities[k], after.eigenvalues[k]);
        REQUIRE(lhs.size() == rhs.size());
        std::sort(lhs.begin(), lhs.end());
        std::sort(rhs.begin(), rhs.end());
        for (size_t k = 0; k < lhs.size(); ++k) REQUIRE(lhs[k] == Approx(rhs[k]).margin(1e-9));
    }
}

TEST_CASE("spectral reconstruction is tight on random hermitian matrices") {
    testgen::Rng rng(303);
    for (int n = 0; n < 1000; ++n) {
        Mat4 m = testgen::random_hermitian<4>(rng);
        SpectralFamily4 family = spectral_decomposition<4>(m);
        REQUIRE(max_abs((family.reconstruct() - m).eval()) < 1e-10);
        REQUIRE(family.orthogonality_residual() < 1e-10);
    }
}

TEST_CASE("with_first_vector builds an orthonormal completion") {
    testgen::Rng rng(404);
    for (int n = 0; n < 100; ++n) {
        Vec4 s = testgen::random_state<4>(rng);
        ProductIsomorphism iso = ProductIsomorphism::with_first_vector(s);
        CHECK(max_abs((iso.forward(s) - Vec4::Unit(0)).eval()) < 1e-10);
    }

    // Nearly a basis vector: the completion must survive the cancellation.
    Vec4 close;
    close << std::sqrt(1.0 - 4e-12), 2e-6, 0.0, 0.0;
    ProductIsomorphism iso = ProductIsomorphism::with_first_vector(close);
    CHECK(max_abs((iso.forward(close) - Vec4::Unit(0)).eval()) < 1e-10);
}

TEST_CASE("partial traces contract the expected indices") {
    testgen::Rng rng(505);
    Mat2 x = testgen::random_matrix<2>(rng), y = testgen::random_matrix<2>(rng);
    Mat4 m = kron(x, y);
    CHECK(max_abs((partial_trace_second(m) - x * y.trace()).eval()) < 1e-12);
    CHECK(max_abs((partial_trace_first(m) - y * x.trace()).eval()) < 1e-12);
}
