#include <catch2/catch_amalgamated.hpp>

#include "kvf/linalg.hpp"
#include "kvf/random.hpp"
#include "test_helpers.hpp"

using kvf::Matrix;
using kvf::Vec;

namespace {

Matrix random_symmetric(kvf::DeterministicRng& rng, std::size_t n) {
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = rng.uniform(-3.0, 3.0);
            s(i, j) = v;
            s(j, i) = v;
        }
    return s;
}

} // namespace

TEST_CASE("symmetric eigendecomposition on closed-form inputs", "[linalg]") {
    SECTION("identity") {
        const kvf::SymEig eig = kvf::sym_eigendecompose(Matrix::identity(3));
        REQUIRE(eig.eigenvalues.size() == 3);
        for (double lambda : eig.eigenvalues) CHECK(lambda == Catch::Approx(1.0).margin(1e-14));
        CHECK(kvf::frobenius_norm(eig.eigenvectors.transposed() * eig.eigenvectors -
                                  Matrix::identity(3)) < 1e-12);
    }

    SECTION("already diagonal keeps the standard basis") {
        Matrix s(2, 2);
        s(0, 0) = 4.0;
        s(1, 1) = 1.0;
        const kvf::SymEig eig = kvf::sym_eigendecompose(s);
        CHECK(eig.eigenvalues[0] == Catch::Approx(4.0).margin(1e-14));
        CHECK(eig.eigenvalues[1] == Catch::Approx(1.0).margin(1e-14));
        CHECK(std::abs(eig.eigenvectors(0, 0)) == Catch::Approx(1.0).margin(1e-14));
        CHECK(std::abs(eig.eigenvectors(1, 1)) == Catch::Approx(1.0).margin(1e-14));
    }

    SECTION("-R^2 of a rotation generator with frequency 2 is 4I") {
        Matrix r(2, 2);
        r(0, 1) = -2.0;
        r(1, 0) = 2.0;
        const Matrix s = -1.0 * (r * r);
        const kvf::SymEig eig = kvf::sym_eigendecompose(s);
        CHECK(eig.eigenvalues[0] == Catch::Approx(4.0).margin(1e-12));
        CHECK(eig.eigenvalues[1] == Catch::Approx(4.0).margin(1e-12));
    }

    SECTION("asymmetric input is rejected") {
        Matrix s(2, 2);
        s(0, 1) = 1.0;
        CHECK_THROWS_AS(kvf::sym_eigendecompose(s), kvf::NonSymmetricInput);
    }
}

TEST_CASE("eigendecomposition reconstructs and stays orthonormal", "[linalg]") {
    kvf::DeterministicRng rng(101);
    for (std::size_t n = 1; n <= 12; ++n) {
        const Matrix s = random_symmetric(rng, n);
        const kvf::SymEig eig = kvf::sym_eigendecompose(s);

        Matrix lambda(n, n);
        for (std::size_t i = 0; i < n; ++i) lambda(i, i) = eig.eigenvalues[i];
        const Matrix rebuilt = eig.eigenvectors * (lambda * eig.eigenvectors.transposed());
        CHECK(kvf::frobenius_norm(rebuilt - s) <= 1e-9 * std::max(1.0, kvf::frobenius_norm(s)));

        CHECK(kvf::frobenius_norm(eig.eigenvectors.transposed() * eig.eigenvectors -
                                  Matrix::identity(n)) <= 1e-11);

        // residual per column and descending order
        for (std::size_t j = 0; j < n; ++j) {
            Vec residual = s * eig.eigenvectors.col(j);
            kvf::axpy(-eig.eigenvalues[j], eig.eigenvectors.col(j), residual);
            CHECK(kvf::norm(residual) <= 1e-10 * std::max(1.0, kvf::frobenius_norm(s)));
            if (j > 0) CHECK(eig.eigenvalues[j - 1] >= eig.eigenvalues[j]);
        }
    }
}

TEST_CASE("least squares on closed-form inputs", "[linalg]") {
    SECTION("invertible identity system") {
        const kvf::LeastSquaresSolution sol =
            kvf::solve_least_squares(Matrix::identity(2), Vec{3.0, 4.0});
        CHECK(sol.x[0] == Catch::Approx(3.0).margin(1e-12));
        CHECK(sol.x[1] == Catch::Approx(4.0).margin(1e-12));
        CHECK(sol.residual_norm == Catch::Approx(0.0).margin(1e-12));
        CHECK(sol.nullity == 0);
    }

    SECTION("rank-deficient system returns the minimum-norm solution") {
        Matrix a(2, 2);
        a(0, 0) = 1.0;
        a(1, 0) = 1.0;
        const kvf::LeastSquaresSolution sol = kvf::solve_least_squares(a, Vec{1.0, 1.0});
        CHECK(sol.x[0] == Catch::Approx(1.0).margin(1e-12));
        CHECK(sol.x[1] == Catch::Approx(0.0).margin(1e-12));
        CHECK(sol.residual_norm == Catch::Approx(0.0).margin(1e-10));
        CHECK(sol.nullity == 1);
    }

    SECTION("mean of two observations") {
        Matrix a(2, 1);
        a(0, 0) = 1.0;
        a(1, 0) = 1.0;
        const kvf::LeastSquaresSolution sol = kvf::solve_least_squares(a, Vec{0.0, 2.0});
        CHECK(sol.x[0] == Catch::Approx(1.0).margin(1e-12));
        CHECK(sol.residual_norm == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
        CHECK(sol.nullity == 0);
    }
}

TEST_CASE("least-squares solutions are local minima", "[linalg]") {
    kvf::DeterministicRng rng(202);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t p = 6 + static_cast<std::size_t>(rep % 3);
        const std::size_t q = 4;
        Matrix a(p, q);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < q; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
        const Vec b = rng.gaussian_vec(p);
        const kvf::LeastSquaresSolution sol = kvf::solve_least_squares(a, b);

        for (int k = 0; k < 100; ++k) {
            Vec delta = rng.gaussian_vec(q);
            const double len = kvf::norm(delta);
            delta = kvf::scaled(1e-3 / len, std::move(delta));
            const Vec perturbed = kvf::add(delta, sol.x);
            const double moved = kvf::norm(kvf::sub(a * perturbed, b));
            CHECK(moved >= sol.residual_norm - 1e-12);
        }
    }
}

TEST_CASE("modified Gram-Schmidt drops dependent directions", "[linalg]") {
    const std::vector<Vec> basis =
        kvf::mgs_orthonormalize({Vec{1.0, 0.0, 0.0}, Vec{1.0, 1e-14, 0.0}, Vec{0.0, 0.0, 2.0}});
    REQUIRE(basis.size() == 2);
    CHECK(std::abs(kvf::dot(basis[0], basis[1])) < 1e-12);
    CHECK(kvf::norm(basis[0]) == Catch::Approx(1.0).margin(1e-12));

    // vectors orthogonalized against a fixed subspace stay orthogonal to it
    const std::vector<Vec> rest =
        kvf::mgs_orthonormalize({Vec{0.5, 0.5, 0.0}, Vec{0.0, 1.0, 1.0}}, {Vec{1.0, 0.0, 0.0}});
    REQUIRE(rest.size() == 2);
    for (const Vec& u : rest) CHECK(std::abs(u[0]) < 1e-12);
}
