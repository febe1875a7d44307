#include "doctest.h"

#include <cmath>

#include "rotostar/errors.hpp"
#include "rotostar/numerics.hpp"

using namespace rotostar;

TEST_CASE("gauss-legendre is exact to degree 2n-1") {
    const QuadRule q = gauss_legendre(6);
    double w = 0.0, x11 = 0.0, x10 = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        w += q.w[i];
        x11 += q.w[i] * std::pow(q.x[i], 11);
        x10 += q.w[i] * std::pow(q.x[i], 10);
    }
    CHECK(w == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::abs(x11) < 1e-15);
    CHECK(x10 == doctest::Approx(2.0 / 11.0).epsilon(1e-14));
}

TEST_CASE("gauss-jacobi matches adaptive quadrature of the weighted integrand") {
    const double a = 1.5, b = 0.0;
    const QuadRule q = gauss_jacobi(12, a, b);
    auto f = [](double x) { return std::cos(2.0 * x) + x * x * x; };
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += q.w[i] * f(q.x[i]);
    const double ref = integrate([&](double x) { return std::pow(1.0 - x, a) * f(x); }, -1.0, 1.0);
    CHECK(s == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("adaptive quadrature converges at algebraic endpoint singularities") {
    CHECK(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::pow(1.0 - x, 1.5); }, 0.0, 1.0) ==
          doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("differentiation matrix is exact on polynomials") {
    const QuadRule q = gauss_legendre(8);
    const Mat D = differentiation_matrix(q.x);
    Vec f(8), df(8);
    for (int i = 0; i < 8; ++i) {
        f(i) = std::pow(q.x[i], 5) - 2.0 * q.x[i];
        df(i) = 5.0 * std::pow(q.x[i], 4) - 2.0;
    }
    CHECK((D * f - df).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("augmented differentiation honours the extra zeros") {
    // f = (1 - x^2) x on nodes plus zeros at +-1 is exactly representable.
    const QuadRule q = gauss_legendre(5);
    const Mat D = augmented_differentiation(q.x, {-1.0, 1.0});
    Vec f(5), df(5);
    for (int i = 0; i < 5; ++i) {
        const double x = q.x[i];
        f(i) = (1.0 - x * x) * x;
        df(i) = 1.0 - 3.0 * x * x;
    }
    CHECK((D * f - df).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("brent root of cos x = x") {
    const double r = brent_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0);
    CHECK(r == doctest::Approx(0.7390851332151607).epsilon(1e-14));
    CHECK_THROWS_AS(brent_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), RootBracketFailure);
}

TEST_CASE("null space of a row is orthonormal and orthogonal to it") {
    Vec c(5);
    c << 1.0, 2.0, -1.0, 0.5, 3.0;
    const Mat Z = null_space_of_row(c);
    CHECK(Z.cols() == 4);
    CHECK((Z.transpose() * c).norm() < 1e-14);
    CHECK((Z.transpose() * Z - Mat::Identity(4, 4)).norm() < 1e-14);
}

TEST_CASE("associated Legendre rows are orthonormal on [-1, 1]") {
    const QuadRule q = gauss_legendre(12);
    for (int m : {0, 1, 3}) {
        const Mat P = assoc_legendre_table(m, 6, q.x);
        Mat G = Mat::Zero(6, 6);
        for (std::size_t j = 0; j < q.size(); ++j) G += q.w[j] * P.col(j) * P.col(j).transpose();
        CHECK((G - Mat::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("interpolation matrix reproduces polynomials") {
    const QuadRule q = gauss_legendre(6);
    const std::vector<double> t{-0.9, 0.1, 0.77};
    const Mat I = interpolation_matrix(q.x, t);
    Vec f(6);
    for (int i = 0; i < 6; ++i) f(i) = std::pow(q.x[i], 4) - q.x[i];
    const Vec v = I * f;
    for (int k = 0; k < 3; ++k) CHECK(v(k) == doctest::Approx(std::pow(t[k], 4) - t[k]).epsilon(1e-13));
}
