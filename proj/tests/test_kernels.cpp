#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stokesim/kernels.hpp"

using namespace stokesim;

namespace {

double tensor_scale2(const Tensor2& m) { return m.cwiseAbs().maxCoeff(); }
double tensor_scale3(const Tensor3& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("regularized 2d kernel matches frozen reference values") {
    // values computed with an independent implementation of the closed form
    // that was itself checked against direct convolution quadrature
    {
        const Tensor2 u = stokeslet_regularized<2>(Vec2(0.7, -0.3), 0.05);
        CHECK(u(0, 0) == doctest::Approx(0.08867471257985289).epsilon(1e-14));
        CHECK(u(0, 1) == doctest::Approx(-0.0285804210682084).epsilon(1e-14));
        CHECK(u(1, 0) == doctest::Approx(-0.0285804210682084).epsilon(1e-14));
        CHECK(u(1, 1) == doctest::Approx(0.034235815307074986).epsilon(1e-14));
    }
    {
        const Tensor2 u = stokeslet_regularized<2>(Vec2(1.2, 0.4), 0.1);
        CHECK(u(0, 0) == doctest::Approx(0.05253931148363038).epsilon(1e-14));
        CHECK(u(0, 1) == doctest::Approx(0.023598344383022326).epsilon(1e-14));
        CHECK(u(1, 1) == doctest::Approx(-0.01038960687109582).epsilon(1e-14));
    }
    {
        // finite self-interaction at zero separation
        const Tensor2 u = stokeslet_regularized<2>(Vec2(0.0, 0.0), 0.08);
        CHECK(u(0, 0) == doctest::Approx(0.2651984066059838).epsilon(1e-14));
        CHECK(u(0, 1) == 0.0);
        CHECK(u(1, 1) == doctest::Approx(0.2651984066059838).epsilon(1e-14));
    }
}

TEST_CASE("regularized 3d kernel matches frozen reference values") {
    {
        const Tensor3 u = stokeslet_regularized<3>(Vec3(0.5, -0.2, 0.4), 0.06);
        CHECK(u(0, 0) == doctest::Approx(0.0921070395075475).epsilon(1e-14));
        CHECK(u(0, 1) == doctest::Approx(-0.013024185450727874).epsilon(1e-14));
        CHECK(u(0, 2) == doctest::Approx(0.026048370901455748).epsilon(1e-14));
        CHECK(u(1, 1) == doctest::Approx(0.06475625006101898).epsilon(1e-14));
        CHECK(u(1, 2) == doctest::Approx(-0.010419348360582302).epsilon(1e-14));
        CHECK(u(2, 2) == doctest::Approx(0.08038527260189243).epsilon(1e-14));
    }
    {
        const Tensor3 u = stokeslet_regularized<3>(Vec3(0.0, 0.0, 0.0), 0.09);
        CHECK(u(0, 0) == doctest::Approx(0.8841941282883075).epsilon(1e-14));
        CHECK(u(0, 1) == 0.0);
        CHECK(u(2, 2) == doctest::Approx(0.8841941282883075).epsilon(1e-14));
    }
}

TEST_CASE("regularized kernels agree with direct convolution quadrature") {
    {
        const auto [c11, c22] = testsupport::convolve_reg2d(1.0, 0.2);
        const Tensor2 u = stokeslet_regularized<2>(Vec2(1.0, 0.0), 0.2);
        const double scale = tensor_scale2(u);
        CHECK(std::abs(u(0, 0) - c11) / scale < 1e-7);
        CHECK(std::abs(u(1, 1) - c22) / scale < 1e-7);
    }
    {
        const auto [c11, c22] = testsupport::convolve_reg3d(0.5, 0.2);
        const Tensor3 u = stokeslet_regularized<3>(Vec3(0.5, 0.0, 0.0), 0.2);
        const double scale = tensor_scale3(u);
        CHECK(std::abs(u(0, 0) - c11) / scale < 1e-10);
        CHECK(std::abs(u(1, 1) - c22) / scale < 1e-10);
    }
}

TEST_CASE("kernels are symmetric tensors and even in the separation") {
    const Vec2 r2(0.37, -1.21);
    const Tensor2 u2 = stokeslet_regularized<2>(r2, 0.07);
    CHECK(u2(0, 1) == doctest::Approx(u2(1, 0)).epsilon(1e-15));
    CHECK((stokeslet_regularized<2>(Vec2(-r2), 0.07) - u2).cwiseAbs().maxCoeff() < 1e-16);

    const Vec3 r3(0.8, 0.1, -0.5);
    const Tensor3 u3 = stokeslet_singular<3>(r3);
    CHECK(u3(0, 2) == doctest::Approx(u3(2, 0)).epsilon(1e-15));
    CHECK((stokeslet_singular<3>(Vec3(-r3)) - u3).cwiseAbs().maxCoeff() < 1e-16);
}

TEST_CASE("singular kernels have the classical closed forms on the axis") {
    const double r = 0.8;
    const Tensor3 u3 = stokeslet_singular<3>(Vec3(r, 0.0, 0.0));
    CHECK(u3(0, 0) == doctest::Approx(2.0 / (8.0 * M_PI * r)).epsilon(1e-14));
    CHECK(u3(1, 1) == doctest::Approx(1.0 / (8.0 * M_PI * r)).epsilon(1e-14));
    CHECK(u3(0, 1) == 0.0);

    const Tensor2 u2 = stokeslet_singular<2>(Vec2(r, 0.0));
    CHECK(u2(0, 0) == doctest::Approx((-std::log(r) + 1.0) / (4.0 * M_PI)).epsilon(1e-14));
    CHECK(u2(1, 1) == doctest::Approx(-std::log(r) / (4.0 * M_PI)).epsilon(1e-14));
}

TEST_CASE("regularized kernel approaches the singular one as epsilon shrinks") {
    const Vec3 r3(0.6, -0.3, 0.2);
    const Tensor3 s3 = stokeslet_singular<3>(r3);
    double prev = 1e300;
    for (double eps : {0.1, 0.05, 0.025}) {
        const double diff = (stokeslet_regularized<3>(r3, eps) - s3).cwiseAbs().maxCoeff();
        CHECK(diff < 0.26 * prev); // better than second order under halving
        prev = diff;
    }
}

TEST_CASE("singular kernels refuse near-zero separations") {
    CHECK_THROWS_AS((void)stokeslet_singular<2>(Vec2(1e-15, 0.0)), SingularEvaluation);
    CHECK_THROWS_AS((void)stokeslet_singular<3>(Vec3(0.0, 0.0, 0.0)), SingularEvaluation);
    CHECK_THROWS_AS((void)stokeslet_singular<3>(Vec3(1e-12, 0.0, 0.0), 1000.0),
                    SingularEvaluation);
    CHECK_NOTHROW((void)stokeslet_singular<3>(Vec3(1e-12, 0.0, 0.0), 0.001));
}

TEST_CASE("gradient matches central differences of the kernel") {
    stokesim::Rng rng(11);
    const double h = 1e-6;

    for (int rep = 0; rep < 5; ++rep) {
        const Vec2 r(0.5 + rng.uniform01(), rng.uniform01() - 0.5);
        const double eps = 0.05 + 0.1 * rng.uniform01();
        const KernelGradient<2> g = stokeslet_regularized_gradient<2>(r, eps);
        for (int m = 0; m < 2; ++m) {
            Vec2 dr = Vec2::Zero();
            dr[m] = h;
            const Tensor2 fd = (stokeslet_regularized<2>(Vec2(r + dr), eps) -
                                stokeslet_regularized<2>(Vec2(r - dr), eps)) /
                               (2.0 * h);
            CHECK((g.d[m] - fd).cwiseAbs().maxCoeff() < 1e-7 * (1.0 + fd.cwiseAbs().maxCoeff()));
        }
    }

    for (int rep = 0; rep < 5; ++rep) {
        const Vec3 r(0.5 + rng.uniform01(), rng.uniform01() - 0.5, 0.8 * rng.uniform01());
        const double eps = 0.05 + 0.1 * rng.uniform01();
        const KernelGradient<3> g = stokeslet_regularized_gradient<3>(r, eps);
        for (int m = 0; m < 3; ++m) {
            Vec3 dr = Vec3::Zero();
            dr[m] = h;
            const Tensor3 fd = (stokeslet_regularized<3>(Vec3(r + dr), eps) -
                                stokeslet_regularized<3>(Vec3(r - dr), eps)) /
                               (2.0 * h);
            CHECK((g.d[m] - fd).cwiseAbs().maxCoeff() < 1e-7 * (1.0 + fd.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("gradient is odd and vanishes at zero separation") {
    const Vec3 r(0.4, 0.2, -0.7);
    const KernelGradient<3> gp = stokeslet_regularized_gradient<3>(r, 0.08);
    const KernelGradient<3> gn = stokeslet_regularized_gradient<3>(Vec3(-r), 0.08);
    for (int m = 0; m < 3; ++m)
        CHECK((gp.d[m] + gn.d[m]).cwiseAbs().maxCoeff() < 1e-15);

    const KernelGradient<2> g0 = stokeslet_regularized_gradient<2>(Vec2(0.0, 0.0), 0.05);
    for (int m = 0; m < 2; ++m) CHECK(g0.d[m].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gradient contraction sums components") {
    const Vec2 r(0.9, -0.4);
    const KernelGradient<2> g = stokeslet_regularized_gradient<2>(r, 0.1);
    const Vec2 v(0.3, -1.7);
    const Tensor2 c = g.contract(v);
    const Tensor2 expect = g.d[0] * v[0] + g.d[1] * v[1];
    CHECK((c - expect).cwiseAbs().maxCoeff() < 1e-16);
}
