#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "carleman/kernel.hpp"
#include "carleman/presets.hpp"
#include "test_support.hpp"

using namespace carleman;
using namespace carleman::testing;

TEST_CASE("laguerre recurrence matches the explicit low-order polynomials") {
    const GridPtr g = make_grid(10.0, 16, QuadRule::gauss_legendre);
    const double c = 1.0;
    const std::vector<GridFn> family = laguerre_family(g, 4, c);
    for (std::size_t i = 0; i < g->size(); ++i) {
        const double x = g->points[i];
        const double w = std::exp(-x / 2.0);
        const double l0 = 1.0;
        const double l1 = 1.0 - x;
        const double l2 = 1.0 - 2.0 * x + x * x / 2.0;
        const double l3 = 1.0 - 3.0 * x + 1.5 * x * x - x * x * x / 6.0;
        CHECK(family[0].values[i].real() ==
              doctest::Approx(l0 * w).epsilon(1e-13).scale(1.0));
        CHECK(family[1].values[i].real() ==
              doctest::Approx(l1 * w).epsilon(1e-13).scale(1.0));
        CHECK(family[2].values[i].real() ==
              doctest::Approx(l2 * w).epsilon(1e-12).scale(1.0));
        CHECK(family[3].values[i].real() ==
              doctest::Approx(l3 * w).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("scaled families are orthonormal on the default grid") {
    const GridPtr g = make_grid(40.0, 64, QuadRule::gauss_legendre);
    for (int count : {1, 4, 8, 12, 16}) {
        const double c = laguerre_scale(count, 40.0);
        std::vector<GridFn> family = laguerre_family(g, count, c);
        std::vector<cplx> zeros(count, cplx{});
        EigenSystem probe;
        probe.grid = g;
        probe.alphas = zeros;
        probe.vectors = family;
        CHECK(orthonormality_defect(probe) <= 1e-8);
    }
}

TEST_CASE("preset alphas follow the laws inside the sector") {
    Preset p;
    p.count = 8;
    p.theta_max = 0.4;
    p.base = 2.0;

    SUBCASE("linear growth") {
        p.law = EigenvalueLaw::linear_growth;
        const std::vector<cplx> a = preset_alphas(p);
        REQUIRE(a.size() == 8);
        for (int k = 0; k < 8; ++k) {
            CHECK(std::abs(a[k]) == doctest::Approx(2.0 * (k + 1)).epsilon(1e-14));
            CHECK(std::abs(std::arg(a[k])) <= 0.4 + 1e-14);
        }
        CHECK(std::arg(a[0]) == doctest::Approx(-0.4));
        CHECK(std::arg(a[7]) == doctest::Approx(0.4));
    }
    SUBCASE("inverse square") {
        p.law = EigenvalueLaw::inverse_square;
        const std::vector<cplx> a = preset_alphas(p);
        for (int k = 0; k < 8; ++k)
            CHECK(std::abs(a[k]) == doctest::Approx(2.0 / ((k + 1.0) * (k + 1.0))));
    }
    SUBCASE("angle spread at or past pi/2 is rejected") {
        p.theta_max = 1.5707963267948966;
        CHECK_THROWS_AS(preset_alphas(p), error);
    }
}

TEST_CASE("build_preset produces a valid synthesized system") {
    Preset p;
    p.count = 16;
    const SynthesizedSystem s = build_preset(p);
    CHECK(s.family_defect <= 1e-8);
    CHECK(orthonormality_defect(s.system) <= 1e-8);
    const K0Report k0 = check_k0(s.kernel);
    CHECK(k0.tail_sup <= 1e-6);
    CHECK(sup_entry_diff(s.kernel, reconstruct(s.system)) == 0.0);
}

TEST_CASE("count 1 gives a rank-1 kernel") {
    Preset p;
    p.count = 1;
    const SynthesizedSystem s = build_preset(p);
    REQUIRE(s.system.count() == 1);
    const auto& phi = s.system.vectors[0].values;
    for (std::size_t i = 0; i < s.kernel.size(); ++i)
        for (std::size_t j = 0; j < s.kernel.size(); ++j)
            CHECK(std::abs(s.kernel.at(i, j) - phi[i] * std::conj(phi[j])) <= 1e-14);
}

TEST_CASE("inverse-square with zero spread is a classical positive instance") {
    Preset p;
    p.count = 8;
    p.law = EigenvalueLaw::inverse_square;
    p.theta_max = 0.0;
    const SynthesizedSystem s = build_preset(p);
    CHECK(hermitian_defect(s.kernel) <= 1e-12);
    for (cplx a : s.system.alphas) {
        CHECK(a.imag() == 0.0);
        CHECK(a.real() > 0.0);
    }
}

TEST_CASE("grid too coarse for a large count") {
    Preset p;
    p.count = 20;
    CHECK_THROWS_AS(build_preset(p), error);
    try {
        build_preset(p);
    } catch (const error& e) {
        CHECK(e.code() == errc::grid_too_coarse);
    }
}
