#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "carleman/spectral.hpp"
#include "test_support.hpp"

using namespace carleman;
using namespace carleman::testing;

namespace {

KernelMatrix diagonal_kernel(const GridPtr& g, const std::vector<double>& diag) {
    std::vector<cplx> vals(g->size() * g->size(), cplx{});
    for (std::size_t i = 0; i < g->size(); ++i) vals[i * g->size() + i] = diag[i];
    return KernelMatrix(g, std::move(vals));
}

} // namespace

TEST_CASE("check_normality") {
    std::mt19937_64 rng(43);
    const GridPtr g = make_grid(5.0, 8, QuadRule::gauss_legendre);

    SUBCASE("hermitian kernels are normal") {
        const KernelMatrix K = random_hermitian_kernel(g, rng);
        CHECK(check_normality(K) <= 1e-12 * sup_entry(K) * sup_entry(K) * 100);
    }
    SUBCASE("synthesized diagonal kernels are normal") {
        const std::vector<GridFn> family = random_orthonormal_family(g, 4, rng);
        const KernelMatrix K = synthesize_from_diagonal(
            {cplx{1.0, 0.3}, cplx{0.6, -0.2}, cplx{0.4, 0.1}, cplx{0.2, 0.0}}, family);
        CHECK(check_normality(K) <= 1e-10);
    }
    SUBCASE("a nilpotent bump of size 1e-2 pushes the residual past 1e-4") {
        const KernelMatrix H = random_hermitian_kernel(g, rng);
        std::vector<cplx> vals(H.values);
        vals[0 * g->size() + 3] += 1e-2;  // rank-1 nilpotent direction e_0 e_3^T
        const KernelMatrix K(g, std::move(vals));
        CHECK(check_normality(K) >= 1e-4);
    }
}

TEST_CASE("eig_hermitian on a diagonal kernel") {
    const GridPtr g = make_grid(3.0, 4, QuadRule::trapezoid);
    const std::vector<double> diag = {2.0, -1.0, 0.5, 3.0};
    const EigenSystem E = eig_hermitian(diagonal_kernel(g, diag));

    // the integral operator scales each spike by its weight: (Kf)_i = w_i K_ii f_i
    std::vector<double> expected;
    for (std::size_t i = 0; i < 4; ++i) expected.push_back(g->weights[i] * diag[i]);
    std::sort(expected.begin(), expected.end(),
              [](double a, double b) { return std::abs(a) > std::abs(b); });
    REQUIRE(E.count() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(E.alphas[k].imag() == 0.0);
        CHECK(E.alphas[k].real() == doctest::Approx(expected[k]).epsilon(1e-14));
    }
    // vectors are coordinate spikes scaled by 1/sqrt(w_i)
    for (std::size_t k = 0; k < 4; ++k) {
        std::size_t spike = 0;
        double mx = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            if (std::abs(E.vectors[k].values[i]) > mx) {
                mx = std::abs(E.vectors[k].values[i]);
                spike = i;
            }
        CHECK(g->weights[spike] * diag[spike] == doctest::Approx(E.alphas[k].real()));
        CHECK(mx == doctest::Approx(1.0 / std::sqrt(g->weights[spike])).epsilon(1e-12));
    }
    CHECK(orthonormality_defect(E) <= 1e-12);
    CHECK(sup_entry_diff(reconstruct(E), diagonal_kernel(g, diag)) <= 1e-12);
}

TEST_CASE("eig_hermitian on a rank-1 projector kernel") {
    std::mt19937_64 rng(47);
    const GridPtr g = make_grid(6.0, 10, QuadRule::gauss_legendre);
    const std::vector<GridFn> family = random_orthonormal_family(g, 1, rng);
    const KernelMatrix K = synthesize_from_diagonal({cplx{2.0, 0.0}}, family);
    const EigenSystem E = eig_hermitian(K);
    CHECK(E.alphas[0].real() == doctest::Approx(2.0).epsilon(1e-10));
    for (std::size_t k = 1; k < E.count(); ++k) CHECK(std::abs(E.alphas[k]) <= 1e-10);
}

TEST_CASE("eig_hermitian reconstructs random kernels") {
    std::mt19937_64 rng(53);
    for (int rep = 0; rep < 5; ++rep) {
        const GridPtr g = make_grid(4.0 + rep, 12 + rep, QuadRule::gauss_legendre);
        const KernelMatrix K = random_hermitian_kernel(g, rng);
        const EigenSystem E = eig_hermitian(K);
        CHECK(orthonormality_defect(E) <= 1e-8);
        CHECK(sup_entry_diff(reconstruct(E), K) <= 1e-8 * (1.0 + sup_entry(K)));
    }
}

TEST_CASE("eig_hermitian rejects non-hermitian input") {
    std::mt19937_64 rng(59);
    const GridPtr g = make_grid(2.0, 5, QuadRule::trapezoid);
    CHECK_THROWS_AS(eig_hermitian(random_kernel(g, rng)), error);
}

TEST_CASE("jacobi off-diagonal mass decreases monotonically") {
    std::mt19937_64 rng(61);
    const GridPtr g = make_grid(7.0, 16, QuadRule::gauss_legendre);
    const KernelMatrix K = random_hermitian_kernel(g, rng);
    std::vector<double> history;
    eig_hermitian(K, &history);
    REQUIRE(history.size() >= 2);
    for (std::size_t i = 1; i < history.size(); ++i) CHECK(history[i] <= history[i - 1]);
}

TEST_CASE("eig_normal agrees with eig_hermitian on hermitian input") {
    std::mt19937_64 rng(67);
    const GridPtr g = make_grid(5.0, 10, QuadRule::gauss_legendre);
    const KernelMatrix K = random_hermitian_kernel(g, rng);
    const EigenSystem En = eig_normal(K);
    const EigenSystem Eh = eig_hermitian(K);
    REQUIRE(En.count() == Eh.count());
    for (std::size_t k = 0; k < En.count(); ++k) {
        CHECK(std::abs(En.alphas[k] - Eh.alphas[k]) <= 1e-9 * (1.0 + std::abs(Eh.alphas[k])));
        CHECK(std::abs(En.alphas[k].imag()) <= 1e-9);
    }
    CHECK(sup_entry_diff(reconstruct(En), K) <= 1e-7 * (1.0 + sup_entry(K)));
}

TEST_CASE("eig_normal on i times a hermitian kernel") {
    std::mt19937_64 rng(71);
    const GridPtr g = make_grid(4.0, 9, QuadRule::gauss_legendre);
    const KernelMatrix H = random_hermitian_kernel(g, rng);
    std::vector<cplx> vals(H.values);
    for (cplx& z : vals) z *= cplx{0.0, 1.0};
    const KernelMatrix iH(g, std::move(vals));

    const EigenSystem En = eig_normal(iH);
    const EigenSystem Eh = eig_hermitian(H);
    // alphas purely imaginary, i * eig(H); compare as multisets via sorting
    std::vector<double> got, expected;
    for (cplx a : En.alphas) {
        CHECK(std::abs(a.real()) <= 1e-8 * (1.0 + std::abs(a)));
        got.push_back(a.imag());
    }
    for (cplx a : Eh.alphas) expected.push_back(a.real());
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    for (std::size_t k = 0; k < got.size(); ++k)
        CHECK(std::abs(got[k] - expected[k]) <= 1e-8 * (1.0 + std::abs(expected[k])));
    CHECK(sup_entry_diff(reconstruct(En), iH) <= 1e-7 * (1.0 + sup_entry(iH)));
}

TEST_CASE("eig_normal recovers synthesized sectorial systems") {
    std::mt19937_64 rng(73);
    const GridPtr g = make_grid(9.0, 14, QuadRule::gauss_legendre);
    const std::size_t count = 6;
    const std::vector<GridFn> family = random_orthonormal_family(g, count, rng);
    std::vector<cplx> alphas(count);
    for (std::size_t k = 0; k < count; ++k)
        alphas[k] = std::polar(k + 1.0, 0.4 * (2.0 * k / (count - 1.0) - 1.0));
    const KernelMatrix K = synthesize_from_diagonal(alphas, family);

    EigNormalDiagnostics diag;
    const EigenSystem E = eig_normal(K, &diag);
    CHECK(sup_entry_diff(reconstruct(E), K) <= 1e-7 * (1.0 + sup_entry(K)));
    CHECK(orthonormality_defect(E) <= 1e-8);

    // recovered alphas match the synthesis on the nonzero part
    std::vector<cplx> got;
    for (cplx a : E.alphas)
        if (std::abs(a) > 1e-8) got.push_back(a);
    REQUIRE(got.size() == count);
    for (cplx a : alphas) {
        double best = 1e9;
        for (cplx b : got) best = std::min(best, std::abs(a - b));
        CHECK(best <= 1e-7);
    }
    CHECK(diag.cluster_count >= 1);
}

TEST_CASE("eig_normal recovers eigenfunctions up to phase") {
    std::mt19937_64 rng(79);
    const GridPtr g = make_grid(6.0, 10, QuadRule::gauss_legendre);
    const std::vector<GridFn> family = random_orthonormal_family(g, 3, rng);
    const std::vector<cplx> alphas = {cplx{3.0, 0.9}, cplx{2.0, -0.5}, cplx{1.0, 0.2}};
    const EigenSystem truth = make_eigensystem(alphas, family);
    const EigenSystem E = eig_normal(reconstruct(truth));

    for (std::size_t k = 0; k < truth.count(); ++k) {
        // match by eigenvalue, then compare |<phi_est, phi_truth>| to 1
        std::size_t match = 0;
        double best = 1e9;
        for (std::size_t j = 0; j < E.count(); ++j)
            if (std::abs(E.alphas[j] - truth.alphas[k]) < best) {
                best = std::abs(E.alphas[j] - truth.alphas[k]);
                match = j;
            }
        REQUIRE(best <= 1e-7);
        const cplx overlap = inner(E.vectors[match], truth.vectors[k]);
        CHECK(std::abs(std::abs(overlap) - 1.0) <= 1e-7);
    }
}

TEST_CASE("eig_normal splits degenerate X clusters using Y") {
    // alphas i and -i: X-part vanishes identically, Y distinguishes them
    std::mt19937_64 rng(83);
    const GridPtr g = make_grid(3.0, 6, QuadRule::gauss_legendre);
    const std::vector<GridFn> family = random_orthonormal_family(g, 2, rng);
    const std::vector<cplx> alphas = {cplx{0.0, 1.0}, cplx{0.0, -1.0}};
    const KernelMatrix K = synthesize_from_diagonal(alphas, family);
    const EigenSystem E = eig_normal(K);
    CHECK(sup_entry_diff(reconstruct(E), K) <= 1e-7);
    std::vector<double> imags;
    for (cplx a : E.alphas)
        if (std::abs(a) > 1e-8) imags.push_back(a.imag());
    std::sort(imags.begin(), imags.end());
    REQUIRE(imags.size() == 2);
    CHECK(imags[0] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(imags[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("eig_normal rejects non-normal kernels") {
    std::mt19937_64 rng(89);
    const GridPtr g = make_grid(4.0, 7, QuadRule::gauss_legendre);
    const KernelMatrix H = random_hermitian_kernel(g, rng);
    std::vector<cplx> vals(H.values);
    vals[2] += 0.05;
    const KernelMatrix K(g, std::move(vals));
    CHECK_THROWS_AS(eig_normal(K), error);
    try {
        eig_normal(K);
    } catch (const error& e) {
        CHECK(e.code() == errc::not_normal);
    }
}

TEST_CASE("reconstruct basics") {
    std::mt19937_64 rng(97);
    const GridPtr g = make_grid(2.0, 5, QuadRule::trapezoid);

    SUBCASE("empty system gives the zero kernel") {
        EigenSystem E;
        E.grid = g;
        const KernelMatrix K = reconstruct(E);
        for (const cplx& z : K.values) CHECK(z == cplx{});
    }
    SUBCASE("single normalized pair gives a rank-1 projector kernel") {
        const std::vector<GridFn> family = random_orthonormal_family(g, 1, rng);
        const EigenSystem E = make_eigensystem({cplx{1.0, 0.0}}, family);
        const KernelMatrix K = reconstruct(E);
        const auto& phi = E.vectors[0].values;
        for (std::size_t i = 0; i < g->size(); ++i)
            for (std::size_t j = 0; j < g->size(); ++j)
                CHECK(std::abs(K.at(i, j) - phi[i] * std::conj(phi[j])) <= 1e-15);
    }
}

TEST_CASE("synthesize_from_diagonal") {
    std::mt19937_64 rng(101);
    SUBCASE("all-zero alphas give the zero kernel") {
        const GridPtr g = make_grid(3.0, 6, QuadRule::gauss_legendre);
        const std::vector<GridFn> family = random_orthonormal_family(g, 2, rng);
        const KernelMatrix K = synthesize_from_diagonal({cplx{}, cplx{}}, family);
        for (const cplx& z : K.values) CHECK(z == cplx{});
    }
    SUBCASE("coordinate spikes on a uniform-weight grid give a diagonal kernel") {
        // single-node trapezoid weights are uniform only for n=2; use it
        const GridPtr g = make_grid(1.0, 2, QuadRule::trapezoid);
        const double s = std::sqrt(2.0);  // 1/sqrt(w), w = 0.5
        std::vector<GridFn> family;
        family.emplace_back(g, std::vector<cplx>{cplx{s, 0.0}, cplx{}});
        family.emplace_back(g, std::vector<cplx>{cplx{}, cplx{s, 0.0}});
        const KernelMatrix K = synthesize_from_diagonal({cplx{1.0, 0.0}, cplx{2.0, 0.0}}, family);
        CHECK(std::abs(K.at(0, 0) - cplx{2.0, 0.0}) <= 1e-15);
        CHECK(std::abs(K.at(1, 1) - cplx{4.0, 0.0}) <= 1e-15);
        CHECK(std::abs(K.at(0, 1)) <= 1e-15);
        CHECK(std::abs(K.at(1, 0)) <= 1e-15);
    }
    SUBCASE("non-orthonormal family is rejected") {
        const GridPtr g = make_grid(3.0, 6, QuadRule::gauss_legendre);
        std::vector<GridFn> family = random_orthonormal_family(g, 2, rng);
        for (auto& z : family[1].values) z *= 1.01;
        CHECK_THROWS_AS(synthesize_from_diagonal({cplx{1.0, 0.0}, cplx{2.0, 0.0}}, family),
                        error);
    }
}

TEST_CASE("sector_fit") {
    SUBCASE("positive reals give rotation 0 and the floored slope") {
        const Sector s = sector_fit({cplx{1.0, 0.0}, cplx{2.0, 0.0}, cplx{3.0, 0.0}}, 1e-15);
        CHECK(s.rotation == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(s.slope == 1e-12);
    }
    SUBCASE("symmetric pair on the diagonal rays") {
        const Sector s = sector_fit({cplx{1.0, 1.0}, cplx{1.0, -1.0}}, 1e-15);
        CHECK(std::abs(s.rotation) <= 1e-14);
        CHECK(s.slope == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("angle pi is rejected") {
        CHECK_THROWS_AS(sector_fit({cplx{1.0, 0.0}, cplx{-1.0, 0.0}}, 1e-15), error);
        try {
            sector_fit({cplx{1.0, 0.0}, cplx{-1.0, 0.0}}, 1e-15);
        } catch (const error& e) {
            CHECK(e.code() == errc::sector_too_wide);
        }
    }
    SUBCASE("all atoms below tolerance is the zero operator") {
        try {
            sector_fit({cplx{1e-16, 0.0}}, 1e-12);
            CHECK(false);
        } catch (const error& e) {
            CHECK(e.code() == errc::zero_operator);
        }
    }
    SUBCASE("rotated spectra land in the right half plane") {
        std::mt19937_64 rng(103);
        for (int rep = 0; rep < 30; ++rep) {
            const std::vector<cplx> alphas = random_sectorial_alphas(6, rng);
            const Sector s = sector_fit(alphas, 1e-15);
            CHECK(s.rotation >= 0.0);
            CHECK(s.rotation < 2.0 * std::numbers::pi);
            for (cplx a : alphas) {
                const cplx z = std::polar(1.0, s.rotation) * a;
                CHECK(z.real() > 0.0);
                CHECK(std::abs(z.imag()) <= s.slope * z.real() + 1e-12);
            }
        }
    }
}

TEST_CASE("rotate") {
    std::mt19937_64 rng(107);
    const GridPtr g = make_grid(4.0, 6, QuadRule::gauss_legendre);
    const std::vector<GridFn> family = random_orthonormal_family(g, 3, rng);
    const EigenSystem E =
        make_eigensystem({cplx{1.0, 0.2}, cplx{0.5, -0.1}, cplx{0.2, 0.0}}, family);

    SUBCASE("zero angle is the identity") {
        const EigenSystem R = rotate(E, 0.0);
        for (std::size_t k = 0; k < E.count(); ++k) CHECK(R.alphas[k] == E.alphas[k]);
    }
    SUBCASE("full turn returns within 1e-15") {
        const EigenSystem R = rotate(E, 2.0 * std::numbers::pi);
        for (std::size_t k = 0; k < E.count(); ++k)
            CHECK(std::abs(R.alphas[k] - E.alphas[k]) <= 1e-15 * (1.0 + std::abs(E.alphas[k])));
    }
    SUBCASE("rotations compose additively") {
        const EigenSystem R1 = rotate(rotate(E, 0.7), 0.4);
        const EigenSystem R2 = rotate(E, 1.1);
        for (std::size_t k = 0; k < E.count(); ++k)
            CHECK(std::abs(R1.alphas[k] - R2.alphas[k]) <= 1e-14);
    }
    SUBCASE("vectors are untouched") {
        const EigenSystem R = rotate(E, 1.3);
        for (std::size_t k = 0; k < E.count(); ++k)
            for (std::size_t i = 0; i < g->size(); ++i)
                CHECK(R.vectors[k].values[i] == E.vectors[k].values[i]);
    }
}

TEST_CASE("eigen systems are ordered by descending modulus, ties by ascending arg") {
    std::mt19937_64 rng(109);
    const GridPtr g = make_grid(3.0, 6, QuadRule::gauss_legendre);
    const std::vector<GridFn> family = random_orthonormal_family(g, 4, rng);
    const EigenSystem E = make_eigensystem(
        {cplx{-2.0, 0.0}, cplx{1.0, 0.0}, cplx{2.0, 0.0}, cplx{-1.0, 0.0}}, family);
    REQUIRE(E.count() == 4);
    CHECK(E.alphas[0] == cplx{2.0, 0.0});    // arg 0 before arg pi at modulus 2
    CHECK(E.alphas[1] == cplx{-2.0, 0.0});
    CHECK(E.alphas[2] == cplx{1.0, 0.0});
    CHECK(E.alphas[3] == cplx{-1.0, 0.0});
}
