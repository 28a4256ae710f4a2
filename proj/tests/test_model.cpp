#include <doctest.h>

#include "xxz/model.hpp"

using namespace xxz;

TEST_CASE("reduce_strip maps into (-pi/2, pi/2]") {
    CHECK(std::abs(reduce_strip(cplx(0.3, pi)) - cplx(0.3, 0.0)) < 1e-15);
    CHECK(std::abs(reduce_strip(cplx(0.1, -pi / 2)) - cplx(0.1, pi / 2)) < 1e-15);
    CHECK(same_mod_ipi(cplx(0.2, 1.0), cplx(0.2, 1.0 + 3 * pi)));
}

TEST_CASE("ln_p uses arg in [-pi, pi)") {
    CHECK(std::abs(ln_p(cplx(-1.0, 0.0)).imag() + pi) < 1e-15);
    CHECK(std::abs(ln_p(cplx(-1.0, -0.0)).imag() + pi) < 1e-15);
}

TEST_CASE("kernel is theta' / 2 pi away from the cuts") {
    const double z = pi / 7;
    for (cplx l : {cplx(0.05, 0.02), cplx(-0.3, 0.1), cplx(0.01, -0.2)}) {
        const double h = 1e-6;
        const cplx d = (theta(l + h, z) - theta(l - h, z)) / (2 * h);
        CHECK(std::abs(d / (2 * pi) - kernel_K(l, z)) < 1e-8);
        const cplx dk = (kernel_K(l + h, z) - kernel_K(l - h, z)) / (2 * h);
        CHECK(std::abs(dk - kernel_K_prime(l, z)) < 1e-5 * std::max(1.0, std::abs(dk)));
    }
}

TEST_CASE("theta is odd and vanishes at 0") {
    const double z = pi / 7;
    CHECK(std::abs(theta(0.0, z)) < 1e-15);
    const cplx l(0.04, 0.03);
    CHECK(std::abs(theta(l, z) + theta(-l, z)) < 1e-13);
}

TEST_CASE("theta throws on a cut when asked") {
    const double z = pi / 7;
    CHECK_THROWS_AS(theta(cplx(0.5, z), z, CutPolicy::throw_on_cut), Error);
    bool cut = false;
    theta(cplx(0.5, z), z, CutPolicy::plus_boundary, &cut);
    CHECK(cut);
}

TEST_CASE("limits at infinity") {
    const double z = pi / 7;
    const cplx iz = I * z;
    const cplx far(40.0, 0.0);
    CHECK(std::abs(sinh_ratio(0.3, -0.1, infinite_root(1)) - sinh_ratio(0.3, -0.1, far)) < 1e-12);
    CHECK(std::abs(sinh_ratio(0.3, -0.1, infinite_root(-1)) - sinh_ratio(0.3, -0.1, -far)) < 1e-12);
    CHECK(std::abs(scattering_factor(infinite_root(1), z) + std::exp(2.0 * iz)) < 1e-15);
    CHECK(std::abs(scattering_factor(infinite_root(-1), z) + std::exp(-2.0 * iz)) < 1e-15);
    const cplx nan_d = infinite_root(1) - infinite_root(1);
    CHECK(std::abs(scattering_factor(nan_d, z) - 1.0) < 1e-15);
    CHECK(std::abs(theta(infinite_root(1), z) - theta(far, z)) < 1e-12);
    CHECK(kernel_K(infinite_root(-1), z) == 0.0);
}

TEST_CASE("RootMultiset arithmetic") {
    RootMultiset a({0.1, 0.2, 0.2});
    CHECK(a.cardinality() == 3);
    CHECK(a.size() == 2);
    RootMultiset b = a - RootMultiset({0.2, 0.3});
    CHECK(b.cardinality() == 1);
    CHECK(b.expanded().size() == 2);  // 0.1 and 0.2; 0.3 carries multiplicity -1
    CHECK(std::abs(a.sum([](cplx x) { return x; }) - 0.5) < 1e-15);
    CHECK(std::abs(RootMultiset::repeated(0.5, 3).prod([](cplx x) { return x; }) - 0.125) < 1e-15);
}

TEST_CASE("ChainParams validation") {
    ChainParams p;
    CHECK_NOTHROW(p.validate());
    p.zeta = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = ChainParams{};
    p.L = 3;
    CHECK_THROWS_AS(p.validate(), Error);
    p = ChainParams{};
    p.zeta = pi / 7;
    CHECK(p.near_rational_zeta());
    p.zeta = 0.5;
    CHECK_FALSE(p.near_rational_zeta());
    CHECK(zeta_m(2.5) == doctest::Approx(pi - 2.5));
}

TEST_CASE("e0 derivative") {
    ChainParams p;
    const cplx x(0.03, 0.01);
    const double h = 1e-7;
    CHECK(std::abs((e0(x + h, p) - e0(x - h, p)) / (2 * h) - e0_prime(x, p)) < 1e-5 * std::abs(e0_prime(x, p)));
}
