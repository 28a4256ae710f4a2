#include <doctest.h>

#include "helpers.hpp"
#include "xxz/hlbae.hpp"

using namespace xxz;
using xxz::test::set_distance;
using xxz::test::table_chain;

namespace {

std::vector<cplx> zeta_units(std::initializer_list<cplx> v) {
    std::vector<cplx> out;
    for (cplx z : v) out.push_back(z * (pi / 7));
    return out;
}

}  // namespace

TEST_CASE("hlBAE1 and hlBAE2 reproduce Table 5, 12th state") {
    const ChainParams p = table_chain(5, 100);
    const auto seeds = zeta_units({cplx(-1.140806e-3, 0.575835), cplx(-1.140806e-3, -0.575835)});
    const auto holes = zeta_units({-2.979061e-3, 7.029353e-4});
    const HlbaeSolution s1 = solve_hlbae1(2, 0, seeds, p);
    CHECK(s1.converged);
    CHECK(set_distance(s1.y, zeta_units({cplx(0, 0.577223), cplx(0, -0.577223)})) / p.zeta < 1e-5);
    const HlbaeSolution s2 = solve_hlbae2(holes, 0, seeds, p);
    CHECK(set_distance(s2.y, zeta_units({cplx(-1.138063e-3, 0.577224), cplx(-1.138063e-3, -0.577224)})) / p.zeta < 1e-5);
}

TEST_CASE("hlBAE1 on Table 6, 200th state") {
    const ChainParams p = table_chain(5, 100);
    const cplx H = I * pi / 2.0;
    const double z = p.zeta;
    const std::vector<cplx> seeds = {-1.537113 * z + H, 0.240380 * z + H, z * cplx(1.084164, 0.582417), z * cplx(1.084164, -0.582417)};
    const HlbaeSolution s1 = solve_hlbae1(5, 1, seeds, p);
    const std::vector<cplx> want = {-1.536740 * z + H, 0.240603 * z + H, z * cplx(1.083662, 0.582535), z * cplx(1.083662, -0.582535)};
    CHECK(set_distance(s1.y, want) / z < 1e-5);
    CHECK(max_abs(hlbae1_delta(s1.y, 5, z)) < 1e-10);
}

TEST_CASE("hole asymptotics and its inverse") {
    const ChainParams p = table_chain(5, 400);
    const std::vector<cplx> Y = {cplx(0.1, 0.25), cplx(0.1, -0.25)};
    for (int k : {-2, -1, 0, 3}) {
        const cplx x = hole_asymptotics({k}, Y, 0, p)[0];
        CHECK(hole_mode(x, Y, p) == doctest::Approx(2 * k + 1).epsilon(1e-12));
    }
}

TEST_CASE("Theorem 2 ratio constraints") {
    const ChainParams p = table_chain(5, 100);
    const std::vector<cplx> y = {cplx(0.0, 0.577223 * p.zeta), cplx(0.0, -0.577223 * p.zeta)};
    CHECK_NOTHROW(theorem2_ratio({0, -1}, y, 2, p, 0.06));
    CHECK_THROWS_AS(theorem2_ratio({0, 0}, y, 2, p, 0.06), Error);
}

TEST_CASE("Sigma infinity catalog contains the solved configuration") {
    const ChainParams p = table_chain(5, 100);
    CatalogOptions opt;
    opt.starts = 120;
    const SigmaInfinity cat = build_sigma_infinity(2, 2, 0, p, opt);
    REQUIRE_FALSE(cat.members.empty());
    const std::vector<cplx> y = {cplx(0.0, 0.577223 * p.zeta), cplx(0.0, -0.577223 * p.zeta)};
    CHECK(sigma_infinity_distance(y, cat) < 1e-5);
}
