#include <doctest.h>

#include "helpers.hpp"
#include "xxz/classify.hpp"

using namespace xxz;
using xxz::test::n5_sector;
using xxz::test::table_chain;

TEST_CASE("dominant state: Newton from the leading-order seeds") {
    const ChainParams p = table_chain(5, 100);
    const PolishResult pr = polish_roots(dominant_seeds(p), p);
    CHECK(pr.converged);
    CHECK(is_admissible(pr.roots, p));
    const SpectrumRecord rec = qtm_spectrum(p, {5}, false);
    CHECK(std::abs(tau(0.0, pr.roots, p) - rec.eigenvalues[0]) < 1e-10 * std::abs(rec.eigenvalues[0]));
}

TEST_CASE("extraction reproduces every eigenvalue of the M = 4 sector") {
    const auto& s = n5_sector(4);
    int bad = 0;
    for (const auto& st : s.states) {
        CHECK(st.M == 4);
        CHECK(static_cast<int>(st.roots.size()) == 4);
        if (!usable_extraction(st)) ++bad;
    }
    CHECK(bad == 0);
}

TEST_CASE("Table 2 17th state roots") {
    // paper: +-7.15137e-2, +-3.14057e-4 (units of zeta)
    const auto& s = n5_sector(4);
    const double z = pi / 7;
    const BetheState& st = xxz::test::nearest_state(s, {0.0715137, -0.0715137, 3.14057e-4, -3.14057e-4}, z);
    std::vector<cplx> want;
    for (double r : {0.0715137, -0.0715137, 3.14057e-4, -3.14057e-4}) want.push_back(r * z);
    CHECK(xxz::test::set_distance(st.roots, want) / z < 1e-5);
    CHECK(st.residual < 1e-10);
}

TEST_CASE("auxiliary function derivative") {
    const ChainParams p = table_chain(5, 100);
    const auto& st = n5_sector(5).states[3];
    const cplx x(0.004, 0.001);
    const double h = 1e-8;
    const cplx num = (std::log(aux_function(x + h, st.roots, p)) - std::log(aux_function(x - h, st.roots, p))) / (2 * h);
    CHECK(std::abs(num - aux_log_derivative(x, st.roots, p)) < 1e-5 * std::abs(num));
}

TEST_CASE("samples of tau recover planted roots") {
    const ChainParams p = table_chain(4, 100);
    const PolishResult pr = polish_roots(dominant_seeds(p), p);
    REQUIRE(pr.converged);
    std::vector<cplx> xi, vals;
    for (int j = 0; j < 12; ++j) {
        const cplx x = 0.3 * p.zeta_m() * std::exp(I * (0.37 + 2 * pi * j / 12));
        xi.push_back(x);
        vals.push_back(tau(x, pr.roots, p));
    }
    const BetheState st = roots_from_samples(xi, vals, 4, p);
    CHECK(xxz::test::set_distance(st.roots, pr.roots) < 1e-9);
}

TEST_CASE("roots at infinity reduce tau to the finite part") {
    const ChainParams p = table_chain(4, 100);
    const std::vector<cplx> r = {0.01, -0.02, infinite_root(1)};
    std::vector<cplx> far = r;
    far[2] = cplx(60.0, 0.0);
    const cplx x(0.003, 0.002);
    CHECK(std::abs(tau(x, r, p) - tau(x, far, p)) < 1e-10 * std::abs(tau(x, far, p)));
    CHECK(std::abs(aux_function(x, r, p) - aux_function(x, far, p)) < 1e-10);
    CHECK(bae_residuals(r, p)[2] == 0.0);
}

TEST_CASE("hole detection on the 2nd state of Table 1") {
    // paper: X = {+-6.4790e-2} zeta for the 2nd state; detection radius 0.068 zeta
    const ChainParams p = table_chain(5, 100);
    const auto& st = xxz::test::nearest_state(n5_sector(5), {cplx(0, 3.5), 1.329782e-3, -1.329782e-3, 3.14044e-4, -3.14044e-4}, p.zeta);
    const HoleParticleSets hs = detect_sets(st, ContourGrid::make(0.068 * p.zeta, 256), p);
    std::vector<cplx> want = {0.064790 * p.zeta, -0.064790 * p.zeta};
    CHECK(xxz::test::set_distance(hs.X_hat.expanded(), want) / p.zeta < 1e-5);
    CHECK(hs.Y_hat.cardinality() == 1);
    CHECK(hs.monodromy == hs.X_hat.cardinality() - hs.Y_hat.cardinality() - hs.Y_sg.cardinality() - st.s);
}

TEST_CASE("string and singular-pair predicates") {
    const ChainParams p = table_chain(5, 100);
    const cplx iz = I * p.zeta;
    CHECK(has_near_string({0.1, 0.1 + iz}, p, 1e-8));
    CHECK_FALSE(has_near_string({0.1, 0.2}, p, 1e-8));
    CHECK(has_singular_pair({iz, -iz, 0.0}, p, 1e-8));
    CHECK_FALSE(is_admissible({0.1, 0.1 - iz}, p));
}
