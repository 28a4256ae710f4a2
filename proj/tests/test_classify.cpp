#include <doctest.h>

#include "helpers.hpp"
#include "xxz/classify.hpp"

using namespace xxz;
using xxz::test::n5_sector;
using xxz::test::nearest_state;
using xxz::test::table_chain;

namespace {

Membership membership(const BetheState& st, const ChainParams& p) {
    const ClassParams cp = ClassParams::for_temperature(p.T, p.zeta);
    const HoleParticleSets hs = detect_sets(st, ContourGrid::make(cp.epsilon, 256), p);
    return class_membership(hs, cp, st.s, p);
}

bool failed(const Membership& m, const std::string& clause) {
    return std::find(m.failed.begin(), m.failed.end(), clause) != m.failed.end();
}

}  // namespace

TEST_CASE("Table 1 states and class membership") {
    const ChainParams p = table_chain(5, 100);
    const auto& s = n5_sector(5);
    const auto& second = nearest_state(s, {cplx(0, 3.5), 1.329782e-3, -1.329782e-3, 3.14044e-4, -3.14044e-4}, p.zeta);
    const Membership m2 = membership(second, p);
    CHECK_FALSE(m2.member);
    CHECK(failed(m2, "rho_bound"));
    CHECK(m2.rho_value < 1e-12);

    const auto& twelfth = nearest_state(
        s, {2.18463e-7, 7.02268e-4, 2.98366e-3, cplx(-1.14080e-3, 0.575835), cplx(-1.14080e-3, -0.575835)}, p.zeta);
    CHECK(membership(twelfth, p).member);

    const auto& eightythird = nearest_state(s, {0.0, 3.140243e-4, -3.140243e-4, cplx(0, 1), cplx(0, -1)}, p.zeta);
    const ClassParams cp = ClassParams::for_temperature(p.T, p.zeta);
    const HoleParticleSets hs = detect_sets(eightythird, ContourGrid::make(cp.epsilon, 256), p);
    // only +i zeta has its companion (at 0) inside D
    CHECK(hs.Y_sg.cardinality() == 1);
    CHECK(classify_state(eightythird, p, cp).label == CaseLabel::SingularY);
}

TEST_CASE("N = 5 counts are exhaustive and stable") {
    const ChainParams p = table_chain(5, 100);
    const ClassParams cp = ClassParams::for_temperature(p.T, p.zeta);
    for (int M : {4, 5}) {
        const Classification c = classify_states(n5_sector(M).states, p, cp);
        int sum = 0;
        for (int k : c.counts) sum += k;
        CHECK(sum + c.diagnostics + c.non_members == c.total());
        CHECK(c.diagnostics == 0);
        CHECK(c.counts[4] == 0);
        // regression values of this implementation
        if (M == 5) CHECK(c.counts == std::array<int, 5>{1, 23, 63, 165, 0});
        if (M == 4) CHECK(c.counts == std::array<int, 5>{9, 6, 54, 141, 0});
    }
}

TEST_CASE("case-4 fraction grows with N") {
    double prev = 0.0;
    for (int N : {4, 5}) {
        const ChainParams p = table_chain(N, 100);
        const double f = classify_all(p, N, ClassParams::for_temperature(p.T, p.zeta)).case4_fraction();
        CHECK(f > prev);
        prev = f;
    }
}

TEST_CASE("parameters") {
    const ClassParams cp = ClassParams::for_temperature(100, pi / 7);
    CHECK(cp.rho == doctest::Approx(0.06));
    CHECK(cp.delta == doctest::Approx(0.1));
    CHECK(cp.epsilon == doctest::Approx(0.06 * pi / 7));
    ClassParams strict = cp;
    strict.strict = true;
    CHECK_THROWS_AS(strict.validate(), Error);
    CHECK(std::string(case_name(CaseLabel::ClassMemberSolves)) == "ClassMemberSolves");
}
