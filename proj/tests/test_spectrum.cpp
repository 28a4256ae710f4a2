#include <doctest.h>

#include <sstream>

#include "xxz/spectrum.hpp"

using namespace xxz;

TEST_CASE("trace identity tr t^L = sum Lambda^L") {
    for (int N : {2, 3, 4}) {
        ChainParams p;
        p.N = N;
        p.T = 10;
        p.h = 0.4;
        const Mat t = qtm(0.0, p);
        const SpectrumRecord rec = full_spectrum(t, false);
        Mat tl = Mat::Identity(t.rows(), t.cols());
        for (int L = 1; L <= 8; ++L) {
            tl = tl * t;
            cplx s = 0.0;
            for (cplx l : rec.eigenvalues) s += std::pow(l, L);
            CHECK(std::abs(s - tl.trace()) < 1e-8 * std::abs(tl.trace()));
        }
    }
}

TEST_CASE("sector spectra reassemble the full spectrum") {
    ChainParams p;
    p.N = 3;
    p.T = 20;
    const SpectrumRecord full = full_spectrum(qtm(0.0, p), false);
    const SpectrumRecord sec = qtm_spectrum(p, {}, false);
    REQUIRE(full.size() == sec.size());
    for (int a = 0; a < full.size(); ++a) CHECK(std::abs(full.eigenvalues[a] - sec.eigenvalues[a]) < 1e-10);
}

TEST_CASE("ordering, conjugate closure and the dominant eigenvalue") {
    ChainParams p;
    p.N = 4;
    p.T = 50;
    const SpectrumRecord rec = qtm_spectrum(p, {}, true);
    CHECK(rec.max_residual < 1e-10);
    for (int a = 1; a < rec.size(); ++a) CHECK(std::abs(rec.eigenvalues[a]) <= std::abs(rec.eigenvalues[a - 1]) * (1 + 1e-10));
    for (cplx l : rec.eigenvalues) {
        double best = 1e300;
        for (cplx m : rec.eigenvalues) best = std::min(best, std::abs(m - std::conj(l)));
        CHECK(best < 1e-9);
    }
    CHECK(std::abs(rec.eigenvalues[0].imag()) < 1e-12);
    CHECK(std::abs(rec.eigenvalues[1]) < 0.5 * std::abs(rec.eigenvalues[0]));
    CHECK(std::abs(correlation_ratio(rec, 0) - 1.0) < 1e-15);
    CHECK(dominant_eigenvalue(qtm(0.0, p)) == doctest::Approx(rec.eigenvalues[0].real()).epsilon(1e-12));
}

TEST_CASE("dominant eigenvalue against the oracle") {
    // tools/oracle.py: N = 3, J = 1/2, T = 100, h = 0
    ChainParams p;
    p.N = 3;
    p.J = 0.5;
    p.T = 100;
    const SpectrumRecord rec = qtm_spectrum(p, {}, false);
    CHECK(std::abs(rec.eigenvalues[0] - 1.9910641759129175) < 1e-12);
}

TEST_CASE("eigenvectors are unit norm eigenpairs in their sector") {
    ChainParams p;
    p.N = 3;
    p.T = 30;
    const SpectrumRecord rec = qtm_spectrum(p, {2}, true);
    for (int a = 0; a < rec.size(); a += 7) {
        const Vec v = rec.vector(a);
        const int m = rec.sector[a];
        CHECK(std::abs(v.norm() - 1.0) < 1e-12);
        CHECK((qtm_block(0.0, p, rec.bases.at(m)) * v - rec.eigenvalues[a] * v).norm() < 1e-10);
    }
}

TEST_CASE("csv output") {
    ChainParams p;
    p.N = 2;
    const SpectrumRecord rec = qtm_spectrum(p, {}, false);
    std::ostringstream os;
    write_spectrum_csv(os, rec);
    const std::string s = os.str();
    CHECK(s.rfind("index,sector,re,im,abs,arg\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == rec.size() + 1);
}
