#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "xxz/qtm.hpp"

using namespace xxz;

namespace {

// R on factors (a, b) of C^2 (x) C^2 (x) C^2, a < b or a > b.
Eigen::MatrixXcd embed3(const Eigen::Matrix4cd& r, int a, int b) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(8, 8);
    for (int in = 0; in < 8; ++in)
        for (int o = 0; o < 8; ++o) {
            auto bit = [](int s, int k) { return (s >> (2 - k)) & 1; };
            const int c = 3 - a - b;
            if (bit(in, c) != bit(o, c)) continue;
            out(o, in) = r(2 * bit(o, a) + bit(o, b), 2 * bit(in, a) + bit(in, b));
        }
    return out;
}

}  // namespace

TEST_CASE("R(0) is the permutation") {
    const Eigen::Matrix4cd r = r_matrix(0.0, -I * (pi / 7));
    Eigen::Matrix4cd P = Eigen::Matrix4cd::Zero();
    P(0, 0) = P(3, 3) = P(1, 2) = P(2, 1) = 1.0;
    CHECK((r - P).norm() == 0.0);
}

TEST_CASE("R unitarity") {
    const cplx eta = -I * (pi / 7);
    const Eigen::Matrix4cd u = r_matrix(0.2 * I, eta) * r_matrix(-0.2 * I, eta);
    CHECK((u - u(0, 0) * Eigen::Matrix4cd::Identity()).norm() < 1e-14);
}

TEST_CASE("Yang-Baxter on random arguments") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const cplx eta = -I * (pi / 7);
    for (int k = 0; k < 5; ++k) {
        const cplx l(u(rng), u(rng)), m(u(rng), u(rng));
        const Eigen::MatrixXcd lhs = embed3(r_matrix(l - m, eta), 0, 1) * embed3(r_matrix(l, eta), 0, 2) * embed3(r_matrix(m, eta), 1, 2);
        const Eigen::MatrixXcd rhs = embed3(r_matrix(m, eta), 1, 2) * embed3(r_matrix(l, eta), 0, 2) * embed3(r_matrix(l - m, eta), 0, 1);
        CHECK((lhs - rhs).norm() < 1e-12);
    }
}

TEST_CASE("singular eta") { CHECK_THROWS_AS(r_matrix(0.1, 0.0), Error); }

TEST_CASE("transfer matrices commute") {
    ChainParams p;
    p.N = 2;
    p.T = 10;
    p.h = 0.5;
    const Mat a = qtm(cplx(0.013, 0.02), p), b = qtm(cplx(-0.031, 0.007), p);
    CHECK((a * b - b * a).norm() < 1e-10);
}

TEST_CASE("qtm trace over the auxiliary space") {
    ChainParams p;
    p.N = 2;
    p.T = 10;
    p.h = 0.5;
    const Mat m = monodromy(0.0, p);
    const int q = static_cast<int>(m.rows() / 2);
    const Mat t = m.topLeftCorner(q, q) + m.bottomRightCorner(q, q);
    CHECK((t - qtm(0.0, p)).norm() < 1e-14);
    CHECK(t.imag().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("qtm spectrum against the brute-force oracle") {
    // tools/oracle.py: J = 1, T = 10, h = 0.5, zeta = pi/7
    ChainParams p;
    p.T = 10;
    p.h = 0.5;
    struct Ref {
        int N;
        double lmax, l2, trace4;
    };
    for (Ref r : {Ref{2, 1.8461468027607042, -0.18685075840966395, 11.619478793189199},
                  Ref{3, 1.849260192626946, -0.18794068809611986, 11.698117734066118}}) {
        p.N = r.N;
        const Mat t = qtm(0.0, p);
        Eigen::ComplexEigenSolver<Mat> es(t, false);
        std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + t.rows());
        std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
        CHECK(std::abs(ev[0] - r.lmax) < 1e-12);
        CHECK(std::abs(std::abs(ev[1]) - std::abs(r.l2)) < 1e-12);
        const Mat t2 = t * t;
        CHECK(std::abs((t2 * t2).trace() - r.trace4) < 1e-10 * r.trace4);
    }
}

TEST_CASE("Hamiltonian checks") {
    ChainParams p;
    p.L = 2;
    p.zeta = pi / 2;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(xxz_hamiltonian(p));
    // oracle: {-4, 0, 0, 4} for J = 1
    const Eigen::Vector4d want(-4, 0, 0, 4);
    CHECK((es.eigenvalues() - want).norm() < 1e-12);
    p = ChainParams{};
    p.L = 6;
    p.h = 0.3;
    const Eigen::MatrixXd H = xxz_hamiltonian(p);
    Eigen::MatrixXd Sz = Eigen::MatrixXd::Zero(H.rows(), H.cols());
    for (int s = 0; s < H.rows(); ++s) Sz(s, s) = p.L - 2.0 * __builtin_popcount(s);
    CHECK((H * Sz - Sz * H).norm() < 1e-12);
    // oracle: tr exp(-H/T) at L = 4, J = 1, T = 10, h = 0.5
    ChainParams q;
    q.L = 4;
    q.T = 10;
    q.h = 0.5;
    CHECK(std::abs(partition_function(q) - 11.855818966073238) < 1e-10);
}

TEST_CASE("rank-one split") {
    for (int N = 2; N <= 5; ++N)
        for (double h : {0.0, 0.5, 1.0})
            for (double T : {10.0, 100.0}) {
                ChainParams p;
                p.N = N;
                p.h = h;
                p.T = T;
                const RankOneSplit r = rank_one_split(p);
                CHECK(std::abs(cplx(r.w.transpose() * r.v) - 2 * std::cosh(h / (2 * T))) < 1e-12);
                CHECK(std::abs(r.v.squaredNorm() - std::pow(2.0, N) * std::cosh(h / T)) < 1e-12);
                CHECK(std::abs(r.w.squaredNorm() - std::pow(2.0, N)) < 1e-12);
                CHECK((r.omega() + r.delta_tq - qtm(0.0, p)).cwiseAbs().maxCoeff() < 1e-12);
            }
}

TEST_CASE("perturbation shrinks like 1/T") {
    auto radius = [](double T) {
        ChainParams p;
        p.N = 4;
        p.T = T;
        Eigen::ComplexEigenSolver<Mat> es(rank_one_split(p).delta_tq, false);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    };
    const double r = radius(50) / radius(100);
    CHECK(r > 1.6);
    CHECK(r < 2.4);
}

TEST_CASE("sectors partition the quantum space") {
    for (int N = 1; N <= 4; ++N) {
        int total = 0;
        for (int m = 0; m <= 2 * N; ++m) total += sector_basis(N, m).dim();
        CHECK(total == (1 << (2 * N)));
    }
    ChainParams p;
    p.N = 3;
    p.T = 20;
    const Mat t = qtm(0.0, p);
    for (int a = 0; a < t.rows(); ++a)
        for (int b = 0; b < t.cols(); ++b)
            if (std::abs(t(a, b)) > 0) CHECK(sector_of(a, 3) == sector_of(b, 3));
}

TEST_CASE("dimension guard") {
    ChainParams p;
    p.N = 7;
    CHECK_THROWS_AS(qtm(0.0, p), Error);
}
