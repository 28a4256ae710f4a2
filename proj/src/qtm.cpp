#include "xxz/qtm.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include <Eigen/Eigenvalues>

namespace xxz {

namespace {

using M2 = std::array<cplx, 4>;  // row-major 2x2

inline M2 mul(const M2& a, const M2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

// Local auxiliary-space weights L[parity][beta][alpha], parity 0 = odd site.
struct LocalWeights {
    M2 L[2][2][2];
    M2 G;
};

LocalWeights local_weights(cplx xi, cplx a, double hT, cplx eta) {
    LocalWeights lw{};
    const Eigen::Matrix4cd Ro = r_matrix(xi - a, eta);
    const Eigen::Matrix4cd Re = r_matrix(-a - xi, eta);
    for (int be = 0; be < 2; ++be)
        for (int al = 0; al < 2; ++al)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) {
                    lw.L[0][be][al][2 * x + y] = Ro(2 * x + be, 2 * y + al);
                    lw.L[1][be][al][2 * x + y] = Re(2 * al + x, 2 * be + y);
                }
    lw.G = {std::exp(cplx(hT)), 0.0, 0.0, std::exp(cplx(-hT))};
    return lw;
}

inline int site_bit(std::uint32_t s, int site, int nsites) { return (s >> (nsites - site)) & 1u; }

// Product L_2N ... L_1 G for quantum configurations beta (out) and alpha (in).
M2 column_product(const LocalWeights& lw, std::uint32_t beta, std::uint32_t alpha, int nsites) {
    M2 m = lw.G;
    for (int j = 1; j <= nsites; ++j) {
        const int par = (j % 2 == 1) ? 0 : 1;
        const M2& l = lw.L[par][site_bit(beta, j, nsites)][site_bit(alpha, j, nsites)];
        m = mul(l, m);
    }
    return m;
}

void check_dimension(int N, int n_max) {
    if (N > n_max) throw Error(Errc::dimension_overflow, "Trotter number exceeds N_max");
}

}  // namespace

Eigen::Matrix4cd r_matrix(cplx lambda, cplx eta) {
    const cplx se = std::sinh(eta);
    if (std::abs(se) < 1e-14) throw Error(Errc::singular_eta, "|sinh(eta)| < 1e-14");
    const cplx a = std::sinh(eta + lambda) / se;
    const cplx b = std::sinh(lambda) / se;
    Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
    r(0, 0) = a;
    r(1, 1) = b;
    r(1, 2) = 1.0;
    r(2, 1) = 1.0;
    r(2, 2) = b;
    r(3, 3) = a;
    return r;
}

int sector_of(std::uint32_t state, int N) {
    // odd sites are bits at positions 2N-1, 2N-3, ...; even sites at 2N-2, ...
    std::uint32_t odd_mask = 0;
    for (int j = 1; j <= 2 * N; j += 2) odd_mask |= 1u << (2 * N - j);
    const std::uint32_t even_mask = ((1u << (2 * N)) - 1u) & ~odd_mask;
    const int down_odd = std::popcount(state & odd_mask);
    const int up_even = N - std::popcount(state & even_mask);
    return down_odd + up_even;
}

SectorBasis sector_basis(int N, int m) {
    SectorBasis b;
    b.N = N;
    b.m = m;
    const std::uint32_t dim = 1u << (2 * N);
    b.position.assign(dim, -1);
    for (std::uint32_t s = 0; s < dim; ++s)
        if (sector_of(s, N) == m) {
            b.position[s] = static_cast<int>(b.states.size());
            b.states.push_back(s);
        }
    return b;
}

Mat qtm_general(cplx xi, cplx a, double hT, int N, cplx eta) {
    const int nsites = 2 * N;
    const LocalWeights lw = local_weights(xi, a, hT, eta);
    const int dim = 1 << nsites;
    Mat t = Mat::Zero(dim, dim);
    for (int m = 0; m <= nsites; ++m) {
        const SectorBasis b = sector_basis(N, m);
        for (std::uint32_t be : b.states)
            for (std::uint32_t al : b.states) {
                const M2 p = column_product(lw, be, al, nsites);
                t(be, al) = p[0] + p[3];
            }
    }
    return t;
}

Mat qtm(cplx xi, const ChainParams& p, int n_max) {
    check_dimension(p.N, n_max);
    return qtm_general(xi, p.aleph() / double(p.N), p.h / (2 * p.T), p.N, p.eta());
}

Mat qtm_block(cplx xi, const ChainParams& p, const SectorBasis& b) {
    const int nsites = 2 * p.N;
    const LocalWeights lw = local_weights(xi, p.aleph() / double(p.N), p.h / (2 * p.T), p.eta());
    const int d = b.dim();
    Mat t(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            const M2 m = column_product(lw, b.states[r], b.states[c], nsites);
            t(r, c) = m[0] + m[3];
        }
    return t;
}

Vec embed(const Vec& local, const SectorBasis& b) {
    Vec out = Vec::Zero(std::size_t(1) << (2 * b.N));
    for (int k = 0; k < b.dim(); ++k) out(b.states[k]) = local(k);
    return out;
}

Mat monodromy(cplx xi, const ChainParams& p, std::size_t max_entries) {
    const int nsites = 2 * p.N;
    const std::size_t q = std::size_t(1) << nsites;
    if (4 * q * q > max_entries) throw Error(Errc::dimension_overflow, "monodromy matrix too large");
    const LocalWeights lw = local_weights(xi, p.aleph() / double(p.N), p.h / (2 * p.T), p.eta());
    Mat t = Mat::Zero(2 * q, 2 * q);
    for (std::uint32_t be = 0; be < q; ++be)
        for (std::uint32_t al = 0; al < q; ++al) {
            if (sector_of(be, p.N) != sector_of(al, p.N)) continue;
            const M2 m = column_product(lw, be, al, nsites);
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) t(x * q + be, y * q + al) = m[2 * x + y];
        }
    return t;
}

RankOneSplit rank_one_split(const ChainParams& p, int n_max) {
    check_dimension(p.N, n_max);
    const int N = p.N;
    const int nsites = 2 * N;
    const std::size_t dim = std::size_t(1) << nsites;
    RankOneSplit rs;
    rs.v = Vec::Zero(dim);
    rs.w = Vec::Zero(dim);
    const double hT = p.h / (2 * p.T);
    // index sequences i in {1,2}^N encoded as bits (bit 1 <-> index 2)
    for (std::uint32_t i = 0; i < (1u << N); ++i) {
        auto idx = [&](int s) { return (i >> (N - s)) & 1u; };  // i_s, s = 1..N
        std::uint32_t sv = 0, sw = 0;
        for (int s = 1; s <= N; ++s) {
            const std::uint32_t is = idx(s);
            const std::uint32_t iprev = s == 1 ? idx(N) : idx(s - 1);
            sv |= is << (nsites - 2 * s);
            sv |= iprev << (nsites - (2 * s - 1));
            sw |= is << (nsites - 2 * s);
            sw |= is << (nsites - (2 * s - 1));
        }
        const double eps = idx(N) == 0 ? 1.0 : -1.0;
        rs.v(sv) += std::exp(eps * hT);
        rs.w(sw) += 1.0;
    }
    rs.delta_tq = qtm(0.0, p, n_max) - rs.v * rs.w.transpose();
    return rs;
}

namespace {

void check_chain(const ChainParams& p, int l_max) {
    if (p.L > l_max) throw Error(Errc::dimension_overflow, "L exceeds the configured maximum");
    if (p.L < 2 || p.L % 2) throw Error(Errc::config, "L must be even and >= 2");
}

// Matrix elements of H between basis states of L spins.
template <class Emit>
void hamiltonian_elements(const ChainParams& p, std::uint32_t s, Emit emit) {
    const int L = p.L;
    const double D = p.delta();
    double diag = 0.0;
    auto spin = [&](int i) { return ((s >> (L - 1 - i)) & 1u) ? -1.0 : 1.0; };
    for (int i = 0; i < L; ++i) {
        const int j = (i + 1) % L;
        const double si = spin(i), sj = spin(j);
        diag += p.J * D * (si * sj + 1.0);
        diag += -0.5 * p.h * si;
        if (si != sj) {
            const std::uint32_t f = s ^ (1u << (L - 1 - i)) ^ (1u << (L - 1 - j));
            emit(f, 2.0 * p.J);
        }
    }
    emit(s, diag);
}

}  // namespace

Eigen::MatrixXd xxz_hamiltonian(const ChainParams& p, int l_max) {
    check_chain(p, l_max);
    const std::uint32_t dim = 1u << p.L;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (std::uint32_t s = 0; s < dim; ++s)
        hamiltonian_elements(p, s, [&](std::uint32_t f, double v) { H(f, s) += v; });
    return H;
}

std::vector<Eigen::MatrixXd> xxz_hamiltonian_blocks(const ChainParams& p, int l_max) {
    check_chain(p, l_max);
    const std::uint32_t dim = 1u << p.L;
    std::vector<std::vector<std::uint32_t>> states(p.L + 1);
    std::vector<int> pos(dim);
    for (std::uint32_t s = 0; s < dim; ++s) {
        auto& v = states[std::popcount(s)];
        pos[s] = static_cast<int>(v.size());
        v.push_back(s);
    }
    std::vector<Eigen::MatrixXd> blocks;
    for (int n = 0; n <= p.L; ++n) {
        const int d = static_cast<int>(states[n].size());
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(d, d);
        for (int c = 0; c < d; ++c)
            hamiltonian_elements(p, states[n][c],
                                 [&](std::uint32_t f, double v) { B(pos[f], c) += v; });
        blocks.push_back(std::move(B));
    }
    return blocks;
}

namespace {

std::vector<double> all_energies(const ChainParams& p, int l_max) {
    std::vector<double> e;
    for (const auto& B : xxz_hamiltonian_blocks(p, l_max)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
        for (int k = 0; k < es.eigenvalues().size(); ++k) e.push_back(es.eigenvalues()(k));
    }
    return e;
}

double log_partition(const ChainParams& p, int l_max) {
    const auto e = all_energies(p, l_max);
    double emin = e.front();
    for (double x : e) emin = std::min(emin, x);
    double acc = 0.0;
    for (double x : e) acc += std::exp(-(x - emin) / p.T);
    return -emin / p.T + std::log(acc);
}

}  // namespace

double partition_function(const ChainParams& p, int l_max) { return std::exp(log_partition(p, l_max)); }

double finite_chain_free_energy(const ChainParams& p, int l_max) {
    return -p.T / p.L * log_partition(p, l_max);
}

void write_operator_csv(std::ostream& os, const Mat& m, double drop_below) {
    os << "row,col,re,im\n";
    os.precision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const cplx v = m(r, c);
            if (std::abs(v) <= drop_below && !(drop_below == 0.0 && v != cplx(0.0))) continue;
            os << r << ',' << c << ',' << v.real() << ',' << v.imag() << '\n';
        }
}

namespace {
constexpr char kMagic[8] = {'X', 'X', 'Z', 'O', 'P', '0', '0', '1'};
}

void write_operator_binary(std::ostream& os, const Mat& m) {
    os.write(kMagic, 8);
    const std::uint64_t rows = m.rows(), cols = m.cols();
    os.write(reinterpret_cast<const char*>(&rows), sizeof rows);
    os.write(reinterpret_cast<const char*>(&cols), sizeof cols);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double re = m(r, c).real(), im = m(r, c).imag();
            os.write(reinterpret_cast<const char*>(&re), sizeof re);
            os.write(reinterpret_cast<const char*>(&im), sizeof im);
        }
}

Mat read_operator_binary(std::istream& is) {
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0) throw Error(Errc::config, "not an operator file");
    std::uint64_t rows = 0, cols = 0;
    is.read(reinterpret_cast<char*>(&rows), sizeof rows);
    is.read(reinterpret_cast<char*>(&cols), sizeof cols);
    Mat m(rows, cols);
    for (std::uint64_t r = 0; r < rows; ++r)
        for (std::uint64_t c = 0; c < cols; ++c) {
            double re = 0, im = 0;
            is.read(reinterpret_cast<char*>(&re), sizeof re);
            is.read(reinterpret_cast<char*>(&im), sizeof im);
            m(r, c) = {re, im};
        }
    if (!is) throw Error(Errc::config, "truncated operator file");
    return m;
}

}  // namespace xxz
