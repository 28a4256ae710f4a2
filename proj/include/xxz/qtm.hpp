#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "xxz/model.hpp"

namespace xxz {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr int kNmaxDefault = 6;
inline constexpr std::size_t kMaxEntriesDefault = std::size_t(1) << 28;

// Six-vertex R-matrix on C^2 (x) C^2, index 2a+b.
Eigen::Matrix4cd r_matrix(cplx lambda, cplx eta);

// Monodromy matrix on V_0 (x) V_1 ... V_2N (auxiliary index most significant,
// quantum site 1 most significant among quantum sites).
Mat monodromy(cplx xi, const ChainParams& p, std::size_t max_entries = kMaxEntriesDefault);

// Quantum transfer matrix t_q(xi), dimension 4^N.
Mat qtm(cplx xi, const ChainParams& p, int n_max = kNmaxDefault);

// t_q built from general local weights: odd factors R(xi - a), even factors
// R^t(-a - xi), field twist diag(exp(hT), exp(-hT)). Used for the rank-one split.
Mat qtm_general(cplx xi, cplx a, double hT, int N, cplx eta);

// Magnetisation sectors of the quantum space. m counts down spins on odd sites
// plus up spins on even sites; it coincides with the Bethe root number M.
int sector_of(std::uint32_t state, int N);

struct SectorBasis {
    int N = 0;
    int m = 0;
    std::vector<std::uint32_t> states;
    std::vector<int> position;  // size 4^N, -1 outside the sector
    int dim() const { return static_cast<int>(states.size()); }
};

SectorBasis sector_basis(int N, int m);

// Block of t_q(xi) restricted to one sector.
Mat qtm_block(cplx xi, const ChainParams& p, const SectorBasis& b);

// Embed a sector vector into the full 4^N space.
Vec embed(const Vec& local, const SectorBasis& b);

struct RankOneSplit {
    Vec v;
    Vec w;
    Mat delta_tq;
    Mat omega() const { return v * w.transpose(); }
};

RankOneSplit rank_one_split(const ChainParams& p, int n_max = kNmaxDefault);

// Periodic XXZ Hamiltonian on L sites (site 1 most significant bit, bit 1 = down).
Eigen::MatrixXd xxz_hamiltonian(const ChainParams& p, int l_max = 14);
// Hamiltonian blocks by number of down spins.
std::vector<Eigen::MatrixXd> xxz_hamiltonian_blocks(const ChainParams& p, int l_max = 14);
// tr exp(-H/T) via sector diagonalisation.
double partition_function(const ChainParams& p, int l_max = 14);
// -(T/L) ln tr exp(-H/T)
double finite_chain_free_energy(const ChainParams& p, int l_max = 14);

void write_operator_csv(std::ostream& os, const Mat& m, double drop_below = 0.0);
void write_operator_binary(std::ostream& os, const Mat& m);
Mat read_operator_binary(std::istream& is);

}  // namespace xxz
