#pragma once

#include <iosfwd>
#include <map>
#include <vector>

#include "xxz/qtm.hpp"

namespace xxz {

struct SpectrumRecord {
    std::vector<cplx> eigenvalues;  // nonincreasing modulus, ties by increasing arg in [-pi, pi)
    std::vector<int> sector;        // -1 when the operator was not split into sectors
    std::vector<int> column;        // column of the eigenvector inside vectors[sector]
    std::vector<int> cluster;       // equal-modulus cluster id
    std::map<int, Mat> vectors;     // right eigenvectors per sector (unit norm)
    std::map<int, SectorBasis> bases;
    double max_residual = 0.0;

    int size() const { return static_cast<int>(eigenvalues.size()); }
    // Eigenvector of state a in its sector basis.
    Vec vector(int a) const;
};

// Orders eigenvalues and assigns cluster ids. Relative modulus tolerance for ties.
void sort_spectrum(SpectrumRecord& rec, double tie_tol = 1e-10);

SpectrumRecord full_spectrum(const Mat& op, bool with_vectors = true);

// Spectrum of t_q(0) restricted to sectors (all sectors if empty).
SpectrumRecord qtm_spectrum(const ChainParams& p, const std::vector<int>& sectors = {},
                            bool with_vectors = true, int jobs = 1);

// Dominant eigenvalue by power iteration, cross-checked against a full decomposition.
double dominant_eigenvalue(const Mat& op, double gap_max = 0.99);

cplx correlation_ratio(const SpectrumRecord& rec, int a);

void write_spectrum_csv(std::ostream& os, const SpectrumRecord& rec);

}  // namespace xxz
