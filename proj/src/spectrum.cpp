#include "xxz/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "xxz/parallel.hpp"

namespace xxz {

namespace {

double arg_fo(cplx z) {
    double a = std::arg(z);
    return a >= pi ? -pi : a;
}

struct Decomposition {
    Eigen::VectorXcd values;
    Mat vectors;
};

Decomposition decompose(const Mat& op, bool with_vectors) {
    Decomposition d;
    const double scale = std::max(1.0, op.cwiseAbs().maxCoeff());
    if (op.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(op.real(), with_vectors);
        if (es.info() != Eigen::Success) throw Error(Errc::convergence_failure, "real eigensolver failed");
        d.values = es.eigenvalues();
        if (with_vectors) d.vectors = es.eigenvectors();
    } else {
        Eigen::ComplexEigenSolver<Mat> es(op, with_vectors);
        if (es.info() != Eigen::Success) throw Error(Errc::convergence_failure, "complex eigensolver failed");
        d.values = es.eigenvalues();
        if (with_vectors) d.vectors = es.eigenvectors();
    }
    if (with_vectors) d.vectors.colwise().normalize();
    return d;
}

double max_residual(const Mat& op, const Decomposition& d) {
    if (d.vectors.size() == 0) return 0.0;
    const Mat r = op * d.vectors - d.vectors * d.values.asDiagonal();
    return r.colwise().norm().maxCoeff();
}

}  // namespace

Vec SpectrumRecord::vector(int a) const {
    return vectors.at(sector[a]).col(column[a]);
}

void sort_spectrum(SpectrumRecord& rec, double tie_tol) {
    const int n = rec.size();
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return std::abs(rec.eigenvalues[a]) > std::abs(rec.eigenvalues[b]);
    });
    // group equal moduli, then order each group by argument
    std::vector<int> cluster(n);
    int cid = 0;
    for (int i = 0; i < n;) {
        int j = i + 1;
        const double m0 = std::abs(rec.eigenvalues[idx[i]]);
        while (j < n && std::abs(std::abs(rec.eigenvalues[idx[j]]) - m0) <= tie_tol * std::max(m0, 1e-300))
            ++j;
        std::stable_sort(idx.begin() + i, idx.begin() + j, [&](int a, int b) {
            return arg_fo(rec.eigenvalues[a]) < arg_fo(rec.eigenvalues[b]);
        });
        for (int k = i; k < j; ++k) cluster[k] = cid;
        ++cid;
        i = j;
    }
    SpectrumRecord out;
    out.vectors = std::move(rec.vectors);
    out.bases = std::move(rec.bases);
    out.max_residual = rec.max_residual;
    for (int k = 0; k < n; ++k) {
        out.eigenvalues.push_back(rec.eigenvalues[idx[k]]);
        out.sector.push_back(rec.sector[idx[k]]);
        out.column.push_back(rec.column[idx[k]]);
    }
    out.cluster = std::move(cluster);
    rec = std::move(out);
}

SpectrumRecord full_spectrum(const Mat& op, bool with_vectors) {
    if (op.rows() > 4096) throw Error(Errc::dimension_overflow, "dense decomposition limited to dim 4096");
    const Decomposition d = decompose(op, with_vectors);
    SpectrumRecord rec;
    for (Eigen::Index k = 0; k < d.values.size(); ++k) {
        rec.eigenvalues.push_back(d.values(k));
        rec.sector.push_back(-1);
        rec.column.push_back(static_cast<int>(k));
    }
    if (with_vectors) {
        rec.max_residual = max_residual(op, d);
        if (rec.max_residual > 1e-8) throw Error(Errc::convergence_failure, "eigenpair residual above 1e-8");
        rec.vectors[-1] = d.vectors;
    }
    sort_spectrum(rec);
    return rec;
}

SpectrumRecord qtm_spectrum(const ChainParams& p, const std::vector<int>& sectors, bool with_vectors,
                            int jobs) {
    std::vector<int> ms = sectors;
    if (ms.empty())
        for (int m = 0; m <= 2 * p.N; ++m) ms.push_back(m);
    std::vector<SectorBasis> bases(ms.size());
    std::vector<Decomposition> dec(ms.size());
    std::vector<double> res(ms.size(), 0.0);
    parallel_for(static_cast<int>(ms.size()), jobs, [&](int k) {
        bases[k] = sector_basis(p.N, ms[k]);
        const Mat block = qtm_block(0.0, p, bases[k]);
        try {
            dec[k] = decompose(block, with_vectors);
        } catch (const Error& e) {
            throw Error(e.code(), std::string(e.what()) + " in sector " + std::to_string(ms[k]));
        }
        if (with_vectors) res[k] = max_residual(block, dec[k]);
    });
    SpectrumRecord rec;
    for (std::size_t k = 0; k < ms.size(); ++k) {
        for (Eigen::Index j = 0; j < dec[k].values.size(); ++j) {
            rec.eigenvalues.push_back(dec[k].values(j));
            rec.sector.push_back(ms[k]);
            rec.column.push_back(static_cast<int>(j));
        }
        rec.max_residual = std::max(rec.max_residual, res[k]);
        if (with_vectors) rec.vectors[ms[k]] = std::move(dec[k].vectors);
        rec.bases[ms[k]] = std::move(bases[k]);
    }
    if (rec.max_residual > 1e-8) throw Error(Errc::convergence_failure, "eigenpair residual above 1e-8");
    sort_spectrum(rec);
    return rec;
}

double dominant_eigenvalue(const Mat& op, double gap_max) {
    const Eigen::Index n = op.rows();
    Vec x = Vec::Ones(n) / std::sqrt(double(n));
    cplx lam = 0.0, prev = 1e300;
    for (int it = 0; it < 10000; ++it) {
        Vec y = op * x;
        lam = x.dot(y);
        const double ny = y.norm();
        if (ny == 0.0) break;
        x = y / ny;
        if (std::abs(lam - prev) <= 1e-15 * std::abs(lam)) break;
        prev = lam;
    }
    const SpectrumRecord rec = full_spectrum(op, false);
    const cplx top = rec.eigenvalues.front();
    if (std::abs(top.imag()) > 1e-10 * std::abs(top))
        throw Error(Errc::gap_too_small, "dominant eigenvalue is not real");
    if (rec.size() > 1 && std::abs(rec.eigenvalues[1]) / std::abs(top) > gap_max)
        throw Error(Errc::gap_too_small, "|Lambda_2| / Lambda_max above threshold");
    if (std::abs(lam - top) > 1e-10 * std::abs(top))
        throw Error(Errc::convergence_failure, "power iteration disagrees with the decomposition");
    return lam.real();
}

cplx correlation_ratio(const SpectrumRecord& rec, int a) {
    return rec.eigenvalues.at(a) / rec.eigenvalues.front();
}

void write_spectrum_csv(std::ostream& os, const SpectrumRecord& rec) {
    os << "index,sector,re,im,abs,arg\n";
    os.precision(17);
    for (int a = 0; a < rec.size(); ++a) {
        const cplx l = rec.eigenvalues[a];
        os << a << ',' << rec.sector[a] << ',' << l.real() << ',' << l.imag() << ',' << std::abs(l) << ','
           << arg_fo(l) << '\n';
    }
}

}  // namespace xxz
