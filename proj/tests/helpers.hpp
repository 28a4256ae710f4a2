#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "xxz/bethe.hpp"
#include "xxz/spectrum.hpp"

namespace xxz::test {

// Table parameters: J = 1/2, h = 0, zeta = pi/7.
inline ChainParams table_chain(int N, double T) {
    ChainParams p;
    p.J = 0.5;
    p.h = 0.0;
    p.zeta = pi / 7;
    p.N = N;
    p.T = T;
    return p;
}

struct Sector {
    SpectrumRecord rec;
    std::vector<BetheState> states;
};

// Extracted N=5 sectors at T=100, shared between test cases.
inline const Sector& n5_sector(int M) {
    static Sector s4, s5;
    Sector& s = M == 5 ? s5 : s4;
    if (s.states.empty()) {
        const ChainParams p = table_chain(5, 100);
        s.rec = qtm_spectrum(p, {M});
        s.states = extract_sector(s.rec, M, p);
    }
    return s;
}

// Max over matched pairs of |a - b| modulo i pi, minimized over permutations.
inline double set_distance(std::vector<cplx> a, const std::vector<cplx>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::vector<int> idx(b.size());
    std::iota(idx.begin(), idx.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double w = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const cplx d = reduce_strip(a[i] - b[idx[i]]);
            w = std::max(w, std::min(std::abs(d), std::abs(d - I * pi)));
        }
        best = std::min(best, w);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return best;
}

// State of the sector whose roots (in zeta units) are closest to target.
inline const BetheState& nearest_state(const Sector& s, const std::vector<cplx>& target_zeta, double zeta) {
    std::vector<cplx> t;
    for (cplx z : target_zeta) t.push_back(z * zeta);
    const BetheState* best = &s.states.front();
    double bd = std::numeric_limits<double>::infinity();
    for (const auto& st : s.states) {
        const double d = set_distance(st.roots, t);
        if (d < bd) {
            bd = d;
            best = &st;
        }
    }
    return *best;
}

}  // namespace xxz::test
