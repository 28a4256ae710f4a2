#include "xxz/classify.hpp"

#include <cmath>
#include <sstream>

#include "xxz/hlbae.hpp"
#include "xxz/parallel.hpp"

namespace xxz {

ClassParams ClassParams::for_temperature(double T, double zeta) {
    ClassParams cp;
    cp.epsilon = 0.6 * zeta / std::sqrt(T);
    cp.rho = 0.6 / std::sqrt(T);
    cp.alpha = 0.01;
    cp.delta = 10.0 / T;
    return cp;
}

void ClassParams::validate() const {
    if (!(epsilon > 0 && alpha > 0 && rho > 0 && delta > 0))
        throw Error(Errc::config, "classification parameters must be positive");
    if (strict && !(epsilon < alpha / 2)) throw Error(Errc::config, "strict mode requires epsilon < alpha / 2");
}

const char* case_name(CaseLabel c) {
    switch (c) {
    case CaseLabel::EmptyY: return "EmptyY";
    case CaseLabel::SingularY: return "SingularY";
    case CaseLabel::RhoViolation: return "RhoViolation";
    case CaseLabel::ClassMemberSolves: return "ClassMemberSolves";
    case CaseLabel::ClassMemberFails: return "ClassMemberFails";
    }
    return "Unknown";
}

double Classification::case4_fraction() const {
    return total() > 0 ? double(counts[3]) / double(total()) : 0.0;
}

namespace {

double rho_value(const std::vector<cplx>& Y, int s, double zeta) {
    cplx prod = (s % 2 == 0) ? 1.0 : -1.0;
    for (cplx y : Y) prod *= scattering_factor(y, zeta);
    return std::abs(prod + 1.0);
}

}  // namespace

Membership class_membership(const HoleParticleSets& sets, const ClassParams& cp, int s, const ChainParams& p) {
    Membership m;
    const auto Y = sets.Y_hat.expanded();
    m.rho_value = rho_value(Y, s, p.zeta);
    for (const auto& e : sets.X_hat.entries()) {
        if (e.mult != 1) {
            m.failed.push_back("holes_distinct");
            break;
        }
    }
    for (const auto& e : sets.X_hat.entries())
        if (std::abs(e.value) >= cp.epsilon) {
            m.failed.push_back("holes_in_disc");
            break;
        }
    const double zm = p.zeta_m();
    for (const auto& e : sets.Y_hat.entries()) {
        if (e.mult != 1) m.failed.push_back("particles_distinct");
        const cplx y = reduce_strip(e.value);
        if (std::abs(y) <= cp.epsilon) m.failed.push_back("particles_outside_disc");
        if (same_mod_ipi(y, I * zm, cp.alpha) || same_mod_ipi(y, -I * zm, cp.alpha))
            m.failed.push_back("particles_outside_alpha_discs");
    }
    if (!(m.rho_value > cp.rho)) m.failed.push_back("rho_bound");
    m.member = m.failed.empty();
    return m;
}

bool usable_extraction(const BetheState& st, std::string* why) {
    auto fail = [&](const std::string& w) {
        if (why) *why = w;
        return false;
    };
    bool near_string = false, singular = false;
    for (const auto& f : st.flags) {
        if (f == "ill_conditioned_tq") return fail("ill-conditioned TQ system");
        if (f == "near_string") near_string = true;
        if (f == "singular_pair") singular = true;
    }
    if (static_cast<int>(st.roots.size()) != st.M) return fail("root count differs from M");
    if (!(st.tau_error <= 1e-6) && !singular) {
        std::ostringstream os;
        os << "eigenvalue formula mismatch " << st.tau_error;
        return fail(os.str());
    }
    if (!(st.residual <= 1e-10) && !near_string) {
        std::ostringstream os;
        os << "Bethe residual " << st.residual;
        return fail(os.str());
    }
    return true;
}

StateClass classify_state(const BetheState& st, const ChainParams& p, const ClassParams& cp, int nq) {
    StateClass sc;
    sc.index = st.eigen_index;
    sc.eigenvalue = st.eigenvalue;
    std::string why;
    if (!usable_extraction(st, &why)) {
        sc.diagnostic = why;
        return sc;
    }
    HoleParticleSets sets;
    try {
        sets = detect_sets(st, ContourGrid::make(cp.epsilon, nq), p);
    } catch (const Error& e) {
        sc.diagnostic = e.what();
        return sc;
    }
    const auto Y = sets.Y_hat.expanded();
    sc.n_x = sets.X_hat.cardinality();
    sc.n_y = sets.Y_hat.cardinality();
    sc.monodromy = sets.monodromy;
    sc.rho_value = rho_value(Y, st.s, p.zeta);
    sc.classified = true;
    if (sets.Y_hat.empty()) {
        sc.label = CaseLabel::EmptyY;
        return sc;
    }
    if (!sets.Y_sg.empty()) {
        sc.label = CaseLabel::SingularY;
        return sc;
    }
    if (sc.rho_value < cp.rho) {
        sc.label = CaseLabel::RhoViolation;
        return sc;
    }
    const Membership m = class_membership(sets, cp, st.s, p);
    if (!m.member) {
        sc.classified = false;
        sc.diagnostic = "non-member:";
        for (const auto& f : m.failed) sc.diagnostic += " " + f;
        return sc;
    }
    sc.delta_max = max_abs(hlbae1_delta(Y, sc.n_x, p.zeta));
    sc.label = sc.delta_max < cp.delta ? CaseLabel::ClassMemberSolves : CaseLabel::ClassMemberFails;
    return sc;
}

Classification classify_states(const std::vector<BetheState>& states, const ChainParams& p, const ClassParams& cp,
                               int jobs, int nq) {
    cp.validate();
    Classification out;
    out.N = p.N;
    out.T = p.T;
    out.M = states.empty() ? 0 : states.front().M;
    out.states.resize(states.size());
    parallel_for(static_cast<int>(states.size()), jobs,
                 [&](int k) { out.states[k] = classify_state(states[k], p, cp, nq); });
    for (const auto& sc : out.states) {
        if (sc.classified)
            ++out.counts[static_cast<int>(sc.label) - 1];
        else if (sc.diagnostic.rfind("non-member", 0) == 0)
            ++out.non_members;
        else
            ++out.diagnostics;
    }
    return out;
}

Classification classify_all(const ChainParams& p, int M, const ClassParams& cp, int jobs, const ExtractOptions& opt) {
    p.validate();
    const SpectrumRecord rec = qtm_spectrum(p, {M}, true, jobs);
    const auto states = extract_sector(rec, M, p, opt, jobs);
    Classification c = classify_states(states, p, cp, jobs);
    c.M = M;
    return c;
}

}  // namespace xxz
