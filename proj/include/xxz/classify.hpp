#pragma once

#include <array>
#include <string>
#include <vector>

#include "xxz/bethe.hpp"

namespace xxz {

struct ClassParams {
    double epsilon = 0.06 * pi / 7;  // absolute radius of D
    double alpha = 0.01;
    double rho = 0.06;
    double delta = 0.1;
    bool strict = false;  // enforce epsilon < alpha / 2

    // epsilon = 0.6 zeta / sqrt(T) (root units lambda / zeta), rho = 0.6 / sqrt(T),
    // alpha = 0.01, delta = 10 / T
    static ClassParams for_temperature(double T, double zeta);
    void validate() const;
};

enum class CaseLabel { EmptyY = 1, SingularY = 2, RhoViolation = 3, ClassMemberSolves = 4, ClassMemberFails = 5 };

const char* case_name(CaseLabel c);

struct Membership {
    bool member = false;
    std::vector<std::string> failed;  // clause names
    double rho_value = 0.0;           // |(-1)^s prod sinh(i zeta + y) / sinh(i zeta - y) + 1|
};

Membership class_membership(const HoleParticleSets& sets, const ClassParams& cp, int s, const ChainParams& p);

struct StateClass {
    int index = -1;  // position in the full spectrum ordering
    cplx eigenvalue = 0.0;
    bool classified = false;
    CaseLabel label = CaseLabel::EmptyY;
    std::string diagnostic;  // reason when not classified
    int n_x = 0;
    int n_y = 0;
    int monodromy = 0;
    double rho_value = 0.0;
    double delta_max = 0.0;
};

struct Classification {
    int N = 0;
    int M = 0;
    double T = 0.0;
    std::vector<StateClass> states;
    std::array<int, 5> counts{};  // cases 1..5
    int diagnostics = 0;
    int non_members = 0;  // cases 1-3 excluded, class membership failed for another clause

    int total() const { return static_cast<int>(states.size()); }
    double case4_fraction() const;
};

// True when the extraction is trustworthy enough to classify.
bool usable_extraction(const BetheState& st, std::string* why = nullptr);

// Labels one extracted state. Returns false with a reason in sc.diagnostic when it cannot.
StateClass classify_state(const BetheState& st, const ChainParams& p, const ClassParams& cp, int nq = 256);

Classification classify_states(const std::vector<BetheState>& states, const ChainParams& p, const ClassParams& cp,
                               int jobs = 1, int nq = 256);

// Full pipeline for one sector: spectrum, extraction, detection, labels.
Classification classify_all(const ChainParams& p, int M, const ClassParams& cp, int jobs = 1,
                            const ExtractOptions& opt = {});

}  // namespace xxz
