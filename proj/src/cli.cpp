#include "xxz/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

#include "xxz/bethe.hpp"
#include "xxz/hlbae.hpp"
#include "xxz/nlie.hpp"
#include "xxz/spectrum.hpp"

namespace xxz {

using nlohmann::json;

json cplx_json(cplx z) {
    json re = z.real();
    if (std::isinf(z.real())) re = z.real() > 0 ? "inf" : "-inf";
    return json::array({re, z.imag()});
}

cplx json_cplx(const json& j) {
    auto num = [](const json& v) -> double {
        if (v.is_string()) {
            const std::string s = v.get<std::string>();
            if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
            if (s == "-inf") return -std::numeric_limits<double>::infinity();
            throw Error(Errc::config, "bad number '" + s + "'");
        }
        if (!v.is_number()) throw Error(Errc::config, "expected a number");
        return v.get<double>();
    };
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {num(j[0]), num(j[1])};
    throw Error(Errc::config, "complex numbers are [re, im]");
}

namespace {

json cplx_list(const std::vector<cplx>& v, double scale = 1.0) {
    json a = json::array();
    for (cplx z : v) a.push_back(cplx_json(z / scale));
    return a;
}

std::vector<cplx> list_cplx(const json& j, double scale = 1.0) {
    std::vector<cplx> out;
    if (j.is_null()) return out;
    if (!j.is_array()) throw Error(Errc::config, "expected a list of complex numbers");
    for (const auto& e : j) out.push_back(json_cplx(e) * scale);
    return out;
}

json multiset_json(const RootMultiset& m, double scale) {
    json a = json::array();
    for (const auto& e : m.entries()) a.push_back({{"value", cplx_json(e.value / scale)}, {"mult", e.mult}});
    return a;
}

void write_text(const std::string& dir, const std::string& name, const std::string& body) {
    std::filesystem::create_directories(dir);
    std::ofstream f(std::filesystem::path(dir) / name);
    if (!f) throw Error(Errc::config, "cannot write " + name + " in " + dir);
    f << body;
}

void log_error(std::ostream& err, const std::string& cmd, const std::string& what, const std::string& code) {
    err << json{{"command", cmd}, {"code", code}, {"error", what}}.dump() << "\n";
}

// Maps exceptions to exit codes and the machine-readable error log.
template <class Fn>
int guarded(const std::string& cmd, std::ostream& err, Fn fn) {
    try {
        return fn();
    } catch (const Error& e) {
        log_error(err, cmd, e.what(), errc_name(e.code()));
        return e.code() == Errc::config ? kExitConfigError : kExitSolverFailure;
    } catch (const json::exception& e) {
        log_error(err, cmd, e.what(), "ConfigError");
        return kExitConfigError;
    } catch (const std::exception& e) {
        log_error(err, cmd, e.what(), "Unknown");
        return kExitSolverFailure;
    }
}

ClassParams class_params(const RunConfig& cfg) {
    ClassParams cp = ClassParams::for_temperature(cfg.chain.T, cfg.chain.zeta);
    if (cfg.epsilon > 0) cp.epsilon = cfg.epsilon;
    return cp;
}

// Roots compared modulo i pi, in zeta units.
double root_gap(cplx a, cplx b, double zeta) {
    if (is_infinite_root(a) || is_infinite_root(b))
        return (is_infinite_root(a) && is_infinite_root(b) && (a.real() > 0) == (b.real() > 0)) ? 0.0 : 1e300;
    const cplx d = reduce_strip((a - b) * zeta);
    return std::min(std::abs(d), std::abs(d - I * pi)) / zeta;
}

// Smallest over permutations of the largest pairwise gap. Sets of different size are infinitely apart.
double set_gap(const std::vector<cplx>& a, const std::vector<cplx>& b, double zeta) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::vector<int> idx(a.size());
    std::iota(idx.begin(), idx.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double w = 0.0;
        for (std::size_t i = 0; i < a.size() && w < best; ++i) w = std::max(w, root_gap(a[i], b[idx[i]], zeta));
        best = std::min(best, w);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return best;
}

std::vector<cplx> scaled(const std::vector<cplx>& v, double s) {
    std::vector<cplx> out;
    for (cplx z : v) out.push_back(z / s);
    return out;
}

std::vector<cplx> times(const std::vector<cplx>& v, double s) {
    std::vector<cplx> out;
    for (cplx z : v) out.push_back(z * s);
    return out;
}

std::string fmt_list(const std::vector<cplx>& v) {
    std::ostringstream os;
    os << std::setprecision(8) << "{";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i].real() << (v[i].imag() < 0 ? "" : "+") << v[i].imag() << "i";
    os << "}";
    return os.str();
}

ChainParams table_params(const json& paper, int N, double T) {
    const json& pr = paper.at("parameters");
    ChainParams p;
    p.J = pr.at("J").get<double>();
    p.h = pr.at("h").get<double>();
    p.zeta = pi * pr.at("zeta_over_pi").get<double>();
    p.N = N;
    p.T = T;
    return p;
}

// Spectrum and extraction are shared between tables that use the same sector.
struct SectorRun {
    SpectrumRecord rec;
    std::vector<BetheState> states;
};

const SectorRun& sector_run(const ChainParams& p, int M, int jobs) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, double, double, double, double>, SectorRun> cache;
    const auto key = std::make_tuple(p.N, M, p.T, p.J, p.h, p.zeta);
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    SectorRun r;
    r.rec = qtm_spectrum(p, {M}, true, jobs);
    r.states = extract_sector(r.rec, M, p, {}, jobs);
    return cache.emplace(key, std::move(r)).first->second;
}

const Classification& sector_classification(const ChainParams& p, int M, const ClassParams& cp, int jobs) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, double, double, double, double, double>, Classification> cache;
    const auto key = std::make_tuple(p.N, M, p.T, p.J, p.h, p.zeta, cp.epsilon);
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const SectorRun& run = sector_run(p, M, jobs);
    Classification c = classify_states(run.states, p, cp, jobs);
    c.M = M;
    std::lock_guard<std::mutex> lk(mu);
    return cache.emplace(key, std::move(c)).first->second;
}

// Index (within the sector run) of the state whose root set is closest to target (zeta units).
int nearest_state(const SectorRun& run, const std::vector<cplx>& target, double zeta, double* gap) {
    int best = -1;
    double bg = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < run.states.size(); ++k) {
        const double g = set_gap(scaled(run.states[k].roots, zeta), target, zeta);
        if (g < bg) {
            bg = g;
            best = static_cast<int>(k);
        }
    }
    if (gap) *gap = bg;
    return best;
}

DiffEntry entry(const std::string& table, const std::string& item, double err, double tol, const std::string& detail) {
    DiffEntry e;
    e.table = table;
    e.item = item;
    e.error = err;
    e.tolerance = tol;
    e.status = err <= tol ? "pass" : "fail";
    e.detail = detail;
    return e;
}

double sig_digit_tolerance(cplx v, int digits) {
    const double m = std::max(std::abs(v.real()), std::abs(v.imag()));
    if (m == 0.0) return 0.0;
    return 0.5 * std::pow(10.0, std::floor(std::log10(m)) - (digits - 1));
}

void roots_table(int id, const json& tab, const json& paper, int jobs, TableReport& rep, std::ostream& log) {
    const std::string name = "table" + std::to_string(id);
    const ChainParams p = table_params(paper, tab.at("N").get<int>(), tab.at("T").get<double>());
    const int M = tab.at("M").get<int>();
    const json& tol = tab.at("tolerances");
    const SectorRun& run = sector_run(p, M, jobs);
    const double z = p.zeta;
    const double eps = tab.contains("epsilon_over_zeta") ? tab.at("epsilon_over_zeta").get<double>() * z
                                                         : default_epsilon(p.zeta, p.T);
    const ContourGrid grid = ContourGrid::make(eps, 256);
    for (const auto& st : tab.at("states")) {
        const std::string label = st.at("label").get<std::string>();
        const auto roots = list_cplx(st.at("roots"));
        double gap = 0.0;
        const int k = nearest_state(run, roots, z, &gap);
        const BetheState& bs = run.states.at(k);
        log << name << " " << label << ": matched spectrum index " << bs.eigen_index + 1 << "\n";
        rep.entries.push_back(entry(name, label + " roots", gap, tol.at("roots").get<double>(),
                                    "ours " + fmt_list(scaled(bs.roots, z))));
        // eigenvalue
        const cplx lam_paper = json_cplx(st.at("Lambda"));
        const double lam_err = std::abs(bs.eigenvalue - lam_paper);
        const double lam_tol = sig_digit_tolerance(lam_paper, tol.at("Lambda_sig_digits").get<int>());
        std::ostringstream det;
        det << std::setprecision(12) << "ours " << bs.eigenvalue.real() << (bs.eigenvalue.imag() < 0 ? "" : "+")
            << bs.eigenvalue.imag() << "i";
        DiffEntry e = entry(name, label + " Lambda", lam_err, lam_tol, det.str());
        if (e.status == "fail" && st.value("Lambda_status", "") == "discrepancy") {
            const json& pin = st.at("Lambda_pinned");
            if (pin.is_null()) {
                e.detail += "; no pinned value";
            } else {
                const cplx pv = json_cplx(pin);
                const double rel = std::abs(bs.eigenvalue - pv) / std::abs(pv);
                if (rel <= tol.at("Lambda_pinned_rel").get<double>()) e.status = "discrepancy";
                e.detail += "; pinned regression rel " + std::to_string(rel);
            }
        }
        rep.entries.push_back(e);
        // holes and particles
        try {
            const HoleParticleSets hs = detect_sets(bs, grid, p);
            const auto holes = list_cplx(st.at("holes"));
            rep.entries.push_back(entry(name, label + " holes", set_gap(scaled(hs.X_hat.expanded(), z), holes, z),
                                        tol.at("holes").get<double>(), "ours " + fmt_list(scaled(hs.X_hat.expanded(), z))));
            const auto Y = list_cplx(st.at("Y"));
            rep.entries.push_back(entry(name, label + " Y", set_gap(scaled(hs.Y_hat.expanded(), z), Y, z),
                                        tol.at("roots").get<double>(), "ours " + fmt_list(scaled(hs.Y_hat.expanded(), z))));
        } catch (const Error& ex) {
            rep.entries.push_back(entry(name, label + " holes", 1e300, 0.0, ex.what()));
        }
    }
}

void counts_table(const json& tab, const json& paper, int jobs, TableReport& rep, std::ostream& log) {
    for (const auto& row : tab.at("rows")) {
        const ChainParams p = table_params(paper, row.at("N").get<int>(), row.at("T").get<double>());
        const int M = row.at("M").get<int>();
        ClassParams cp = ClassParams::for_temperature(p.T, p.zeta);
        cp.alpha = tab.value("alpha", cp.alpha);
        const Classification& c = sector_classification(p, M, cp, jobs);
        const auto want = row.at("counts").get<std::vector<int>>();
        std::ostringstream item, det;
        item << "N=" << p.N << " M=" << M << " T=" << p.T;
        double err = 0.0;
        det << "ours";
        for (int k = 0; k < 4; ++k) {
            err = std::max(err, double(std::abs(c.counts[k] - want[k])));
            det << " " << c.counts[k];
        }
        det << " case5 " << c.counts[4] << " diagnostics " << c.diagnostics << " non-members " << c.non_members;
        log << "table3 " << item.str() << ": " << det.str() << "\n";
        rep.entries.push_back(entry("table3", item.str(), err, 0.0, det.str()));
    }
}

void fraction_table(const json& tab, const json& paper, int jobs, TableReport& rep, std::ostream& log) {
    const double tol = tab.at("tolerances").at("fraction").get<double>();
    for (const auto& row : tab.at("rows")) {
        const ChainParams p = table_params(paper, row.at("N").get<int>(), tab.at("T").get<double>());
        const int M = row.at("M").get<int>();
        const Classification& c = sector_classification(p, M, ClassParams::for_temperature(p.T, p.zeta), jobs);
        const double ours = std::round(c.case4_fraction() * 1000.0) / 1000.0;
        std::ostringstream item, det;
        item << "N=" << p.N << " M=" << M;
        det << std::setprecision(6) << "ours " << c.case4_fraction() << " (" << c.counts[3] << "/" << c.total() << ")";
        log << "table4 " << item.str() << ": " << det.str() << "\n";
        rep.entries.push_back(entry("table4", item.str(), std::abs(ours - row.at("fraction").get<double>()), tol, det.str()));
    }
}

void hlbae_table(int id, const json& tab, const json& paper, int jobs, TableReport& rep, std::ostream& log) {
    const std::string name = "table" + std::to_string(id);
    const ChainParams p = table_params(paper, tab.at("N").get<int>(), tab.at("T").get<double>());
    const int M = tab.at("M").get<int>();
    const int s = p.N - M;
    const double z = p.zeta;
    const json& tol = tab.at("tolerances");
    const SectorRun& run = sector_run(p, M, jobs);
    const ContourGrid grid = ContourGrid::make(ClassParams::for_temperature(p.T, p.zeta).epsilon, 256);
    for (const auto& st : tab.at("states")) {
        const std::string label = st.at("label").get<std::string>();
        const auto y = list_cplx(st.at("y"), z);
        const auto holes = list_cplx(st.at("holes"), z);
        const auto h1_paper = list_cplx(st.at("hlbae1"));
        const auto h2_paper = list_cplx(st.at("hlbae2"));
        std::vector<cplx> h1;
        try {
            const HlbaeSolution s1 = solve_hlbae1(static_cast<int>(holes.size()), s, y, p);
            h1 = s1.y;
            rep.entries.push_back(entry(name, label + " hlBAE1", set_gap(scaled(s1.y, z), h1_paper, z),
                                        tol.at("hlbae").get<double>(), "ours " + fmt_list(scaled(s1.y, z))));
        } catch (const Error& e) {
            rep.entries.push_back(entry(name, label + " hlBAE1", 1e300, 0.0, e.what()));
        }
        try {
            const HlbaeSolution s2 = solve_hlbae2(holes, s, y, p);
            rep.entries.push_back(entry(name, label + " hlBAE2", set_gap(scaled(s2.y, z), h2_paper, z),
                                        tol.at("hlbae").get<double>(), "ours " + fmt_list(scaled(s2.y, z))));
        } catch (const Error& e) {
            rep.entries.push_back(entry(name, label + " hlBAE2", 1e300, 0.0, e.what()));
        }
        // the particle set detected from our own extraction against the hlBAE1 solution
        double best = std::numeric_limits<double>::infinity();
        std::vector<cplx> best_y;
        for (const auto& bs : run.states) {
            std::vector<cplx> outside;
            for (cplx r : bs.roots)
                if (std::abs(reduce_strip(r)) >= grid.eps) outside.push_back(r);
            const double g = set_gap(scaled(outside, z), scaled(y, z), z);
            if (g < best) {
                best = g;
                best_y = outside;
            }
        }
        if (!h1.empty()) {
            const double g = set_gap(scaled(best_y, z), scaled(h1, z), z);
            rep.entries.push_back(entry(name, label + " detected-vs-hlBAE1", g, tol.at("detected_gap").get<double>(),
                                        "detected " + fmt_list(scaled(best_y, z))));
        }
        log << name << " " << label << " done\n";
    }
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
    static const std::vector<std::string> known = {
        "J", "zeta", "zeta_over_pi", "h", "T", "N", "L", "M", "trotter", "epsilon", "nq", "kappa_angle",
        "tol", "max_iter", "damping", "X", "Y", "seeds", "n_x", "s", "seed", "jobs", "out", "format",
        "table", "paper_values"};
    if (!j.is_object()) throw Error(Errc::config, "config must be a JSON object");
    for (const auto& [k, v] : j.items())
        if (std::find(known.begin(), known.end(), k) == known.end()) throw Error(Errc::config, "unknown config key '" + k + "'");
    RunConfig c;
    c.chain.J = j.value("J", c.chain.J);
    if (j.contains("zeta")) c.chain.zeta = j.at("zeta").get<double>();
    if (j.contains("zeta_over_pi")) c.chain.zeta = pi * j.at("zeta_over_pi").get<double>();
    c.chain.h = j.value("h", c.chain.h);
    c.chain.T = j.value("T", c.chain.T);
    c.chain.N = j.value("N", c.chain.N);
    c.chain.L = j.value("L", c.chain.L);
    c.M = j.value("M", c.M);
    if (j.contains("trotter")) {
        const json& t = j.at("trotter");
        if (t.is_string()) {
            if (t.get<std::string>() != "inf") throw Error(Errc::config, "trotter is an integer or \"inf\"");
            c.trotter_limit = true;
        } else {
            c.trotter_limit = false;
            c.chain.N = t.get<int>();
        }
    }
    c.epsilon = j.value("epsilon", c.epsilon);
    c.nq = j.value("nq", c.nq);
    c.kappa_angle = j.value("kappa_angle", c.kappa_angle);
    c.tol = j.value("tol", c.tol);
    c.max_iter = j.value("max_iter", c.max_iter);
    c.damping = j.value("damping", c.damping);
    if (j.contains("X")) c.X = list_cplx(j.at("X"));
    if (j.contains("Y")) c.Y = list_cplx(j.at("Y"));
    if (j.contains("seeds")) c.seeds = list_cplx(j.at("seeds"));
    c.n_x = j.value("n_x", c.n_x);
    c.s = j.value("s", c.s);
    c.seed = j.value("seed", c.seed);
    c.jobs = j.value("jobs", c.jobs);
    c.out = j.value("out", c.out);
    c.format = j.value("format", c.format);
    c.table = j.value("table", c.table);
    c.paper_values = j.value("paper_values", c.paper_values);
    return c;
}

json RunConfig::to_json() const {
    json j;
    j["J"] = chain.J;
    j["zeta"] = chain.zeta;
    j["h"] = chain.h;
    j["T"] = chain.T;
    j["N"] = chain.N;
    j["L"] = chain.L;
    j["M"] = M;
    j["trotter"] = trotter_limit ? json("inf") : json(chain.N);
    j["epsilon"] = epsilon;
    j["nq"] = nq;
    j["kappa_angle"] = kappa_angle;
    j["tol"] = tol;
    j["max_iter"] = max_iter;
    j["damping"] = damping;
    j["X"] = cplx_list(X);
    j["Y"] = cplx_list(Y);
    j["seeds"] = cplx_list(seeds);
    j["n_x"] = n_x;
    j["s"] = s;
    j["seed"] = seed;
    j["jobs"] = jobs;
    j["out"] = out;
    j["format"] = format;
    j["table"] = table;
    j["paper_values"] = paper_values;
    return j;
}

double RunConfig::eps() const { return epsilon > 0 ? epsilon : 0.6 * chain.zeta / std::sqrt(chain.T); }

void RunConfig::validate() const {
    chain.validate();
    if (nq < 16) throw Error(Errc::config, "nq must be at least 16");
    if (format != "json" && format != "csv") throw Error(Errc::config, "format is json or csv");
    if (table < 0 || table > 6) throw Error(Errc::config, "table is 1..6");
    if (jobs < 1) throw Error(Errc::config, "jobs must be positive");
    if (M < -1 || M > 2 * chain.N) throw Error(Errc::config, "sector M out of range");
    if (!(tol > 0) || max_iter < 1) throw Error(Errc::config, "tol and max_iter must be positive");
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Errc::config, "cannot open config " + path);
    json j;
    try {
        j = json::parse(f, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw Error(Errc::config, std::string("config parse error: ") + e.what());
    }
    return RunConfig::from_json(j);
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    return guarded("spectrum", err, [&] {
        cfg.validate();
        const std::vector<int> sectors = cfg.M >= 0 ? std::vector<int>{cfg.M} : std::vector<int>{};
        const SpectrumRecord rec = qtm_spectrum(cfg.chain, sectors, false, cfg.jobs);
        if (cfg.format == "csv") {
            std::ostringstream os;
            write_spectrum_csv(os, rec);
            write_text(cfg.out, "spectrum.csv", os.str());
        } else {
            json j;
            j["config"] = cfg.to_json();
            j["eigenvalues"] = cplx_list(rec.eigenvalues);
            j["sector"] = rec.sector;
            j["max_residual"] = rec.max_residual;
            write_text(cfg.out, "spectrum.json", j.dump(2));
        }
        log << std::setprecision(15) << "states " << rec.size() << ", Lambda_max " << rec.eigenvalues.front().real()
            << ", max residual " << rec.max_residual << "\n";
        return int(kExitOk);
    });
}

int cmd_roots(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    return guarded("roots", err, [&] {
        cfg.validate();
        const ChainParams& p = cfg.chain;
        const int M = cfg.M >= 0 ? cfg.M : p.N;
        const SpectrumRecord rec = qtm_spectrum(p, {M}, true, cfg.jobs);
        const auto states = extract_sector(rec, M, p, {}, cfg.jobs);
        const ContourGrid grid = ContourGrid::make(cfg.eps(), cfg.nq, cfg.kappa_angle);
        json arr = json::array();
        std::ostringstream csv;
        csv << "index,re,im,residual,tau_error,monodromy,roots,holes,flags\n";
        int unusable = 0;
        for (const auto& st : states) {
            json s;
            s["index"] = st.eigen_index + 1;
            s["Lambda"] = cplx_json(st.eigenvalue);
            s["roots"] = cplx_list(st.roots, p.zeta);
            s["residual"] = st.residual;
            s["tau_error"] = st.tau_error;
            s["flags"] = st.flags;
            std::string why;
            if (!usable_extraction(st, &why)) {
                ++unusable;
                s["diagnostic"] = why;
            }
            std::vector<cplx> holes;
            int mono = 0;
            try {
                const HoleParticleSets hs = detect_sets(st, grid, p);
                s["X"] = multiset_json(hs.X_hat, p.zeta);
                s["Y"] = multiset_json(hs.Y_hat, p.zeta);
                s["Y_sg"] = multiset_json(hs.Y_sg, p.zeta);
                s["monodromy"] = hs.monodromy;
                holes = hs.X_hat.expanded();
                mono = hs.monodromy;
            } catch (const Error& e) {
                s["detect_error"] = e.what();
            }
            arr.push_back(s);
            std::string flags;
            for (const auto& f : st.flags) flags += (flags.empty() ? "" : ";") + f;
            csv << std::setprecision(12) << st.eigen_index + 1 << "," << st.eigenvalue.real() << "," << st.eigenvalue.imag()
                << "," << st.residual << "," << st.tau_error << "," << mono << ",\"" << fmt_list(scaled(st.roots, p.zeta))
                << "\",\"" << fmt_list(scaled(holes, p.zeta)) << "\"," << flags << "\n";
        }
        if (cfg.format == "csv")
            write_text(cfg.out, "roots.csv", csv.str());
        else
            write_text(cfg.out, "roots.json", json{{"config", cfg.to_json()}, {"states", arr}}.dump(2));
        log << "sector M=" << M << ": " << states.size() << " states, " << unusable << " unusable extractions\n";
        return int(kExitOk);
    });
}

namespace {

NlieConfig nlie_config(const RunConfig& cfg) {
    NlieConfig nc;
    nc.trotter_limit = cfg.trotter_limit;
    const double z = cfg.chain.zeta;
    nc.X = RootMultiset(times(cfg.X, z));
    nc.Y = RootMultiset(times(cfg.Y, z));
    // singular companions of the particles
    const double shift = (pi - 2 * z >= 0 ? 1.0 : -1.0) * zeta_m(z);
    for (const auto& e : nc.Y.entries()) {
        const cplx q = reduce_strip(e.value - I * shift);
        if (std::abs(q) < cfg.eps()) nc.Y_sg.add(q, e.mult);
    }
    nc.s = cfg.s;
    nc.damping = cfg.damping;
    nc.tol = cfg.tol;
    nc.max_iter = cfg.max_iter;
    return nc;
}

}  // namespace

int cmd_nlie(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    return guarded("nlie", err, [&] {
        cfg.validate();
        const ContourGrid grid = ContourGrid::make(cfg.eps(), cfg.nq, cfg.kappa_angle);
        const NlieSolution sol = solve_nlie(nlie_config(cfg), cfg.chain, grid);
        const cplx lam = eigenvalue_from_nlie(sol, cfg.chain);
        write_text(cfg.out, "nlie.json", nlie_to_json(sol, cfg.chain));
        if (cfg.format == "csv") {
            std::ostringstream os;
            os << "node_re,node_im,A_re,A_im,Ln_re,Ln_im\n" << std::setprecision(17);
            for (int j = 0; j < grid.nq; ++j)
                os << grid.nodes[j].real() << "," << grid.nodes[j].imag() << "," << sol.A[j].real() << "," << sol.A[j].imag()
                   << "," << sol.Ln[j].real() << "," << sol.Ln[j].imag() << "\n";
            write_text(cfg.out, "nlie.csv", os.str());
        }
        log << std::setprecision(15) << "iterations " << sol.iterations << ", monodromy " << sol.monodromy << ", Lambda "
            << lam.real() << (lam.imag() < 0 ? "" : "+") << lam.imag() << "i\n";
        return int(kExitOk);
    });
}

int cmd_free_energy(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    return guarded("free-energy", err, [&] {
        cfg.validate();
        const ChainParams& p = cfg.chain;
        const ContourGrid grid = ContourGrid::make(cfg.eps(), cfg.nq, cfg.kappa_angle);
        NlieConfig nc;
        nc.trotter_limit = cfg.trotter_limit;
        nc.tol = cfg.tol;
        nc.max_iter = cfg.max_iter;
        nc.damping = cfg.damping;
        const NlieSolution sol = solve_nlie(nc, p, grid);
        double f_over_T = 0.0;
        if (cfg.trotter_limit) {
            f_over_T = free_energy_over_T(sol, p);
        } else {
            f_over_T = std::log(std::abs(eigenvalue_from_nlie(sol, p)));
        }
        const double law = std::log(2.0) - p.J * std::cos(p.zeta) / p.T;
        json j;
        j["config"] = cfg.to_json();
        j["minus_f_over_T"] = f_over_T;
        j["f"] = -p.T * f_over_T;
        j["high_T_law"] = law;
        j["r"] = std::abs(f_over_T - law);
        if (cfg.format == "csv") {
            std::ostringstream os;
            os << std::setprecision(17) << "T,minus_f_over_T,f,high_T_law,r\n"
               << p.T << "," << f_over_T << "," << -p.T * f_over_T << "," << law << "," << std::abs(f_over_T - law) << "\n";
            write_text(cfg.out, "free_energy.csv", os.str());
        } else {
            write_text(cfg.out, "free_energy.json", j.dump(2));
        }
        log << std::setprecision(15) << "-f/T " << f_over_T << ", ln2 - J cos(zeta)/T " << law << ", r "
            << std::abs(f_over_T - law) << "\n";
        return int(kExitOk);
    });
}

int cmd_hlbae(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    return guarded("hlbae", err, [&] {
        cfg.validate();
        const ChainParams& p = cfg.chain;
        if (cfg.seeds.empty()) throw Error(Errc::config, "hlbae needs seeds");
        const auto seeds = times(cfg.seeds, p.zeta);
        const auto holes = times(cfg.X, p.zeta);
        const int n_x = cfg.n_x > 0 ? cfg.n_x : static_cast<int>(holes.size());
        json j;
        j["config"] = cfg.to_json();
        const HlbaeSolution s1 = solve_hlbae1(n_x, cfg.s, seeds, p);
        j["hlbae1"] = {{"y", cplx_list(s1.y, p.zeta)}, {"residual", s1.residual}, {"iterations", s1.iterations}};
        log << "hlBAE1 " << fmt_list(scaled(s1.y, p.zeta)) << " residual " << s1.residual << "\n";
        if (!holes.empty()) {
            const HlbaeSolution s2 = solve_hlbae2(holes, cfg.s, seeds, p);
            j["hlbae2"] = {{"y", cplx_list(s2.y, p.zeta)}, {"residual", s2.residual}, {"iterations", s2.iterations}};
            log << "hlBAE2 " << fmt_list(scaled(s2.y, p.zeta)) << " residual " << s2.residual << "\n";
        }
        write_text(cfg.out, "hlbae.json", j.dump(2));
        return int(kExitOk);
    });
}

int cmd_classify(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    return guarded("classify", err, [&] {
        cfg.validate();
        const ChainParams& p = cfg.chain;
        const int M = cfg.M >= 0 ? cfg.M : p.N;
        const ClassParams cp = class_params(cfg);
        const Classification& c = sector_classification(p, M, cp, cfg.jobs);
        std::ostringstream row;
        row << p.N << "," << M << "," << p.T;
        for (int k = 0; k < 5; ++k) row << "," << c.counts[k];
        row << "," << c.diagnostics << "," << c.non_members << "\n";
        if (cfg.format == "csv") {
            write_text(cfg.out, "classify.csv", "N,M,T,case1,case2,case3,case4,case5,diagnostics,non_members\n" + row.str());
        } else {
            json states = json::array();
            for (const auto& sc : c.states) {
                json s;
                s["index"] = sc.index + 1;
                s["Lambda"] = cplx_json(sc.eigenvalue);
                if (sc.classified) {
                    s["case"] = static_cast<int>(sc.label);
                    s["label"] = case_name(sc.label);
                    s["n_x"] = sc.n_x;
                    s["n_y"] = sc.n_y;
                    s["rho_value"] = sc.rho_value;
                    s["delta_max"] = sc.delta_max;
                } else {
                    s["diagnostic"] = sc.diagnostic;
                }
                states.push_back(s);
            }
            json j;
            j["config"] = cfg.to_json();
            j["epsilon"] = cp.epsilon;
            j["rho"] = cp.rho;
            j["alpha"] = cp.alpha;
            j["delta"] = cp.delta;
            j["counts"] = c.counts;
            j["diagnostics"] = c.diagnostics;
            j["non_members"] = c.non_members;
            j["case4_fraction"] = c.case4_fraction();
            j["states"] = states;
            write_text(cfg.out, "classify.json", j.dump(2));
        }
        log << "N=" << p.N << " M=" << M << " T=" << p.T << " cases";
        for (int k = 0; k < 5; ++k) log << " " << c.counts[k];
        log << ", diagnostics " << c.diagnostics << ", non-members " << c.non_members << ", case-4 fraction "
            << std::setprecision(4) << c.case4_fraction() << "\n";
        return int(kExitOk);
    });
}

bool TableReport::all_pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const DiffEntry& e) { return e.status != "fail"; });
}

json TableReport::to_json() const {
    json a = json::array();
    for (const auto& e : entries)
        a.push_back({{"table", e.table}, {"item", e.item}, {"status", e.status}, {"error", e.error},
                     {"tolerance", e.tolerance}, {"detail", e.detail}});
    return json{{"table", table}, {"all_pass", all_pass()}, {"entries", a}};
}

json load_paper_values(const std::string& path) {
    const std::string file = path.empty() ? std::string(XXZ_DATA_DIR) + "/paper_values.json" : path;
    std::ifstream f(file);
    if (!f) throw Error(Errc::config, "cannot open paper values " + file);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw Error(Errc::config, std::string("paper values parse error: ") + e.what());
    }
}

TableReport run_table(int table, const json& paper, int jobs, std::ostream& log) {
    TableReport rep;
    rep.table = table;
    const std::string key = "table" + std::to_string(table);
    if (!paper.contains(key)) throw Error(Errc::config, "paper values have no " + key);
    const json& tab = paper.at(key);
    switch (table) {
    case 1:
    case 2: roots_table(table, tab, paper, jobs, rep, log); break;
    case 3: counts_table(tab, paper, jobs, rep, log); break;
    case 4: fraction_table(tab, paper, jobs, rep, log); break;
    case 5:
    case 6: hlbae_table(table, tab, paper, jobs, rep, log); break;
    default: throw Error(Errc::config, "table is 1..6");
    }
    return rep;
}

int cmd_table(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    return guarded("table", err, [&] {
        cfg.validate();
        if (cfg.table < 1) throw Error(Errc::config, "table is 1..6");
        const json paper = load_paper_values(cfg.paper_values);
        const TableReport rep = run_table(cfg.table, paper, cfg.jobs, log);
        const std::string stem = "table" + std::to_string(cfg.table) + "_diff";
        if (cfg.format == "csv") {
            std::ostringstream os;
            os << "table,item,status,error,tolerance,detail\n" << std::setprecision(6);
            for (const auto& e : rep.entries)
                os << e.table << ",\"" << e.item << "\"," << e.status << "," << e.error << "," << e.tolerance << ",\""
                   << e.detail << "\"\n";
            write_text(cfg.out, stem + ".csv", os.str());
        } else {
            write_text(cfg.out, stem + ".json", rep.to_json().dump(2));
        }
        for (const auto& e : rep.entries)
            log << std::setprecision(3) << std::left << std::setw(12) << e.status << e.table << " " << e.item << "  err "
                << e.error << " tol " << e.tolerance << "  " << e.detail << "\n";
        if (!rep.all_pass()) {
            for (const auto& e : rep.entries)
                if (e.status == "fail") log_error(err, "table", e.table + " " + e.item + ": " + e.detail, "Mismatch");
            return int(kExitMismatch);
        }
        return int(kExitOk);
    });
}

}  // namespace xxz
