#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "xxz/classify.hpp"
#include "xxz/model.hpp"

namespace xxz {

enum ExitCode { kExitOk = 0, kExitMismatch = 1, kExitSolverFailure = 2, kExitConfigError = 3 };

// Everything a run needs; serialisable so a run can be replayed from its config alone.
// Root-like inputs (X, Y, seeds) are given in units of zeta.
struct RunConfig {
    ChainParams chain;
    int M = -1;                // sector; -1 = all (spectrum) or N (roots, classify)
    bool trotter_limit = false;
    double epsilon = 0.0;      // 0 selects 0.6 zeta / sqrt(T)
    int nq = 256;
    double kappa_angle = 0.0;
    double tol = 1e-13;
    int max_iter = 500;
    double damping = 0.0;
    std::vector<cplx> X, Y;    // nlie sources / hlbae2 holes
    std::vector<cplx> seeds;   // hlbae starting point
    int n_x = 0;
    int s = 0;
    unsigned seed = 12345;
    int jobs = 1;
    std::string out = ".";
    std::string format = "json";
    int table = 0;
    std::string paper_values;  // empty selects the bundled file

    static RunConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    double eps() const;
    // Throws Error(Errc::config).
    void validate() const;
};

RunConfig load_config(const std::string& path);

// Each command writes its artifacts under cfg.out and returns an exit code. Errors go to err
// as one JSON object per line.
int cmd_spectrum(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_roots(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_nlie(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_free_energy(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_hlbae(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_classify(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_table(const RunConfig& cfg, std::ostream& log, std::ostream& err);

// One line of a table diff report.
struct DiffEntry {
    std::string table;
    std::string item;
    std::string status;  // pass, fail, discrepancy (documented paper value, pinned regression holds)
    double error = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct TableReport {
    int table = 0;
    std::vector<DiffEntry> entries;
    bool all_pass() const;
    nlohmann::json to_json() const;
};

nlohmann::json load_paper_values(const std::string& path = {});

// Regenerates one table and compares it with the paper-values file.
TableReport run_table(int table, const nlohmann::json& paper, int jobs, std::ostream& log);

// JSON helpers for complex numbers ([re, im]); infinite real parts are written as strings.
nlohmann::json cplx_json(cplx z);
cplx json_cplx(const nlohmann::json& j);

}  // namespace xxz
