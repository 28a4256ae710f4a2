#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "xxz/cli.hpp"

namespace {

struct Overrides {
    std::string config;
    std::string out;
    std::string format;
    std::string trotter;
    int jobs = 0;
    int table = 0;
    int nq = 0;
    int max_iter = 0;
    double epsilon = -1.0;
    double kappa_angle = -1e300;
    double tol = 0.0;
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config, "JSON run configuration");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--jobs", o.jobs, "worker threads");
    sub->add_option("--format", o.format, "json or csv");
    sub->add_option("--epsilon", o.epsilon, "contour radius (absolute)");
    sub->add_option("--nq", o.nq, "quadrature nodes");
    sub->add_option("--kappa-angle", o.kappa_angle, "base point angle on the contour");
    sub->add_option("--trotter", o.trotter, "Trotter number N or inf");
    sub->add_option("--tol", o.tol, "fixed-point tolerance");
    sub->add_option("--max-iter", o.max_iter, "iteration cap");
}

xxz::RunConfig build_config(const Overrides& o) {
    xxz::RunConfig c = o.config.empty() ? xxz::RunConfig{} : xxz::load_config(o.config);
    if (!o.out.empty()) c.out = o.out;
    if (!o.format.empty()) c.format = o.format;
    if (o.jobs > 0) c.jobs = o.jobs;
    if (o.table > 0) c.table = o.table;
    if (o.nq > 0) c.nq = o.nq;
    if (o.max_iter > 0) c.max_iter = o.max_iter;
    if (o.epsilon >= 0) c.epsilon = o.epsilon;
    if (o.kappa_angle > -1e299) c.kappa_angle = o.kappa_angle;
    if (o.tol > 0) c.tol = o.tol;
    if (!o.trotter.empty()) {
        if (o.trotter == "inf") {
            c.trotter_limit = true;
        } else {
            c.trotter_limit = false;
            try {
                c.chain.N = std::stoi(o.trotter);
            } catch (const std::exception&) {
                throw xxz::Error(xxz::Errc::config, "--trotter takes an integer or inf");
            }
        }
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QTM thermodynamics of the XXZ chain"};
    app.require_subcommand(1);
    Overrides o;
    using Cmd = int (*)(const xxz::RunConfig&, std::ostream&, std::ostream&);
    const std::pair<const char*, Cmd> cmds[] = {
        {"spectrum", xxz::cmd_spectrum}, {"roots", xxz::cmd_roots},   {"nlie", xxz::cmd_nlie},
        {"free-energy", xxz::cmd_free_energy}, {"hlbae", xxz::cmd_hlbae}, {"classify", xxz::cmd_classify},
        {"table", xxz::cmd_table}};
    std::vector<std::pair<CLI::App*, Cmd>> subs;
    for (const auto& [name, fn] : cmds) {
        CLI::App* sub = app.add_subcommand(name);
        add_common(sub, o);
        if (std::string(name) == "table") sub->add_option("--table", o.table, "table number 1..6")->required();
        subs.emplace_back(sub, fn);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : xxz::kExitConfigError;
    }
    xxz::RunConfig cfg;
    try {
        cfg = build_config(o);
    } catch (const xxz::Error& e) {
        std::cerr << nlohmann::json{{"code", "ConfigError"}, {"error", e.what()}}.dump() << "\n";
        return xxz::kExitConfigError;
    }
    for (const auto& [sub, fn] : subs)
        if (sub->parsed()) return fn(cfg, std::cout, std::cerr);
    return xxz::kExitConfigError;
}
