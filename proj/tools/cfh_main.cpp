// cfh: command-line front end for the conformally-flat dual construction
// library. Subcommands: catalogue, validate, dualize, verify, sweep, cusp,
// export. Exit codes: 0 success / all checks pass, 1 verification failure,
// 2 usage or configuration error. All diagnostics go to stderr.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfdual/convergence.hpp"
#include "cfdual/discrete_dual.hpp"
#include "cfdual/errors.hpp"
#include "cfdual/identity_residuals.hpp"
#include "cfdual/io.hpp"
#include "cfdual/reference_dual.hpp"
#include "cfdual/samplers.hpp"
#include "cfdual/validate.hpp"

namespace {

using cfdual::json;

struct RunConfig {
    std::string entry = "pseudosphere-cylinder";
    json params = json::object();
    std::string scheme = "xbar";
    int n = 16;
    std::vector<int> n_list;
    int m_ref = 16;
    double safety = 1.1;
    int subsamples = 8;
    std::string mode = "discrete";  // dualize: discrete | reference
    std::string projection = "drop_w";
    std::string format = "obj";
    std::vector<int> slices;
    std::string out;       // primary output path ("" = stdout)
    std::string json_out;  // secondary JSON output for sweep
    std::string obj_out;   // optional OBJ for dualize
};

const std::set<std::string> kConfigKeys = {
    "entry", "params", "scheme", "n", "n_list", "m_ref", "safety", "subsamples",
    "mode", "projection", "format", "slices", "out", "json_out", "obj_out"};

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw cfdual::Error("cannot read config file: " + path);
    json j = json::parse(f);
    for (const auto& [key, value] : j.items()) {
        if (!kConfigKeys.count(key))
            throw cfdual::Error("unknown config key: " + key);
        if (key == "entry") cfg.entry = value.get<std::string>();
        else if (key == "params") cfg.params = value;
        else if (key == "scheme") cfg.scheme = value.get<std::string>();
        else if (key == "n") cfg.n = value.get<int>();
        else if (key == "n_list") cfg.n_list = value.get<std::vector<int>>();
        else if (key == "m_ref") cfg.m_ref = value.get<int>();
        else if (key == "safety") cfg.safety = value.get<double>();
        else if (key == "subsamples") cfg.subsamples = value.get<int>();
        else if (key == "mode") cfg.mode = value.get<std::string>();
        else if (key == "projection") cfg.projection = value.get<std::string>();
        else if (key == "format") cfg.format = value.get<std::string>();
        else if (key == "slices") cfg.slices = value.get<std::vector<int>>();
        else if (key == "out") cfg.out = value.get<std::string>();
        else if (key == "json_out") cfg.json_out = value.get<std::string>();
        else if (key == "obj_out") cfg.obj_out = value.get<std::string>();
    }
}

double param_or(const json& params, const char* key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->get<double>();
}

cfdual::CatalogueEntry make_entry(const std::string& name, const json& params) {
    using namespace cfdual;
    const double u0 = param_or(params, "u0", 0.5), u1 = param_or(params, "u1", 1.5);
    const double v0 = param_or(params, "v0", 0.0), v1 = param_or(params, "v1", 1.0);
    const double z0 = param_or(params, "z0", 0.0), z1 = param_or(params, "z1", 1.0);
    if (name == "pseudosphere-cylinder")
        return pseudosphere_cylinder(param_or(params, "P", 1.0), {u0, u1}, {v0, v1},
                                     {z0, z1});
    if (name == "pseudosphere-cylinder+inverted") {
        const Vec4 q{param_or(params, "q0", 0.0), param_or(params, "q1", 0.0),
                     param_or(params, "q2", 0.0), param_or(params, "q3", 5.0)};
        return invert_entry(pseudosphere_cylinder(param_or(params, "P", 1.0), {u0, u1},
                                                  {v0, v1}, {z0, z1}),
                            q);
    }
    if (name == "pseudosphere-cylinder+cusp") return cusp_probe_entry();
    throw cfdual::Error("unknown catalogue entry: " + name);
}

cfdual::Domain entry_domain(const cfdual::CatalogueEntry& e) {
    return cfdual::build_domain(e.valid_lo[0], e.valid_hi[0], e.valid_lo[1], e.valid_hi[1],
                                e.valid_lo[2], e.valid_hi[2]);
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty())
        std::cout << content;
    else
        cfdual::write_text_file(path, content);
}

int cmd_catalogue() {
    json out = json::array();
    out.push_back(json{
        {"name", "pseudosphere-cylinder"},
        {"description",
         "constant-curvature-(-1) tractrix surface crossed with a line; canonical "
         "curvature-line coordinates with a closed-form dual"},
        {"params",
         {{"P", "conformal factor, must be 1"}, {"u0", "lower u"}, {"u1", "upper u"},
          {"v0", "lower v"}, {"v1", "upper v"}, {"z0", "lower z"}, {"z1", "upper z"}}}});
    out.push_back(json{
        {"name", "pseudosphere-cylinder+inverted"},
        {"description",
         "sphere-inversion of the cylinder about a configurable center; generic entry "
         "with no closed-form dual"},
        {"params",
         {{"q0", "center x"}, {"q1", "center y"}, {"q2", "center z"}, {"q3", "center w"},
          {"u0", "lower u"}, {"u1", "upper u"}, {"v0", "lower v"}, {"v1", "upper v"},
          {"z0", "lower z"}, {"z1", "upper z"}}}});
    out.push_back(json{
        {"name", "pseudosphere-cylinder+cusp"},
        {"description",
         "inverted cylinder whose dual has a transversal cusp locus on interior "
         "x-lines; for the cusp experiment only"},
        {"params", json::object()}});
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_validate(const RunConfig& cfg) {
    const auto entry = make_entry(cfg.entry, cfg.params);
    const auto report = cfdual::validate_entry(entry, entry_domain(entry));
    emit(cfg.out, cfdual::to_json(report).dump(2) + "\n");
    if (!report.all_pass) {
        std::cerr << "validate: FAIL (" << cfg.entry << ")\n";
        return 1;
    }
    std::cerr << "validate: PASS (" << cfg.entry << ")\n";
    return 0;
}

int cmd_dualize(const RunConfig& cfg) {
    const auto entry = make_entry(cfg.entry, cfg.params);
    const auto domain = entry_domain(entry);
    const auto lat = cfdual::build_lattice(domain, cfg.n);
    json j;
    std::vector<cfdual::Vec4> all_points;
    std::function<cfdual::Vec4(int, int, int)> at;
    if (cfg.mode == "reference") {
        const auto field = cfdual::reference_dual_lattice(entry, lat, cfg.m_ref);
        j = cfdual::to_json(field);
        all_points = field.values;
        at = [field](int i, int jj, int k) { return field.at(i, jj, k); };
    } else if (cfg.mode == "discrete") {
        const auto scheme =
            cfg.scheme == "yunder" ? cfdual::Scheme::yunder : cfdual::Scheme::xbar;
        const auto hyp = cfdual::assemble(entry, lat, scheme, 1);
        j = cfdual::to_json(hyp);
        all_points = hyp.values;
        at = [hyp](int i, int jj, int k) { return hyp.at(i, jj, k); };
    } else {
        throw cfdual::Error("dualize mode must be reference or discrete");
    }
    emit(cfg.out, j.dump(2) + "\n");
    if (!cfg.obj_out.empty()) {
        const auto pr = cfdual::make_projection(
            cfdual::projection_mode_from_string(cfg.projection), all_points);
        std::vector<cfdual::Polyline> lines;
        std::vector<int> ks = cfg.slices;
        if (ks.empty()) ks = {0, cfg.n / 2, cfg.n};
        for (int k : ks) {
            if (k < 0 || k > cfg.n) throw cfdual::InvalidN("slice index out of range");
            auto sl = cfdual::slice_polylines(lat, k, at);
            lines.insert(lines.end(), sl.begin(), sl.end());
        }
        cfdual::write_text_file(cfg.obj_out, cfdual::polylines_to_obj(lines, pr));
    }
    std::cerr << "dualize: wrote " << all_points.size() << " nodes\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    const auto entry = make_entry(cfg.entry, cfg.params);
    const auto domain = entry_domain(entry);
    std::function<cfdual::Vec4(double, double, double)> fstar;
    try {
        fstar = cfdual::exact_dual(entry);
    } catch (const cfdual::Error&) {
        fstar = cfdual::DualSampler(entry, domain, 128.0);
    }
    const double h = 1e-2 * domain.a;
    const auto report = cfdual::identity_residuals(entry, fstar, domain, h);
    json j = cfdual::to_json(report);
    j["summary"] = report.all_pass ? "PASS" : "FAIL";
    emit(cfg.out, j.dump(2) + "\n");
    std::cerr << "verify: " << (report.all_pass ? "PASS" : "FAIL") << " (" << cfg.entry
              << ")\n";
    return report.all_pass ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg) {
    const auto entry = make_entry(cfg.entry, cfg.params);
    std::vector<int> ns = cfg.n_list.empty() ? std::vector<int>{8, 16, 32} : cfg.n_list;
    const auto scheme =
        cfg.scheme == "yunder" ? cfdual::Scheme::yunder : cfdual::Scheme::xbar;
    const auto report = cfdual::sweep(entry, scheme, ns, cfg.m_ref, 33, cfg.safety);
    emit(cfg.out, cfdual::sweep_csv(report));
    if (!cfg.json_out.empty())
        cfdual::write_text_file(cfg.json_out, cfdual::to_json(report).dump(2) + "\n");
    std::cerr << "sweep: " << (report.all_bounds_satisfied ? "bounds satisfied"
                                                           : "BOUND VIOLATION")
              << ", error slope " << report.error_fit.slope
              << (report.at_noise_floor ? " (at noise floor)" : "") << "\n";
    return report.all_bounds_satisfied ? 0 : 1;
}

int cmd_cusp(const RunConfig& cfg) {
    const auto entry = make_entry(cfg.entry, cfg.params);
    const auto report = cfdual::cusp_experiment(entry, cfg.n, cfg.subsamples);
    emit(cfg.out, cfdual::to_json(report).dump(2) + "\n");
    std::cerr << "cusp: reversal " << (report.reversal_within_2delta ? "detected" : "ABSENT")
              << " at x=" << report.min_speed_x << "\n";
    return report.reversal_within_2delta ? 0 : 1;
}

int cmd_export(const RunConfig& cfg) {
    const auto entry = make_entry(cfg.entry, cfg.params);
    const auto domain = entry_domain(entry);
    const auto lat = cfdual::build_lattice(domain, cfg.n);
    const auto scheme =
        cfg.scheme == "yunder" ? cfdual::Scheme::yunder : cfdual::Scheme::xbar;
    const auto hyp = cfdual::assemble(entry, lat, scheme, 1);
    const auto pr = cfdual::make_projection(
        cfdual::projection_mode_from_string(cfg.projection), hyp.values);
    std::vector<cfdual::Polyline> lines;
    std::vector<int> ks = cfg.slices;
    if (ks.empty()) ks = {0, cfg.n / 2, cfg.n};
    for (int k : ks) {
        if (k < 0 || k > cfg.n) throw cfdual::InvalidN("slice index out of range");
        auto sl = cfdual::slice_polylines(lat, k,
                                          [&](int i, int j, int kk) { return hyp.at(i, j, kk); });
        lines.insert(lines.end(), sl.begin(), sl.end());
    }
    std::string content;
    if (cfg.format == "obj")
        content = cfdual::polylines_to_obj(lines, pr);
    else if (cfg.format == "ply")
        content = cfdual::polylines_to_ply(lines, pr);
    else
        throw cfdual::Error("format must be obj or ply");
    emit(cfg.out, content);
    std::cerr << "export: " << lines.size() << " polylines (" << cfg.format << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete dual construction for conformally flat hypersurfaces"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::string n_csv;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--entry", cfg.entry, "catalogue entry name");
        sub->add_option("--config", config_path, "JSON config file overriding flags");
        sub->add_option("--out", cfg.out, "output path (default stdout)");
    };

    CLI::App* sc_catalogue = app.add_subcommand("catalogue", "list catalogue entries");
    (void)sc_catalogue;

    CLI::App* sc_validate =
        app.add_subcommand("validate", "check the structural identities of an entry");
    add_common(sc_validate);

    CLI::App* sc_dualize = app.add_subcommand("dualize", "compute the dual on a lattice");
    add_common(sc_dualize);
    sc_dualize->add_option("--n", cfg.n, "lattice subdivisions per axis");
    sc_dualize->add_option("--m", cfg.m_ref, "quadrature substeps (reference mode)");
    sc_dualize->add_option("--scheme", cfg.scheme, "xbar | yunder");
    sc_dualize->add_option("--mode", cfg.mode, "discrete | reference");
    sc_dualize->add_option("--obj", cfg.obj_out, "also write OBJ slices here");
    sc_dualize->add_option("--projection", cfg.projection, "drop_w | stereographic");
    sc_dualize->add_option("--slice", cfg.slices, "slice indices for OBJ output");

    CLI::App* sc_verify =
        app.add_subcommand("verify", "run the derivative-identity residual suite");
    add_common(sc_verify);

    CLI::App* sc_sweep = app.add_subcommand("sweep", "convergence sweep with bound verdicts");
    add_common(sc_sweep);
    sc_sweep->add_option("--n", n_csv, "comma-separated n list, e.g. 8,16,32");
    sc_sweep->add_option("--scheme", cfg.scheme, "xbar | yunder");
    sc_sweep->add_option("--m-ref", cfg.m_ref, "reference quadrature substeps");
    sc_sweep->add_option("--safety", cfg.safety, "constant inflation factor (>= 1)");
    sc_sweep->add_option("--json", cfg.json_out, "also write the full JSON report here");

    CLI::App* sc_cusp = app.add_subcommand("cusp", "cusp detection experiment");
    add_common(sc_cusp);
    sc_cusp->add_option("--n", cfg.n, "lattice subdivisions");
    sc_cusp->add_option("--subsamples", cfg.subsamples, "intra-cell samples");

    CLI::App* sc_export = app.add_subcommand("export", "write slice geometry (OBJ/PLY)");
    add_common(sc_export);
    sc_export->add_option("--n", cfg.n, "lattice subdivisions");
    sc_export->add_option("--scheme", cfg.scheme, "xbar | yunder");
    sc_export->add_option("--format", cfg.format, "obj | ply");
    sc_export->add_option("--projection", cfg.projection, "drop_w | stereographic");
    sc_export->add_option("--slice", cfg.slices, "slice indices");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (!config_path.empty()) apply_config_file(cfg, config_path);
        if (!n_csv.empty()) {
            cfg.n_list.clear();
            std::stringstream ss(n_csv);
            std::string tok;
            while (std::getline(ss, tok, ',')) cfg.n_list.push_back(std::stoi(tok));
        }
        if (sc_catalogue->parsed()) return cmd_catalogue();
        if (sc_validate->parsed()) return cmd_validate(cfg);
        if (sc_dualize->parsed()) return cmd_dualize(cfg);
        if (sc_verify->parsed()) return cmd_verify(cfg);
        if (sc_sweep->parsed()) return cmd_sweep(cfg);
        if (sc_cusp->parsed()) return cmd_cusp(cfg);
        if (sc_export->parsed()) return cmd_export(cfg);
    } catch (const cfdual::InvalidN& e) {
        std::cerr << "InvalidN: " << e.what() << '\n';
        return 2;
    } catch (const cfdual::InvalidWindow& e) {
        std::cerr << "InvalidWindow: " << e.what() << '\n';
        return 2;
    } catch (const cfdual::UnequalSides& e) {
        std::cerr << "UnequalSides: " << e.what() << '\n';
        return 2;
    } catch (const cfdual::NoDegeneratePoint& e) {
        std::cerr << "NoDegeneratePoint: " << e.what() << '\n';
        return 1;
    } catch (const cfdual::DegenerateRegion& e) {
        std::cerr << "DegenerateRegion: " << e.what() << '\n';
        return 1;
    } catch (const cfdual::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
