// Command-line front end: Casimir pressure sweeps with the four-sector
// real-frequency decomposition, dipole lateral-field sweeps, the
// zero-frequency susceptibility classifier, and the built-in verification
// suite.  All numeric output uses fixed 17-significant-digit formatting so
// identical configurations produce byte-identical files.

#include <CLI11.hpp>

#include <complex>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "casimir/casimir.hpp"

namespace {

using namespace casimir;

struct GridSpec {
    double min = 0.0, max = 0.0;
    int points = 1;
    std::string spacing = "linear";
};

std::vector<double> build_grid(double single, const GridSpec& spec, bool have_range)
{
    if (!have_range) return {single};
    return io::make_grid(spec.min, spec.max, spec.points, spec.spacing == "log");
}

models::DielectricModel make_metal_model(const std::string& model, double omega_p, double gamma)
{
    if (model == "drude") return models::DrudeParams{omega_p, gamma};
    if (model == "plasma") return models::PlasmaParams{omega_p};
    throw CLI::ValidationError("--model", "unknown model '" + model + "'");
}

lifshitz::Mirror make_mirror(const std::string& model, double omega_p, double gamma)
{
    if (model == "ideal") return lifshitz::Mirror::ideal();
    return lifshitz::Mirror(make_metal_model(model, omega_p, gamma));
}

std::ostream& open_output(std::ofstream& file, const std::string& path)
{
    if (path.empty()) return std::cout;
    file.open(path, std::ios::binary); // binary: keep '\n' endings everywhere
    if (!file) throw CLI::RuntimeError("cannot open output file: " + path, 4);
    return file;
}

int cmd_pressure(const std::vector<std::string>& model_names, double omega_p, double gamma,
                 double a_single, const GridSpec& a_grid, bool have_grid, double T, double tol,
                 const std::string& out_path)
{
    std::ofstream file;
    std::ostream& os = open_output(file, out_path);

    lifshitz::LifshitzOptions opt;
    opt.rel_tol = tol;

    const auto a_values = build_grid(a_single, a_grid, have_grid);

    os << "a_m,T_K,model,tm_prop_Pa,te_prop_Pa,tm_evan_Pa,te_evan_Pa,total_Pa,total_err_Pa,"
          "matsubara_Pa,converged\n";

    struct Row {
        double a;
        std::string model;
        lifshitz::PressureBreakdown bd;
        quadrature::QuadratureResult mats;
    };
    std::vector<Row> rows;
    for (const auto& name : model_names)
        for (double a : a_values) rows.push_back({a, name, {}, {}});

    par::parallel_for(static_cast<int>(rows.size()), [&](int i) {
        auto& row = rows[i];
        const lifshitz::Mirror mirror = make_mirror(row.model, omega_p, gamma);
        const lifshitz::Geometry geom{row.a, T};
        row.bd = lifshitz::pressure_breakdown(mirror, geom, opt);
        row.mats = lifshitz::pressure_matsubara(mirror, geom, opt);
    });

    bool all_converged = true;
    for (const auto& row : rows) {
        const bool conv = row.bd.converged && row.mats.converged;
        all_converged = all_converged && conv;
        os << io::csv_row({io::format_double(row.a), io::format_double(T), row.model,
                           io::format_double(row.bd.tm_prop.value),
                           io::format_double(row.bd.te_prop.value),
                           io::format_double(row.bd.tm_evan.value),
                           io::format_double(row.bd.te_evan.value),
                           io::format_double(row.bd.total),
                           io::format_double(row.bd.total_abs_error),
                           io::format_double(row.mats.value), conv ? "1" : "0"});
    }
    os.flush();
    return all_converged ? 0 : 3;
}

int cmd_dipole(const std::vector<std::string>& model_names, double omega_p, double gamma,
               const std::vector<double>& freqs_hz, double m0, double height, double x_single,
               const GridSpec& x_grid, bool have_grid, const std::string& units, double tol,
               const std::string& out_path)
{
    std::ofstream file;
    std::ostream& os = open_output(file, out_path);

    const auto xs = build_grid(x_single, x_grid, have_grid);
    const dipole::FieldUnits u =
        units == "si" ? dipole::FieldUnits::si_tesla : dipole::FieldUnits::ampere_per_meter;

    os << "x_m,freq_hz,model,re_bx,im_bx,abs_err,units,converged\n";

    bool all_converged = true;
    for (const auto& name : model_names) {
        const lifshitz::Mirror mirror = make_mirror(name, omega_p, gamma);
        for (double f : freqs_hz) {
            dipole::DipoleConfig cfg{m0, height, 2.0 * std::numbers::pi * f, u};
            auto sweep = dipole::field_sweep(mirror, cfg, xs, tol * 1e-4);
            for (const auto& s : sweep) {
                all_converged = all_converged && s.converged;
                os << io::csv_row({io::format_double(s.x), io::format_double(f), name,
                                   io::format_double(s.bx.real()), io::format_double(s.bx.imag()),
                                   io::format_double(s.abs_error),
                                   units == "si" ? "T" : "A/m", s.converged ? "1" : "0"});
            }
        }
    }
    os.flush();
    return all_converged ? 0 : 3;
}

int cmd_classify(const std::string& model, double omega_p, double gamma, double v, double v_F,
                 double k)
{
    models::DielectricModel m = models::DielectricModel(models::copper_drude());
    if (model == "drude") m = models::DrudeParams{omega_p, gamma};
    else if (model == "plasma") m = models::PlasmaParams{omega_p};
    else if (model == "nonlocal") m = models::NonlocalPhenomParams{omega_p, gamma, v};
    else if (model == "graphene") m = models::GrapheneTrParams{v_F};
    else throw CLI::ValidationError("--model", "unknown model '" + model + "'");

    const auto r = models::zero_frequency_class(m, k);
    std::cout << "model: " << model << "\n"
              << "k_1_per_m: " << io::format_double(k) << "\n"
              << "class: "
              << (r.classification == models::ZeroFrequencyClass::vanishing ? "vanishing"
                                                                            : "nonvanishing")
              << "\n"
              << "limit_re: " << io::format_double(r.limit.real()) << "\n"
              << "limit_im: " << io::format_double(r.limit.imag()) << "\n"
              << "reference_scale: " << io::format_double(r.reference_scale) << "\n";
    return 0;
}

int cmd_verify(double tol, const std::string& json_path)
{
    acceptance::Options opt;
    opt.tol = tol;
    opt.progress = &std::cout;
    std::cout << "criterion                                     measured            bound\n"
              << "-----------------------------------------------------------------------\n";
    const auto results = acceptance::run_all(opt);

    std::ofstream jf(json_path, std::ios::binary);
    if (!jf) {
        std::cerr << "cannot open " << json_path << " for writing\n";
        return 4;
    }
    for (const auto& c : results) jf << io::jsonl_criterion(c.name, c.measured, c.bound, c.pass);

    int failed = 0;
    for (const auto& c : results)
        if (!c.pass) ++failed;
    std::cout << "-----------------------------------------------------------------------\n"
              << (failed == 0 ? "all criteria passed"
                              : std::to_string(failed) + " criterion(s) FAILED")
              << " (" << results.size() << " total); JSON lines: " << json_path << "\n";
    return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Real-frequency Lifshitz pressure decomposition and the oscillating-dipole "
                 "lateral-field observable"};
    app.require_subcommand(1);
    app.fallthrough();
    // flat key = value configuration; command-line flags override file keys,
    // file keys override the built-in defaults
    app.set_config("--config", "", "flat key = value configuration file");

    // shared parameters live on the root app (so the config file stays flat)
    // and are reachable from behind any subcommand through fallthrough
    double omega_p = models::copper_drude().omega_p;
    double gamma = models::copper_drude().gamma;
    std::string metal;
    double tol = 1e-4;
    double T = 300.0;
    double a_single = 1e-6;
    GridSpec a_grid;
    double m0 = 2.776e-3, height = 0.03, x_single = 0.05;
    GridSpec x_grid{0.03, 0.12, 10, "linear"};
    std::vector<double> freqs;
    std::string units = "am";
    double v = 1e6, v_F = constants::c / 300.0, k = 0.0;
    std::string out_path;
    std::string json_path = "verify.jsonl";

    app.add_option("--metal", metal, "built-in metal parameter set (cu)")
        ->check(CLI::IsMember({"cu"}));
    auto* omega_p_opt = app.add_option("--omega-p", omega_p, "plasma frequency [rad/s]");
    app.add_option("--gamma", gamma, "relaxation parameter [rad/s]");
    app.add_option("--tol", tol, "relative quadrature tolerance")->check(CLI::Range(1e-12, 0.1));
    app.add_option("--T", T, "temperature [K]")->check(CLI::PositiveNumber);
    app.add_option("--a", a_single, "plate separation [m]");
    auto* amin = app.add_option("--a-min", a_grid.min, "separation sweep start [m]");
    app.add_option("--a-max", a_grid.max, "separation sweep end [m]")->needs(amin);
    app.add_option("--a-points", a_grid.points, "separation sweep point count")->needs(amin);
    app.add_option("--a-spacing", a_grid.spacing, "linear|log")
        ->check(CLI::IsMember({"linear", "log"}));
    app.add_option("--freq", freqs, "dipole oscillation frequency [Hz] (repeatable)");
    app.add_option("--m0", m0, "dipole amplitude [A m^2]")->check(CLI::PositiveNumber);
    app.add_option("--height", height, "dipole height above the surface [m]")
        ->check(CLI::PositiveNumber);
    auto* x_opt = app.add_option("--x", x_single, "single dipole separation [m]");
    auto* xmin = app.add_option("--x-min", x_grid.min, "dipole sweep start [m]");
    app.add_option("--x-max", x_grid.max, "dipole sweep end [m]")->needs(xmin);
    app.add_option("--x-points", x_grid.points, "dipole sweep point count")->needs(xmin);
    app.add_option("--x-spacing", x_grid.spacing, "linear|log")
        ->check(CLI::IsMember({"linear", "log"}));
    app.add_option("--units", units,
                   "am (A/m, the field integral literally) or si (tesla, extra mu0/4pi)")
        ->check(CLI::IsMember({"am", "si"}));
    app.add_option("--v", v, "nonlocal velocity parameter [m/s]");
    app.add_option("--vf", v_F, "graphene Fermi velocity [m/s]");
    app.add_option("--k", k, "wavevector for nonlocal models [1/m]");
    app.add_option("-o,--output", out_path, "output CSV path (default: stdout)");
    app.add_option("--json", json_path, "verification JSON-lines output path");

    auto* pressure = app.add_subcommand("pressure", "four-sector Casimir pressure between "
                                                    "identical plates, with the Matsubara check "
                                                    "column");
    std::vector<std::string> p_models;
    pressure->add_option("--model", p_models, "mirror model: drude|plasma|ideal (repeatable)")
        ->required()
        ->check(CLI::IsMember({"drude", "plasma", "ideal"}));

    auto* dip = app.add_subcommand("dipole", "lateral magnetic field of an oscillating vertical "
                                             "dipole above the metal");
    std::vector<std::string> d_models;
    dip->add_option("--model", d_models, "mirror model: drude|plasma|ideal (repeatable)")
        ->required()
        ->check(CLI::IsMember({"drude", "plasma", "ideal"}));

    auto* cls = app.add_subcommand("classify", "zero-frequency susceptibility class of a "
                                               "dielectric model");
    std::string c_model = "drude";
    cls->add_option("--model", c_model, "drude|plasma|nonlocal|graphene")
        ->required()
        ->check(CLI::IsMember({"drude", "plasma", "nonlocal", "graphene"}));

    auto* ver = app.add_subcommand("verify", "run the built-in verification suite");

    CLI11_PARSE(app, argc, argv);

    auto require_metal_params = [&](const std::vector<std::string>& names) {
        for (const auto& n : names) {
            if (n != "ideal" && metal.empty() && omega_p_opt->count() == 0)
                throw CLI::RequiredError("--omega-p (or --metal cu)");
        }
    };

    try {
        if (pressure->parsed()) {
            require_metal_params(p_models);
            const bool have_grid = amin->count() > 0;
            return cmd_pressure(p_models, omega_p, gamma, a_single, a_grid, have_grid, T, tol,
                                out_path);
        }
        if (dip->parsed()) {
            require_metal_params(d_models);
            if (freqs.empty()) throw CLI::RequiredError("--freq");
            const bool have_grid = x_opt->count() == 0; // default is the sweep grid
            return cmd_dipole(d_models, omega_p, gamma, freqs, m0, height, x_single, x_grid,
                              have_grid, units, tol, out_path);
        }
        if (cls->parsed()) {
            if (c_model != "graphene") require_metal_params({c_model});
            return cmd_classify(c_model, omega_p, gamma, v, v_F, k);
        }
        if (ver->parsed()) return cmd_verify(tol, json_path);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
