#include "stefanlie/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "stefanlie/artifacts.hpp"
#include "stefanlie/classify.hpp"
#include "stefanlie/config.hpp"
#include "stefanlie/errors.hpp"
#include "stefanlie/fd_oracle.hpp"
#include "stefanlie/self_similar.hpp"
#include "stefanlie/travelling_wave.hpp"

namespace stefanlie::cli {

namespace fs = std::filesystem;
namespace art = artifacts;

std::string RunConfig::canonical() const {
    std::ostringstream os;
    os.precision(17);
    os << "command=" << command << "\nmaterial=" << material.generic_string() << "\n";
    for (const auto& [key, value] : overrides) os << "set." << key << "=" << value << "\n";
    if (q0) os << "q0=" << *q0 << "\n";
    if (command == "check")
        os << "scenario=" << scenario << "\nk=" << k << "\ngamma=" << gamma << "\nform=" << stefan_form << "\n";
    if (command == "solve-ss") os << "tolerance=" << ss_tolerance << "\ntail_widths=" << tail_widths << "\n";
    if (command == "verify-fd") {
        os << "oracle=" << oracle << "\ngrids=";
        for (int n : grids) os << n << ";";
        os << "\ncfl=" << cfl << "\ntravel=" << travel << "\nt0=" << t0 << "\nt_end=" << t_end
           << "\nsnapshot_interval=" << snapshot_interval << "\n";
    }
    return os.str();
}

namespace {

void add_common(CLI::App* sub, RunConfig& c, std::vector<std::string>& sets) {
    sub->add_option("--material", c.material,
                    "Material file (key = value, SI units); default: built-in aluminium constants");
    sub->add_option("--set", sets, "Override a material field, KEY=VALUE in the field's SI unit (repeatable)");
    sub->add_option("--out", c.out_dir, "Output directory; default: $STEFANLIE_OUT, else ./stefanlie-out");
}

// ---- resolved inputs ----

struct Prepared {
    MaterialSpec spec;
    fs::path out;
    std::string hash;
};

Prepared prepare(const RunConfig& c, bool needs_material) {
    Prepared p;
    if (needs_material) {
        p.spec = c.material.empty() ? MaterialSpec::aluminium() : load_material(c.material);
        for (const auto& [key, value] : c.overrides)
            if (!set_material_field(p.spec, key, value)) throw ConfigError("unknown material field '" + key + "'");
        if (c.q0) p.spec.q0 = *c.q0;
        p.spec.validate();
    }
    if (!c.out_dir.empty()) {
        p.out = c.out_dir;
    } else if (const char* env = std::getenv("STEFANLIE_OUT"); env && *env) {
        p.out = env;
    } else {
        p.out = "stefanlie-out";
    }
    p.hash = art::hex64(art::fnv1a64(c.canonical() + (needs_material ? format_material(p.spec) : "")));
    return p;
}

void write_table(const Prepared& p, const std::string& name, const art::Table& table) {
    art::write_text(p.out / name, art::render_csv(table, p.hash));
}

void write_report(const Prepared& p, const std::string& name, const std::string& body) {
    art::write_text(p.out / name, art::header_line(p.hash) + body);
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// ---- pipelines ----

int solve_tw(const RunConfig&, const Prepared& p, std::ostream& out, std::ostream& err) {
    const TransformedBVP bvp = build_transformed_bvp(p.spec, TimeLaw::steady);
    const TravellingWaveSolution sol = solve_travelling_wave(bvp);
    if (sol.multiple_roots()) err << "warning: velocity equation has several roots; the smallest is reported\n";
    write_table(p, "tw_profile.csv", art::tw_profile(sol, p.spec));
    write_table(p, "tw_summary.csv", art::tw_summary(sol));
    out << "mu = " << fmt("%.6g", sol.mu) << " m/s, delta = " << fmt("%.6g", sol.delta)
        << " m, T_surface = " << fmt("%.6g", kirchhoff_inverse(p.spec, Phase::liquid, sol.u_s)) << " K\n";
    return ok;
}

int solve_ss(const RunConfig& c, const Prepared& p, std::ostream& out, std::ostream&) {
    const TransformedBVP bvp = build_transformed_bvp(p.spec, TimeLaw::inverse_sqrt);
    SelfSimilarOptions options;
    options.tolerance = c.ss_tolerance;
    options.tail_widths = c.tail_widths;
    const SelfSimilarSolution sol = solve_self_similar(bvp, options);
    write_table(p, "ss_profile.csv", art::ss_profile(sol, p.spec));
    write_table(p, "ss_summary.csv", art::ss_summary(sol));
    out << "omega1 = " << fmt("%.9g", sol.omega1) << " m/s^0.5, omega2 = " << fmt("%.9g", sol.omega2)
        << " m/s^0.5, residual = " << fmt("%.3g", sol.bc_residual) << "\n";
    return ok;
}

StefanClassification classify_form(const std::string& form) {
    using F = std::function<double(double, double)>;
    F q, h;
    if (form == "steady") {
        q = [](double, double u) { return 1.0 + u; };
        h = [](double, double u) { return 0.1 * u * u; };
    } else if (form == "inverse-sqrt") {
        q = [](double t, double u) { return (1.0 + u) / std::sqrt(t); };
        h = [](double t, double u) { return 0.1 * u * u / std::sqrt(t); };
    } else if (form == "explicit-time") {
        q = [](double t, double u) { return (1.0 + u) * std::exp(-t); };
        h = [](double, double u) { return 0.1 * u * u; };
    } else {
        throw ConfigError("unknown stefan form '" + form + "' (steady | inverse-sqrt | explicit-time)");
    }
    return classify_stefan_bvp(q, h);
}

int check(const RunConfig& c, const Prepared& p, std::ostream& out, std::ostream&) {
    std::vector<InvarianceReport> reports;
    std::string summary;
    if (c.scenario == "rod") {
        const RodClassification r = classify_rod_bvp(c.k, c.gamma, c.q0.value_or(0.0));
        reports = r.reports;
        std::ostringstream os;
        os << "rod k = " << c.k << ", gamma = " << c.gamma << ", q0 = " << c.q0.value_or(0.0) << "\n"
           << "classification: " << (r.row ? "row " + std::to_string(r.row) : std::string("no row")) << "\ninvariant families:";
        for (const auto& f : r.passing) os << " " << f;
        os << "\n";
        for (const auto& s : r.constraints) os << "constraint: " << s << "\n";
        summary = os.str();
    } else if (c.scenario == "stefan") {
        const StefanClassification r = classify_form(c.stefan_form);
        reports = r.reports;
        std::ostringstream os;
        os << "stefan form " << c.stefan_form << "\nclassification: row " << r.row << "\ninvariant families:";
        for (const auto& f : r.passing) os << " " << f;
        os << "\n";
        summary = os.str();
    } else {
        const int id = std::stoi(c.scenario.substr(std::string("table2-case-").size()));
        reports = verify_table2_generators(id);
        std::ostringstream os;
        int passed = 0;
        for (const auto& r : reports) passed += r.pass;
        os << "generator case " << id << ": " << passed << " of " << reports.size() << " generators verified\n";
        summary = os.str();
    }
    const std::string body = summary + "\n" + art::report_text(reports);
    write_report(p, "check_report.txt", body);
    write_table(p, "check_residuals.csv", art::residuals(reports));
    out << summary;
    return ok;
}

int verify_fd(const RunConfig& c, const Prepared& p, std::ostream& out, std::ostream& err) {
    art::Table table;
    std::vector<Snapshot> snaps;
    std::ostringstream report;
    if (c.oracle == "tw") {
        const TransformedBVP bvp = build_transformed_bvp(p.spec, TimeLaw::steady);
        const TravellingWaveSolution sol = solve_travelling_wave(bvp);
        const double t_end = c.travel * sol.delta / sol.mu;
        table.columns = {"n_liquid", "velocity_s1", "velocity_s2", "velocity_error", "profile_drift",
                         "thickness_drift", "conservation_defect", "bound_violation", "steps"};
        report << "oracle = tw\nmu = " << art::number(sol.mu) << "\nt_end = " << art::number(t_end) << "\n";
        for (std::size_t g = 0; g < c.grids.size(); ++g) {
            GridSpec grid;
            grid.n_liquid = c.grids[g];
            grid.cfl = c.cfl;
            if (g + 1 == c.grids.size()) grid.snapshot_interval = c.snapshot_interval;
            TravellingWaveReport r = validate_travelling_wave(bvp, sol, t_end, grid, &p.spec);
            table.rows.push_back({std::to_string(r.n_liquid), art::number(r.velocity_s1), art::number(r.velocity_s2),
                                  art::number(r.velocity_error), art::number(r.profile_drift),
                                  art::number(r.thickness_drift), art::number(r.conservation_defect),
                                  art::number(r.bound_violation), std::to_string(r.steps)});
            out << "N = " << r.n_liquid << ": velocity error " << fmt("%.3e", r.velocity_error) << ", drift "
                << fmt("%.3e", r.profile_drift) << "\n";
            if (!r.snapshots.empty()) snaps = std::move(r.snapshots);
        }
    } else if (c.oracle == "ss") {
        const TransformedBVP bvp = build_transformed_bvp(p.spec, TimeLaw::inverse_sqrt);
        const SelfSimilarSolution sol = solve_self_similar(bvp);
        table.columns = {"n_liquid", "omega1_fit", "omega2_fit", "omega1_error", "omega2_error", "exponent1",
                         "exponent2", "conservation_defect", "bound_violation", "steps"};
        report << "oracle = ss\nomega1 = " << art::number(sol.omega1) << "\nomega2 = " << art::number(sol.omega2)
               << "\n";
        for (std::size_t g = 0; g < c.grids.size(); ++g) {
            GridSpec grid;
            grid.n_liquid = c.grids[g];
            grid.cfl = c.cfl;
            if (g + 1 == c.grids.size()) grid.snapshot_interval = c.snapshot_interval;
            SelfSimilarReport r = validate_self_similar(bvp, sol, c.t0, c.t_end, grid);
            table.rows.push_back({std::to_string(r.n_liquid), art::number(r.omega1_fit), art::number(r.omega2_fit),
                                  art::number(r.omega1_error), art::number(r.omega2_error),
                                  art::number(r.exponent1), art::number(r.exponent2),
                                  art::number(r.conservation_defect), art::number(r.bound_violation),
                                  std::to_string(r.steps)});
            out << "N = " << r.n_liquid << ": omega2 error " << fmt("%.3e", r.omega2_error) << "\n";
            if (!r.snapshots.empty()) snaps = std::move(r.snapshots);
        }
    } else {
        throw ConfigError("unknown oracle '" + c.oracle + "' (tw | ss)");
    }
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        report << "grid." << i << " =";
        for (std::size_t k = 0; k < table.columns.size(); ++k)
            report << " " << table.columns[k] << ":" << table.rows[i][k];
        report << "\n";
    }
    write_table(p, "fd_convergence.csv", table);
    write_report(p, "fd_report.txt", report.str());
    if (!snaps.empty()) write_table(p, "fd_snapshots.csv", art::snapshots(snaps, p.spec));
    (void)err;
    return ok;
}

int reproduce(const RunConfig&, const Prepared& p, std::ostream& out, std::ostream& err) {
    struct Reference {
        double q0, mu, delta;
    };
    const Reference refs[] = {{1e10, 0.10, 9.60e-4}, {5e10, 0.54, 2.23e-4}};
    art::Table summary;
    summary.columns = {"q0_Wm2", "mu", "reference_mu", "delta", "reference_delta", "mu_rel_diff",
                       "delta_rel_diff", "T_surface_K"};
    summary.notes.push_back("reference_* columns are the published values for aluminium");
    for (const auto& ref : refs) {
        MaterialSpec spec = p.spec;
        spec.q0 = ref.q0;
        const TransformedBVP bvp = build_transformed_bvp(spec, TimeLaw::steady);
        const TravellingWaveSolution sol = solve_travelling_wave(bvp);
        if (sol.multiple_roots()) err << "warning: several velocity roots at q0 = " << ref.q0 << "\n";
        const std::string tag = ref.q0 == 1e10 ? "1e10" : "5e10";
        write_table(p, "tw_profile_q0_" + tag + ".csv", art::tw_profile(sol, spec));
        const double Ts = kirchhoff_inverse(spec, Phase::liquid, sol.u_s);
        summary.rows.push_back({art::number(ref.q0), art::number(sol.mu), art::number(ref.mu), art::number(sol.delta),
                                art::number(ref.delta), art::number((sol.mu - ref.mu) / ref.mu),
                                art::number((sol.delta - ref.delta) / ref.delta), art::number(Ts)});
        out << "q0 = " << fmt("%.0e", ref.q0) << ": mu = " << fmt("%.4f", sol.mu) << " m/s (ref "
            << fmt("%.2f", ref.mu) << "), delta = " << fmt("%.4e", sol.delta) << " m (ref "
            << fmt("%.2e", ref.delta) << ")\n";
    }
    write_table(p, "reproduce_summary.csv", summary);
    return ok;
}

bool is_table2_scenario(const std::string& s) {
    const std::string prefix = "table2-case-";
    if (s.rfind(prefix, 0) != 0 || s.size() != prefix.size() + 1) return false;
    const char d = s.back();
    return d >= '1' && d <= '8';
}

void validate_config(const RunConfig& c) {
    static const char* commands[] = {"solve-tw", "solve-ss", "check", "verify-fd", "reproduce-paper"};
    if (std::find(std::begin(commands), std::end(commands), c.command) == std::end(commands))
        throw ConfigError("unknown command '" + c.command + "'");
    if (c.command == "check") {
        if (c.scenario != "rod" && c.scenario != "stefan" && !is_table2_scenario(c.scenario))
            throw ConfigError("unknown check scenario '" + c.scenario + "' (rod | stefan | table2-case-1..8)");
        if (c.scenario == "rod" && c.k == 0.0) throw ConfigError("--k must be nonzero");
        if (c.scenario == "stefan" && c.stefan_form != "steady" && c.stefan_form != "inverse-sqrt" &&
            c.stefan_form != "explicit-time")
            throw ConfigError("unknown stefan form '" + c.stefan_form + "'");
    }
    if (c.command == "verify-fd") {
        if (c.oracle != "tw" && c.oracle != "ss") throw ConfigError("--oracle must be tw or ss");
        if (c.grids.empty()) throw ConfigError("--grids needs at least one size");
        for (int n : c.grids)
            if (n < 3) throw ConfigError("grid sizes must be at least 3");
        if (!(c.cfl > 0.0 && c.cfl <= 0.4)) throw ConfigError("--cfl must lie in (0, 0.4]");
        if (!(c.travel > 0.0)) throw ConfigError("--travel must be positive");
        if (!(c.t0 > 0.0 && c.t_end > c.t0)) throw ConfigError("need 0 < --t0 < --t-end");
        if (c.snapshot_interval < 0.0) throw ConfigError("--snapshot-interval must be non-negative");
    }
    if (c.command == "solve-ss" && !(c.ss_tolerance > 0.0 && c.tail_widths > 0.0))
        throw ConfigError("--tolerance and --tail-widths must be positive");
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    Prepared p;
    try {
        validate_config(c);
        p = prepare(c, c.command != "check");
    } catch (const Error& e) {
        err << "config error: " << e.what() << "\n";
        return config_error;
    }
    try {
        if (c.command == "solve-tw") return solve_tw(c, p, out, err);
        if (c.command == "solve-ss") return solve_ss(c, p, out, err);
        if (c.command == "check") return check(c, p, out, err);
        if (c.command == "verify-fd") return verify_fd(c, p, out, err);
        return reproduce(c, p, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return not_converged;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return not_converged;
    }
}

Parsed parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    std::vector<std::string> sets;
    double q0 = 0.0;

    CLI::App app{"Two-phase laser melting: travelling-wave and self-similar solvers, symmetry checks and a "
                 "finite-difference oracle. All quantities SI."};
    app.require_subcommand(1, 1);

    auto* tw = app.add_subcommand("solve-tw", "Travelling wave for a steady flux; writes tw_profile.csv, tw_summary.csv");
    add_common(tw, c, sets);
    tw->add_option("--q0", q0, "Pulse power density, W/m^2");

    auto* ss = app.add_subcommand("solve-ss", "Similarity solution for a flux decaying as t^-1/2; writes ss_profile.csv, ss_summary.csv");
    add_common(ss, c, sets);
    ss->add_option("--q0", q0, "Pulse power density scale, W/m^2 (the flux decays as 1/sqrt(t), t in s)");
    ss->add_option("--tolerance", c.ss_tolerance, "Shooting tolerance on normalised residuals, dimensionless");
    ss->add_option("--tail-widths", c.tail_widths, "Solid tail length in units of sqrt(2 d2(v_inf)), dimensionless");

    auto* ck = app.add_subcommand("check", "Symmetry classification; writes check_report.txt, check_residuals.csv");
    add_common(ck, c, sets);
    ck->add_option("scenario", c.scenario, "rod | stefan | table2-case-N (N = 1..8)")->required();
    ck->add_option("--k", c.k, "Rod conductivity exponent k in (u^k u_x)_x, dimensionless");
    ck->add_option("--gamma", c.gamma, "Rod flux angular frequency, inverse nondimensional time");
    ck->add_option("--q0", q0, "Rod flux amplitude, nondimensional flux units");
    ck->add_option("--form", c.stefan_form, "Stefan flux/evaporation time law: steady | inverse-sqrt | explicit-time");

    auto* fd = app.add_subcommand("verify-fd", "Finite-difference cross-check; writes fd_convergence.csv, fd_report.txt");
    add_common(fd, c, sets);
    fd->add_option("--q0", q0, "Pulse power density, W/m^2");
    fd->add_option("--oracle", c.oracle, "tw (travelling wave) | ss (similarity solution)");
    fd->add_option("--grids", c.grids, "Liquid cell counts, dimensionless (solid uses 4x)")->delimiter(',');
    fd->add_option("--cfl", c.cfl, "Diffusive CFL factor dt d / dx^2, dimensionless, at most 0.4");
    fd->add_option("--travel", c.travel, "tw run length as front travel in liquid thicknesses, dimensionless");
    fd->add_option("--t0", c.t0, "ss start time, s");
    fd->add_option("--t-end", c.t_end, "ss end time, s");
    fd->add_option("--snapshot-interval", c.snapshot_interval,
                   "Snapshot spacing on the finest grid, s; 0 disables fd_snapshots.csv");

    auto* rp = app.add_subcommand("reproduce-paper",
                                  "Aluminium at q0 = 1e10 and 5e10 W/m^2: reproduce_summary.csv and profile CSVs");
    add_common(rp, c, sets);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return {std::nullopt, ok};
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return {std::nullopt, ok};
    } catch (const CLI::ParseError& e) {
        // Subcommand help requests arrive here as well.
        std::ostringstream o, er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return {std::nullopt, code == 0 ? ok : config_error};
    }

    for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
    const auto* sub = app.get_subcommand(c.command);
    if (const auto* opt = sub->get_option_no_throw("--q0"); opt && opt->count()) c.q0 = q0;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            err << "config error: --set expects KEY=VALUE, got '" << s << "'\n";
            return {std::nullopt, config_error};
        }
        try {
            std::size_t used = 0;
            const std::string value = s.substr(eq + 1);
            const double v = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
            c.overrides.emplace_back(s.substr(0, eq), v);
        } catch (const std::exception&) {
            err << "config error: --set value is not a number in '" << s << "'\n";
            return {std::nullopt, config_error};
        }
    }
    return {c, ok};
}

int main(int argc, const char* const* argv) {
    const Parsed parsed = parse_args(argc, argv, std::cout, std::cerr);
    if (!parsed.config) return parsed.exit_code;
    return run(*parsed.config, std::cout, std::cerr);
}

}  // namespace stefanlie::cli
