#include "stefanlie/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "stefanlie/errors.hpp"

namespace stefanlie::artifacts {

std::string_view tool_version() { return STEFANLIE_VERSION; }

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.14e", value);
    // snprintf honours LC_NUMERIC; normalise any decimal comma.
    for (char* p = buf; *p; ++p)
        if (*p == ',') *p = '.';
    return buf;
}

std::string header_line(const std::string& config_hash) {
    return "# stefanlie " + std::string(tool_version()) + " config=" + config_hash + "\n";
}

std::string render_csv(const Table& table, const std::string& config_hash) {
    std::string out = header_line(config_hash);
    for (const auto& note : table.notes) out += "# " + note + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
        out += "\n";
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    f << body;
    if (!f) throw Error("failed writing " + path.string());
}

Table tw_profile(const TravellingWaveSolution& sol, const MaterialSpec& spec, int liquid_points, int solid_points,
                 double tail_lengths) {
    Table t;
    t.columns = {"xi_m", "eta", "phase", "T_K", "u_or_v_Jm3"};
    const auto add = [&](double eta) {
        const double xi = xi_of_eta(sol, eta);
        const EnthalpyValue e = profile_enthalpy(sol, xi);
        t.rows.push_back({number(xi), number(eta), to_string(e.phase), number(kirchhoff_inverse(spec, e.phase, e.enthalpy)),
                          number(e.enthalpy)});
    };
    for (int i = 0; i < liquid_points; ++i) add(sol.delta_star * i / (liquid_points - 1));
    const double tail = tail_lengths / sol.mu;
    for (int j = 1; j <= solid_points; ++j) add(sol.delta_star + tail * j / solid_points);
    return t;
}

Table tw_summary(const TravellingWaveSolution& sol) {
    Table t;
    t.columns = {"mu", "delta", "delta_star", "u_s", "residual"};
    t.rows.push_back({number(sol.mu), number(sol.delta), number(sol.delta_star), number(sol.u_s), number(sol.residual)});
    if (sol.multiple_roots())
        t.notes.push_back("warning: velocity equation has " + std::to_string(sol.sign_changes) +
                          " sign changes; the smallest root is reported");
    return t;
}

Table ss_profile(const SelfSimilarSolution& sol, const MaterialSpec& spec, int liquid_points, int solid_points) {
    Table t;
    t.columns = {"omega", "phase", "w_Jm3", "T_K"};
    const auto add = [&](double omega, Phase phase, double w) {
        t.rows.push_back({number(omega), to_string(phase), number(w), number(kirchhoff_inverse(spec, phase, w))});
    };
    for (int i = 0; i < liquid_points; ++i) {
        const double w = sol.omega1 + (sol.omega2 - sol.omega1) * i / (liquid_points - 1);
        add(w, Phase::liquid, sol.u_profile.value(w));
    }
    for (int j = 1; j <= solid_points; ++j) {
        const double w = sol.omega2 + (sol.omega_max - sol.omega2) * j / solid_points;
        add(w, Phase::solid, sol.v_profile.value(w));
    }
    return t;
}

Table ss_summary(const SelfSimilarSolution& sol) {
    Table t;
    t.columns = {"omega1", "omega2", "bc_residual"};
    t.rows.push_back({number(sol.omega1), number(sol.omega2), number(sol.bc_residual)});
    return t;
}

Table snapshots(const std::vector<Snapshot>& snaps, const MaterialSpec& spec) {
    Table t;
    t.columns = {"t", "s1", "s2", "phase", "x", "T"};
    for (const auto& s : snaps)
        for (std::size_t i = 0; i < s.x.size(); ++i)
            t.rows.push_back({number(s.t), number(s.s1), number(s.s2), to_string(s.phase[i]), number(s.x[i]),
                              number(kirchhoff_inverse(spec, s.phase[i], s.enthalpy[i]))});
    return t;
}

Table residuals(const std::vector<InvarianceReport>& reports) {
    Table t;
    t.columns = {"family", "item", "condition", "eps", "residual"};
    for (const auto& rep : reports)
        for (const auto& r : rep.records()) {
            std::string cond = r.condition;
            for (char& c : cond)
                if (c == ',') c = ';';
            t.rows.push_back({r.family, r.item, cond, number(r.eps), number(r.residual)});
        }
    return t;
}

std::string report_text(const std::vector<InvarianceReport>& reports) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-12s %-5s %-4s %-12s %s\n", "family", "item", "pass", "max_resid", "condition");
    out << line;
    for (const auto& rep : reports) {
        for (const auto& it : rep.items) {
            std::snprintf(line, sizeof line, "%-12s %-5c %-4s %-12.3e %s", rep.family.c_str(), it.item,
                          it.pass ? "yes" : "no", it.max_residual, it.condition.c_str());
            out << line;
            if (!it.note.empty()) out << "  [" << it.note << "]";
            out << "\n";
        }
        out << rep.family << ": " << (rep.pass ? "invariant" : "not invariant") << "  (" << rep.generator << ")\n";
        for (const auto& c : rep.constraints) out << "  requires " << c << "\n";
    }
    return out.str();
}

}  // namespace stefanlie::artifacts
