// JSON and CSV interchange formats
#pragma once

#include <pendulum_vib/dynamics.hpp>
#include <pendulum_vib/errors.hpp>
#include <pendulum_vib/excitation.hpp>
#include <pendulum_vib/portrait.hpp>
#include <pendulum_vib/potential.hpp>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace pendulum_vib::io {

using json = nlohmann::ordered_json;

/// Malformed or unreadable input document.
class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// =============================================================================
// Excitation
// =============================================================================

namespace detail {

inline std::vector<double> real_list(const json &j, const char *what) {
    if (!j.is_array()) {
        throw FormatError(std::string("expected an array for ") + what);
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto &v : j) {
        if (!v.is_number()) {
            throw FormatError(std::string("non-numeric coefficient in ") + what);
        }
        out.push_back(v.get<double>());
    }
    return out;
}

inline HarmonicSeries series_from_json(const json &doc, const char *axis) {
    HarmonicSeries hs;
    if (!doc.contains(axis)) {
        return hs;
    }
    const json &j = doc.at(axis);
    if (!j.is_object()) {
        throw FormatError(std::string("axis '") + axis + "' must be an object");
    }
    for (const auto &[key, _] : j.items()) {
        if (key != "cos" && key != "sin") {
            throw FormatError(std::string("unknown key '") + key + "' in axis '" + axis + "'");
        }
    }
    if (j.contains("cos")) {
        hs.cos_coeffs = real_list(j.at("cos"), axis);
    }
    if (j.contains("sin")) {
        hs.sin_coeffs = real_list(j.at("sin"), axis);
    }
    return hs;
}

inline json series_to_json(const HarmonicSeries &hs) {
    return json{{"cos", hs.cos_coeffs}, {"sin", hs.sin_coeffs}};
}

} // namespace detail

/// { "epsilon": r, "omega": r, "tau": {"cos": [...], "sin": [...]},
///   "eta": {...}, "xi": {...} }. Missing axes are zero series.
inline Excitation excitation_from_json(const json &doc) {
    if (!doc.is_object()) {
        throw FormatError("excitation document must be a JSON object");
    }
    for (const char *key : {"epsilon", "omega"}) {
        if (!doc.contains(key) || !doc.at(key).is_number()) {
            throw FormatError(std::string("excitation requires numeric '") + key + "'");
        }
    }
    try {
        return Excitation(detail::series_from_json(doc, "tau"),
                          detail::series_from_json(doc, "eta"),
                          detail::series_from_json(doc, "xi"),
                          doc.at("epsilon").get<double>(), doc.at("omega").get<double>());
    } catch (const ParameterError &ex) {
        throw FormatError(ex.what());
    }
}

inline json excitation_to_json(const Excitation &e) {
    return json{{"epsilon", e.epsilon()},
                {"omega", e.omega()},
                {"tau", detail::series_to_json(e.tau())},
                {"eta", detail::series_to_json(e.eta())},
                {"xi", detail::series_to_json(e.xi())}};
}

inline json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &ex) {
        throw FormatError("invalid JSON in '" + path + "': " + ex.what());
    }
}

inline Excitation read_excitation(const std::string &path) {
    return excitation_from_json(read_json_file(path));
}

// =============================================================================
// Results
// =============================================================================

inline json to_json(const MomentMatrix &mm) {
    json rows = json::array();
    for (const auto &row : mm.m) {
        rows.push_back(json(row));
    }
    return rows;
}

inline json to_json(const SymmetryReport &r) {
    return json{{"passed", r.passed},
                {"tol", r.tol},
                {"diag_residual", r.diag_residual},
                {"tau_eta", r.tau_eta},
                {"tau_xi", r.tau_xi},
                {"eta_xi", r.eta_xi}};
}

inline json to_json(const AveragedParams &ap) {
    return json{{"A", ap.A}, {"B", ap.B}, {"C", ap.C}, {"a_minus_c", ap.a_minus_c()}};
}

inline json to_json(const Equilibrium &eq) {
    return json{{"phi", eq.phi},
                {"kind", std::string(to_string(eq.kind))},
                {"v", eq.v_value},
                {"d2v", eq.second_derivative}};
}

/// { "params": {...}, "equilibria": [...], "domain": "I|II|boundary" }.
/// The domain is omitted when B = 0, where no domain is defined.
inline json equilibria_report(const AveragedParams &ap, const std::vector<Equilibrium> &eqs,
                              const std::optional<DomainLabel> &domain) {
    json j;
    j["params"] = to_json(ap);
    json arr = json::array();
    for (const auto &eq : eqs) {
        arr.push_back(to_json(eq));
    }
    j["equilibria"] = std::move(arr);
    if (domain) {
        j["domain"] = std::string(to_string(*domain));
    }
    return j;
}

/// { "epsilons": [...], "max_err_phi": [...], "max_err_p_phi": [...],
///   "p_alpha_drift": [...] }
inline json comparison_report(const std::vector<ComparisonReport> &reports) {
    json j;
    json eps = json::array(), ephi = json::array(), ep = json::array(), drift = json::array();
    for (const auto &r : reports) {
        eps.push_back(r.epsilon);
        ephi.push_back(r.max_err_phi);
        ep.push_back(r.max_err_p_phi);
        drift.push_back(r.p_alpha_drift);
    }
    j["epsilons"] = std::move(eps);
    j["max_err_phi"] = std::move(ephi);
    j["max_err_p_phi"] = std::move(ep);
    j["p_alpha_drift"] = std::move(drift);
    return j;
}

inline std::string dump(const json &j) { return j.dump(2) + "\n"; }

// =============================================================================
// CSV
// =============================================================================

namespace detail {

/// Shortest representation that round-trips through strtod.
inline std::string num(double v) {
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) {
            break;
        }
    }
    return buf;
}

} // namespace detail

inline std::string trajectory_csv(const FullTrajectory &traj) {
    std::ostringstream os;
    os << "t,phi,alpha,p_phi,p_alpha\n";
    for (const auto &s : traj) {
        os << detail::num(s.t) << ',' << detail::num(s.y[0]) << ',' << detail::num(s.y[1])
           << ',' << detail::num(s.y[2]) << ',' << detail::num(s.y[3]) << '\n';
    }
    return os.str();
}

inline std::string gamma_csv(const std::vector<GammaPoint> &pts) {
    std::ostringstream os;
    os << "phi,a_minus_c,b\n";
    for (const auto &gp : pts) {
        os << detail::num(gp.phi) << ',' << detail::num(gp.a_minus_c) << ','
           << detail::num(gp.b) << '\n';
    }
    return os.str();
}

/// Header row of p_φ values, then one row per φ: φ followed by H̄ values.
inline std::string grid_csv(const PortraitGrid &g) {
    std::ostringstream os;
    os << "phi\\p_phi";
    for (double p : g.p) {
        os << ',' << detail::num(p);
    }
    os << '\n';
    for (std::size_t i = 0; i < g.nx; ++i) {
        os << detail::num(g.phi[i]);
        for (std::size_t j = 0; j < g.ny; ++j) {
            os << ',' << detail::num(g.value(i, j));
        }
        os << '\n';
    }
    return os.str();
}

/// level,polyline_id,phi,p_phi with polyline ids numbered across all levels.
inline std::string contours_csv(const std::vector<LevelContours> &contours) {
    std::ostringstream os;
    os << "level,polyline_id,phi,p_phi\n";
    std::size_t id = 0;
    for (const auto &lc : contours) {
        for (const auto &pl : lc.polylines) {
            for (const auto &pt : pl.points) {
                os << detail::num(lc.level) << ',' << id << ',' << detail::num(pt.phi) << ','
                   << detail::num(pt.p_phi) << '\n';
            }
            ++id;
        }
    }
    return os.str();
}

inline void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FormatError("cannot write '" + path + "'");
    }
    out << content;
    if (!out) {
        throw FormatError("write failed for '" + path + "'");
    }
}

} // namespace pendulum_vib::io
