// pendulum-vib: command-line front end
//
// Exit codes: 0 success, 1 input or I/O failure, 2 scientific check failure.

#include <pendulum_vib/io.hpp>
#include <pendulum_vib/pendulum_vib.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
namespace pv = pendulum_vib;
using pv::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitScience = 2;

constexpr double kRatioLo = 1.4;
constexpr double kRatioHi = 3.5;
// Errors below these floors are integration noise; ratios between them carry
// no convergence information.
constexpr double kErrorFloor = 1e-8;
constexpr double kDriftFloor = 1e-12;

/// Thrown for malformed command-line values; maps to exit code 1.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_reals(const std::string &text, const char *what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception &) {
            throw InputError(std::string("cannot parse '") + item + "' in " + what);
        }
    }
    return out;
}

pv::PhysicalParams parse_phys(const std::string &text) {
    if (text.empty()) {
        return {};
    }
    const auto v = parse_reals(text, "--phys");
    if (v.size() != 3) {
        throw InputError("--phys expects m,l,g");
    }
    pv::PhysicalParams p{v[0], v[1], v[2]};
    try {
        p.validate();
    } catch (const pv::ParameterError &ex) {
        throw InputError(ex.what());
    }
    return p;
}

std::size_t thread_cap() {
    std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("PENDULUM_VIB_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) {
                cap = static_cast<std::size_t>(v);
            }
        } catch (const std::exception &) {
        }
    }
    return cap;
}

/// Runs body(i) for i in [0, n) on at most PENDULUM_VIB_THREADS threads.
/// Results must be written to per-index slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body) {
    const std::size_t workers = std::min(thread_cap(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < n; i = next++) {
                    body(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

void emit(const std::string &content, const std::string &out_path) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        pv::io::write_file(out_path, content);
    }
}

// =============================================================================
// Shared option groups
// =============================================================================

struct ParamOptions {
    std::optional<double> a_minus_c;
    std::optional<double> b;
    std::string excitation;
    double p_alpha = 0.0;
    std::string phys;

    void add_to(CLI::App *cmd) {
        cmd->add_option("--a-minus-c", a_minus_c, "Dimensionless A - C");
        cmd->add_option("--b", b, "Dimensionless B = p_alpha^2 (>= 0)");
        cmd->add_option("--excitation", excitation,
                        "Excitation JSON; derives A and C from its moments");
        cmd->add_option("--p-alpha", p_alpha, "Azimuthal momentum (with --excitation)");
        cmd->add_option("--phys", phys, "Physical parameters m,l,g");
    }

    pv::AveragedParams resolve() const {
        if (!excitation.empty()) {
            if (a_minus_c || b) {
                throw InputError("use either --excitation or --a-minus-c/--b, not both");
            }
            const auto e = pv::io::read_excitation(excitation);
            const auto mm = pv::velocity_moments(e);
            const auto sym = pv::check_symmetry(mm);
            if (!sym.passed) {
                throw InputError("excitation violates the symmetry conditions; "
                                 "the reduced potential is undefined");
            }
            return pv::nondimensionalize(mm, p_alpha, parse_phys(phys));
        }
        if (!a_minus_c || !b) {
            throw InputError("--a-minus-c and --b are required (or --excitation)");
        }
        try {
            return pv::AveragedParams::from_difference(*a_minus_c, *b);
        } catch (const pv::ParameterError &ex) {
            throw InputError(ex.what());
        }
    }
};

// =============================================================================
// Commands
// =============================================================================

struct MomentsCmd {
    std::string excitation;
    double p_alpha = 0.0;
    std::string phys;
    double tol = pv::kDefaultSymmetryTol;

    int run() const {
        if (!(tol > 0.0)) {
            throw InputError("--tol must be positive");
        }
        const auto e = pv::io::read_excitation(excitation);
        const auto mm = pv::velocity_moments(e);
        const auto sym = pv::check_symmetry(mm, tol);
        const auto ap = pv::nondimensionalize(mm, p_alpha, parse_phys(phys));
        json j;
        j["moments"] = pv::io::to_json(mm);
        j["averaged_params"] = pv::io::to_json(ap);
        j["symmetry"] = pv::io::to_json(sym);
        std::cout << pv::io::dump(j);
        return sym.passed ? kExitOk : kExitScience;
    }
};

struct EquilibriaCmd {
    ParamOptions params;
    std::string out;

    int run() const {
        const auto ap = params.resolve();
        const auto eqs = pv::find_equilibria(ap);
        std::optional<pv::DomainLabel> domain;
        if (ap.B > 0.0) {
            domain = pv::classify_domain(ap);
        }
        emit(pv::io::dump(pv::io::equilibria_report(ap, eqs, domain)), out);
        return kExitOk;
    }
};

struct CurveCmd {
    std::size_t samples = 500;
    double offset = 1e-3;
    std::string out;

    int run() const {
        if (samples == 0 || !(offset > 0.0) || !(offset < 0.5 * std::numbers::pi)) {
            throw InputError("--samples must be positive and --offset in (0, pi/2)");
        }
        const auto phis = pv::gamma_parameter_grid(samples, offset);
        emit(pv::io::gamma_csv(pv::gamma_curve(phis)), out);
        return kExitOk;
    }
};

struct DomainCmd {
    ParamOptions params;
    bool as_json = false;

    int run() const {
        const auto ap = params.resolve();
        if (!(ap.B > 0.0)) {
            throw InputError("domain classification requires B > 0");
        }
        const auto label = pv::classify_domain(ap);
        if (as_json) {
            std::cout << pv::io::dump(
                pv::io::equilibria_report(ap, pv::find_equilibria(ap), label));
        } else {
            std::cout << pv::to_string(label) << "\n";
        }
        return kExitOk;
    }
};

void write_portrait(const pv::AveragedParams &ap, std::size_t nx, std::size_t ny,
                    std::optional<double> p_max, const fs::path &dir, std::ostream &log) {
    fs::create_directories(dir);
    const double pm = p_max.value_or(pv::default_p_max(ap, nx));
    const auto grid = pv::build_grid(ap, nx, ny, pm);
    const auto contours = pv::extract_contours(grid);
    pv::io::write_file((dir / "grid.csv").string(), pv::io::grid_csv(grid));
    pv::io::write_file((dir / "contours.csv").string(), pv::io::contours_csv(contours));
    pv::io::write_file((dir / "portrait.svg").string(), pv::render_svg(grid, contours));
    log << "A-C = " << ap.a_minus_c() << ", B = " << ap.B << ": "
        << grid.equilibria.size() << " equilibria\n";
    for (const auto &eq : grid.equilibria) {
        log << "  phi = " << eq.phi << "  " << pv::to_string(eq.kind) << "  V = " << eq.v_value
            << "\n";
    }
    if (grid.separatrix_level) {
        log << "  separatrix level " << *grid.separatrix_level << "\n";
    }
}

struct PortraitCmd {
    ParamOptions params;
    std::size_t nx = 512;
    std::size_t ny = 512;
    std::optional<double> p_max;
    std::string out = "portrait";

    int run() const {
        const auto ap = params.resolve();
        if (nx < 2 || ny < 2) {
            throw InputError("--nx and --ny must be at least 2");
        }
        if (p_max && !(*p_max > 0.0)) {
            throw InputError("--p-max must be positive");
        }
        write_portrait(ap, nx, ny, p_max, out, std::cout);
        return kExitOk;
    }
};

struct CompareCmd {
    std::string excitation;
    std::string eps_sweep = "0.1,0.05,0.025";
    double t_end = 10.0;
    double phi0 = 2.0;
    double alpha0 = 0.0;
    double p_phi0 = 0.0;
    double p_alpha = 0.3;
    double tol = pv::kDefaultSymmetryTol;
    std::string out;

    int run() const {
        const auto base = pv::io::read_excitation(excitation);
        const auto eps = parse_reals(eps_sweep, "--eps-sweep");
        if (eps.empty()) {
            throw InputError("--eps-sweep must not be empty");
        }
        for (std::size_t k = 0; k < eps.size(); ++k) {
            if (!(eps[k] > 0.0) || (k > 0 && !(eps[k] < eps[k - 1]))) {
                throw InputError("--eps-sweep must be positive and strictly decreasing");
            }
        }
        if (!(t_end > 0.0) || !(tol > 0.0)) {
            throw InputError("--t-end and --tol must be positive");
        }
        const auto sym = pv::check_symmetry(pv::velocity_moments(base), tol);
        if (!sym.passed) {
            json j;
            j["error"] = "excitation violates the symmetry conditions";
            j["symmetry"] = pv::io::to_json(sym);
            std::cout << pv::io::dump(j);
            return kExitInput;
        }

        const pv::FullState initial{phi0, alpha0, p_phi0, p_alpha};
        pv::ComparisonOptions opt;
        opt.symmetry_tol = tol;
        std::vector<pv::ComparisonReport> reports(eps.size());
        parallel_for(eps.size(), [&](std::size_t k) {
            reports[k] =
                pv::compare_full_averaged(base.with_epsilon(eps[k]), initial, t_end, opt);
        });

        json j = pv::io::comparison_report(reports);
        bool ok = true;
        auto ratios = [&](auto member, double floor) {
            json arr = json::array();
            for (std::size_t k = 1; k < reports.size(); ++k) {
                const double prev = reports[k - 1].*member;
                const double cur = reports[k].*member;
                if (prev < floor && cur < floor) {
                    arr.push_back(nullptr);
                    continue;
                }
                const double r = cur > 0.0 ? prev / cur : HUGE_VAL;
                if (!(r >= kRatioLo && r <= kRatioHi)) {
                    ok = false;
                }
                arr.push_back(std::isfinite(r) ? json(r) : json("inf"));
            }
            return arr;
        };
        j["ratio_phi"] = ratios(&pv::ComparisonReport::max_err_phi, kErrorFloor);
        j["ratio_p_alpha_drift"] = ratios(&pv::ComparisonReport::p_alpha_drift, kDriftFloor);
        j["band"] = json::array({kRatioLo, kRatioHi});
        j["passed"] = ok;
        emit(pv::io::dump(j), out);
        return ok ? kExitOk : kExitScience;
    }
};

struct SimulateCmd {
    std::string excitation;
    double t_end = 10.0;
    double phi0 = 2.0;
    double alpha0 = 0.0;
    double p_phi0 = 0.0;
    double p_alpha = 0.3;
    std::optional<double> step;
    bool averaged = false;
    std::string out;

    int run() const {
        const auto e = pv::io::read_excitation(excitation);
        const pv::FullState initial{phi0, alpha0, p_phi0, p_alpha};
        if (!(t_end > 0.0) || (step && !(*step > 0.0))) {
            throw InputError("--t-end and --step must be positive");
        }
        pv::FullTrajectory traj;
        if (averaged) {
            const auto mm = pv::velocity_moments(e);
            if (!pv::check_symmetry(mm).passed) {
                throw InputError("averaged flow requires a symmetric excitation");
            }
            traj = pv::integrate_averaged(pv::nondimensionalize(mm, p_alpha), initial, t_end,
                                          step.value_or(1e-3));
        } else {
            traj = pv::integrate_full(e, initial, t_end, step.value_or(e.fast_period() / 64.0));
        }
        emit(pv::io::trajectory_csv(traj), out);
        return kExitOk;
    }
};

std::string today() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[16];
    std::strftime(buf, sizeof buf, "%Y-%m-%d", &tm);
    return buf;
}

struct ReproduceCmd {
    std::string out = "reproduce";
    std::string tag;
    std::size_t nx = 512;
    std::size_t ny = 512;
    std::size_t sweep_n = 121;

    int run() const {
        if (sweep_n < 2) {
            throw InputError("--sweep-n must be at least 2");
        }
        const fs::path dir = fs::path(out) / (tag.empty() ? today() : tag);
        fs::create_directories(dir);

        const auto phis = pv::gamma_parameter_grid(500);
        pv::io::write_file((dir / "gamma.csv").string(), pv::io::gamma_csv(pv::gamma_curve(phis)));

        // Domain sweep over A - C in [-1, 5], B in (0, 0.5].
        const std::size_t n = sweep_n;
        std::vector<std::string> rows(n * n);
        parallel_for(n * n, [&](std::size_t idx) {
            const std::size_t i = idx / n;
            const std::size_t k = idx % n;
            const double amc = -1.0 + 6.0 * static_cast<double>(i) / static_cast<double>(n - 1);
            const double b = 0.5 * static_cast<double>(k + 1) / static_cast<double>(n);
            const auto ap = pv::AveragedParams::from_difference(amc, b);
            const auto eqs = pv::find_equilibria(ap);
            std::ostringstream os;
            os << pv::io::detail::num(amc) << ',' << pv::io::detail::num(b) << ','
               << pv::to_string(pv::classify_domain(ap)) << ',' << eqs.size() << '\n';
            rows[idx] = os.str();
        });
        std::string csv = "a_minus_c,b,domain,equilibria\n";
        for (const auto &r : rows) {
            csv += r;
        }
        pv::io::write_file((dir / "domains.csv").string(), csv);

        write_portrait(pv::AveragedParams::from_difference(0.0, 0.1), nx, ny, std::nullopt,
                       dir / "portrait_domain_I", std::cout);
        write_portrait(pv::AveragedParams::from_difference(3.5, 0.01), nx, ny, std::nullopt,
                       dir / "portrait_domain_II", std::cout);
        std::cout << "wrote " << dir.string() << "\n";
        return kExitOk;
    }
};

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Averaged dynamics of a spherical pendulum with a vibrating suspension point"};
    app.require_subcommand(1);

    MomentsCmd moments;
    auto *c_mom = app.add_subcommand("moments", "Velocity moments, (A, B, C) and symmetry check");
    c_mom->add_option("--excitation", moments.excitation, "Excitation JSON")->required();
    c_mom->add_option("--p-alpha", moments.p_alpha, "Azimuthal momentum");
    c_mom->add_option("--phys", moments.phys, "Physical parameters m,l,g");
    c_mom->add_option("--tol", moments.tol, "Symmetry tolerance");

    EquilibriaCmd equilibria;
    auto *c_eq = app.add_subcommand("equilibria", "Equilibria of the effective potential");
    equilibria.params.add_to(c_eq);
    c_eq->add_option("--out", equilibria.out, "Output JSON path (default stdout)");

    CurveCmd curve;
    auto *c_curve = app.add_subcommand("curve", "Critical curve of degenerate equilibria as CSV");
    c_curve->add_option("--samples", curve.samples, "Number of curve points");
    c_curve->add_option("--offset", curve.offset, "Parameter starts at pi/2 + offset");
    c_curve->add_option("--out", curve.out, "Output CSV path (default stdout)");

    DomainCmd domain;
    auto *c_dom = app.add_subcommand("domain", "Parameter-plane domain (I, II or boundary)");
    domain.params.add_to(c_dom);
    c_dom->add_flag("--json", domain.as_json, "Emit the full equilibrium report");

    PortraitCmd portrait;
    auto *c_por = app.add_subcommand("portrait", "Phase portrait grid, contours and SVG");
    portrait.params.add_to(c_por);
    c_por->add_option("--nx", portrait.nx, "Grid points along phi");
    c_por->add_option("--ny", portrait.ny, "Grid points along p_phi");
    c_por->add_option("--p-max", portrait.p_max, "Momentum half-range");
    c_por->add_option("--out", portrait.out, "Output directory");

    CompareCmd compare;
    auto *c_cmp = app.add_subcommand("compare", "Full vs averaged dynamics convergence in epsilon");
    c_cmp->add_option("--excitation", compare.excitation, "Excitation JSON")->required();
    c_cmp->add_option("--eps-sweep", compare.eps_sweep, "Strictly decreasing epsilons");
    c_cmp->add_option("--t-end", compare.t_end, "Time horizon");
    c_cmp->add_option("--phi0", compare.phi0, "Initial phi");
    c_cmp->add_option("--alpha0", compare.alpha0, "Initial alpha");
    c_cmp->add_option("--p-phi0", compare.p_phi0, "Initial p_phi");
    c_cmp->add_option("--p-alpha", compare.p_alpha, "Initial p_alpha");
    c_cmp->add_option("--tol", compare.tol, "Symmetry tolerance");
    c_cmp->add_option("--out", compare.out, "Output JSON path (default stdout)");

    SimulateCmd simulate;
    auto *c_sim = app.add_subcommand("simulate", "Integrate one trajectory to CSV");
    c_sim->add_option("--excitation", simulate.excitation, "Excitation JSON")->required();
    c_sim->add_option("--t-end", simulate.t_end, "Time horizon");
    c_sim->add_option("--phi0", simulate.phi0, "Initial phi");
    c_sim->add_option("--alpha0", simulate.alpha0, "Initial alpha");
    c_sim->add_option("--p-phi0", simulate.p_phi0, "Initial p_phi");
    c_sim->add_option("--p-alpha", simulate.p_alpha, "Initial p_alpha");
    c_sim->add_option("--step", simulate.step, "Step size");
    c_sim->add_flag("--averaged", simulate.averaged, "Integrate the reduced averaged flow");
    c_sim->add_option("--out", simulate.out, "Output CSV path (default stdout)");

    ReproduceCmd reproduce;
    auto *c_rep = app.add_subcommand("reproduce", "Critical curve, domain sweep and two portraits");
    c_rep->add_option("--out", reproduce.out, "Base output directory");
    c_rep->add_option("--tag", reproduce.tag, "Subdirectory name (default: UTC date)");
    c_rep->add_option("--nx", reproduce.nx, "Portrait grid points along phi");
    c_rep->add_option("--ny", reproduce.ny, "Portrait grid points along p_phi");
    c_rep->add_option("--sweep-n", reproduce.sweep_n, "Domain sweep points per axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (c_mom->parsed()) return moments.run();
        if (c_eq->parsed()) return equilibria.run();
        if (c_curve->parsed()) return curve.run();
        if (c_dom->parsed()) return domain.run();
        if (c_por->parsed()) return portrait.run();
        if (c_cmp->parsed()) return compare.run();
        if (c_sim->parsed()) return simulate.run();
        if (c_rep->parsed()) return reproduce.run();
    } catch (const pv::InconsistentCountError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitScience;
    } catch (const pv::SymmetryError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
