#include "spinflip/cli.hpp"

#include "spinflip/bmt_classical.hpp"
#include "spinflip/dirac_pauli.hpp"
#include "spinflip/superposition.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

namespace spinflip::cli
{
namespace
{

using nlohmann::json;

constexpr double kHbar = 1.054571817e-34; // J s
constexpr double kNormTolerance = 1e-9;

/// Raised when an output file cannot be written.
struct IoFailure : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

OrientationKind parse_orientation(const std::string& s)
{
    static const std::map<std::string, OrientationKind> names{
        {"x", OrientationKind::x},
        {"y", OrientationKind::y},
        {"z", OrientationKind::z},
        {"momentum", OrientationKind::momentum},
        {"custom", OrientationKind::custom},
    };
    const auto it = names.find(s);
    if (it == names.end()) throw InvalidArgument("unknown orientation '" + s + "'");
    return it->second;
}

OutputFormat parse_format(const std::string& s)
{
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    if (s == "table") return OutputFormat::table;
    throw InvalidArgument("unknown output format '" + s + "'");
}

/// Validated physics objects derived from a RunConfig.
struct Setup
{
    Kinematics kin;
    FieldCoupling coupling;
    Sign sign{Sign::plus};
};

Setup make_setup(const RunConfig& cfg)
{
    Setup s;
    s.kin = make_kinematics(cfg.beta, deg2rad(cfg.alpha_deg));
    s.sign = make_sign(cfg.sign);
    s.coupling = make_coupling(cfg.coupling_S, s.sign);
    if (cfg.periods <= 0.0) throw InvalidArgument("periods must be > 0");
    if (cfg.samples_per_period < 16) throw InvalidArgument("samples-per-period must be >= 16");
    if (cfg.steps_per_period < 200) throw InvalidArgument("steps-per-period must be >= 200");
    if (!(cfg.omega_scale > 0.0)) throw InvalidArgument("omega-scale must be > 0");
    if (cfg.physical && !(cfg.mu > 0.0 && cfg.field > 0.0))
        throw InvalidArgument("--physical needs --mu > 0 and --field > 0");
    return s;
}

SpinSuperposition make_state(const RunConfig& cfg, const Setup& s)
{
    switch (cfg.orientation) {
    case OrientationKind::x: return initial_amplitudes_closed(Axis::x, s.sign, s.kin);
    case OrientationKind::y: return initial_amplitudes_closed(Axis::y, s.sign, s.kin);
    case OrientationKind::z: return initial_amplitudes_closed(Axis::z, s.sign, s.kin);
    case OrientationKind::momentum:
        return initial_amplitudes_general(SpinAxis::along_motion(s.kin), s.sign, s.kin);
    case OrientationKind::custom:
        return initial_amplitudes_general(
            SpinAxis::from_angles(deg2rad(cfg.theta_deg), deg2rad(cfg.phi_deg)), s.sign, s.kin);
    }
    throw InvalidArgument("unknown orientation");
}

std::vector<double> make_grid(const RunConfig& cfg, const Setup& s)
{
    return make_time_grid(precession_frequency(s.kin, Sign::plus), cfg.periods,
                          cfg.samples_per_period);
}

double time_unit(const RunConfig& cfg)
{
    return cfg.physical ? kHbar / (2.0 * cfg.mu * cfg.field) : 1.0;
}

RunParams echo(const RunConfig& cfg, const Setup& s)
{
    RunParams p;
    p.beta = cfg.beta;
    p.alpha = s.kin.alpha;
    p.coupling_S = cfg.coupling_S;
    p.zeta = cfg.sign;
    p.epsilon = cfg.sign;
    p.orientation = orientation_name(cfg.orientation);
    p.periods = cfg.periods;
    p.samples_per_period = cfg.samples_per_period;
    return p;
}

struct ClassicalRun
{
    PrecessionTrajectory traj;
    PolarizationHistory history;
};

ClassicalRun run_classical(const RunConfig& cfg, const Setup& s, const SpinSuperposition& sup,
                           const std::vector<double>& grid)
{
    const RestSpin s0 = map_pi_to_rest(expectation_at(sup, s.kin, 0.0), s.kin);
    PrecessionVector omega = omega_vector(s.kin);
    omega.omega *= cfg.omega_scale;
    IntegratorOptions opts;
    opts.steps_per_period = cfg.steps_per_period;
    ClassicalRun r;
    r.traj = integrate(s0, omega, s.kin, grid, opts);
    r.history = to_history(r.traj, s.kin);
    return r;
}

/// Writes to --output when given, else to the command's stream.
class Sink
{
  public:
    Sink(const std::string& path, std::ostream& fallback) : path_(path), fallback_(fallback) {}

    void write(const std::string& text)
    {
        if (path_.empty()) {
            fallback_ << text;
            return;
        }
        std::ofstream f(path_, std::ios::binary);
        if (!f) throw IoFailure("cannot open '" + path_ + "' for writing");
        f << text;
        if (!f) throw IoFailure("failed writing '" + path_ + "'");
    }

  private:
    std::string path_;
    std::ostream& fallback_;
};

std::string history_csv(const PolarizationHistory& h, double t_unit)
{
    std::string out = "t,pi_x,pi_y,pi_z,beta_pi,invariant\n";
    for (std::size_t k = 0; k < h.size(); ++k) {
        out += fmt17(h.t[k] * t_unit) + ',' + fmt17(h.pi_x[k]) + ',' + fmt17(h.pi_y[k]) + ',' +
               fmt17(h.pi_z[k]) + ',' + fmt17(h.beta_pi[k]) + ',' + fmt17(h.invariant[k]) + '\n';
    }
    return out;
}

json history_json(const PolarizationHistory& h, double t_unit, const RunParams& p)
{
    std::vector<double> t(h.t);
    for (double& v : t) v *= t_unit;
    return {{"schema", "spinflip.history/1"},
            {"params",
             {{"beta", p.beta},
              {"alpha", p.alpha},
              {"coupling_S", p.coupling_S},
              {"epsilon", p.epsilon},
              {"orientation", p.orientation},
              {"periods", p.periods},
              {"samples_per_period", p.samples_per_period}}},
            {"t", t},
            {"pi_x", h.pi_x},
            {"pi_y", h.pi_y},
            {"pi_z", h.pi_z},
            {"beta_pi", h.beta_pi},
            {"invariant", h.invariant}};
}

std::string trajectory_csv(const PrecessionTrajectory& tr, const PolarizationHistory& h,
                           double t_unit)
{
    std::string out =
        "t,bmt_s_x,bmt_s_y,bmt_s_z,bmt_pi_x,bmt_pi_y,bmt_pi_z,bmt_beta_pi,bmt_invariant\n";
    for (std::size_t k = 0; k < tr.size(); ++k) {
        out += fmt17(tr.t[k] * t_unit);
        for (int i = 0; i < 3; ++i) out += ',' + fmt17(tr.s[k][i]);
        for (int i = 0; i < 3; ++i) out += ',' + fmt17(tr.pi[k][i]);
        out += ',' + fmt17(tr.beta_pi[k]) + ',' + fmt17(h.invariant[k]) + '\n';
    }
    return out;
}

double max_invariant_error(const PolarizationHistory& h)
{
    double e = 0.0;
    for (double v : h.invariant) e = std::max(e, std::abs(v - 1.0));
    return e;
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_eigenstate(const RunConfig& cfg, OutputFormat fmt, Sink& sink)
{
    const Setup s = make_setup(cfg);
    const Spinor4 psi = spin_coefficients(s.sign, s.kin);
    const Spinor4 other = spin_coefficients(flip(s.sign), s.kin);
    const double eigenvalue = value(s.sign) * s.kin.q;
    const PiMatrix pz = pi_component_matrix(SpinAxis::z(), s.kin);
    const double residual = (pz.m * psi.c - eigenvalue * psi.c).norm();
    const double norm_error = std::abs(psi.norm_squared() - 1.0);
    const double overlap = std::abs(other.c.dot(psi.c));

    const MatrixElementTable closed = closed_form_matrix_elements(s.kin, s.sign);
    const MatrixElementTable oracle = numeric_matrix_elements(s.kin, s.sign);
    static const char* labels[6] = {"<z|Pi_x|z>",  "<-z|Pi_x|z>", "<z|Pi_y|z>",
                                    "<-z|Pi_y|z>", "<z|Pi_z|z>",  "<-z|Pi_z|z>"};
    Complex cv[6], ov[6];
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
        cv[2 * k] = closed.diag(k);
        cv[2 * k + 1] = closed.cross(k);
        ov[2 * k] = oracle.diag(k);
        ov[2 * k + 1] = oracle.cross(k);
    }
    for (int i = 0; i < 6; ++i) worst = std::max(worst, std::abs(cv[i] - ov[i]));

    const double tol = cfg.audit_tolerance;
    const bool pass = residual < tol && norm_error < tol && overlap < tol && worst < tol;

    if (fmt == OutputFormat::json) {
        json j;
        j["schema"] = "spinflip.eigenstate/1";
        j["params"] = {{"beta", cfg.beta}, {"alpha", s.kin.alpha}, {"zeta", cfg.sign}};
        j["spinor"] = json::array();
        for (int i = 0; i < 4; ++i) j["spinor"].push_back({psi.c[i].real(), psi.c[i].imag()});
        j["eigenvalue"] = eigenvalue;
        j["residual"] = residual;
        j["norm_error"] = norm_error;
        j["orthogonality_error"] = overlap;
        j["elements"] = json::array();
        for (int i = 0; i < 6; ++i) {
            j["elements"].push_back({{"name", labels[i]},
                                     {"closed", {cv[i].real(), cv[i].imag()}},
                                     {"oracle", {ov[i].real(), ov[i].imag()}},
                                     {"abs_diff", std::abs(cv[i] - ov[i])}});
        }
        j["tolerance"] = tol;
        j["pass"] = pass;
        sink.write(j.dump(2) + "\n");
    } else {
        std::ostringstream o;
        char line[200];
        std::snprintf(line, sizeof line, "eigenstate zeta=%+d beta=%.17g alpha=%.17g rad\n",
                      cfg.sign, cfg.beta, s.kin.alpha);
        o << line;
        for (int i = 0; i < 4; ++i) {
            std::snprintf(line, sizeof line, "c%d = %.17g %+.17gi\n", i + 1, psi.c[i].real(),
                          psi.c[i].imag());
            o << line;
        }
        std::snprintf(line, sizeof line,
                      "eigenvalue zeta*q = %.17g\nresidual = %.3e\nnorm error = %.3e\n"
                      "orthogonality = %.3e\n",
                      eigenvalue, residual, norm_error, overlap);
        o << line;
        o << "element        closed form                         oracle                              |diff|\n";
        for (int i = 0; i < 6; ++i) {
            std::snprintf(line, sizeof line, "%-13s  %+.10e %+.10ei  %+.10e %+.10ei  %.2e\n",
                          labels[i], cv[i].real(), cv[i].imag(), ov[i].real(), ov[i].imag(),
                          std::abs(cv[i] - ov[i]));
            o << line;
        }
        o << (pass ? "PASS\n" : "FAIL\n");
        sink.write(o.str());
    }
    return pass ? kPass : kPhysicsFail;
}

int cmd_precess(const RunConfig& cfg, OutputFormat fmt, Sink& sink)
{
    const Setup s = make_setup(cfg);
    const SpinSuperposition sup = make_state(cfg, s);
    const std::vector<double> grid = make_grid(cfg, s);
    const PolarizationHistory h = evolve_expectations(sup, s.kin, s.coupling, grid);
    if (fmt == OutputFormat::json)
        sink.write(history_json(h, time_unit(cfg), echo(cfg, s)).dump(2) + "\n");
    else
        sink.write(history_csv(h, time_unit(cfg)));
    return max_invariant_error(h) <= cfg.tolerances.invariant ? kPass : kPhysicsFail;
}

int cmd_bmt(const RunConfig& cfg, OutputFormat fmt, Sink& sink)
{
    const Setup s = make_setup(cfg);
    const SpinSuperposition sup = make_state(cfg, s);
    const std::vector<double> grid = make_grid(cfg, s);
    const ClassicalRun run = run_classical(cfg, s, sup, grid);

    double norm_err = 0.0;
    for (const Vec3& v : run.traj.s) norm_err = std::max(norm_err, std::abs(v.norm() - 1.0));

    if (fmt == OutputFormat::json) {
        json j = history_json(run.history, time_unit(cfg), echo(cfg, s));
        j["schema"] = "spinflip.bmt/1";
        std::vector<double> sx, sy, sz;
        for (const Vec3& v : run.traj.s) {
            sx.push_back(v.x());
            sy.push_back(v.y());
            sz.push_back(v.z());
        }
        j["s_x"] = sx;
        j["s_y"] = sy;
        j["s_z"] = sz;
        j["max_norm_error"] = norm_err;
        sink.write(j.dump(2) + "\n");
    } else {
        sink.write(trajectory_csv(run.traj, run.history, time_unit(cfg)));
    }
    return norm_err <= kNormTolerance ? kPass : kPhysicsFail;
}

int cmd_compare(const RunConfig& cfg, OutputFormat fmt, Sink& sink)
{
    const ComparisonReport r = run_comparison(cfg);
    sink.write(fmt == OutputFormat::table ? to_table(r) : to_json(r) + "\n");
    return r.pass ? kPass : kPhysicsFail;
}

int cmd_sweep(const RunConfig& base, const std::string& spec, unsigned threads, OutputFormat fmt,
              Sink& sink)
{
    const std::vector<SweepAxis> axes = parse_sweep(spec);
    std::vector<double> betas{base.beta}, alphas{base.alpha_deg};
    for (const SweepAxis& a : axes) (a.name == "beta" ? betas : alphas) = a.values();

    std::vector<RunConfig> points;
    for (double b : betas) {
        for (double a : alphas) {
            RunConfig c = base;
            c.beta = b;
            c.alpha_deg = a;
            make_setup(c); // validate every point before starting
            points.push_back(c);
        }
    }

    std::vector<ComparisonReport> reports(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) reports[i] = run_comparison(points[i]);
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(points.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    bool all = true;
    for (const auto& r : reports) all = all && r.pass;

    auto opt = [](const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); };
    if (fmt == OutputFormat::json) {
        json rows = json::array();
        for (const auto& r : reports) rows.push_back(json::parse(to_json(r, -1)));
        sink.write(json{{"schema", "spinflip.sweep/1"}, {"pass", all}, {"points", rows}}.dump(2) +
                   "\n");
    } else {
        std::string out = "index,beta,alpha_deg,orientation,epsilon,max_abs_deviation,"
                          "invariant_max_error,extracted_frequency,frequency_formula,"
                          "frequency_rel_error,pass\n";
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const auto& r = reports[i];
            out += std::to_string(i) + ',' + fmt17(points[i].beta) + ',' +
                   fmt17(points[i].alpha_deg) + ',' + r.params.orientation + ',' +
                   std::to_string(r.params.epsilon) + ',' + fmt17(r.max_deviation()) + ',' +
                   fmt17(r.invariant_max_error) + ',' + opt(r.extracted_frequency) + ',' +
                   fmt17(r.frequency_formula) + ',' + opt(r.frequency_rel_error) + ',' +
                   (r.pass ? "1" : "0") + '\n';
        }
        sink.write(out);
    }
    return all ? kPass : kPhysicsFail;
}

int cmd_scales(std::optional<double> gamma, double beta, double omega0, double c_over_rho,
               OutputFormat fmt, Sink& sink)
{
    const double g = gamma ? *gamma : make_kinematics(beta, 0.0).gamma;
    const SRScales sc = sr_scales(g, omega0, c_over_rho);
    if (fmt == OutputFormat::json) {
        sink.write(json{{"schema", "spinflip.scales/1"},
                        {"gamma", g},
                        {"omega0", sc.omega0},
                        {"omega_max", sc.omega_max},
                        {"rho", sc.rho},
                        {"time_ratio", sc.time_ratio}}
                       .dump(2) +
                   "\n");
    } else {
        sink.write("gamma,omega0,omega_max,rho,time_ratio\n" + fmt17(g) + ',' + fmt17(sc.omega0) +
                   ',' + fmt17(sc.omega_max) + ',' + fmt17(sc.rho) + ',' + fmt17(sc.time_ratio) +
                   '\n');
    }
    return kPass;
}

/// Splits out --config so its entries can be placed ahead of the user's flags.
std::vector<std::string> expand_config(const std::vector<std::string>& args)
{
    std::vector<std::string> rest;
    std::vector<std::string> from_file;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size()) throw InvalidArgument("--config needs a file");
            from_file = config_file_args(args[++i]);
        } else if (a.rfind("--config=", 0) == 0) {
            from_file = config_file_args(a.substr(9));
        } else {
            rest.push_back(a);
        }
    }
    if (from_file.empty() || rest.empty()) return rest;
    // subcommand name stays first
    std::vector<std::string> out{rest.front()};
    out.insert(out.end(), from_file.begin(), from_file.end());
    out.insert(out.end(), rest.begin() + 1, rest.end());
    return out;
}

} // namespace

const char* orientation_name(OrientationKind o)
{
    switch (o) {
    case OrientationKind::x: return "x";
    case OrientationKind::y: return "y";
    case OrientationKind::z: return "z";
    case OrientationKind::momentum: return "momentum";
    case OrientationKind::custom: return "custom";
    }
    return "?";
}

std::vector<double> SweepAxis::values() const
{
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        v[i] = count == 1 ? start : start + (stop - start) * i / static_cast<double>(count - 1);
    if (count > 1) v.back() = stop;
    return v;
}

std::vector<SweepAxis> parse_sweep(const std::string& text)
{
    std::vector<SweepAxis> axes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InvalidArgument("sweep axis '" + item + "' lacks '='");
        SweepAxis a;
        a.name = trim(item.substr(0, eq));
        if (a.name != "beta" && a.name != "alpha")
            throw InvalidArgument("sweep axis must be beta or alpha, got '" + a.name + "'");
        for (const auto& other : axes)
            if (other.name == a.name) throw InvalidArgument("sweep axis '" + a.name + "' repeated");
        std::stringstream range(item.substr(eq + 1));
        std::string part;
        std::vector<std::string> parts;
        while (std::getline(range, part, ':')) parts.push_back(trim(part));
        if (parts.size() != 3) throw InvalidArgument("sweep range must be start:stop:count");
        try {
            std::size_t used = 0;
            a.start = std::stod(parts[0], &used);
            if (used != parts[0].size()) throw std::invalid_argument("start");
            a.stop = std::stod(parts[1], &used);
            if (used != parts[1].size()) throw std::invalid_argument("stop");
            a.count = std::stoi(parts[2], &used);
            if (used != parts[2].size()) throw std::invalid_argument("count");
        } catch (const std::logic_error&) {
            throw InvalidArgument("bad number in sweep axis '" + item + "'");
        }
        if (a.count < 1) throw InvalidArgument("sweep count must be >= 1");
        axes.push_back(a);
    }
    if (axes.empty()) throw InvalidArgument("empty sweep specification");
    return axes;
}

std::vector<std::string> config_file_args(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw InvalidArgument("cannot read config file '" + path + "'");
    std::vector<std::string> args;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw InvalidArgument(path + ":" + std::to_string(lineno) + ": empty key");
        args.push_back("--" + key + "=" + val);
    }
    return args;
}

ComparisonReport run_comparison(const RunConfig& cfg)
{
    const Setup s = make_setup(cfg);
    const SpinSuperposition sup = make_state(cfg, s);
    const std::vector<double> grid = make_grid(cfg, s);
    const PolarizationHistory quantum = evolve_expectations(sup, s.kin, s.coupling, grid);
    const ClassicalRun classical = run_classical(cfg, s, sup, grid);
    return compare(quantum, classical.history, precession_frequency(s.kin, Sign::plus),
                   cfg.tolerances, echo(cfg, s));
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Spin precession of a neutral particle with anomalous moment in a uniform field",
                 "spinflip"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    RunConfig cfg;
    std::string orientation = "y";
    std::string format;
    std::string output;
    std::string sweep_spec;
    unsigned threads = 1;
    std::optional<double> gamma;
    double omega0 = 1.0;
    double c_over_rho = 1.0;
    std::string config_path;

    auto add_physics = [&](CLI::App* sub, bool beta_required) {
        sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        auto* b = sub->add_option("--beta", cfg.beta, "speed in units of c, 0 <= beta < 1");
        if (beta_required) b->required();
        sub->add_option("--alpha-deg", cfg.alpha_deg, "angle between velocity and field (deg)");
        sub->add_option("--S,--coupling", cfg.coupling_S, "field coupling |mu|H/(m0 c^2)");
        sub->add_option("--zeta,--epsilon", cfg.sign, "spin sign, +1 or -1");
        sub->add_option("--orientation", orientation, "x|y|z|momentum|custom");
        sub->add_option("--theta-deg", cfg.theta_deg, "polar angle of a custom axis");
        sub->add_option("--phi-deg", cfg.phi_deg, "azimuth of a custom axis");
        sub->add_option("--periods", cfg.periods, "number of precession periods");
        sub->add_option("--samples-per-period", cfg.samples_per_period, ">= 16");
        sub->add_option("--steps-per-period", cfg.steps_per_period, "RK4 steps per period, >= 200");
        sub->add_option("--omega-scale", cfg.omega_scale, "scale the classical Omega (fault injection)");
        sub->add_option("--tol-deviation", cfg.tolerances.deviation);
        sub->add_option("--tol-invariant", cfg.tolerances.invariant);
        sub->add_option("--tol-frequency", cfg.tolerances.frequency_rel);
        sub->add_option("--tol-audit", cfg.audit_tolerance, "eigenstate audit tolerance");
        sub->add_flag("--physical", cfg.physical, "emit time in seconds");
        sub->add_option("--mu", cfg.mu, "|mu| in J/T (with --physical)");
        sub->add_option("--field", cfg.field, "H in T (with --physical)");
        sub->add_option("--format", format, "csv|json|table");
        sub->add_option("-o,--output", output, "output file (default stdout)");
        sub->add_option("--config", config_path, "key=value file; flags take precedence");
    };

    auto* eig = app.add_subcommand("eigenstate", "audit the stationary spin states");
    add_physics(eig, true);
    auto* pre = app.add_subcommand("precess", "quantum polarization time series");
    add_physics(pre, true);
    auto* bmt = app.add_subcommand("bmt", "classical BMT trajectory");
    add_physics(bmt, true);
    auto* cmp = app.add_subcommand("compare", "quantum vs classical comparison report");
    add_physics(cmp, false);
    cmp->add_option("--sweep", sweep_spec, "e.g. beta=0:0.95:20,alpha=0:90:10");
    cmp->add_option("--threads", threads);
    auto* swp = app.add_subcommand("sweep", "compare over a (beta, alpha) grid");
    add_physics(swp, false);
    swp->add_option("--sweep", sweep_spec, "e.g. beta=0:0.95:20,alpha=0:90:10")->required();
    swp->add_option("--threads", threads);
    auto* scl = app.add_subcommand("scales", "synchrotron-radiation scale estimates");
    scl->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    scl->add_option("--gamma", gamma, "Lorentz factor (overrides --beta)");
    scl->add_option("--beta", cfg.beta);
    scl->add_option("--omega0", omega0, "cyclotron-scale frequency");
    scl->add_option("--c-over-rho", c_over_rho, "c in the units of rho * omega0");
    scl->add_option("--format", format, "csv|json");
    scl->add_option("-o,--output", output);
    scl->add_option("--config", config_path);

    try {
        const std::vector<std::string> args = expand_config(raw_args);
        std::vector<const char*> argv{"spinflip"};
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        for (auto* sub : app.get_subcommands()) out << sub->help();
        return kPass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        cfg.orientation = parse_orientation(orientation);
        Sink sink(output, out);
        if (auto w = coupling_warning({cfg.coupling_S, Sign::plus})) err << "warning: " << *w << '\n';

        if (eig->parsed())
            return cmd_eigenstate(cfg, parse_format(format.empty() ? "table" : format), sink);
        if (pre->parsed()) return cmd_precess(cfg, parse_format(format.empty() ? "csv" : format), sink);
        if (bmt->parsed()) return cmd_bmt(cfg, parse_format(format.empty() ? "csv" : format), sink);
        if (cmp->parsed()) {
            if (sweep_spec.empty() && cmp->count("--beta") == 0) throw InvalidArgument("--beta is required");
            if (!sweep_spec.empty())
                return cmd_sweep(cfg, sweep_spec, threads, parse_format(format.empty() ? "csv" : format), sink);
            return cmd_compare(cfg, parse_format(format.empty() ? "json" : format), sink);
        }
        if (swp->parsed())
            return cmd_sweep(cfg, sweep_spec, threads, parse_format(format.empty() ? "csv" : format), sink);
        return cmd_scales(gamma, cfg.beta, omega0, c_over_rho,
                          parse_format(format.empty() ? "csv" : format), sink);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const DegenerateOrientation& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const IoFailure& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const StepLimitExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }
}

} // namespace spinflip::cli
