#include "spinflip/compare_report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <sstream>

namespace spinflip
{
namespace
{

using nlohmann::json;

constexpr double kFlatTol = 1e-9;
constexpr double kUniformTol = 1e-9;

void require_uniform(std::span<const double> t)
{
    if (t.size() < 3) throw InvalidArgument("series too short for frequency extraction");
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (!(dt > 0.0)) throw InvalidArgument("time grid must be strictly ascending");
    for (std::size_t k = 1; k < t.size(); ++k) {
        if (std::abs((t[k] - t[k - 1]) - dt) > kUniformTol * std::max(1.0, dt))
            throw InvalidArgument("frequency extraction needs a uniform grid");
    }
}

double peak_to_peak(std::span<const double> x)
{
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *hi - *lo;
}

json optional_number(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

std::optional<double> read_optional(const json& j, const char* key)
{
    const json& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

} // namespace

std::optional<double> extract_frequency(std::span<const double> t, std::span<const double> series)
{
    if (t.size() != series.size()) throw InvalidArgument("time and series lengths differ");
    require_uniform(t);

    const double mean =
        std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
    double scale = 0.0;
    for (double v : series) scale = std::max(scale, std::abs(v));
    if (peak_to_peak(series) <= kFlatTol * std::max(1.0, scale)) return std::nullopt;

    std::vector<double> crossings;
    for (std::size_t k = 1; k < series.size(); ++k) {
        const double a = series[k - 1] - mean;
        const double b = series[k] - mean;
        if ((a < 0.0) != (b < 0.0)) crossings.push_back(t[k - 1] + (t[k] - t[k - 1]) * (-a) / (b - a));
    }
    if (crossings.size() < 3)
        throw InvalidArgument("series must span at least two half-periods past the first crossing");

    std::size_t gaps = crossings.size() - 1;
    if (gaps % 2 == 1) --gaps;
    const double mean_half_gap = (crossings[gaps] - crossings.front()) / static_cast<double>(gaps);
    return std::numbers::pi / mean_half_gap;
}

double ComparisonReport::max_deviation() const
{
    return *std::max_element(max_abs_deviation.begin(), max_abs_deviation.end());
}

ComparisonReport compare(const PolarizationHistory& quantum, const PolarizationHistory& classical,
                         double frequency_formula, const Tolerances& tol, RunParams params)
{
    const std::size_t n = quantum.size();
    if (classical.size() != n) throw GridMismatch("quantum and classical grids differ in length");
    for (std::size_t k = 0; k < n; ++k) {
        if (quantum.t[k] != classical.t[k])
            throw GridMismatch("quantum and classical grids differ at sample " + std::to_string(k));
    }

    ComparisonReport r;
    r.tolerances = tol;
    r.params = std::move(params);
    r.params.samples = n;
    r.frequency_formula = frequency_formula;

    const std::array<const std::vector<double>*, 4> qs{&quantum.pi_x, &quantum.pi_y, &quantum.pi_z,
                                                       &quantum.beta_pi};
    const std::array<const std::vector<double>*, 4> cs{&classical.pi_x, &classical.pi_y,
                                                       &classical.pi_z, &classical.beta_pi};
    for (std::size_t c = 0; c < 4; ++c) {
        double dev = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            dev = std::max(dev, std::abs((*qs[c])[k] - (*cs[c])[k]));
        r.max_abs_deviation[c] = dev;
        if (!(dev <= tol.deviation)) r.failures.push_back(std::string("deviation_") + kComponentNames[c]);
    }

    for (const auto* h : {&quantum, &classical})
        for (double i : h->invariant) r.invariant_max_error = std::max(r.invariant_max_error, std::abs(i - 1.0));
    if (!(r.invariant_max_error <= tol.invariant)) r.failures.emplace_back("invariant");

    // frequency from the most strongly oscillating pi component of each side
    auto dominant = [](const PolarizationHistory& h) {
        int best = 0;
        double spread = -1.0;
        for (int k = 0; k < 3; ++k) {
            const double s = peak_to_peak(h.component(k));
            if (s > spread) {
                spread = s;
                best = k;
            }
        }
        return best;
    };
    if (n >= 3) {
        r.quantum_frequency = extract_frequency(quantum.t, quantum.component(dominant(quantum)));
        r.extracted_frequency =
            extract_frequency(classical.t, classical.component(dominant(classical)));
    }
    const double expected = std::abs(frequency_formula);
    if (r.extracted_frequency) {
        r.frequency_rel_error = std::abs(*r.extracted_frequency - expected) / expected;
        if (r.quantum_frequency)
            *r.frequency_rel_error = std::max(
                *r.frequency_rel_error, std::abs(*r.quantum_frequency - expected) / expected);
        if (!(*r.frequency_rel_error <= tol.frequency_rel)) r.failures.emplace_back("frequency");
    } else if (r.quantum_frequency) {
        r.failures.emplace_back("frequency");
    }

    r.pass = r.failures.empty();
    return r;
}

ComparisonReport compare(const PolarizationHistory& quantum,
                         const PrecessionTrajectory& classical, const Kinematics& kin,
                         const Tolerances& tol, RunParams params)
{
    return compare(quantum, to_history(classical, kin), precession_frequency(kin, Sign::plus), tol,
                   std::move(params));
}

std::string to_json(const ComparisonReport& r, int indent)
{
    json dev = json::object();
    for (std::size_t c = 0; c < 4; ++c) dev[kComponentNames[c]] = r.max_abs_deviation[c];

    json j;
    j["schema"] = "spinflip.compare/1";
    j["pass"] = r.pass;
    j["failures"] = r.failures;
    j["max_abs_deviation"] = dev;
    j["extracted_frequency"] = optional_number(r.extracted_frequency);
    j["quantum_frequency"] = optional_number(r.quantum_frequency);
    j["frequency_formula"] = r.frequency_formula;
    j["frequency_rel_error"] = optional_number(r.frequency_rel_error);
    j["no_oscillation"] = r.no_oscillation();
    j["invariant_max_error"] = r.invariant_max_error;
    j["tolerances"] = {{"deviation", r.tolerances.deviation},
                       {"invariant", r.tolerances.invariant},
                       {"frequency_rel", r.tolerances.frequency_rel}};
    j["params"] = {{"beta", r.params.beta},
                   {"alpha", r.params.alpha},
                   {"coupling_S", r.params.coupling_S},
                   {"zeta", r.params.zeta},
                   {"epsilon", r.params.epsilon},
                   {"orientation", r.params.orientation},
                   {"periods", r.params.periods},
                   {"samples_per_period", r.params.samples_per_period},
                   {"samples", r.params.samples}};
    return j.dump(indent);
}

ComparisonReport report_from_json(const std::string& text)
{
    try {
        const json j = json::parse(text);
        if (j.at("schema") != "spinflip.compare/1") throw InvalidArgument("unknown report schema");
        ComparisonReport r;
        r.pass = j.at("pass").get<bool>();
        r.failures = j.at("failures").get<std::vector<std::string>>();
        for (std::size_t c = 0; c < 4; ++c)
            r.max_abs_deviation[c] = j.at("max_abs_deviation").at(kComponentNames[c]).get<double>();
        r.extracted_frequency = read_optional(j, "extracted_frequency");
        r.quantum_frequency = read_optional(j, "quantum_frequency");
        r.frequency_formula = j.at("frequency_formula").get<double>();
        r.frequency_rel_error = read_optional(j, "frequency_rel_error");
        r.invariant_max_error = j.at("invariant_max_error").get<double>();
        const json& tol = j.at("tolerances");
        r.tolerances.deviation = tol.at("deviation").get<double>();
        r.tolerances.invariant = tol.at("invariant").get<double>();
        r.tolerances.frequency_rel = tol.at("frequency_rel").get<double>();
        const json& p = j.at("params");
        r.params.beta = p.at("beta").get<double>();
        r.params.alpha = p.at("alpha").get<double>();
        r.params.coupling_S = p.at("coupling_S").get<double>();
        r.params.zeta = p.at("zeta").get<int>();
        r.params.epsilon = p.at("epsilon").get<int>();
        r.params.orientation = p.at("orientation").get<std::string>();
        r.params.periods = p.at("periods").get<double>();
        r.params.samples_per_period = p.at("samples_per_period").get<int>();
        r.params.samples = p.at("samples").get<std::size_t>();
        return r;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed comparison report: ") + e.what());
    }
}

std::string to_table(const ComparisonReport& r)
{
    std::ostringstream out;
    char line[160];
    auto opt = [](const std::optional<double>& v) {
        if (!v) return std::string("none");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.10g", *v);
        return std::string(buf);
    };
    std::snprintf(line, sizeof line, "beta=%.6g alpha=%.6g rad orientation=%s epsilon=%+d samples=%zu\n",
                  r.params.beta, r.params.alpha, r.params.orientation.c_str(), r.params.epsilon,
                  r.params.samples);
    out << line;
    out << "component   max|dq-dc|     tolerance\n";
    for (std::size_t c = 0; c < 4; ++c) {
        std::snprintf(line, sizeof line, "%-10s  %.3e      %.1e\n", kComponentNames[c],
                      r.max_abs_deviation[c], r.tolerances.deviation);
        out << line;
    }
    out << "frequency formula   " << opt(r.frequency_formula) << '\n';
    out << "frequency classical " << (r.extracted_frequency ? opt(r.extracted_frequency) : "no oscillation") << '\n';
    out << "frequency quantum   " << (r.quantum_frequency ? opt(r.quantum_frequency) : "no oscillation") << '\n';
    out << "frequency rel error " << opt(r.frequency_rel_error) << '\n';
    std::snprintf(line, sizeof line, "invariant max error %.3e\n", r.invariant_max_error);
    out << line;
    out << "result              " << (r.pass ? "PASS" : "FAIL");
    for (const auto& f : r.failures) out << ' ' << f;
    out << '\n';
    return out.str();
}

} // namespace spinflip
