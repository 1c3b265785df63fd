// stability-lab: config-driven scenario runner for rotationally symmetric
// stability analysis. Every subcommand prints one verdict line per check and
// writes JSON/CSV artifacts next to the given output prefix.
//
// Exit codes: 0 all checks passed, 1 a numerical check failed, 2 usage or
// config error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stab/asymptotics.hpp"
#include "stab/indexform.hpp"
#include "stab/metric.hpp"
#include "stab/numerics.hpp"
#include "stab/ode.hpp"
#include "stab/quadrature.hpp"
#include "stab/report_io.hpp"
#include "stab/spectral.hpp"
#include "stab/spline.hpp"
#include "stab/suite.hpp"

using nlohmann::json;
using namespace stab;

namespace {

constexpr double kPi = std::numbers::pi;

struct CheckList {
    int failures = 0;
    void check(bool ok, const std::string& label) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << label << "\n";
        if (!ok) ++failures;
    }
    void info(const std::string& label) { std::cout << "[INFO] " << label << "\n"; }
};

[[noreturn]] void usage_error(const std::string& msg) {
    std::cerr << "config error: " << msg << "\n";
    std::exit(2);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

WarpedMetric parse_metric(const std::string& spec) {
    const auto parts = split(spec, ':');
    const std::string& name = parts[0];
    auto num = [&](std::size_t i) -> double {
        if (parts.size() <= i) usage_error("metric '" + spec + "' needs a parameter");
        try {
            return std::stod(parts[i]);
        } catch (...) {
            usage_error("metric parameter '" + parts[i] + "' is not a number");
        }
    };
    if (name == "euclidean") return WarpedMetric::euclidean();
    if (name == "hyperbolic") return WarpedMetric::hyperbolic(num(1));
    if (name == "sphere") return WarpedMetric::sphere(num(1));
    if (name == "cone") return WarpedMetric::cone(num(1));
    if (name == "schoen") return WarpedMetric::schoen(num(1));
    if (name == "csv") {
        if (parts.size() < 2) usage_error("csv metric needs a path");
        return WarpedMetric::from_csv(parts[1]);
    }
    usage_error("unknown metric '" + name + "'");
}

StabilityParams parse_potential(const std::string& spec, double a) {
    const auto parts = split(spec, ':');
    const std::string& name = parts[0];
    if (name == "zero") return StabilityParams::zero_potential(a);
    if (name == "constant") {
        if (parts.size() < 2) usage_error("constant potential needs a value");
        return StabilityParams::constant_potential(a, std::stod(parts[1]));
    }
    if (name == "csv") {
        if (parts.size() < 2) usage_error("csv potential needs a path");
        std::ifstream in(parts[1]);
        if (!in) usage_error("cannot open potential file " + parts[1]);
        std::vector<double> rs, vs;
        std::string line;
        while (std::getline(in, line)) {
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double r, v;
            if (ls >> r >> v) {
                rs.push_back(r);
                vs.push_back(v);
            }
        }
        if (rs.size() < 3) usage_error("potential file needs at least 3 rows");
        auto spline = std::make_shared<CubicSpline>(rs, vs);
        const double lo = rs.front(), hi = rs.back();
        auto fn = [spline, lo, hi](double r) {
            const double t = std::clamp(r, lo, hi);
            return std::max(0.0, (*spline)(t));
        };
        for (int i = 0; i <= 256; ++i)
            if ((*spline)(lo + (hi - lo) * i / 256.0) < -1e-12)
                usage_error("potential samples must be nonnegative");
        return StabilityParams::custom_potential(a, fn, "csv:" + parts[1]);
    }
    usage_error("unknown potential '" + name + "'");
}

std::vector<double> parse_grid(const std::string& spec) {
    // "lo:hi:logN" | "lo:hi:logxN" | "lo:hi:linN" | single value
    const auto parts = split(spec, ':');
    if (parts.size() == 1) return {std::stod(parts[0])};
    if (parts.size() != 3) usage_error("grid must be lo:hi:logN or lo:hi:linN");
    double lo = 0, hi = 0;
    try {
        lo = std::stod(parts[0]);
        hi = std::stod(parts[1]);
    } catch (...) {
        usage_error("grid bounds must be numbers");
    }
    std::string kind = parts[2];
    bool logscale = false;
    if (kind.rfind("logx", 0) == 0) {
        logscale = true;
        kind = kind.substr(4);
    } else if (kind.rfind("log", 0) == 0) {
        logscale = true;
        kind = kind.substr(3);
    } else if (kind.rfind("lin", 0) == 0) {
        kind = kind.substr(3);
    } else {
        usage_error("grid kind must start with log or lin");
    }
    int n = 0;
    try {
        n = std::stoi(kind);
    } catch (...) {
        usage_error("grid count '" + kind + "' is not an integer");
    }
    if (n < 2 || !(lo > 0 && hi > lo)) usage_error("grid needs 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = logscale ? lo * std::pow(hi / lo, double(i) / (n - 1))
                        : lo + (hi - lo) * i / (n - 1);
    return g;
}

ChiProfile parse_chi(const std::string& jumps_spec, const std::string& values_spec) {
    if (jumps_spec.empty() && values_spec.empty()) return ChiProfile();
    std::vector<double> jumps;
    std::vector<int> values;
    for (const auto& t : split(jumps_spec, ','))
        if (!t.empty()) jumps.push_back(std::stod(t));
    for (const auto& t : split(values_spec, ','))
        if (!t.empty()) values.push_back(std::stoi(t));
    try {
        return ChiProfile::step(jumps, values);
    } catch (const std::exception& e) {
        usage_error(e.what());
    }
}

/// Config-file fallback: fill any option the user did not pass on the
/// command line from config[command][name], then config[name]. Flags win.
class ConfigLayer {
public:
    void load(const std::string& path) {
        std::ifstream in(path);
        if (!in) usage_error("cannot open config " + path);
        try {
            in >> root_;
        } catch (const std::exception& e) {
            usage_error(std::string("config parse: ") + e.what());
        }
    }

    void apply(CLI::App* cmd) {
        if (root_.is_null()) return;
        const std::string section = cmd->get_name();
        for (CLI::Option* opt : cmd->get_options()) {
            if (opt->count() > 0) continue;  // flag given: wins
            const std::string key = opt->get_lnames().empty() ? "" : opt->get_lnames()[0];
            if (key.empty()) continue;
            const json* val = nullptr;
            if (root_.contains(section) && root_[section].contains(key))
                val = &root_[section][key];
            else if (root_.contains(key))
                val = &root_[key];
            if (!val) continue;
            std::string text;
            if (val->is_string())
                text = val->get<std::string>();
            else
                text = val->dump();
            try {
                opt->add_result(text);
                opt->run_callback();  // push the value into the bound variable
            } catch (const std::exception& e) {
                usage_error("config key '" + key + "': " + e.what());
            }
        }
    }

private:
    json root_;
};

struct CommonArgs {
    std::string metric = "euclidean";
    std::string potential = "zero";
    double a = 0.25;
    double b = 1.0;
    double delta = 1.0;
    std::string output;
    int jobs = 0;
};

int default_jobs() {
    if (const char* env = std::getenv("STABILITY_LAB_JOBS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (...) {
            return 1;
        }
    }
    return 1;
}

void save_json(const std::string& prefix, const Json& doc) {
    if (prefix.empty()) return;
    write_file(prefix + ".json", doc.dump());
    std::cout << "[INFO] wrote " << prefix << ".json\n";
}

void save_csv(const std::string& prefix, const std::string& suffix, const CsvWriter& csv) {
    if (prefix.empty()) return;
    const std::string path = prefix + suffix;
    csv.save(path);
    std::cout << "[INFO] wrote " << path << "\n";
}

Json artifact_header(const std::string& command) {
    Json j = Json::object();
    j.set_int("schema_version", 1);
    j.set("command", command);
    return j;
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

int run_geometry(const CommonArgs& args, const std::string& grid_spec,
                 const ChiProfile& chi) {
    const WarpedMetric m = parse_metric(args.metric);
    const std::vector<double> grid = parse_grid(grid_spec);
    CheckList checks;

    CsvWriter csv({"s", "tau", "l", "area", "K", "curv_integral", "st_slack"});
    double worst_st = std::numeric_limits<double>::infinity();
    double worst_gb = 0.0;
    double prev_area = 0.0;
    bool monotone = true;
    for (double s : grid) {
        if (s <= m.r_min() || s >= m.r_max()) continue;
        const double K = curvature(m, s);
        const double Kint = curvature_integral(m, s);
        const double area = disk_area(m, s);
        const double st = shiohama_tanaka_slack({m, chi}, s);
        worst_st = std::min(worst_st, st);
        if (m.smooth_origin())
            worst_gb = std::max(worst_gb,
                                std::abs(Kint - 2.0 * kPi * (1.0 - m.dtau(s))));
        if (area <= prev_area) monotone = false;
        prev_area = area;
        csv.row({s, m.tau(s), boundary_length(m, s), area, K, Kint, st});
    }
    if (m.r_min() == 0.0)
        checks.check(worst_st >= -1e-8, "Shiohama-Tanaka slack >= -1e-8 (worst " +
                                            fmt17(worst_st) + ")");
    else
        checks.info("profile starts at r = " + fmt17(m.r_min()) +
                    ": annulus data, slack reported without a disk contract (worst " +
                    fmt17(worst_st) + ")");
    if (m.smooth_origin())
        checks.check(worst_gb <= 1e-8,
                     "Gauss-Bonnet |K(s) - 2pi(1 - tau'(s))| <= 1e-8 (worst " +
                         fmt17(worst_gb) + ")");
    checks.check(monotone, "disk area strictly increasing");

    Json doc = artifact_header("geometry");
    doc.set("metric", m.name());
    doc.set("worst_st_slack", worst_st);
    doc.set("worst_gauss_bonnet_gap", worst_gb);
    doc.set("area_monotone", monotone);
    save_json(args.output, doc);
    save_csv(args.output, ".csv", csv);
    return checks.failures ? 1 : 0;
}

int run_inequality(const std::string& kind, const CommonArgs& args,
                   const std::string& grid_spec, const std::string& cutoff_name,
                   double s0, double s1, double s2, double M, bool no_certify,
                   const ChiProfile& chi) {
    const WarpedMetric m = parse_metric(args.metric);
    const StabilityParams p = parse_potential(args.potential, args.a);
    const std::vector<double> grid = parse_grid(grid_spec);
    CheckList checks;

    Json reports = Json::array();
    CsvWriter csv({"s", "lhs", "rhs", "slack"});
    double worst = std::numeric_limits<double>::infinity();
    bool any_hypothesis_fail = false;

    std::vector<InequalityReport> rows(grid.size());
    const int jobs = args.jobs > 0 ? args.jobs : default_jobs();
    parallel_for_indexed(grid.size(), jobs, [&](std::size_t i) {
        const double s = grid[i];
        InequalityReport rep;
        if (kind == "cm") {
            const CutoffSpec spec = cutoff_name == "linear"
                                        ? CutoffSpec::linear(s)
                                        : CutoffSpec::log_power(args.b, s);
            rep = cm_inequality_report(m, p, spec, chi);
        } else if (kind == "estimate") {
            rep = estimate_report(m, p, AlphaParams::make(args.a, args.b, args.delta),
                                  s, chi);
        } else if (kind == "mpr") {
            rep = mpr_inequality(m, p, args.b, s,
                                 no_certify ? MprCertify::Assume : MprCertify::Shooting);
        } else if (kind == "huber") {
            rep = huber_report(m, p, s0, s1, s2, s, chi);
        } else {  // t3
            const T3Result t3 = t3_functional(m, args.a, M, s0, s);
            rep.name = "t3";
            rep.lhs = 0.0;
            rep.rhs = t3.T;
            rep.slack = t3.T;
            rep.terms = {{"T", t3.T}, {"limit_estimate", t3.limit_estimate}};
        }
        rows[i] = std::move(rep);
    });
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const InequalityReport& rep = rows[i];
        csv.row({grid[i], rep.lhs, rep.rhs, rep.slack});
        reports.push(report_to_json(rep));
        if (rep.has_flag("hypothesis_failed"))
            any_hypothesis_fail = true;
        else if (kind != "t3" && kind != "huber")
            worst = std::min(worst, rep.normalized_slack());
    }

    if (kind == "t3" || kind == "huber") {
        checks.info("values reported, no slack contract for this functional");
    } else if (any_hypothesis_fail) {
        checks.info("nonpositivity hypothesis failed on some disks (flagged)");
        if (std::isfinite(worst))
            checks.check(worst >= kSlackTolerance,
                         "slack >= -1e-8 on certified disks (worst " + fmt17(worst) + ")");
    } else {
        checks.check(worst >= kSlackTolerance,
                     "normalized slack >= -1e-8 (worst " + fmt17(worst) + ")");
    }

    Json doc = artifact_header("inequality/" + kind);
    doc.set("metric", m.name());
    doc.set("potential", p.potential_name());
    doc.set("reports", std::move(reports));
    save_json(args.output, doc);
    save_csv(args.output, ".csv", csv);
    return checks.failures ? 1 : 0;
}

int run_rho(const CommonArgs& args, const std::string& grid_spec,
            const std::string& delta_grid_spec) {
    const WarpedMetric m = parse_metric(args.metric);
    const std::vector<double> grid = parse_grid(grid_spec);
    CheckList checks;

    const RhoAsymptotics rec = [&] {
        try {
            return make_rho_asymptotics(m, args.a, args.b);
        } catch (const std::invalid_argument&) {
            const GrowthFit fit = aag_fit(m, grid.front(), grid.back());
            RhoAsymptotics r;
            r.a = args.a;
            r.b = args.b;
            r.alpha = AlphaParams::make(args.a, args.b, args.delta).alpha;
            r.k = fit.k_hat;
            r.C = fit.C_hat;
            r.C_plus = 2.0 * args.a * args.b * r.C * std::pow(r.alpha, 2.0 * args.b - 1.0) *
                       std::exp(2.0 * r.alpha);
            const Delta0Result d0 = delta0_minimizer(r.alpha, args.b, r.k);
            r.delta0 = d0.delta0;
            r.rho_min = d0.rho_min;
            r.bracket_lo = 1e-3;
            r.bracket_hi = 10.0;
            r.boundary_flag = d0.boundary_flag;
            return r;
        }
    }();

    const std::vector<double> ratios = asymptotic_ratio(m, args.a, args.b, args.delta, grid);
    CsvWriter curve({"s", "rho_plus", "ratio"});
    for (std::size_t i = 0; i < grid.size(); ++i)
        curve.row({grid[i], rho_plus(m, args.a, args.b, args.delta, grid[i]), ratios[i]});

    CsvWriter dscan({"delta", "rho_tilde"});
    for (double d : parse_grid(delta_grid_spec))
        dscan.row({d, rho_tilde(rec.alpha, args.b, rec.k, d)});

    checks.check(std::abs(ratios.back() - 1.0) <= 0.02,
                 "asymptotic ratio within 2% of 1 at s = " + fmt17(grid.back()) +
                     " (ratio " + fmt17(ratios.back()) + ")");
    checks.info("delta0 = " + fmt17(rec.delta0) + ", rho_min = " + fmt17(rec.rho_min) +
                (rec.boundary_flag ? " [boundary]" : ""));

    Json doc = artifact_header("rho");
    doc.set("metric", m.name());
    doc.set("a", rec.a);
    doc.set("b", rec.b);
    doc.set("alpha", rec.alpha);
    doc.set("k", rec.k);
    doc.set("C", rec.C);
    doc.set("C_plus", rec.C_plus);
    doc.set("delta0", rec.delta0);
    doc.set("rho_min", rec.rho_min);
    doc.set("delta0_boundary", rec.boundary_flag);
    doc.set("ratio_last", ratios.back());
    save_json(args.output, doc);
    save_csv(args.output, ".csv", curve);
    save_csv(args.output, "_delta_scan.csv", dscan);
    return checks.failures ? 1 : 0;
}

int run_a0(const CommonArgs& args, double rmax, double tol) {
    const WarpedMetric m = parse_metric(args.metric);
    CheckList checks;
    const SpectralResult res = estimate_a0(m, rmax, tol);

    if (res.unbounded) {
        checks.info("every tested coefficient admits a positive solution up to the scan cap");
    } else if (!res.monotone_bisection) {
        checks.info("curvature changes sign: grid scan only, no bisection guarantee");
        checks.info("bracket [" + fmt17(res.a0_low) + ", " + fmt17(res.a0_high) + "]");
    } else {
        checks.info("threshold(R=" + fmt17(rmax) + ") in [" + fmt17(res.a0_low) + ", " +
                    fmt17(res.a0_high) + "]");
        checks.info("threshold(R=" + fmt17(2 * rmax) + ") in [" + fmt17(res.threshold2_low) +
                    ", " + fmt17(res.threshold2_high) + "], gap " +
                    fmt17(res.convergence_gap));
        std::cout << "a0 bracket: [" << fmt17(res.refined_low) << ", "
                  << fmt17(res.refined_high) << "]\n";
        checks.check(res.a0_low <= res.a0_high && res.a0_high - res.a0_low <= tol,
                     "threshold bracket width <= tol");
        checks.check(res.refined_high - res.refined_low <= tol,
                     "extrapolated bracket width <= tol");
    }

    Json doc = artifact_header("a0");
    doc.set("metric", m.name());
    doc.set("R_max", res.R_max);
    doc.set("tol", res.tol);
    doc.set("a0_low", res.a0_low);
    doc.set("a0_high", res.a0_high);
    doc.set("threshold2_low", res.threshold2_low);
    doc.set("threshold2_high", res.threshold2_high);
    doc.set("convergence_gap", res.convergence_gap);
    doc.set("refined_low", res.refined_low);
    doc.set("refined_high", res.refined_high);
    doc.set("monotone_bisection", res.monotone_bisection);
    doc.set("unbounded", res.unbounded);
    if (res.first_zero) doc.set("first_zero", *res.first_zero);
    save_json(args.output, doc);

    if (!args.output.empty() && !res.unbounded) {
        // feasibility scan around the bracket: a vs first zero radius
        std::vector<double> avals;
        const double lo = std::max(tol, 0.25 * res.a0_low);
        const double hi = 4.0 * res.a0_high;
        for (int i = 0; i < 17; ++i)
            avals.push_back(lo * std::pow(hi / lo, i / 16.0));
        CsvWriter scan({"a", "first_zero"});
        for (const auto& [a_val, zero] : a_scan(m, avals, rmax))
            scan.raw_row({fmt17(a_val), zero ? fmt17(*zero) : "nan"});
        save_csv(args.output, "_scan.csv", scan);
    }
    return checks.failures ? 1 : 0;
}

int run_lambda1(const CommonArgs& args, const std::string& grid_spec) {
    const WarpedMetric m = parse_metric(args.metric);
    const StabilityParams p = parse_potential(args.potential, args.a);
    const std::vector<double> grid = parse_grid(grid_spec);
    CheckList checks;

    CsvWriter csv({"s", "lambda1"});
    const int jobs = args.jobs > 0 ? args.jobs : default_jobs();
    const SpectralResult result = lambda1_curve(m, p, grid, jobs);
    const auto& curve = result.lambda1_curve;
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (const auto& [s, l1] : curve) {
        if (l1 > prev + 1e-9) monotone = false;
        prev = l1;
        csv.row({s, l1});
    }
    checks.check(monotone, "lambda1 nonincreasing in s");

    Json doc = artifact_header("lambda1");
    doc.set("metric", m.name());
    doc.set("potential", p.potential_name());
    doc.set("a", args.a);
    Json arr = Json::array();
    for (const auto& [s, l] : curve) {
        Json row = Json::object();
        row.set("s", s);
        row.set("lambda1", l);
        arr.push(std::move(row));
    }
    doc.set("curve", std::move(arr));
    save_json(args.output, doc);
    save_csv(args.output, ".csv", csv);
    return checks.failures ? 1 : 0;
}

int run_distance(const CommonArgs& args, double s_start, double s_cap, double beta,
                 double c_override) {
    const WarpedMetric m = parse_metric(args.metric);
    StabilityParams p = parse_potential(args.potential, args.a);
    if (c_override > 0) p = p.with_c_lower(c_override);
    if (!p.c_lower()) usage_error("distance needs potential >= c > 0 (constant or --c)");
    CheckList checks;

    const DistanceBoundResult res = distance_bound(m, p, args.b, s_start, s_cap, beta);
    if (res.found) {
        checks.info("inradius bound s* = " + fmt17(res.s_star) + " via " + res.method);
        checks.check(res.slack_at_failure < 0, "slack negative at the failure radius");
    } else {
        checks.info("no bound found up to the scan cap " + fmt17(res.scan_cap) +
                    " (hypotheses may fail for this geometry)");
    }

    Json doc = artifact_header("distance");
    doc.set("metric", m.name());
    doc.set("potential", p.potential_name());
    doc.set("found", res.found);
    doc.set("s_star", res.s_star);
    doc.set("failure_s", res.failure_s);
    doc.set("method", res.method);
    doc.set("b_used", res.b_used);
    doc.set("k_hat", res.k_hat);
    doc.set("slack_at_start", res.slack_at_start);
    doc.set("slack_at_failure", res.slack_at_failure);
    doc.set("scan_cap", res.scan_cap);
    save_json(args.output, doc);
    return checks.failures ? 1 : 0;
}

int run_potential_growth(const CommonArgs& args, const std::string& grid_spec) {
    const WarpedMetric m = parse_metric(args.metric);
    const StabilityParams p = parse_potential(args.potential, args.a);
    const std::vector<double> grid = parse_grid(grid_spec);
    CheckList checks;

    const PotentialGrowthReport rep = potential_growth_check(m, p, args.b, grid);
    CsvWriter csv({"s", "potential_integral", "ratio", "lambda1"});
    for (const auto& row : rep.rows)
        csv.row({row.s, row.potential_integral, row.ratio, row.lambda1});

    if (!rep.hypothesis_ok)
        checks.info("hypothesis failed: lambda1 < 0 on some grid disk (values still reported)");
    checks.info("sup int_V / s^(2b) = " + fmt17(rep.sup_ratio));
    if (rep.k_le_2)
        checks.info("growth degree <= 2: running potential integral ends at " +
                    fmt17(rep.rows.empty() ? 0.0 : rep.rows.back().potential_integral));

    Json doc = artifact_header("potential-growth");
    doc.set("metric", m.name());
    doc.set("potential", p.potential_name());
    doc.set("b", rep.b);
    doc.set("sup_ratio", rep.sup_ratio);
    doc.set("hypothesis_ok", rep.hypothesis_ok);
    doc.set("k_le_2", rep.k_le_2);
    save_json(args.output, doc);
    save_csv(args.output, ".csv", csv);
    return checks.failures ? 1 : 0;
}

int run_curvature_report(const CommonArgs& args, double rmax) {
    const WarpedMetric m = parse_metric(args.metric);
    CheckList checks;
    const CurvatureIntegrabilityReport rep = curvature_integrability_report(m, rmax);

    checks.info("int K+ = " + fmt17(rep.K_plus) + ", int K- = " + fmt17(rep.K_minus) +
                ", total = " + fmt17(rep.K_total));
    checks.info(std::string("0 <= int K <= 2 pi chi: ") +
                (rep.integral_in_range ? "holds" : "violated"));
    if (rep.growth)
        checks.info("growth exponent k = " + fmt17(rep.growth->k_hat) +
                    (rep.quadratic_growth ? " (quadratic)" : " (not quadratic)"));
    else
        checks.info("growth fit undefined (bounded domain)");

    Json doc = artifact_header("curvature-report");
    doc.set("metric", m.name());
    doc.set("R_max", rep.R_max);
    doc.set("K_plus", rep.K_plus);
    doc.set("K_minus", rep.K_minus);
    doc.set("K_total", rep.K_total);
    doc.set("two_pi_chi", rep.two_pi_chi);
    doc.set("integral_in_range", rep.integral_in_range);
    if (rep.growth) {
        doc.set("k_hat", rep.growth->k_hat);
        doc.set("C_hat", rep.growth->C_hat);
        doc.set("fit_residual", rep.growth->residual);
        doc.set("power_law", rep.growth->power_law);
    }
    doc.set("quadratic_growth", rep.quadratic_growth);
    save_json(args.output, doc);
    return checks.failures ? 1 : 0;
}

int run_suite(const CommonArgs& args, std::uint64_t seed, int draws) {
    CheckList checks;
    const int jobs = args.jobs > 0 ? args.jobs : default_jobs();

    // 1. randomized cm + estimate slack suite
    const SuiteResult ineq = run_inequality_suite(seed, draws, jobs);
    checks.check(ineq.pass, "inequality suite: " + std::to_string(draws) +
                                " draws, worst cm slack " + fmt17(ineq.worst_cm_slack) +
                                ", worst estimate slack " +
                                fmt17(ineq.worst_estimate_slack));

    // 2. flat MPR identity: rhs == pi for b = 1, any (a, s)
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    double worst_mpr = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double a = rng.uniform(0.01, 0.5);
        const double s = rng.uniform(0.5, 40.0);
        const InequalityReport rep =
            mpr_inequality(WarpedMetric::euclidean(), StabilityParams::zero_potential(a),
                           1.0, s, MprCertify::Assume);
        worst_mpr = std::max(worst_mpr, std::abs(rep.rhs - kPi));
    }
    checks.check(worst_mpr <= 1e-10,
                 "flat MPR identity rhs == pi (worst gap " + fmt17(worst_mpr) + ")");

    // 3. rho_tilde small-delta limit
    double worst_rt = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double alpha = rng.uniform(0.2, 5.0);
        const double k = rng.uniform(0.3, 6.0);
        const double b = rng.uniform(1.0, 3.0);
        worst_rt = std::max(worst_rt, std::abs(rho_tilde(alpha, b, k, 1e-8) -
                                               (1.0 - std::exp(-k * alpha))));
    }
    checks.check(worst_rt <= 1e-6,
                 "rho_tilde delta->0 limit (worst gap " + fmt17(worst_rt) + ")");

    // 4. Shiohama-Tanaka on every registry metric
    double worst_st = std::numeric_limits<double>::infinity();
    for (const WarpedMetric& m :
         {WarpedMetric::euclidean(), WarpedMetric::hyperbolic(1.0), WarpedMetric::sphere(1.0),
          WarpedMetric::cone(0.5), WarpedMetric::schoen(0.5)}) {
        for (int i = 1; i <= 64; ++i) {
            const double r = m.r_min() + i * 0.045 * (std::isinf(m.r_max()) ? 1.0 : m.r_max());
            if (r <= m.r_min() || r >= m.r_max()) continue;
            worst_st = std::min(worst_st, shiohama_tanaka_slack({m, ChiProfile()}, r));
        }
    }
    checks.check(worst_st >= -1e-8,
                 "Shiohama-Tanaka slack >= -1e-8 on registry metrics (worst " +
                     fmt17(worst_st) + ")");

    // 5. G <= 1 over random step chi profiles
    bool g_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        const double s = rng.uniform(3.0, 12.0);
        std::vector<double> jumps;
        std::vector<int> values{1};
        double t = 0.0;
        const int njumps = 1 + static_cast<int>(rng.index(4));
        for (int i = 0; i < njumps; ++i) {
            t += rng.uniform(0.3, s / 2.0);
            jumps.push_back(t);
            values.push_back(1 - static_cast<int>(rng.index(6)));
        }
        const ChiProfile chi = ChiProfile::step(jumps, values);
        if (G_term(CutoffSpec::linear(s), chi, s) > 1.0 + 1e-10) g_ok = false;
        if (G_term(CutoffSpec::log_power(2.0, s), chi, s) > 1.0 + 1e-10) g_ok = false;
    }
    checks.check(g_ok, "G <= 1 for chi <= 1 over random step profiles");

    Json doc = artifact_header("suite");
    doc.set_int("seed", static_cast<long long>(seed));
    doc.set_int("draws", draws);
    doc.set("pass", checks.failures == 0);
    doc.set("worst_cm_slack", ineq.worst_cm_slack);
    doc.set("worst_estimate_slack", ineq.worst_estimate_slack);
    doc.set("worst_mpr_identity_gap", worst_mpr);
    doc.set("worst_rho_tilde_gap", worst_rt);
    doc.set("worst_st_slack", worst_st);
    Json rows = Json::array();
    for (const SuiteDraw& d : ineq.draws) {
        Json row = Json::object();
        row.set("metric", d.metric);
        row.set("potential", d.potential);
        row.set("cutoff", d.cutoff);
        row.set("a", d.a);
        row.set("b", d.b);
        row.set("delta", d.delta);
        row.set("s", d.s);
        row.set("cm_slack", d.cm_slack);
        row.set("estimate_slack", d.estimate_slack);
        row.set("pass", d.pass);
        rows.push(std::move(row));
    }
    doc.set("draws_detail", std::move(rows));
    save_json(args.output, doc);
    return checks.failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stability-lab: geodesic-disk stability analysis on rotationally symmetric surfaces"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its keys");

    CommonArgs args;
    auto add_common = [&](CLI::App* cmd, bool with_potential = true) {
        cmd->fallthrough();
        cmd->add_option("--metric", args.metric,
                        "euclidean | hyperbolic:K | sphere:K | cone:B | schoen:E | csv:PATH");
        if (with_potential)
            cmd->add_option("--potential", args.potential, "zero | constant:C | csv:PATH");
        cmd->add_option("--a", args.a, "operator constant a > 0");
        cmd->add_option("--b", args.b, "cutoff exponent b >= 1");
        cmd->add_option("--delta", args.delta, "interval offset delta > 0");
        cmd->add_option("--output", args.output, "artifact path prefix");
        cmd->add_option("--jobs", args.jobs, "worker pool size (env STABILITY_LAB_JOBS)");
    };

    std::string grid_spec = "1:10:lin10";
    std::string delta_grid_spec = "0.001:10:log64";
    std::string cutoff_name = "log_power";
    std::string chi_jumps, chi_values;
    double s0 = 1.0, s1 = 3.0, s2 = 5.0, M = 0.0;
    double rmax = 40.0, tol = 1e-3;
    double s_start = 0.5, s_cap = 200.0, beta = 2.0, c_override = 0.0;
    std::uint64_t seed = 20240405;
    int draws = 200;
    bool no_certify = false;

    CLI::App* geometry = app.add_subcommand("geometry", "metric-module curves and checks");
    add_common(geometry, false);
    geometry->add_option("--s-grid,--s", grid_spec, "lo:hi:linN | lo:hi:logN");
    geometry->add_option("--chi-jumps", chi_jumps, "comma-separated chi jump radii");
    geometry->add_option("--chi-values", chi_values, "comma-separated chi values (<= 1)");

    CLI::App* inequality = app.add_subcommand("inequality", "inequality reports over a grid");
    inequality->fallthrough();
    inequality->require_subcommand(1);
    std::vector<CLI::App*> ineq_subs;
    for (const char* k : {"cm", "estimate", "mpr", "huber", "t3"}) {
        CLI::App* sub = inequality->add_subcommand(k);
        add_common(sub);
        sub->add_option("--s-grid,--s", grid_spec, "outer radius or grid");
        sub->add_option("--chi-jumps", chi_jumps, "");
        sub->add_option("--chi-values", chi_values, "");
        if (std::string(k) == "cm")
            sub->add_option("--cutoff", cutoff_name, "linear | log_power");
        if (std::string(k) == "mpr")
            sub->add_flag("--no-certify", no_certify,
                          "assume nonpositivity instead of certifying lambda1 >= 0");
        if (std::string(k) == "huber" || std::string(k) == "t3") {
            sub->add_option("--s0", s0, "");
            sub->add_option("--s1", s1, "");
            sub->add_option("--s2", s2, "");
            sub->add_option("--M", M, "topology constant for t3");
        }
        ineq_subs.push_back(sub);
    }

    CLI::App* rho = app.add_subcommand("rho", "rho+ curves, delta scan, delta0");
    add_common(rho, false);
    rho->add_option("--s-grid", grid_spec, "radii for the ratio curve");
    rho->add_option("--delta-grid", delta_grid_spec, "delta scan grid");

    CLI::App* a0 = app.add_subcommand("a0", "critical constant estimate");
    add_common(a0, false);
    a0->add_option("--rmax", rmax, "truncation radius");
    a0->add_option("--tol", tol, "bisection tolerance");

    CLI::App* l1 = app.add_subcommand("lambda1", "first Dirichlet eigenvalue curve");
    add_common(l1);
    l1->add_option("--s-grid,--s", grid_spec, "disk radius or grid");

    CLI::App* dist = app.add_subcommand("distance", "inradius bound scan");
    add_common(dist);
    dist->add_option("--s-start", s_start, "scan start radius");
    dist->add_option("--s-cap", s_cap, "scan cap");
    dist->add_option("--beta", beta, "annulus depth parameter > 1");
    dist->add_option("--c", c_override, "certified lower bound for V");

    CLI::App* pg = app.add_subcommand("potential-growth", "potential integral growth");
    add_common(pg);
    pg->add_option("--s-grid", grid_spec, "disk radii");

    CLI::App* curv = app.add_subcommand("curvature-report", "curvature integrability report");
    add_common(curv, false);
    curv->add_option("--rmax", rmax, "outer radius");

    CLI::App* suite = app.add_subcommand("suite", "full randomized invariant suite");
    add_common(suite, false);
    suite->add_option("--seed", seed, "RNG seed");
    suite->add_option("--draws", draws, "number of inequality draws");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    ConfigLayer config;
    if (!config_path.empty()) config.load(config_path);

    try {
        CLI::App* active = app.get_subcommands().front();
        config.apply(active);
        if (active == inequality) {
            CLI::App* sub = inequality->get_subcommands().front();
            config.apply(sub);
            const ChiProfile chi = parse_chi(chi_jumps, chi_values);
            return run_inequality(sub->get_name(), args, grid_spec, cutoff_name, s0, s1,
                                  s2, M, no_certify, chi);
        }
        if (active == geometry)
            return run_geometry(args, grid_spec, parse_chi(chi_jumps, chi_values));
        if (active == rho) return run_rho(args, grid_spec, delta_grid_spec);
        if (active == a0) return run_a0(args, rmax, tol);
        if (active == l1) return run_lambda1(args, grid_spec);
        if (active == dist) return run_distance(args, s_start, s_cap, beta, c_override);
        if (active == pg) return run_potential_growth(args, grid_spec);
        if (active == curv) return run_curvature_report(args, rmax);
        if (active == suite) return run_suite(args, seed, draws);
        usage_error("no subcommand selected");
    } catch (const IntegrationError& e) {
        std::cout << "[FAIL] numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const OdeError& e) {
        std::cout << "[FAIL] numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        usage_error(e.what());
    } catch (const std::domain_error& e) {
        usage_error(e.what());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
