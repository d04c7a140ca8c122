#include "geoextremal/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "geoextremal/analytic.hpp"
#include "geoextremal/errors.hpp"
#include "geoextremal/extremal.hpp"
#include "geoextremal/oracle.hpp"
#include "geoextremal/scan.hpp"

namespace geoextremal::cli {

using nlohmann::json;

ProbArg parse_probability(std::string_view name, std::string_view text) {
    ProbArg arg;
    arg.text = std::string(text);
    const std::string label(name);
    if (text.find('/') != std::string_view::npos) {
        try {
            arg.fraction = RationalProb::parse(text);
        } catch (const DomainError& e) {
            throw DomainError(label + ": " + e.what());
        }
        const mpz_class& num = arg.fraction->numerator();
        const mpz_class& den = arg.fraction->denominator();
        // Both operands exact in binary64 makes the quotient correctly rounded.
        if (mpz_sizeinbase(den.get_mpz_t(), 2) <= 53) {
            arg.value = num.get_d() / den.get_d();
        } else {
            arg.value = arg.fraction->to_double();
        }
        return arg;
    }
    const std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw DomainError(label + ": cannot parse '" + s + "' as a probability");
    }
    if (!(v > 0.0 && v <= 1.0)) {
        throw DomainError(label + ": probability must lie in (0, 1], got '" + s + "'");
    }
    arg.value = v;
    return arg;
}

std::int64_t parse_count(std::string_view name, std::string_view text) {
    static const std::regex plain(R"(\d+)");
    static const std::regex power(R"((\d+)\^(\d+))");
    static const std::regex scientific(R"((\d+)[eE](\d+))");
    const std::string s(text);
    const std::string label(name);
    std::smatch m;
    long double v = -1;
    if (std::regex_match(s, m, plain)) {
        v = std::stold(s);
    } else if (std::regex_match(s, m, power)) {
        v = std::pow(std::stold(m[1].str()), std::stold(m[2].str()));
    } else if (std::regex_match(s, m, scientific)) {
        v = std::stold(m[1].str()) * std::pow(10.0L, std::stold(m[2].str()));
    } else {
        throw DomainError(label + ": cannot parse '" + s + "' as a count");
    }
    if (!(v >= 1) || v > 9.0e18L) throw DomainError(label + ": count out of range: '" + s + "'");
    return static_cast<std::int64_t>(v);
}

namespace {

std::uint64_t parse_seed(const std::string& s) {
    static const std::regex digits(R"(\d{1,20})");
    if (!std::regex_match(s, digits)) throw DomainError("seed: expected a nonnegative integer, got '" + s + "'");
    try {
        return std::stoull(s);
    } catch (const std::out_of_range&) {
        throw DomainError("seed: does not fit in 64 bits: '" + s + "'");
    }
}

GeoParam correlation_param(const char* name, const ProbArg& arg) {
    GeoParam p(arg.value);
    require_nondegenerate(p, name);
    return p;
}

std::optional<ExactCorr> try_exact(const ProbArg& a, const ProbArg& b, std::ostream& err) {
    if (!a.fraction || !b.fraction) {
        err << "note: exact path needs fraction literals such as 1/4; skipped\n";
        return std::nullopt;
    }
    try {
        return min_corr_exact(*a.fraction, *b.fraction);
    } catch (const BudgetExceeded& e) {
        err << "note: exact path skipped: " << e.what() << "\n";
        return std::nullopt;
    }
}

// rho written as (D cov) / (D sigma1 sigma2) over the grid denominator D.
std::optional<std::string> exact_rho_text(const ExactCorr& ex, const RationalProb& p1,
                                          const RationalProb& p2) {
    if (!ex.rho) return std::nullopt;
    const mpq_class one(1);
    const auto root = exact_sqrt((one - p1.value()) * (one - p2.value()));
    const mpq_class sigma = *root / (p1.value() * p2.value());
    const mpq_class D(ex.e_xy.grid_denominator);
    return format_ratio(ex.covariance * D, sigma * D);
}

int cmd_compute(const std::string& s1, const std::string& s2, bool exact, bool as_json, std::ostream& out,
                std::ostream& err) {
    const ProbArg a = parse_probability("p1", s1);
    const ProbArg b = parse_probability("p2", s2);
    const GeoParam p1 = correlation_param("p1", a);
    const GeoParam p2 = correlation_param("p2", b);

    const CorrResult lo = min_corr(p1, p2);
    const CorrResult hi = max_corr(p1, p2);
    const BoundPair bounds = bound_pair(p1, p2);

    std::optional<ExactCorr> ex;
    std::optional<std::string> e_text;
    std::optional<std::string> rho_text;
    if (exact) {
        ex = try_exact(a, b, err);
        if (ex) {
            e_text = format_over(ex->e_xy.value, ex->e_xy.grid_denominator);
            rho_text = exact_rho_text(*ex, *a.fraction, *b.fraction);
        }
    }

    if (as_json) {
        json j = {{"p1", a.value},
                  {"p2", b.value},
                  {"rho_min", lo.rho},
                  {"rho_max", hi.rho},
                  {"e_xy", lo.e_xy},
                  {"covariance", lo.covariance},
                  {"bound_lower", bounds.lower},
                  {"bound_upper", bounds.upper},
                  {"n_breakpoints", lo.n_breakpoints},
                  {"path", std::string(to_string(lo.path))}};
        if (ex) {
            j["exact"] = {{"e_xy", *e_text}, {"rho_min", rho_text ? json(*rho_text) : json(nullptr)}};
        }
        out << j.dump(2) << "\n";
        return kOk;
    }

    out << "p1 = " << a.text << "\n";
    out << "p2 = " << b.text << "\n";
    out << "path = " << to_string(lo.path) << "\n";
    out << "n_breakpoints = " << lo.n_breakpoints << "\n";
    if (e_text) {
        out << "e_xy = " << *e_text << " = " << format15(lo.e_xy) << "\n";
    } else {
        out << "e_xy = " << format15(lo.e_xy) << "\n";
    }
    out << "covariance = " << format15(lo.covariance) << "\n";
    if (rho_text) {
        out << "rho_min = " << *rho_text << " = " << format15(lo.rho) << "\n";
    } else {
        out << "rho_min = " << format15(lo.rho) << "\n";
    }
    out << "rho_max = " << format15(hi.rho) << "\n";
    out << "bound_lower = " << format15(bounds.lower) << "\n";
    out << "bound_upper = " << format15(bounds.upper) << "\n";
    return kOk;
}

double parse_real(const char* name, const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw DomainError(std::string(name) + ": cannot parse '" + s + "' as a number");
    }
    return v;
}

void write_rows(std::ostream& os, const std::vector<ScanRow>& rows, const std::string& format) {
    if (format == "json") {
        json arr = json::array();
        for (const ScanRow& r : rows) {
            auto num = [](double x) { return std::strtod(format15(x).c_str(), nullptr); };
            arr.push_back({{"p", num(r.p)},
                           {"rho_min", num(r.rho_min)},
                           {"bound_lower", num(r.bound_lower)},
                           {"bound_upper", num(r.bound_upper)},
                           {"n_breakpoints", r.n_breakpoints}});
        }
        os << arr.dump(2) << "\n";
        return;
    }
    os << "p,rho_min,bound_lower,bound_upper,n_breakpoints\n";
    for (const ScanRow& r : rows) {
        os << format15(r.p) << ',' << format15(r.rho_min) << ',' << format15(r.bound_lower) << ','
           << format15(r.bound_upper) << ',' << r.n_breakpoints << '\n';
    }
}

int cmd_scan(const std::string& lo_s, const std::string& hi_s, const std::string& step_s,
             const std::vector<std::string>& at, const std::string& out_path, const std::string& format,
             std::ostream& out, std::ostream& err) {
    const double p_min = parse_real("p_min", lo_s);
    const double p_max = parse_real("p_max", hi_s);
    const double step = parse_real("step", step_s);
    if (!(p_min > 0.0 && p_min < p_max && p_max < 1.0)) {
        throw DomainError("p_min/p_max: need 0 < p_min < p_max < 1");
    }
    if (!(step > 0.0)) throw DomainError("step: must be positive");

    std::vector<double> ps = scan_grid(p_min, p_max, step);
    for (const std::string& s : at) {
        const double p = parse_probability("--at", s).value;
        if (!(p < 1.0)) throw DomainError("--at: p must be below 1");
        ps.push_back(p);
    }
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

    const std::vector<ScanRow> rows = scan_rows(ps);
    if (out_path.empty()) {
        write_rows(out, rows, format);
        return kOk;
    }
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
        err << "error: --out: cannot open '" << out_path << "' for writing\n";
        return kOutputError;
    }
    write_rows(file, rows, format);
    file.flush();
    if (!file) {
        err << "error: --out: write to '" << out_path << "' failed\n";
        return kOutputError;
    }
    return kOk;
}

int cmd_kinks(const std::string& p_min_s, std::ostream& out) {
    const double p_min = parse_real("p_min", p_min_s);
    if (!(p_min > 0.0 && p_min <= 0.5)) throw DomainError("p_min: must lie in (0, 1/2]");
    out << "i,c,x,p,slope_left,slope_right,slope_jump\n";
    for (const KinkPoint& k : enumerate_kinks(p_min)) {
        const SlopeJump s = measure_slope_jump(k.p);
        out << k.i << ',' << k.c << ',' << format15(k.x) << ',' << format15(k.p) << ',' << format15(s.left)
            << ',' << format15(s.right) << ',' << format15(s.jump()) << '\n';
    }
    return kOk;
}

struct Check {
    std::string name;
    double reference;
    double candidate;
    double tolerance;  // absolute, already scaled
    std::string status;
};

int cmd_verify(const std::string& s1, const std::string& s2, const std::string& n_s, const std::string& seed_s,
               std::ostream& out, std::ostream& err) {
    const ProbArg a = parse_probability("p1", s1);
    const ProbArg b = parse_probability("p2", s2);
    const GeoParam p1 = correlation_param("p1", a);
    const GeoParam p2 = correlation_param("p2", b);
    const std::int64_t n = parse_count("n", n_s);
    if (n < 1000) throw DomainError("n: Monte Carlo needs at least 1000 samples");
    const std::uint64_t seed = parse_seed(seed_s);

    const CorrResult engine = min_corr(p1, p2);
    std::vector<Check> checks;
    auto add = [&](std::string name, double ref, double cand, double tol) {
        const bool ok = std::abs(ref - cand) <= tol;
        checks.push_back({std::move(name), ref, cand, tol, ok ? "pass" : "FAIL"});
    };
    auto rel = [](double tol, double scale) { return tol * std::max(1.0, std::abs(scale)); };

    if (p1 == p2) {
        const CorrResult closed = min_corr_equal_closed(p1);
        add("engine_vs_closed_form.rho", engine.rho, closed.rho, 1e-10);
    }
    if (a.fraction && b.fraction) {
        try {
            const ExactCorr ex = min_corr_exact(*a.fraction, *b.fraction);
            add("engine_vs_rational.e_xy", ex.e_xy.value.get_d(), engine.e_xy,
                rel(1e-12, ex.e_xy.value.get_d()));
            add("engine_vs_rational.rho", ex.rho_double, engine.rho, 1e-12);
        } catch (const BudgetExceeded& e) {
            err << "note: rational path skipped: " << e.what() << "\n";
        }
    }
    const double quad = quad_mean_product(p1, p2);
    add("engine_vs_quadrature.e_xy", quad, engine.e_xy, rel(1e-9, quad));

    const McEstimate mc = mc_corr(p1, p2, n, seed, Coupling::Countermonotone);
    if (mc.degenerate) {
        checks.push_back({"engine_vs_monte_carlo.rho", engine.rho, 0.0, 0.0, "skip"});
        err << "note: Monte Carlo sample has a constant marginal; comparison skipped\n";
    } else {
        add("engine_vs_monte_carlo.rho", engine.rho, mc.mean, 4.0 * mc.std_error);
    }

    out << "check,reference,candidate,abs_diff,tolerance,status\n";
    bool all_pass = true;
    for (const Check& c : checks) {
        out << c.name << ',' << format15(c.reference) << ',' << format15(c.candidate) << ','
            << format15(std::abs(c.reference - c.candidate)) << ',' << format15(c.tolerance) << ','
            << c.status << '\n';
        if (c.status == "FAIL") all_pass = false;
    }
    return all_pass ? kOk : kDisagreement;
}

int cmd_sample(const std::string& s1, const std::string& s2, const std::string& n_s, const std::string& seed_s,
               const std::string& coupling_s, std::ostream& out, std::ostream& err) {
    const auto coupling = parse_coupling(coupling_s);
    if (!coupling) {
        err << "error: coupling: unknown coupling '" << coupling_s
            << "' (expected countermonotone, comonotone or independent)\n";
        return kUsage;
    }
    const GeoParam p1(parse_probability("p1", s1).value);
    const GeoParam p2(parse_probability("p2", s2).value);
    const std::int64_t n = parse_count("n", n_s);
    const std::uint64_t seed = parse_seed(seed_s);

    std::string buffer;
    buffer.reserve(1 << 16);
    for_each_sample(p1, p2, n, seed, *coupling, [&](std::int64_t x1, std::int64_t x2) {
        buffer += std::to_string(x1);
        buffer += ',';
        buffer += std::to_string(x2);
        buffer += '\n';
        if (buffer.size() > (1 << 16) - 64) {
            out << buffer;
            buffer.clear();
        }
    });
    out << buffer;
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Extremal correlation between two Geometric random variables", "geo_extremal"};
    app.require_subcommand(1);

    std::string c_p1, c_p2;
    bool c_exact = false;
    bool c_json = false;
    auto* compute = app.add_subcommand("compute", "Minimum and maximum correlation for one pair");
    compute->add_option("p1", c_p1, "first parameter, e.g. 0.25 or 1/4")->required();
    compute->add_option("p2", c_p2, "second parameter")->required();
    compute->add_flag("--exact", c_exact, "also report exact rational values for fraction inputs");
    compute->add_flag("--json", c_json, "emit JSON");

    std::string s_lo, s_hi, s_step, s_out, s_format = "csv";
    std::vector<std::string> s_at;
    auto* scan = app.add_subcommand("scan", "Tabulate rho_min(p, p) and its bounds over a grid of p");
    scan->add_option("p_min", s_lo)->required();
    scan->add_option("p_max", s_hi)->required();
    scan->add_option("step", s_step)->required();
    scan->add_option("--out", s_out, "output file (default: standard output)");
    scan->add_option("--format", s_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    scan->add_option("--at", s_at, "extra p values to evaluate");

    std::string k_p_min;
    auto* kinks = app.add_subcommand("kinks", "List derivative discontinuities of rho_min(p, p)");
    kinks->add_option("p_min", k_p_min)->required();

    std::string v_p1, v_p2, v_n, v_seed;
    auto* verify = app.add_subcommand("verify", "Cross-check every evaluation path for one pair");
    verify->add_option("p1", v_p1)->required();
    verify->add_option("p2", v_p2)->required();
    verify->add_option("n", v_n, "Monte Carlo sample size")->required();
    verify->add_option("seed", v_seed)->required();

    std::string m_p1, m_p2, m_n, m_seed, m_coupling;
    auto* sample = app.add_subcommand("sample", "Draw coupled pairs x1,x2");
    sample->add_option("p1", m_p1)->required();
    sample->add_option("p2", m_p2)->required();
    sample->add_option("n", m_n)->required();
    sample->add_option("seed", m_seed)->required();
    sample->add_option("coupling", m_coupling, "countermonotone, comonotone or independent")->required();

    std::vector<const char*> argv;
    argv.push_back("geo_extremal");
    for (const std::string& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*compute) return cmd_compute(c_p1, c_p2, c_exact, c_json, out, err);
        if (*scan) return cmd_scan(s_lo, s_hi, s_step, s_at, s_out, s_format, out, err);
        if (*kinks) return cmd_kinks(k_p_min, out);
        if (*verify) return cmd_verify(v_p1, v_p2, v_n, v_seed, out, err);
        if (*sample) return cmd_sample(m_p1, m_p2, m_n, m_seed, m_coupling, out, err);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace geoextremal::cli
