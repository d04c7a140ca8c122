#include "geoextremal/scan.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "geoextremal/analytic.hpp"
#include "geoextremal/errors.hpp"
#include "geoextremal/extremal.hpp"
#include "geoextremal/parallel.hpp"

namespace geoextremal {

std::string format15(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

std::vector<double> scan_grid(double p_min, double p_max, double step) {
    if (!(p_min > 0.0 && p_min < p_max && p_max < 1.0)) {
        throw DomainError("scan: need 0 < p_min < p_max < 1");
    }
    if (!(step > 0.0)) throw DomainError("scan: step must be positive");
    const auto n = static_cast<std::int64_t>(std::floor((p_max - p_min) / step + 1e-9));
    std::vector<double> ps;
    ps.reserve(static_cast<std::size_t>(n + 1));
    for (std::int64_t k = 0; k <= n; ++k) {
        const double p = p_min + static_cast<double>(k) * step;
        ps.push_back(std::strtod(format15(p).c_str(), nullptr));
    }
    return ps;
}

ScanRow scan_row(double p) {
    const GeoParam gp(p);
    const CorrResult r = min_corr(gp, gp);
    const BoundPair b = bound_pair(gp, gp);
    return {p, r.rho, b.lower, b.upper, r.n_breakpoints};
}

std::vector<ScanRow> scan_rows_serial(std::span<const double> ps) {
    std::vector<ScanRow> rows;
    rows.reserve(ps.size());
    for (double p : ps) rows.push_back(scan_row(p));
    return rows;
}

std::vector<ScanRow> scan_rows(std::span<const double> ps) {
    // Rows land in input order whatever the completion order.
    std::vector<ScanRow> rows(ps.size());
    const auto n = static_cast<std::int64_t>(ps.size());
#pragma omp parallel for schedule(dynamic) num_threads(configured_threads())
    for (std::int64_t k = 0; k < n; ++k) {
        rows[static_cast<std::size_t>(k)] = scan_row(ps[static_cast<std::size_t>(k)]);
    }
    return rows;
}

SlopeJump measure_slope_jump(double p, double h) {
    auto rho = [](double x) {
        const GeoParam gp(x);
        return min_corr(gp, gp).rho;
    };
    const double mid = rho(p);
    return {(mid - rho(p - h)) / h, (rho(p + h) - mid) / h};
}

}  // namespace geoextremal
