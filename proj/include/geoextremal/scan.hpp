#pragma once

// Equal-parameter scans of the minimum correlation, as plotted against p.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace geoextremal {

struct ScanRow {
    double p = 0.0;
    double rho_min = 0.0;
    double bound_lower = 0.0;
    double bound_upper = 0.0;
    std::int64_t n_breakpoints = 0;
};

// p_min, p_min + step, ... up to p_max, each value rounded through format15
// so a written grid parses back to the same doubles.
std::vector<double> scan_grid(double p_min, double p_max, double step);

ScanRow scan_row(double p);
std::vector<ScanRow> scan_rows(std::span<const double> ps);
std::vector<ScanRow> scan_rows_serial(std::span<const double> ps);

struct SlopeJump {
    double left = 0.0;   // (rho(p) - rho(p - h)) / h
    double right = 0.0;  // (rho(p + h) - rho(p)) / h
    double jump() const noexcept { return right - left; }
};

// One-sided finite-difference slopes of p -> min_corr(p, p).rho.
SlopeJump measure_slope_jump(double p, double h = 1e-7);

// Decimal text with 15 significant digits.
std::string format15(double x);

}  // namespace geoextremal
