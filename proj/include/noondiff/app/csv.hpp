#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "noondiff/curve.hpp"
#include "noondiff/spin/spectrum.hpp"

namespace noondiff::app {

inline constexpr const char* kCurveHeader = "g_T_per_m,s_norm,s_stderr";

// %.17g so that reading the file back gives the same doubles.
std::string format_double(double x);

// Header line then one row per point; s_stderr is blank without sigma.
void write_curve_csv(std::ostream& out, const AttenuationCurve& curve);

// Parses g and s (and s_stderr when present) into curve.points. Throws
// InputError naming the line number of a malformed row, and for a file
// without data rows.
std::vector<CurvePoint> read_curve_csv(std::istream& in, const std::string& source = "<csv>");

// "g s" per line, whitespace separated.
void write_plot_data(std::ostream& out, const std::vector<double>& x, const std::vector<double>& y);

void write_spectrum_csv(std::ostream& out, const std::vector<spin::StickLine>& lines);

}  // namespace noondiff::app
