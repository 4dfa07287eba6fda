#include "noondiff/app/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "noondiff/app/descriptor.hpp"

namespace noondiff::app {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    cells.push_back(trim(cell));
    return cells;
}

bool parse_number(const std::string& cell, double& out) {
    if (cell.empty()) {
        return false;
    }
    const char* first = cell.data();
    const char* last = first + cell.size();
    if (*first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_curve_csv(std::ostream& out, const AttenuationCurve& curve) {
    out << kCurveHeader << '\n';
    for (const auto& p : curve.points) {
        out << format_double(p.g) << ',' << format_double(p.s) << ',';
        if (p.sigma) {
            out << format_double(*p.sigma);
        }
        out << '\n';
    }
}

std::vector<CurvePoint> read_curve_csv(std::istream& in, const std::string& source) {
    std::vector<CurvePoint> points;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line);
        if (body.empty() || body[0] == '#') {
            continue;
        }
        const auto cells = split(body);
        if (!header_seen) {
            header_seen = true;
            double probe = 0.0;
            if (!parse_number(cells[0], probe)) {
                if (cells.size() < 2 || cells[0] != "g_T_per_m" || cells[1] != "s_norm" ||
                    (cells.size() > 2 && cells[2] != "s_stderr") || cells.size() > 3) {
                    throw InputError(source + ":" + std::to_string(line_no) + ": expected header " + kCurveHeader);
                }
                continue;
            }
        }
        if (cells.size() < 2 || cells.size() > 3) {
            throw InputError(source + ":" + std::to_string(line_no) + ": expected 2 or 3 columns");
        }
        CurvePoint p;
        if (!parse_number(cells[0], p.g) || !parse_number(cells[1], p.s)) {
            throw InputError(source + ":" + std::to_string(line_no) + ": malformed number");
        }
        if (cells.size() == 3 && !cells[2].empty()) {
            double sigma = 0.0;
            if (!parse_number(cells[2], sigma) || sigma < 0.0) {
                throw InputError(source + ":" + std::to_string(line_no) + ": malformed s_stderr");
            }
            p.sigma = sigma;
        }
        points.push_back(p);
    }
    if (points.empty()) {
        throw InputError(source + ": no data rows");
    }
    return points;
}

void write_plot_data(std::ostream& out, const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("plot columns differ in length");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        out << format_double(x[i]) << ' ' << format_double(y[i]) << '\n';
    }
}

void write_spectrum_csv(std::ostream& out, const std::vector<spin::StickLine>& lines) {
    out << "offset_Hz,intensity\n";
    for (const auto& l : lines) {
        out << format_double(l.offset_hz) << ',' << format_double(l.intensity) << '\n';
    }
}

}  // namespace noondiff::app
