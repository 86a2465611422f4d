#include "output.hpp"

#include "dglue/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace dglue::cli {

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header) : out_(path) {
    if (!out_) throw ParameterError("cannot write " + path.string());
    for (const auto& h : header) *this << h;
    end_row();
}

CsvWriter& CsvWriter::operator<<(double x) { return *this << fmt::format("{:.17g}", x); }

CsvWriter& CsvWriter::operator<<(const std::string& s) {
    if (!first_) out_ << ',';
    out_ << s;
    first_ = false;
    return *this;
}

void CsvWriter::end_row() {
    out_ << '\n';
    first_ = true;
}

void write_svg(const std::filesystem::path& path, const std::string& title, const std::vector<Series>& series,
               bool log_x) {
    constexpr double W = 640, H = 400, M = 50;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    auto fx = [log_x](double x) { return log_x ? std::log10(x) : x; };
    for (const auto& s : series)
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.y[k])) continue;
            x0 = std::min(x0, fx(s.x[k]));
            x1 = std::max(x1, fx(s.x[k]));
            y0 = std::min(y0, s.y[k]);
            y1 = std::max(y1, s.y[k]);
        }
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) y1 = y0 + 1.0;
    std::ofstream out(path);
    if (!out) return;
    out << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n", W, H);
    out << fmt::format("<rect x=\"{0}\" y=\"{0}\" width=\"{1}\" height=\"{2}\" fill=\"none\" stroke=\"black\"/>\n", M,
                       W - 2 * M, H - 2 * M);
    out << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"14\">{}</text>\n", M, M - 15, title);
    out << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\">{:.4g}</text>\n", M, H - M + 15, x0);
    out << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.4g}</text>\n", W - M,
                       H - M + 15, x1);
    out << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.4g}</text>\n", M - 4, H - M, y0);
    out << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.4g}</text>\n", M - 4, M + 4, y1);
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        out << "<polyline fill=\"none\" stroke=\"" << colors[i % 4] << "\" points=\"";
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.y[k])) continue;
            const double px = M + (fx(s.x[k]) - x0) / (x1 - x0) * (W - 2 * M);
            const double py = H - M - (s.y[k] - y0) / (y1 - y0) * (H - 2 * M);
            out << fmt::format("{:.2f},{:.2f} ", px, py);
        }
        out << "\"/>\n";
        out << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{}\">{}</text>\n", W - M - 120,
                           M + 16 * (i + 1), colors[i % 4], s.label);
    }
    out << "</svg>\n";
}

}  // namespace dglue::cli
