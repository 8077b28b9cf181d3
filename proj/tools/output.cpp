#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace cli {

CsvWriter::CsvWriter(const RunConfig& config, std::vector<std::string> columns)
    : ncols_(columns.size()) {
    for (const auto& [key, value] : config_items(config)) {
        buf_ += "# ";
        buf_ += key;
        buf_ += " = ";
        buf_ += value;
        buf_ += "\n";
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) buf_ += ",";
        buf_ += columns[i];
    }
    buf_ += "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    char num[64];
    for (std::size_t i = 0; i < ncols_ && i < values.size(); ++i) {
        if (i) buf_ += ",";
        std::snprintf(num, sizeof num, "%.17g", values[i]);
        buf_ += num;
    }
    buf_ += "\n";
}

// Result metadata uses a distinct marker so that plain "# key = value"
// lines remain exclusively the re-parseable configuration echo.
void CsvWriter::comment(const std::string& text) {
    buf_ += "#: ";
    buf_ += text;
    buf_ += "\n";
}

bool write_file(const std::string& path, const std::string& buf) {
    if (path == "-") {
        std::fwrite(buf.data(), 1, buf.size(), stdout);
        return true;
    }
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) return false;
    const bool ok = std::fwrite(buf.data(), 1, buf.size(), f) == buf.size();
    return std::fclose(f) == 0 && ok;
}

namespace {

constexpr double kW = 860.0, kH = 540.0;
constexpr double kL = 80.0, kR = 180.0, kT = 48.0, kB = 64.0;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

}  // namespace

std::string render_svg(const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, const std::vector<SvgSeries>& series) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmin < xmax)) { xmin -= 0.5; xmax += 0.5; }
    if (!(ymin < ymax)) { ymin -= 0.5; ymax += 0.5; }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double pw = kW - kL - kR, ph = kH - kT - kB;
    auto px = [&](double x) { return kL + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return kT + (ymax - y) / (ymax - ymin) * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kW) + "\" height=\"" +
           fmt(kH) + "\" viewBox=\"0 0 " + fmt(kW) + " " + fmt(kH) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + fmt(kL + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" + title + "</text>\n";

    // Frame and ticks.
    out += "<rect x=\"" + fmt(kL) + "\" y=\"" + fmt(kT) + "\" width=\"" + fmt(pw) +
           "\" height=\"" + fmt(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 5.0;
        const double fy = ymin + (ymax - ymin) * i / 5.0;
        out += "<line x1=\"" + fmt(px(fx)) + "\" y1=\"" + fmt(kT + ph) + "\" x2=\"" + fmt(px(fx)) +
               "\" y2=\"" + fmt(kT + ph + 6) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt(px(fx)) + "\" y=\"" + fmt(kT + ph + 22) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + fmt(fx) +
               "</text>\n";
        out += "<line x1=\"" + fmt(kL - 6) + "\" y1=\"" + fmt(py(fy)) + "\" x2=\"" + fmt(kL) +
               "\" y2=\"" + fmt(py(fy)) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt(kL - 10) + "\" y=\"" + fmt(py(fy) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + fmt(fy) +
               "</text>\n";
    }
    out += "<text x=\"" + fmt(kL + pw / 2) + "\" y=\"" + fmt(kH - 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" + xlabel +
           "</text>\n";
    out += "<text x=\"20\" y=\"" + fmt(kT + ph / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
           "transform=\"rotate(-90 20 " + fmt(kT + ph / 2) + ")\">" + ylabel + "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kColors[s % (sizeof kColors / sizeof *kColors)];
        std::string pts;
        bool pen_up = true;
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            if (!std::isfinite(series[s].x[i]) || !std::isfinite(series[s].y[i])) {
                pen_up = true;
                continue;
            }
            pts += pen_up ? "M" : "L";
            pts += fmt(px(series[s].x[i])) + " " + fmt(py(series[s].y[i])) + " ";
            pen_up = false;
        }
        out += "<path d=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"1.5\"/>\n";
        const double ly = kT + 16 + 18 * static_cast<double>(s);
        out += "<line x1=\"" + fmt(kL + pw + 12) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
               fmt(kL + pw + 36) + "\" y2=\"" + fmt(ly) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + fmt(kL + pw + 42) + "\" y=\"" + fmt(ly + 4) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + series[s].label + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace cli
