#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace cli {

// Deterministic CSV: '#'-prefixed header block echoing the resolved config,
// a column-name row, then rows of %.17g values, LF line endings.
class CsvWriter {
public:
    CsvWriter(const RunConfig& config, std::vector<std::string> columns);
    void row(const std::vector<double>& values);
    void comment(const std::string& text);
    const std::string& str() const { return buf_; }

private:
    std::string buf_;
    std::size_t ncols_;
};

// Writes buf to path ("-" = stdout). Returns false on I/O failure.
bool write_file(const std::string& path, const std::string& buf);

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Self-contained polyline plot with axes, ticks and a legend.
std::string render_svg(const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, const std::vector<SvgSeries>& series);

}  // namespace cli
