#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace garchboot {

/// Raised for malformed input data files; maps to the data-error exit
/// code in the CLI.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// 17 significant digits: enough for exact double round-trips, and a
/// fixed format so identical runs produce byte-identical files.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Minimal CSV emitter: one header, rows of preformatted cells.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path) {
        if (!out_) throw std::runtime_error("cannot open output file: " + path);
        write_row(header);
    }

    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

/**
 * Series input format: one observation per line in plain decimal text;
 * lines starting with '#' are comments; blank lines are skipped.
 * Anything else is a data error.
 */
inline std::vector<double> parse_series(std::istream& in, const std::string& origin) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed;
        trimmed.reserve(line.size());
        for (char c : line)
            if (c != ' ' && c != '\t' && c != '\r') trimmed.push_back(c);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        try {
            std::size_t pos = 0;
            const double v = std::stod(trimmed, &pos);
            if (pos != trimmed.size()) throw std::invalid_argument("");
            values.push_back(v);
        } catch (const std::exception&) {
            throw DataError(origin + ":" + std::to_string(line_no) + ": not a number: '" + line +
                            "'");
        }
    }
    return values;
}

}  // namespace garchboot
