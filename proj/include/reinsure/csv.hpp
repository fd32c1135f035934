#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace reinsure {

/// Fixed 12-significant-digit rendering used for every CSV number.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Minimal CSV writer: a fixed header, then rows of preformatted cells.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : path_(path), out_(path) {
        if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
        write_cells(header);
    }

    CsvWriter& cell(double v) { return cell(format_number(v)); }
    CsvWriter& cell(std::string_view v) {
        row_.emplace_back(v);
        return *this;
    }
    template <class Int>
        requires std::is_integral_v<Int>
    CsvWriter& cell(Int v) {
        return cell(std::to_string(v));
    }

    void end_row() {
        write_cells(row_);
        row_.clear();
    }

    const std::string& path() const { return path_; }

  private:
    void write_cells(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
        if (!out_) throw std::runtime_error("write failed for '" + path_ + "'");
    }

    std::string path_;
    std::ofstream out_;
    std::vector<std::string> row_;
};

}  // namespace reinsure
