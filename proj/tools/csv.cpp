#include "csv.hpp"

#include <charconv>
#include <stdexcept>

namespace nsmcli {

std::string format_number(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::string& comment,
                     const std::vector<std::string>& columns)
    : out_(path), path_(path), n_columns_(columns.size()) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
    out_ << "# " << comment << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != n_columns_)
        throw std::logic_error(path_ + ": row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i)
        out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
    if (!out_) throw std::runtime_error("write failure on " + path_);
}

void CsvWriter::numeric_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (const double v : values) cells.push_back(format_number(v));
    row(cells);
}

}  // namespace nsmcli
