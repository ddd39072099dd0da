#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace nsmcli {

/// Shortest decimal form that parses back to the identical double. Keeping
/// the text minimal makes rerun outputs byte-comparable.
std::string format_number(double v);

/**
 * One CSV file: a leading '#' comment describing the quantity, a header row
 * naming the columns, then data rows. All numbers go through
 * format_number so identical runs produce identical bytes.
 */
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::string& comment,
              const std::vector<std::string>& columns);

    void row(const std::vector<std::string>& cells);
    void numeric_row(const std::vector<double>& values);

    const std::string& path() const { return path_; }

  private:
    std::ofstream out_;
    std::string path_;
    std::size_t n_columns_;
};

}  // namespace nsmcli
