#pragma once

// Numeric CSV matrices. Floats are written with 17 significant digits so a
// write/read round trip is bitwise exact.

#include "sscov/linalg.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace sscov::app {

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// "%.17g"; non-finite values print as nan, inf, -inf.
std::string format_double(double x);

struct CsvMatrix {
    Matrix values;
    /// Column names when the first line had no numeric field, else empty.
    std::vector<std::string> header;
};

/// Parses comma-separated numbers. Blank lines are skipped. A first line
/// whose fields are all non-numeric is taken as a header. Errors cite the
/// 1-based file line and column.
CsvMatrix parse_csv_matrix(const std::string& text, const std::string& origin = "input");
CsvMatrix read_csv_matrix(const std::string& path);

std::string format_csv_matrix(const Matrix& m, const std::vector<std::string>& header = {});
void write_text_file(const std::string& path, const std::string& text);

}  // namespace sscov::app
