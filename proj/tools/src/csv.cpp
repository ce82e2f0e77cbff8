#include "sscov_app/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sscov::app {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

bool parse_number(const std::string& field, double& out) {
    if (field.empty()) return false;
    const char* begin = field.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end != begin + field.size()) return false;
    // strtod reports ERANGE for subnormals too; only overflow is an error
    if (errno == ERANGE && std::isinf(v)) return false;
    out = v;
    return true;
}

}  // namespace

CsvMatrix parse_csv_matrix(const std::string& text, const std::string& origin) {
    CsvMatrix result;
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (first) {
            first = false;
            bool any_numeric = false;
            double tmp = 0.0;
            for (const auto& f : fields) any_numeric = any_numeric || parse_number(f, tmp);
            if (!any_numeric) {
                result.header = fields;
                width = fields.size();
                continue;
            }
        }
        if (width == 0) width = fields.size();
        if (fields.size() != width) {
            throw CsvError(origin + ": row " + std::to_string(line_no) + " has " +
                           std::to_string(fields.size()) + " fields, expected " + std::to_string(width));
        }
        std::vector<double> row(width);
        for (std::size_t c = 0; c < width; ++c) {
            if (!parse_number(fields[c], row[c])) {
                throw CsvError(origin + ": row " + std::to_string(line_no) + ", column " +
                               std::to_string(c + 1) + ": cannot parse '" + fields[c] + "' as a number");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw CsvError(origin + ": no data rows");
    result.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < width; ++c)
            result.values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    return result;
}

CsvMatrix read_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv_matrix(ss.str(), path);
}

std::string format_csv_matrix(const Matrix& m, const std::vector<std::string>& header) {
    std::string out;
    if (!header.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c) out += ',';
            out += header[c];
        }
        out += '\n';
    }
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            if (c) out += ',';
            out += format_double(m(r, c));
        }
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    const std::filesystem::path fp(path);
    if (fp.has_parent_path()) std::filesystem::create_directories(fp.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace sscov::app
