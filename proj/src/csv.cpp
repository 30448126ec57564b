#include "ensc/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ensc/errors.hpp"

namespace ensc::csv {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write(const std::filesystem::path& path, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw Error("csv: cannot open " + path.string() + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_double(row[i]);
        }
        out << '\n';
    }
    if (!out) throw Error("csv: write to " + path.string() + " failed");
}

std::vector<std::vector<double>> read_numeric(const std::filesystem::path& path,
                                              std::vector<std::string>* header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("csv: cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        bool numeric = true;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
            try {
                std::size_t pos = 0;
                double v = std::stod(field, &pos);
                while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos]))) ++pos;
                if (pos != field.size()) numeric = false;
                row.push_back(v);
            } catch (...) {
                numeric = false;
            }
        }
        if (first && !numeric) {
            if (header) *header = fields;
            first = false;
            continue;
        }
        first = false;
        if (!numeric) throw Error("csv: non-numeric row in " + path.string());
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace ensc::csv
