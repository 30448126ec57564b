#ifndef ENSC_CSV_HPP
#define ENSC_CSV_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace ensc::csv {

/// Full-precision decimal text (17 significant digits).
std::string format_double(double v);

/// Writes header + numeric rows, LF line endings.
void write(const std::filesystem::path& path, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& rows);

/// Reads a numeric CSV. A leading non-numeric row is treated as the header
/// and returned through `header` when requested.
std::vector<std::vector<double>> read_numeric(const std::filesystem::path& path,
                                              std::vector<std::string>* header = nullptr);

}  // namespace ensc::csv

#endif
