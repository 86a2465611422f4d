#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace dglue::cli {

// CSV writer; every double goes out with 17 significant digits.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header);
    CsvWriter& operator<<(double x);
    CsvWriter& operator<<(const std::string& s);
    void end_row();

private:
    std::ofstream out_;
    bool first_ = true;
};

struct Series {
    std::string label;
    std::vector<double> x, y;
};

// Polyline chart; log_x plots log10 of x.
void write_svg(const std::filesystem::path& path, const std::string& title, const std::vector<Series>& series,
               bool log_x = false);

}  // namespace dglue::cli
