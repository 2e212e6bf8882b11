// csv.hpp - Plot-ready CSV artifacts with an embedded metadata block

#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace ramanup {

// Layout: '#'-prefixed metadata lines, then the column header, then rows.
// Numbers are formatted with %.12g so identical inputs produce identical
// bytes. The generated_at line is the only non-reproducible content.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);

    void metadata(const std::string& key, const std::string& value);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void text_row(const std::vector<std::string>& cells);

    static std::string format_number(double v);

private:
    std::ofstream out_;
    bool header_written_ = false;
};

// Reads a CSV produced by CsvWriter (or hand-made measurement files):
// skips '#' lines, first remaining line is the header.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column_index(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);

}  // namespace ramanup
