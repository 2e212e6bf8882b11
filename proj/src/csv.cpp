// csv.cpp

#include "ramanup/csv.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ramanup {

CsvWriter::CsvWriter(const std::string& path) : out_(path)
{
    if (!out_) throw std::runtime_error("CsvWriter: cannot open '" + path + "' for writing");
}

void CsvWriter::metadata(const std::string& key, const std::string& value)
{
    if (header_written_)
        throw std::logic_error("CsvWriter: metadata must precede the header");
    out_ << "# " << key << ": " << value << "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns)
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
    header_written_ = true;
}

void CsvWriter::row(const std::vector<double>& values)
{
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << (i ? "," : "") << format_number(values[i]);
    out_ << "\n";
}

void CsvWriter::text_row(const std::vector<std::string>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
}

std::string CsvWriter::format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

int CsvTable::column_index(const std::string& name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable read_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open '" + path + "'");
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!have_header) {
            table.columns = cells;
            have_header = true;
        } else {
            table.rows.push_back(cells);
        }
    }
    if (!have_header) throw std::runtime_error("read_csv: no header found in '" + path + "'");
    return table;
}

}  // namespace ramanup
