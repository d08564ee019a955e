#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace mejpa {

enum class TableFormat { csv, json };

/// Rectangular numeric result table with a units row and an ordered
/// metadata block (config hash, tool version, timestamp, run settings).
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::string> units;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    void validate() const;
    void add_row(std::vector<double> row);
    void set_meta(const std::string& key, const std::string& value);
    const std::string* find_meta(const std::string& key) const;
};

/// Serialize with 12 significant digits, '.' decimal point, no grouping.
std::string format_number(double v);

void write_table(const ResultTable& table, std::ostream& out, TableFormat format);
std::string table_to_string(const ResultTable& table, TableFormat format);

/// Atomic write: temp file in the target directory, then rename.
void write_table_file(const ResultTable& table, const std::string& path,
                      TableFormat format);

ResultTable read_table(std::istream& in, TableFormat format);
ResultTable read_table_file(const std::string& path, TableFormat format);

/// FNV-1a 64-bit hash of a byte string, hex encoded. Used to fingerprint
/// the input config in result metadata.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace mejpa
