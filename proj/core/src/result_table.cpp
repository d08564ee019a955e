#include "mejpa/result_table.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mejpa/errors.hpp"

namespace mejpa {

using ordered_json = nlohmann::ordered_json;

void ResultTable::validate() const {
    if (columns.empty()) throw DomainError("ResultTable: no columns");
    if (units.size() != columns.size()) {
        throw DomainError("ResultTable: units row must cover every column");
    }
    for (const auto& row : rows) {
        if (row.size() != columns.size()) {
            throw DomainError("ResultTable: ragged row");
        }
    }
}

void ResultTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) throw DomainError("ResultTable: ragged row");
    rows.push_back(std::move(row));
}

void ResultTable::set_meta(const std::string& key, const std::string& value) {
    for (auto& kv : metadata) {
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    }
    metadata.emplace_back(key, value);
}

const std::string* ResultTable::find_meta(const std::string& key) const {
    for (const auto& kv : metadata) {
        if (kv.first == key) return &kv.second;
    }
    return nullptr;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

void write_csv(const ResultTable& t, std::ostream& out) {
    for (const auto& kv : t.metadata) {
        out << "# " << kv.first << ": " << kv.second << "\n";
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        out << (i ? "," : "") << t.columns[i];
    }
    out << "\n";
    for (std::size_t i = 0; i < t.units.size(); ++i) {
        out << (i ? "," : "") << t.units[i];
    }
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << format_number(row[i]);
        }
        out << "\n";
    }
}

void write_json(const ResultTable& t, std::ostream& out) {
    ordered_json j;
    ordered_json meta = ordered_json::object();
    for (const auto& kv : t.metadata) meta[kv.first] = kv.second;
    j["metadata"] = std::move(meta);
    j["columns"] = t.columns;
    j["units"] = t.units;
    j["rows"] = t.rows;
    out << j.dump(2) << "\n";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

ResultTable read_csv(std::istream& in) {
    ResultTable t;
    std::string line;
    int header_rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            std::string key = line.substr(1, colon == std::string::npos
                                                 ? std::string::npos
                                                 : colon - 1);
            std::string value =
                colon == std::string::npos ? "" : line.substr(colon + 1);
            auto trim = [](std::string& s) {
                const auto a = s.find_first_not_of(" \t\r");
                const auto b = s.find_last_not_of(" \t\r");
                s = (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
            };
            trim(key);
            trim(value);
            t.metadata.emplace_back(key, value);
            continue;
        }
        const auto fields = split_csv_line(line);
        if (header_rows == 0) {
            t.columns = fields;
            ++header_rows;
        } else if (header_rows == 1) {
            t.units = fields;
            ++header_rows;
        } else {
            std::vector<double> row;
            row.reserve(fields.size());
            for (const auto& f : fields) {
                char* end = nullptr;
                row.push_back(std::strtod(f.c_str(), &end));
                if (end == f.c_str()) {
                    throw DomainError("CSV parse error: non-numeric cell '" + f + "'");
                }
            }
            t.add_row(std::move(row));
        }
    }
    t.validate();
    return t;
}

ResultTable read_json_table(std::istream& in) {
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DomainError(std::string("JSON parse error: ") + e.what());
    }
    ResultTable t;
    for (const auto& [key, value] : j.at("metadata").items()) {
        t.metadata.emplace_back(key, value.get<std::string>());
    }
    t.columns = j.at("columns").get<std::vector<std::string>>();
    t.units = j.at("units").get<std::vector<std::string>>();
    t.rows = j.at("rows").get<std::vector<std::vector<double>>>();
    t.validate();
    return t;
}

}  // namespace

void write_table(const ResultTable& table, std::ostream& out, TableFormat format) {
    table.validate();
    if (format == TableFormat::csv) {
        write_csv(table, out);
    } else {
        write_json(table, out);
    }
}

std::string table_to_string(const ResultTable& table, TableFormat format) {
    std::ostringstream os;
    write_table(table, os, format);
    return os.str();
}

void write_table_file(const ResultTable& table, const std::string& path,
                      TableFormat format) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp);
        if (!out) throw DomainError("cannot open output file: " + tmp.string());
        write_table(table, out, format);
        if (!out.good()) throw DomainError("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

ResultTable read_table(std::istream& in, TableFormat format) {
    return format == TableFormat::csv ? read_csv(in) : read_json_table(in);
}

ResultTable read_table_file(const std::string& path, TableFormat format) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open result file: " + path);
    return read_table(in, format);
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace mejpa
