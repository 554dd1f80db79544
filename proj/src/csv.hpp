// csv.hpp
//
// Minimal comma-separated reading for the toolkit's own files (no
// quoting; fields never contain commas).

#ifndef BURSTKIT_CSV_HPP
#define BURSTKIT_CSV_HPP

#include <istream>
#include <string>
#include <vector>

namespace burstkit::csv {

inline std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r' && c != '\n') {
            field += c;
        }
    }
    fields.push_back(field);
    for (auto &f : fields) {
        const auto b = f.find_first_not_of(' ');
        const auto e = f.find_last_not_of(' ');
        f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
    }
    return fields;
}

/// reads all non-empty rows; returns them split into fields
inline std::vector<std::vector<std::string>> read_rows(std::istream &in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) {
            continue;
        }
        rows.push_back(split(line));
    }
    return rows;
}

}  // namespace burstkit::csv

#endif  // BURSTKIT_CSV_HPP
