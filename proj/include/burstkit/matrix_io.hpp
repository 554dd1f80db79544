// matrix_io.hpp
//
// Exchange formats shared by the feature, representation and
// classifier commands, and by external training harnesses:
//
//   binary matrix  "BKM1" magic, uint32 rows, uint32 cols (little
//                  endian), then rows*cols little-endian float32 values
//                  in row-major order
//   row index CSV  filename,label,circuit  (one line per matrix row)
//   feature CSV    label,circuit,f0,...,f{cols-1}

#ifndef BURSTKIT_MATRIX_IO_HPP
#define BURSTKIT_MATRIX_IO_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "burstkit/matrix.hpp"

namespace burstkit {

inline constexpr std::array<char, 4> matrix_magic{'B', 'K', 'M', '1'};

void write_matrix(std::ostream &out, const Matrix &m);
Matrix read_matrix(std::istream &in);
void write_matrix_file(const std::string &path, const Matrix &m);
Matrix read_matrix_file(const std::string &path);

struct RowInfo {
    std::string filename;
    int label;
    long circuit;

    bool operator==(const RowInfo &) const = default;
};

void write_row_index(const std::string &path, const std::vector<RowInfo> &rows);
std::vector<RowInfo> read_row_index(const std::string &path);

void write_feature_csv(const std::string &path, const Matrix &m, const std::vector<RowInfo> &rows);

struct FeatureTable {
    std::vector<std::string> column_names;   /// feature columns only
    std::vector<int> labels;
    std::vector<long> circuits;
    Matrix values;
};

FeatureTable read_feature_csv(const std::string &path);

}  // namespace burstkit

#endif  // BURSTKIT_MATRIX_IO_HPP
