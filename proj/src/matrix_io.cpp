// matrix_io.cpp

#include "burstkit/matrix_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "burstkit/trace.hpp"
#include "csv.hpp"

namespace burstkit {

namespace {

void put_u32(std::ostream &out, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                           static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(bytes, 4);
}

std::uint32_t get_u32(const unsigned char *b) {
    return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) | (std::uint32_t{b[2]} << 16) |
           (std::uint32_t{b[3]} << 24);
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

}  // namespace

void write_matrix(std::ostream &out, const Matrix &m) {
    if (m.rows() > UINT32_MAX || m.cols() > UINT32_MAX) {
        throw std::length_error{"matrix too large for the binary format"};
    }
    out.write(matrix_magic.data(), matrix_magic.size());
    put_u32(out, static_cast<std::uint32_t>(m.rows()));
    put_u32(out, static_cast<std::uint32_t>(m.cols()));
    std::vector<char> buf(m.cols() * 4);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            const std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(row[c]));
            buf[4 * c] = static_cast<char>(bits & 0xff);
            buf[4 * c + 1] = static_cast<char>((bits >> 8) & 0xff);
            buf[4 * c + 2] = static_cast<char>((bits >> 16) & 0xff);
            buf[4 * c + 3] = static_cast<char>((bits >> 24) & 0xff);
        }
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
}

Matrix read_matrix(std::istream &in) {
    unsigned char header[12];
    if (!in.read(reinterpret_cast<char *>(header), sizeof header)) {
        throw data_error{"matrix file truncated (header)"};
    }
    if (std::memcmp(header, matrix_magic.data(), 4) != 0) {
        throw data_error{"not a burstkit matrix file (bad magic)"};
    }
    const std::size_t rows = get_u32(header + 4);
    const std::size_t cols = get_u32(header + 8);
    std::vector<double> data(rows * cols);
    std::vector<unsigned char> buf(cols * 4);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!in.read(reinterpret_cast<char *>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
            throw data_error{"matrix file truncated at row " + std::to_string(r)};
        }
        for (std::size_t c = 0; c < cols; ++c) {
            data[r * cols + c] = std::bit_cast<float>(get_u32(buf.data() + 4 * c));
        }
    }
    return Matrix{rows, cols, std::move(data)};
}

void write_matrix_file(const std::string &path, const Matrix &m) {
    std::ofstream out{path, std::ios::binary};
    if (!out) {
        throw data_error{"cannot write " + path};
    }
    write_matrix(out, m);
}

Matrix read_matrix_file(const std::string &path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) {
        throw data_error{"cannot open " + path};
    }
    try {
        return read_matrix(in);
    } catch (const data_error &e) {
        throw data_error{path + ": " + e.what()};
    }
}

void write_row_index(const std::string &path, const std::vector<RowInfo> &rows) {
    std::ofstream out{path};
    if (!out) {
        throw data_error{"cannot write " + path};
    }
    out << "filename,label,circuit\n";
    for (const auto &r : rows) {
        out << r.filename << ',' << label_to_string(r.label) << ',' << r.circuit << '\n';
    }
}

std::vector<RowInfo> read_row_index(const std::string &path) {
    std::ifstream in{path};
    if (!in) {
        throw data_error{"cannot open " + path};
    }
    std::vector<RowInfo> out;
    const auto rows = csv::read_rows(in);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto &r = rows[i];
        if (i == 0 && r[0] == "filename") {
            continue;
        }
        if (r.size() != 3) {
            throw data_error{path + ": row " + std::to_string(i + 1) + ": expected filename,label,circuit"};
        }
        try {
            out.push_back({r[0], label_from_string(r[1]), std::stol(r[2])});
        } catch (const std::exception &) {
            throw data_error{path + ": row " + std::to_string(i + 1) + ": bad label or circuit"};
        }
    }
    return out;
}

void write_feature_csv(const std::string &path, const Matrix &m, const std::vector<RowInfo> &rows) {
    if (rows.size() != m.rows()) {
        throw std::invalid_argument{"row info does not match matrix rows"};
    }
    std::ofstream out{path};
    if (!out) {
        throw data_error{"cannot write " + path};
    }
    out << "label,circuit";
    for (std::size_t c = 0; c < m.cols(); ++c) {
        out << ",f" << c;
    }
    out << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << label_to_string(rows[r].label) << ',' << rows[r].circuit;
        for (double v : m.row(r)) {
            out << ',' << format_double(v);
        }
        out << '\n';
    }
}

FeatureTable read_feature_csv(const std::string &path) {
    std::ifstream in{path};
    if (!in) {
        throw data_error{"cannot open " + path};
    }
    const auto rows = csv::read_rows(in);
    if (rows.empty() || rows[0].size() < 3 || rows[0][0] != "label" || rows[0][1] != "circuit") {
        throw data_error{path + ": expected header label,circuit,<features...>"};
    }
    FeatureTable table;
    table.column_names.assign(rows[0].begin() + 2, rows[0].end());
    const std::size_t cols = table.column_names.size();
    std::vector<double> data;
    data.reserve((rows.size() - 1) * cols);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto &r = rows[i];
        if (r.size() != cols + 2) {
            throw data_error{path + ": row " + std::to_string(i + 1) + ": expected " + std::to_string(cols + 2) +
                             " fields"};
        }
        try {
            table.labels.push_back(label_from_string(r[0]));
            table.circuits.push_back(std::stol(r[1]));
            for (std::size_t c = 0; c < cols; ++c) {
                data.push_back(std::stod(r[c + 2]));
            }
        } catch (const std::exception &) {
            throw data_error{path + ": row " + std::to_string(i + 1) + ": malformed value"};
        }
    }
    table.values = Matrix{rows.size() - 1, cols, std::move(data)};
    return table;
}

}  // namespace burstkit
