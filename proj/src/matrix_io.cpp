#include "mpfs/matrix_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "mpfs/errors.hpp"

namespace mpfs {

namespace {

constexpr char kMagic[8] = {'M', 'P', 'F', 'S', 'M', 'A', 'T', '1'};

static_assert(std::endian::native == std::endian::little,
              "binary matrix format assumes a little-endian host");

char detect_delimiter(const std::string& header) {
    for (char c : {',', ';', '\t'})
        if (header.find(c) != std::string::npos) return c;
    return ' ';
}

std::vector<std::string> split_fields(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    if (delim == ' ') {
        while (ss >> field) out.push_back(field);
        return out;
    }
    while (std::getline(ss, field, delim)) {
        // Trim surrounding whitespace and a trailing CR from Windows files.
        const auto first = field.find_first_not_of(" \t\r");
        const auto last = field.find_last_not_of(" \t\r");
        out.push_back(first == std::string::npos
                          ? std::string()
                          : field.substr(first, last - first + 1));
    }
    return out;
}

double parse_cell(const std::string& field, std::size_t row,
                  std::size_t col) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &consumed);
    } catch (const std::exception&) {
        throw DataError("cell (" + std::to_string(row) + ", " +
                        std::to_string(col) + ") is not numeric: '" + field +
                        "'");
    }
    if (consumed != field.size())
        throw DataError("cell (" + std::to_string(row) + ", " +
                        std::to_string(col) + ") has trailing garbage: '" +
                        field + "'");
    if (!std::isfinite(value))
        throw DataError("cell (" + std::to_string(row) + ", " +
                        std::to_string(col) + ") is non-finite");
    return value;
}

}  // namespace

DataMatrix load_text(const std::string& path,
                     const std::string& response_column) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path + "' is empty");
    const char delim = detect_delimiter(line);
    const std::vector<std::string> header = split_fields(line, delim);
    if (header.empty()) throw DataError("'" + path + "' has an empty header");

    int response_idx = -1;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == response_column) response_idx = static_cast<int>(c);
    if (response_idx < 0)
        throw DataError("response column '" + response_column +
                        "' not found in header of '" + path + "'");
    if (header.size() < 2)
        throw DataError("'" + path + "' has no feature columns");

    std::vector<std::string> names;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (static_cast<int>(c) != response_idx) names.push_back(header[c]);

    std::vector<double> y_values;
    std::vector<double> x_values;  // row-major
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_fields(line, delim);
        if (fields.size() != header.size())
            throw DataError("row " + std::to_string(row + 1) + " of '" + path +
                            "' has " + std::to_string(fields.size()) +
                            " fields, expected " +
                            std::to_string(header.size()));
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const double v = parse_cell(fields[c], row + 1, c);
            if (static_cast<int>(c) == response_idx)
                y_values.push_back(v);
            else
                x_values.push_back(v);
        }
        ++row;
    }
    if (row == 0) throw DataError("'" + path + "' contains no data rows");

    const int N = static_cast<int>(row);
    const int M = static_cast<int>(names.size());
    Eigen::VectorXd y(N);
    Eigen::MatrixXd X(N, M);
    for (int i = 0; i < N; ++i) {
        y(i) = y_values[i];
        for (int j = 0; j < M; ++j)
            X(i, j) = x_values[static_cast<std::size_t>(i) * M + j];
    }
    return DataMatrix(std::move(y), std::move(X), std::move(names));
}

void save_text(const DataMatrix& data, const std::string& path,
               const std::string& response_column) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out.precision(std::numeric_limits<double>::max_digits10);

    out << response_column;
    for (int j = 0; j < data.n_features(); ++j)
        out << ',' << data.feature_name(j);
    out << '\n';
    for (int i = 0; i < data.n_obs(); ++i) {
        out << data.y()(i);
        for (int j = 0; j < data.n_features(); ++j) out << ',' << data.X()(i, j);
        out << '\n';
    }
    if (!out) throw DataError("write to '" + path + "' failed");
}

DataMatrix load_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "' for reading");

    char magic[8];
    if (!in.read(magic, sizeof magic) ||
        std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw DataError("'" + path + "' is not a binary matrix file (bad magic)");

    std::uint64_t dims[2];
    if (!in.read(reinterpret_cast<char*>(dims), sizeof dims))
        throw DataError("'" + path + "' truncated in header");
    const std::uint64_t N = dims[0];
    const std::uint64_t M = dims[1];
    if (N < 1 || M < 1)
        throw DataError("'" + path + "' declares empty dimensions");
    if (N > (1ULL << 31) || M > (1ULL << 31) ||
        N * M > (1ULL << 33))
        throw DataError("'" + path + "' declares implausibly large dimensions");

    std::vector<double> x_values(N * M);
    if (!in.read(reinterpret_cast<char*>(x_values.data()),
                 static_cast<std::streamsize>(x_values.size() * sizeof(double))))
        throw DataError("'" + path + "' truncated in matrix payload");
    std::vector<double> y_values(N);
    if (!in.read(reinterpret_cast<char*>(y_values.data()),
                 static_cast<std::streamsize>(y_values.size() * sizeof(double))))
        throw DataError("'" + path + "' truncated in response payload");
    char extra;
    if (in.read(&extra, 1))
        throw DataError("'" + path + "' has trailing bytes beyond the payload");

    Eigen::VectorXd y(static_cast<Eigen::Index>(N));
    Eigen::MatrixXd X(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(M));
    for (std::uint64_t i = 0; i < N; ++i) {
        y(static_cast<Eigen::Index>(i)) = y_values[i];
        for (std::uint64_t j = 0; j < M; ++j)
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                x_values[i * M + j];
    }
    return DataMatrix(std::move(y), std::move(X));
}

void save_binary(const DataMatrix& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");

    out.write(kMagic, sizeof kMagic);
    const std::uint64_t dims[2] = {static_cast<std::uint64_t>(data.n_obs()),
                                   static_cast<std::uint64_t>(data.n_features())};
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    std::vector<double> row(data.n_features());
    for (int i = 0; i < data.n_obs(); ++i) {
        for (int j = 0; j < data.n_features(); ++j) row[j] = data.X()(i, j);
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(double)));
    }
    std::vector<double> y(data.n_obs());
    for (int i = 0; i < data.n_obs(); ++i) y[i] = data.y()(i);
    out.write(reinterpret_cast<const char*>(y.data()),
              static_cast<std::streamsize>(y.size() * sizeof(double)));
    if (!out) throw DataError("write to '" + path + "' failed");
}

}  // namespace mpfs
