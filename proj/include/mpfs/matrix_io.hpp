#pragma once

#include <string>

#include "mpfs/data_matrix.hpp"

namespace mpfs {

/// Delimited-text ingestion: first row is a header; the column named
/// `response_column` becomes y and the remaining columns, in file order,
/// become the features. Accepts comma, semicolon, tab, or space delimiters.
DataMatrix load_text(const std::string& path,
                     const std::string& response_column);

void save_text(const DataMatrix& data, const std::string& path,
               const std::string& response_column = "y");

/// Binary layout: 8-byte magic "MPFSMAT1", two little-endian uint64 (N, M),
/// N*M little-endian IEEE-754 doubles row-major (X), then N doubles (y).
DataMatrix load_binary(const std::string& path);

void save_binary(const DataMatrix& data, const std::string& path);

}  // namespace mpfs
