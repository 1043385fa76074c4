#ifndef GGLOPT_TOOLS_TEXTIO_HPP_
#define GGLOPT_TOOLS_TEXTIO_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

// User-facing problem with inputs or flags; the CLI maps it to exit code 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Dense square matrix as a row-major buffer, the shape the C API speaks.
struct MatrixBuffer {
  int dim = 0;
  std::vector<double> values;  // dim*dim, row major

  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * dim + j]; }
};

// Parses a headerless comma-separated matrix file. Throws UsageError on
// malformed numbers, ragged rows, or a non-square result.
MatrixBuffer read_matrix_csv(const std::string& path);

// Writes with enough digits (%.17g) that re-reading restores every bit.
void write_matrix_csv(const std::string& path, const MatrixBuffer& m);

// Writes strictly-upper entries with |value| > tol as "i<TAB>j<TAB>value",
// 0-based indices. Returns the number of edges written.
int write_edges_tsv(const std::string& path, const MatrixBuffer& m, double tol);

// Writes content to path via a temporary file in the same directory plus an
// atomic rename, so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

// Hex SHA-256 of a file's bytes. Throws UsageError when the file cannot be read.
std::string sha256_file(const std::string& path);

// Splits "a,b,c" into trimmed nonempty parts; throws UsageError on empties.
std::vector<std::string> split_list(const std::string& joined, const std::string& what);

std::vector<double> parse_double_list(const std::string& joined, const std::string& what);
std::vector<int> parse_int_list(const std::string& joined, const std::string& what);

std::string format_double(double v);

}  // namespace cli

#endif  // GGLOPT_TOOLS_TEXTIO_HPP_
