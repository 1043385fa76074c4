#include "textio.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& token, const std::string& context) {
  const std::string t = trim(token);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
    throw UsageError(context + ": cannot parse '" + token + "' as a number");
  }
  return v;
}

}  // namespace

MatrixBuffer read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string token;
    while (std::getline(ss, token, ',')) {
      row.push_back(parse_double(token, path + ":" + std::to_string(rows.size() + 1)));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw UsageError(path + ": row " + std::to_string(rows.size() + 1) + " has " +
                       std::to_string(row.size()) + " columns, expected " +
                       std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw UsageError(path + ": empty matrix file");
  if (rows.size() != rows.front().size()) {
    throw UsageError(path + ": matrix is " + std::to_string(rows.size()) + "x" +
                     std::to_string(rows.front().size()) + ", expected square");
  }

  MatrixBuffer m;
  m.dim = static_cast<int>(rows.size());
  m.values.reserve(static_cast<std::size_t>(m.dim) * m.dim);
  for (const auto& row : rows) m.values.insert(m.values.end(), row.begin(), row.end());
  return m;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(const std::string& path, const MatrixBuffer& m) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.dim) * m.dim * 12);
  for (int i = 0; i < m.dim; ++i) {
    for (int j = 0; j < m.dim; ++j) {
      if (j > 0) out += ',';
      out += format_double(m.at(i, j));
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

int write_edges_tsv(const std::string& path, const MatrixBuffer& m, double tol) {
  std::string out;
  int count = 0;
  for (int i = 0; i < m.dim; ++i) {
    for (int j = i + 1; j < m.dim; ++j) {
      const double v = m.at(i, j);
      if (std::abs(v) > tol) {
        out += std::to_string(i);
        out += '\t';
        out += std::to_string(j);
        out += '\t';
        out += format_double(v);
        out += '\n';
        ++count;
      }
    }
  }
  write_file_atomic(path, out);
  return count;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);

  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("digest initialization failed");
  }
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);

  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::vector<std::string> split_list(const std::string& joined, const std::string& what) {
  std::vector<std::string> parts;
  std::stringstream ss(joined);
  std::string token;
  while (std::getline(ss, token, ',')) {
    token = trim(token);
    if (token.empty()) throw UsageError(what + ": empty element in list '" + joined + "'");
    parts.push_back(token);
  }
  if (parts.empty()) throw UsageError(what + ": empty list");
  return parts;
}

std::vector<double> parse_double_list(const std::string& joined, const std::string& what) {
  std::vector<double> out;
  for (const std::string& part : split_list(joined, what)) out.push_back(parse_double(part, what));
  return out;
}

std::vector<int> parse_int_list(const std::string& joined, const std::string& what) {
  std::vector<int> out;
  for (const std::string& part : split_list(joined, what)) {
    char* end = nullptr;
    const long v = std::strtol(part.c_str(), &end, 10);
    if (end != part.c_str() + part.size()) {
      throw UsageError(what + ": cannot parse '" + part + "' as an integer");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

}  // namespace cli
