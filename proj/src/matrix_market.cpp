#include "stochascope/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>

#include "stochascope/error.hpp"

namespace stochascope {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct Reader {
  std::ifstream in;
  long line_no = 0;
  std::string path;

  explicit Reader(const std::filesystem::path& p) : in(p), path(p.string()) {
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
  }

  // Next non-comment, non-blank line; false at EOF.
  bool next(std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      std::size_t i = out.find_first_not_of(" \t\r");
      if (i == std::string::npos) continue;
      if (out[i] == '%') continue;
      return true;
    }
    return false;
  }
};

void format_double(char* buf, std::size_t cap, double v) { std::snprintf(buf, cap, "%.17g", v); }

// Atomic write: temp file in the same directory, then rename.
class AtomicFile {
 public:
  explicit AtomicFile(const std::filesystem::path& path)
      : final_(path), tmp_(path.string() + ".tmp"), out_(tmp_, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open '" + tmp_.string() + "' for writing");
  }
  std::ofstream& stream() { return out_; }
  void commit() {
    out_.flush();
    if (!out_) throw std::runtime_error("write to '" + tmp_.string() + "' failed");
    out_.close();
    std::filesystem::rename(tmp_, final_);
  }
  ~AtomicFile() {
    if (out_.is_open()) {
      out_.close();
      std::error_code ec;
      std::filesystem::remove(tmp_, ec);
    }
  }

 private:
  std::filesystem::path final_;
  std::filesystem::path tmp_;
  std::ofstream out_;
};

}  // namespace

Matrix read_matrix_market(const std::filesystem::path& path) {
  Reader r(path);

  std::string header;
  if (!std::getline(r.in, header)) throw ParseError("empty file '" + r.path + "'", 0);
  r.line_no = 1;
  if (!header.empty() && header.back() == '\r') header.pop_back();
  std::istringstream hs(header);
  std::string banner, object, fmt, field, symmetry;
  hs >> banner >> object >> fmt >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", 1);
  object = lower(object);
  fmt = lower(fmt);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix" || field != "real" || symmetry != "general" ||
      (fmt != "coordinate" && fmt != "array"))
    throw ParseError("unsupported Matrix Market format '" + object + " " + fmt + " " + field +
                         " " + symmetry + "' (only coordinate/array real general)",
                     1);

  std::string line;
  if (!r.next(line)) throw ParseError("missing size line", r.line_no);

  if (fmt == "coordinate") {
    index_t n, d, nnz;
    {
      std::istringstream ls(line);
      if (!(ls >> n >> d >> nnz) || n < 1 || d < 1 || nnz < 0)
        throw ParseError("bad coordinate size line", r.line_no);
    }
    std::vector<std::tuple<index_t, index_t, double>> entries;
    entries.reserve(static_cast<std::size_t>(nnz));
    for (index_t e = 0; e < nnz; ++e) {
      if (!r.next(line)) throw ParseError("unexpected end of file: expected " +
                                              std::to_string(nnz) + " entries",
                                          r.line_no);
      std::istringstream ls(line);
      index_t i, j;
      double v;
      if (!(ls >> i >> j >> v)) throw ParseError("bad coordinate entry", r.line_no);
      if (i < 1 || i > n || j < 1 || j > d)
        throw ParseError("coordinate index out of range", r.line_no);
      entries.emplace_back(i - 1, j - 1, v);
    }
    if (r.next(line)) throw ParseError("trailing data after declared entries", r.line_no);

    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    for (std::size_t e = 1; e < entries.size(); ++e) {
      if (std::get<0>(entries[e]) == std::get<0>(entries[e - 1]) &&
          std::get<1>(entries[e]) == std::get<1>(entries[e - 1]))
        throw ParseError("duplicate entry at (" + std::to_string(std::get<0>(entries[e]) + 1) +
                             ", " + std::to_string(std::get<1>(entries[e]) + 1) + ")",
                         0);
    }

    std::vector<index_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
    std::vector<index_t> cols;
    std::vector<double> vals;
    cols.reserve(entries.size());
    vals.reserve(entries.size());
    for (const auto& [i, j, v] : entries) {
      if (v == 0.0) continue;  // never store explicit zeros
      ++row_ptr[static_cast<std::size_t>(i) + 1];
      cols.push_back(j);
      vals.push_back(v);
    }
    for (index_t i = 0; i < n; ++i)
      row_ptr[static_cast<std::size_t>(i) + 1] += row_ptr[static_cast<std::size_t>(i)];
    return Matrix::csr(n, d, std::move(row_ptr), std::move(cols), std::move(vals));
  }

  // Array format: column-major dense values.
  index_t n, d;
  {
    std::istringstream ls(line);
    if (!(ls >> n >> d) || n < 1 || d < 1) throw ParseError("bad array size line", r.line_no);
  }
  std::vector<double> vals(static_cast<std::size_t>(n * d));
  for (index_t j = 0; j < d; ++j) {
    for (index_t i = 0; i < n; ++i) {
      if (!r.next(line)) throw ParseError("unexpected end of file: expected " +
                                              std::to_string(n * d) + " values",
                                          r.line_no);
      std::istringstream ls(line);
      double v;
      if (!(ls >> v)) throw ParseError("bad array value", r.line_no);
      vals[static_cast<std::size_t>(i * d + j)] = v;
    }
  }
  if (r.next(line)) throw ParseError("trailing data after declared values", r.line_no);
  return Matrix::dense(n, d, std::move(vals));
}

void write_matrix_market(const std::filesystem::path& path, const Matrix& m) {
  AtomicFile file(path);
  std::ofstream& out = file.stream();
  char buf[64];
  if (m.is_dense()) {
    out << "%%MatrixMarket matrix array real general\n";
    out << m.rows() << " " << m.cols() << "\n";
    for (index_t j = 0; j < m.cols(); ++j)
      for (index_t i = 0; i < m.rows(); ++i) {
        format_double(buf, sizeof buf, m.at(i, j));
        out << buf << "\n";
      }
  } else {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << " " << m.cols() << " " << m.nnz() << "\n";
    const auto row_ptr = m.row_ptr();
    const auto cols = m.col_indices();
    const auto vals = m.values();
    for (index_t i = 0; i < m.rows(); ++i)
      for (index_t p = row_ptr[static_cast<std::size_t>(i)];
           p < row_ptr[static_cast<std::size_t>(i) + 1]; ++p) {
        format_double(buf, sizeof buf, vals[static_cast<std::size_t>(p)]);
        out << (i + 1) << " " << (cols[static_cast<std::size_t>(p)] + 1) << " " << buf << "\n";
      }
  }
  file.commit();
}

std::vector<double> read_vector_market(const std::filesystem::path& path) {
  Matrix m = read_matrix_market(path);
  if (m.cols() != 1) throw ParseError("expected a column vector in '" + path.string() + "'", 0);
  std::vector<double> v(static_cast<std::size_t>(m.rows()));
  for (index_t i = 0; i < m.rows(); ++i) v[static_cast<std::size_t>(i)] = m.at(i, 0);
  return v;
}

void write_vector_market(const std::filesystem::path& path, std::span<const double> v) {
  AtomicFile file(path);
  std::ofstream& out = file.stream();
  char buf[64];
  out << "%%MatrixMarket matrix array real general\n";
  out << v.size() << " 1\n";
  for (double x : v) {
    format_double(buf, sizeof buf, x);
    out << buf << "\n";
  }
  file.commit();
}

}  // namespace stochascope
