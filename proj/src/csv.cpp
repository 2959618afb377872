#include "wmcen/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace wmcen {

std::string format_double(double v) {
  char buf[32];
  // 17 significant digits always round-trip; trim to the shortest form
  // that still parses back exactly.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

Matrix load_csv(const std::string& path, bool has_header, char delimiter) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }

  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  bool skipped_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (has_header && !skipped_header) {
      skipped_header = true;
      continue;
    }

    std::vector<double> row;
    std::size_t start = 0;
    std::size_t col = 0;
    while (true) {
      const std::size_t end = line.find(delimiter, start);
      const std::string cell =
          line.substr(start, end == std::string::npos ? end : end - start);
      ++col;
      double value = 0.0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      while (first != last && (*first == ' ' || *first == '\t')) ++first;
      while (last != first && (*(last - 1) == ' ' || *(last - 1) == '\t')) --last;
      const auto res = std::from_chars(first, last, value);
      if (res.ec != std::errc{} || res.ptr != last || first == last) {
        std::ostringstream msg;
        msg << path << ": non-numeric cell at line " << line_no << ", column "
            << col;
        throw std::runtime_error(msg.str());
      }
      row.push_back(value);
      if (end == std::string::npos) break;
      start = end + 1;
    }

    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream msg;
      msg << path << ": line " << line_no << " has " << row.size()
          << " cells, expected " << rows.front().size();
      throw std::runtime_error(msg.str());
    }
    rows.push_back(std::move(row));
  }

  if (rows.empty()) {
    throw std::runtime_error(path + ": no data rows");
  }
  Matrix m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return m;
}

void save_csv(const std::string& path, const Matrix& m, char delimiter) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write file: " + path);
  }
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << delimiter;
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace wmcen
