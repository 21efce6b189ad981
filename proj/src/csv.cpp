#include "ltad/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ltad {

namespace {

// Splits one CSV record into fields. Quoted fields may contain commas and
// doubled quotes; unquoted fields are trimmed of surrounding blanks.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"' && cur.empty()) {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string trimmed(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool parse_number(const std::string& field, double* out) {
  const std::string t = trimmed(field);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

DataMatrix parse_csv(const std::string& text, const std::string& name) {
  std::vector<std::string> lines;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur)) {
    if (!cur.empty() && cur.back() == '\r') cur.pop_back();
    lines.push_back(cur);
  }
  while (!lines.empty() && trimmed(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw std::invalid_argument(name + ": empty input");

  std::vector<std::vector<double>> rows;
  int width = -1;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto fields = split_record(lines[li]);
    std::vector<double> row(fields.size());
    bool numeric = true;
    std::size_t bad_col = 0;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (!parse_number(fields[j], &row[j]) || !std::isfinite(row[j])) {
        numeric = false;
        bad_col = j;
        break;
      }
    }
    if (li == 0 && !numeric) continue;  // header row
    if (!numeric)
      throw std::invalid_argument(name + ": non-numeric cell at row " + std::to_string(li + 1) +
                                  ", column " + std::to_string(bad_col + 1));
    if (width < 0) width = static_cast<int>(fields.size());
    if (static_cast<int>(fields.size()) != width)
      throw std::invalid_argument(name + ": ragged row " + std::to_string(li + 1));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument(name + ": empty input");

  Eigen::MatrixXd X(static_cast<int>(rows.size()), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < width; ++j) X(static_cast<int>(i), j) = rows[i][static_cast<std::size_t>(j)];
  return DataMatrix(std::move(X));
}

DataMatrix ingest_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path);
}

void write_matrix_csv(const DataMatrix& X, const std::string& path, bool round_trip) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (int i = 0; i < X.n(); ++i) {
    for (int j = 0; j < X.p(); ++j) {
      if (j > 0) out << ',';
      out << (round_trip ? format_exact(X.values()(i, j)) : format_sig6(X.values()(i, j)));
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (const char ch : raw) {
    if (ch == '"') quoted += "\"\"";
    else quoted.push_back(ch);
  }
  quoted += '"';
  return quoted;
}

std::string format_sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string format_exact(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return format_sig6(v);
  return std::string(buf, ptr);
}

}  // namespace ltad
