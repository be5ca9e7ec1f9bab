#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hsl/synthdata.hpp"

namespace hsl {

namespace {

void append_double(std::string& out, double v) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(len));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

std::string dataset_csv(const Dataset& S) {
  std::string out;
  for (std::size_t j = 0; j < S.dim(); ++j) {
    out += 'x';
    out += std::to_string(j);
    out += ',';
  }
  out += "y\n";
  for (std::size_t i = 0; i < S.size(); ++i) {
    for (double v : S.x(i)) {
      append_double(out, v);
      out += ',';
    }
    out += S.y(i) > 0 ? "1\n" : "-1\n";
  }
  return out;
}

void write_dataset_csv(const Dataset& S, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  const std::string text = dataset_csv(S);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw IoError("write failed for " + path);
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw IoError(path + ": missing header");
  const auto header = split_csv(line);
  if (header.empty() || header.back() != "y") throw IoError(path + ": header must end with y");
  const std::size_t d = header.size() - 1;
  for (std::size_t j = 0; j < d; ++j) {
    if (header[j] != "x" + std::to_string(j)) throw IoError(path + ": unexpected column " + header[j]);
  }
  Dataset S(d);
  std::vector<double> x(d);
  std::size_t line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != d + 1) throw IoError(path + ": wrong field count on line " + std::to_string(line_no));
    for (std::size_t j = 0; j < d; ++j) {
      const auto& s = fields[j];
      const auto res = std::from_chars(s.data(), s.data() + s.size(), x[j]);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw IoError(path + ": bad number '" + s + "' on line " + std::to_string(line_no));
      }
    }
    if (fields[d] == "1") {
      S.push_back(x, 1);
    } else if (fields[d] == "-1") {
      S.push_back(x, -1);
    } else {
      throw IoError(path + ": label must be 1 or -1 on line " + std::to_string(line_no));
    }
  }
  return S;
}

}  // namespace hsl
