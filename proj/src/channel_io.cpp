// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rfcap/experiment.hpp"

namespace rfcap {

namespace {

std::optional<double> parse_real(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty() || s.front() == '+') return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

// Coefficient of an imaginary part, with "i", "+i", "-i" meaning +-1.
std::optional<double> parse_imag_coefficient(std::string_view s) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  return parse_real(s);
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool blank(std::string_view line) {
  for (char c : line)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::complex<double> parse_complex_token(std::string_view token) {
  const auto fail = [&] { throw InvalidInput("malformed complex number '" + std::string(token) + "'"); };
  if (token.empty()) fail();

  const char last = token.back();
  if (last != 'i' && last != 'j') {
    const auto re = parse_real(token);
    if (!re) fail();
    return {*re, 0.0};
  }
  const std::string_view body = token.substr(0, token.size() - 1);
  // The real/imaginary split is the last sign that is neither leading nor
  // part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) {
    const auto im = parse_imag_coefficient(body);
    if (!im) fail();
    return {0.0, *im};
  }
  const auto re = parse_real(body.substr(0, split));
  const auto im = parse_imag_coefficient(body.substr(split));
  if (!re || !im) fail();
  return {*re, *im};
}

ComplexMatrix parse_channel_text(std::string_view text) {
  std::vector<std::pair<int, std::string_view>> lines;
  {
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      ++number;
      const std::string_view line = text.substr(pos, end - pos);
      if (!blank(line)) lines.emplace_back(number, line);
      pos = end + 1;
    }
  }
  if (lines.empty()) throw ParseError("channel: empty input", 1, 0);

  const auto [header_line, header] = lines.front();
  const auto dims = split_ws(header);
  int n_r = 0, n_t = 0;
  const auto parse_dim = [](std::string_view s, int& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && out > 0;
  };
  if (dims.size() != 2 || !parse_dim(dims[0], n_r) || !parse_dim(dims[1], n_t))
    throw ParseError("channel: header must be 'n_r n_t' with positive integers", header_line, 0);

  const int rows_present = static_cast<int>(lines.size()) - 1;
  if (rows_present != n_r) {
    std::ostringstream msg;
    msg << "channel: header declares " << n_r << " rows, found " << rows_present;
    const int where = rows_present > n_r ? lines[static_cast<std::size_t>(n_r) + 1].first : lines.back().first + 1;
    throw ParseError(msg.str(), where, 0);
  }

  ComplexMatrix h(n_r, n_t);
  for (int r = 0; r < n_r; ++r) {
    const auto [line_no, line] = lines[static_cast<std::size_t>(r) + 1];
    const auto tokens = split_ws(line);
    if (static_cast<int>(tokens.size()) != n_t) {
      std::ostringstream msg;
      msg << "channel: row " << r + 1 << " has " << tokens.size() << " entries, expected " << n_t;
      throw ParseError(msg.str(), line_no, 0);
    }
    for (int c = 0; c < n_t; ++c) {
      try {
        h(r, c) = parse_complex_token(tokens[static_cast<std::size_t>(c)]);
      } catch (const InvalidInput& e) {
        std::ostringstream msg;
        msg << "channel: line " << line_no << ", column " << c + 1 << ": " << e.what();
        throw ParseError(msg.str(), line_no, c + 1);
      }
    }
  }
  return h;
}

ComplexMatrix parse_channel_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("channel: cannot open '" + path.string() + "'", 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_channel_text(buf.str());
}

std::string format_channel(const ComplexMatrix& h, int decimals) {
  std::ostringstream out;
  out << h.rows() << ' ' << h.cols() << '\n';
  char cell[64];
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
      const double re = h(r, c).real();
      const double im = h(r, c).imag();
      std::snprintf(cell, sizeof cell, "%.*f%c%.*fi", decimals, re, std::signbit(im) ? '-' : '+', decimals,
                    std::abs(im));
      out << (c ? " " : "") << cell;
    }
    out << '\n';
  }
  return out.str();
}

namespace {

ComplexMatrix from_rows(int rows, int cols, std::initializer_list<std::complex<double>> values) {
  ComplexMatrix h(rows, cols);
  auto it = values.begin();
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) h(r, c) = *it++;
  return h;
}

}  // namespace

// Fixed reference realizations at four decimals: two 2x2 channels for the
// single-RF setup and a 3x5 one for two RF chains.
std::optional<ComplexMatrix> builtin_channel(std::string_view name) {
  using c = std::complex<double>;
  if (name == "h2a")
    return from_rows(2, 2, {c(-0.0062, 0.8531), c(-0.3000, -0.4998),  //
                            c(0.1650, 0.1395), c(-1.0391, 0.8601)});
  if (name == "h2b")
    return from_rows(2, 2, {c(0.1901, 0.1127), c(-1.5972, -0.3066),  //
                            c(0.6484, -0.4623), c(0.6096, 0.2423)});
  if (name == "h53")
    return from_rows(3, 5,
                     {c(0.2248, 0.9300), c(-1.6193, 0.1124), c(0.7983, 1.4626), c(0.7101, -0.5903), c(-1.1416, -0.5433),
                      c(0.6925, 0.2182), c(-0.4773, -0.7437), c(0.5020, 0.0908), c(0.5070, 0.3351), c(-0.7329, 0.3995),
                      c(-1.2944, -1.2016), c(0.2182, -0.2740), c(1.5437, 0.1045), c(0.5398, -0.6127), c(0.1665, -0.0869)});
  return std::nullopt;
}

std::vector<std::string> builtin_channel_names() { return {"h2a", "h2b", "h53"}; }

std::vector<double> parse_snr_grid(std::string_view text) {
  const auto fail = [&] { throw InvalidInput("malformed SNR grid '" + std::string(text) + "'"); };
  std::vector<double> parts;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t end = std::min(text.find(':', pos), text.size());
    const auto v = parse_real(text.substr(pos, end - pos));
    if (!v) fail();
    parts.push_back(*v);
    if (end == text.size()) break;
    pos = end + 1;
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0]) fail();
  std::vector<double> grid;
  const auto steps = static_cast<long>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9));
  for (long k = 0; k <= steps; ++k) grid.push_back(parts[0] + static_cast<double>(k) * parts[1]);
  return grid;
}

}  // namespace rfcap
