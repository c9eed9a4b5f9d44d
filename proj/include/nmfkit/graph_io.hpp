#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

#include "nmfkit/error.hpp"
#include "nmfkit/graph.hpp"
#include "nmfkit/matrix.hpp"
#include "nmfkit/random.hpp"

namespace nmfkit {

/// Undirected graph as read from a DIMACS file; vertices 0-indexed.
struct EdgeListGraph {
  std::size_t vertex_count = 0;
  std::vector<Edge> edges;  // i < j, sorted, unique
  std::size_t duplicates_removed = 0;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r'))
      ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r')
      ++pos;
    if (pos > start) out.push_back(line.substr(start, pos - start));
  }
  return out;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line_no) {
  T value{};
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  if (!token.empty() && token.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::parse_error,
                "line " + std::to_string(line_no) + ": bad number '" + std::string(token) + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value))
      throw Error(ErrorCode::parse_error,
                  "line " + std::to_string(line_no) + ": non-finite value '" + std::string(token) + "'");
  }
  return value;
}

inline std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    ++line_no;
    fn(text.substr(pos, end - pos), line_no);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

}  // namespace detail

/// ASCII DIMACS: 'c' comments, one 'p edge <n> <m>' header, then 'e <i> <j>'.
inline EdgeListGraph parse_dimacs(std::string_view text) {
  EdgeListGraph out;
  bool have_header = false;
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto tokens = detail::split_ws(line);
    if (tokens.empty() || tokens[0] == "c") return;
    auto fail = [&](const std::string& what) {
      throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": " + what);
    };
    if (tokens[0] == "p") {
      if (have_header) fail("duplicate 'p' line");
      if (tokens.size() < 3) fail("malformed 'p' line");
      out.vertex_count = detail::parse_number<std::size_t>(tokens[2], line_no);
      have_header = true;
    } else if (tokens[0] == "e") {
      if (!have_header) fail("edge before 'p' line");
      if (tokens.size() < 3) fail("malformed 'e' line");
      const auto i = detail::parse_number<std::size_t>(tokens[1], line_no);
      const auto j = detail::parse_number<std::size_t>(tokens[2], line_no);
      if (i < 1 || j < 1 || i > out.vertex_count || j > out.vertex_count)
        fail("vertex index out of range");
      if (i == j) fail("self-loop");
      out.edges.emplace_back(std::min(i, j) - 1, std::max(i, j) - 1);
    } else {
      fail("unknown line type '" + std::string(tokens[0]) + "'");
    }
  });
  if (!have_header) throw Error(ErrorCode::parse_error, "missing 'p' line");
  std::sort(out.edges.begin(), out.edges.end());
  const auto last = std::unique(out.edges.begin(), out.edges.end());
  out.duplicates_removed = static_cast<std::size_t>(out.edges.end() - last);
  out.edges.erase(last, out.edges.end());
  return out;
}

inline std::string write_dimacs(const EdgeListGraph& g) {
  std::string out = "p edge " + std::to_string(g.vertex_count) + " " +
                    std::to_string(g.edges.size()) + "\n";
  for (const auto& [i, j] : g.edges)
    out += "e " + std::to_string(i + 1) + " " + std::to_string(j + 1) + "\n";
  return out;
}

/// Symmetric adjacency with empty diagonal: both sides are the vertex set.
inline BipartiteGraph to_bipartite(const EdgeListGraph& g) {
  std::vector<Edge> edges;
  edges.reserve(2 * g.edges.size());
  for (const auto& [i, j] : g.edges) {
    edges.emplace_back(i, j);
    edges.emplace_back(j, i);
  }
  return {g.vertex_count, g.vertex_count, std::move(edges)};
}

/// Each of the m*n possible edges is present independently with probability `density`.
inline BipartiteGraph gen_random_bipartite(std::size_t m, std::size_t n, double density,
                                           std::uint64_t seed) {
  detail::require(density >= 0.0 && density <= 1.0, ErrorCode::invalid_argument,
                  "density must lie in [0, 1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (uniform_closed_open(rng) < density) edges.emplace_back(i, j);
  return {m, n, std::move(edges)};
}

enum class MatrixFormat { dense, coordinate };

/// Header '<rows> <cols> dense' followed by row-major entries, or
/// '<rows> <cols> <nnz>' followed by 1-indexed '<i> <j> <value>' triples.
/// Lines starting with '%' or '#' are comments.
inline std::string write_matrix(const RealMatrix& M, MatrixFormat format = MatrixFormat::dense) {
  std::string out;
  if (format == MatrixFormat::dense) {
    out = std::to_string(M.rows()) + " " + std::to_string(M.cols()) + " dense\n";
    for (std::size_t i = 0; i < M.rows(); ++i) {
      for (std::size_t j = 0; j < M.cols(); ++j) {
        if (j > 0) out += ' ';
        out += detail::format_double(M(i, j));
      }
      out += '\n';
    }
    return out;
  }
  std::size_t nnz = 0;
  for (double x : M.values()) nnz += x != 0.0;
  out = std::to_string(M.rows()) + " " + std::to_string(M.cols()) + " " + std::to_string(nnz) + "\n";
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (M(i, j) != 0.0)
        out += std::to_string(i + 1) + " " + std::to_string(j + 1) + " " +
               detail::format_double(M(i, j)) + "\n";
  return out;
}

inline RealMatrix read_matrix(std::string_view text) {
  std::vector<std::pair<std::vector<std::string_view>, std::size_t>> lines;
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    auto tokens = detail::split_ws(line);
    if (tokens.empty() || tokens[0].front() == '%' || tokens[0].front() == '#') return;
    lines.emplace_back(std::move(tokens), line_no);
  });
  if (lines.empty()) throw Error(ErrorCode::parse_error, "missing matrix header");
  const auto& [header, header_line] = lines.front();
  if (header.size() != 3) throw Error(ErrorCode::parse_error, "malformed matrix header");
  const auto rows = detail::parse_number<std::size_t>(header[0], header_line);
  const auto cols = detail::parse_number<std::size_t>(header[1], header_line);

  if (header[2] == "dense") {
    std::vector<double> data;
    data.reserve(rows * cols);
    for (std::size_t k = 1; k < lines.size(); ++k)
      for (auto token : lines[k].first)
        data.push_back(detail::parse_number<double>(token, lines[k].second));
    if (data.size() != rows * cols) {
      throw Error(ErrorCode::parse_error, "expected " + std::to_string(rows * cols) +
                                              " entries, found " + std::to_string(data.size()));
    }
    return {rows, cols, std::move(data)};
  }

  const auto nnz = detail::parse_number<std::size_t>(header[2], header_line);
  if (lines.size() - 1 != nnz) {
    throw Error(ErrorCode::parse_error, "expected " + std::to_string(nnz) +
                                            " entries, found " + std::to_string(lines.size() - 1));
  }
  RealMatrix out(rows, cols);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& [tokens, line_no] = lines[k];
    if (tokens.size() != 3)
      throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": expected i j value");
    const auto i = detail::parse_number<std::size_t>(tokens[0], line_no);
    const auto j = detail::parse_number<std::size_t>(tokens[1], line_no);
    if (i < 1 || j < 1 || i > rows || j > cols)
      throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": index out of range");
    out(i - 1, j - 1) = detail::parse_number<double>(tokens[2], line_no);
  }
  detail::require(out.all_finite(), ErrorCode::parse_error, "non-finite matrix entry");
  return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Writes to a sibling temporary file, then renames over the target.
inline void write_text_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::io_error, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot replace " + path.string() + ": " + ec.message());
}

inline RealMatrix read_matrix_file(const std::filesystem::path& path) {
  return read_matrix(read_text_file(path));
}

inline void write_matrix_file(const std::filesystem::path& path, const RealMatrix& M,
                              MatrixFormat format = MatrixFormat::dense) {
  write_text_file_atomic(path, write_matrix(M, format));
}

}  // namespace nmfkit
