#include "ordmatch/io.hpp"

#include "ordmatch/numbers.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

namespace ordmatch {

namespace {

// Tokenizes the stream, dropping '#' comments and whitespace of any shape.
std::vector<long long> read_tokens(std::istream& in) {
  std::vector<long long> tokens;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    while (ls >> word) {
      try {
        size_t used = 0;
        long long value = std::stoll(word, &used);
        if (used != word.size()) throw std::invalid_argument(word);
        tokens.push_back(value);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": token '" + word +
                         "' is not an integer");
      }
    }
  }
  return tokens;
}

// Shared reader; `what` only affects error wording.
std::pair<std::array<long long, 3>, std::vector<Edge>> read_body(std::istream& in,
                                                                 const char* what) {
  const std::vector<long long> tokens = read_tokens(in);
  if (tokens.size() < 3) {
    throw ParseError(std::string(what) + ": missing header line \"n s m\"");
  }
  const long long n = tokens[0], s = tokens[1], m = tokens[2];
  if (n < 0 || s < 0 || m < 0) {
    throw ParseError(std::string(what) + ": negative value in header");
  }
  if (s < 2) throw ParseError(std::string(what) + ": s must be at least 2");
  const long long expected = 3 + m * s;
  if (static_cast<long long>(tokens.size()) < expected) {
    throw ParseError(std::string(what) + ": expected " + std::to_string(m) +
                     " edges of arity " + std::to_string(s) + ", file ends early");
  }
  if (static_cast<long long>(tokens.size()) > expected) {
    throw ParseError(std::string(what) + ": trailing tokens after the last edge");
  }
  std::vector<Edge> edges(static_cast<size_t>(m));
  size_t pos = 3;
  for (long long i = 0; i < m; ++i) {
    Edge e(static_cast<size_t>(s));
    for (long long j = 0; j < s; ++j) {
      const long long v = tokens[pos++];
      if (v < 1 || v > n) {
        throw ParseError(std::string(what) + ": vertex " + std::to_string(v) +
                         " out of range [1," + std::to_string(n) + "]");
      }
      e[static_cast<size_t>(j)] = static_cast<Vertex>(v);
    }
    for (size_t j = 1; j < e.size(); ++j) {
      if (e[j] <= e[j - 1]) {
        throw ParseError(std::string(what) + ": edge row " + std::to_string(i + 1) +
                         " is not strictly increasing");
      }
    }
    edges[static_cast<size_t>(i)] = std::move(e);
  }
  return {{n, s, m}, std::move(edges)};
}

std::string serialize_rows(int first, int s, const std::vector<Edge>& edges) {
  std::ostringstream out;
  out << first << ' ' << s << ' ' << edges.size() << '\n';
  for (const Edge& e : edges) {
    for (size_t j = 0; j < e.size(); ++j) {
      if (j) out << ' ';
      out << e[j];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

OrderedHypergraph parse_hypergraph(std::istream& in) {
  auto [header, edges] = read_body(in, "hypergraph");
  try {
    return build_hypergraph(static_cast<int>(header[0]), static_cast<int>(header[1]),
                            std::move(edges));
  } catch (const std::invalid_argument& err) {
    throw ParseError(err.what());
  }
}

OrderedMatchingPattern parse_pattern(std::istream& in) {
  auto [header, edges] = read_body(in, "pattern");
  try {
    return validate_pattern(static_cast<int>(header[0]), static_cast<int>(header[1]),
                            std::move(edges));
  } catch (const std::invalid_argument& err) {
    throw ParseError(err.what());
  }
}

OrderedHypergraph load_hypergraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_hypergraph(in);
}

OrderedMatchingPattern load_pattern(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_pattern(in);
}

std::string serialize(const OrderedHypergraph& g) {
  return serialize_rows(g.n, g.s, g.edges);
}

std::string serialize(const OrderedMatchingPattern& h) {
  return serialize_rows(h.t, h.s, h.edges);
}

void save_hypergraph(const OrderedHypergraph& g, const std::string& path,
                     const std::string& header_comment) {
  std::string body;
  if (!header_comment.empty()) body += "# " + header_comment + "\n";
  body += serialize(g);
  write_file(path, body);
}

std::uint64_t digest(const OrderedHypergraph& g) { return fnv1a(serialize(g)); }
std::uint64_t digest(const OrderedMatchingPattern& h) { return fnv1a(serialize(h)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << content;
}

}  // namespace ordmatch
