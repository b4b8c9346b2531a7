#pragma once

#include "ordmatch/hypergraph.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace ordmatch {

// Shared text format for hypergraphs and patterns:
//   - '#' starts a comment that runs to end of line
//   - blank lines and trailing whitespace are ignored
//   - first data line: "n s m" (patterns use t in place of n)
//   - then m lines, each with s strictly increasing vertex numbers
// Canonical serialization has no comments, edges sorted lexicographically,
// single spaces, one trailing newline per line.

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

OrderedHypergraph parse_hypergraph(std::istream& in);
OrderedMatchingPattern parse_pattern(std::istream& in);

OrderedHypergraph load_hypergraph(const std::string& path);
OrderedMatchingPattern load_pattern(const std::string& path);

std::string serialize(const OrderedHypergraph& g);
std::string serialize(const OrderedMatchingPattern& h);

void save_hypergraph(const OrderedHypergraph& g, const std::string& path,
                     const std::string& header_comment = "");

std::uint64_t digest(const OrderedHypergraph& g);
std::uint64_t digest(const OrderedMatchingPattern& h);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ordmatch
