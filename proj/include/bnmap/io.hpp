#pragma once

#include <stdexcept>
#include <string>

#include "bnmap/network.hpp"

namespace bnmap {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
};

// BNM text format:
//   bnm 1
//   var <name> <cardinality>
//   parents <name> <p1> <p2> ...
//   cpt <name>
//   <row of probabilities, one per parent configuration>
// Rows are row-major over the declared parent order, states ascending.
// Entries are decimal literals or num/den tokens; '#' starts a comment.
Network parse_network(const std::string& text);
std::string serialize_network(const Network& net);

// QRY format: `map <name> ...`, optional `evidence <name>=<state> ...`,
// optional `threshold <num/den>`.
Query parse_query(const std::string& text, const Network& net);
std::string serialize_query(const Query& query, const Network& net);

}  // namespace bnmap
