#include "bnmap/io.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace bnmap {
namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

int require_var(const Network& net, const std::string& name, int line) {
  int id = variable_id(net, name);
  if (id < 0) throw ParseError(line, "unknown variable '" + name + "'");
  return id;
}

}  // namespace

Network parse_network(const std::string& text) {
  auto lines = tokenize(text);
  if (lines.empty() || lines[0].tokens.size() != 2 ||
      lines[0].tokens[0] != "bnm" || lines[0].tokens[1] != "1")
    throw ParseError(lines.empty() ? 1 : lines[0].number,
                     "expected header 'bnm 1'");

  Network net;
  std::size_t i = 1;
  for (; i < lines.size() && lines[i].tokens[0] == "var"; ++i) {
    const Line& l = lines[i];
    if (l.tokens.size() != 3)
      throw ParseError(l.number, "expected 'var <name> <cardinality>'");
    int card;
    try {
      card = std::stoi(l.tokens[2]);
    } catch (const std::exception&) {
      throw ParseError(l.number, "bad cardinality '" + l.tokens[2] + "'");
    }
    if (card < 1) throw ParseError(l.number, "cardinality must be >= 1");
    if (variable_id(net, l.tokens[1]) >= 0)
      throw ParseError(l.number, "duplicate variable '" + l.tokens[1] + "'");
    net.variables.push_back({net.num_vars(), l.tokens[1], card});
  }
  net.parents.assign(net.variables.size(), {});
  net.cpts.assign(net.variables.size(), {});

  for (; i < lines.size() && lines[i].tokens[0] == "parents"; ++i) {
    const Line& l = lines[i];
    if (l.tokens.size() < 2)
      throw ParseError(l.number, "expected 'parents <name> <p1> ...'");
    int var = require_var(net, l.tokens[1], l.number);
    for (std::size_t k = 2; k < l.tokens.size(); ++k)
      net.parents[var].push_back(require_var(net, l.tokens[k], l.number));
  }

  std::vector<bool> have_cpt(net.variables.size(), false);
  while (i < lines.size()) {
    const Line& l = lines[i];
    if (l.tokens[0] != "cpt" || l.tokens.size() != 2)
      throw ParseError(l.number, "expected 'cpt <name>'");
    int var = require_var(net, l.tokens[1], l.number);
    if (have_cpt[var])
      throw ParseError(l.number, "duplicate cpt for '" + l.tokens[1] + "'");
    have_cpt[var] = true;
    ++i;
    const long long rows = net.row_count(var);
    const int card = net.cardinality(var);
    for (long long r = 0; r < rows; ++r, ++i) {
      if (i >= lines.size())
        throw ParseError(lines.back().number,
                         "missing cpt row for '" + l.tokens[1] + "'");
      const Line& row = lines[i];
      if (static_cast<int>(row.tokens.size()) != card)
        throw ParseError(row.number, "cpt row needs " + std::to_string(card) +
                                         " entries, got " +
                                         std::to_string(row.tokens.size()));
      for (const std::string& tok : row.tokens) {
        auto q = parse_prob_token(tok);
        if (!q) throw ParseError(row.number, "bad probability '" + tok + "'");
        net.cpts[var].push_back(*q);
      }
    }
  }
  for (int v = 0; v < net.num_vars(); ++v)
    if (!have_cpt[v])
      throw ParseError(lines.back().number,
                       "missing cpt for '" + net.variables[v].name + "'");
  return net;
}

std::string serialize_network(const Network& net) {
  std::ostringstream out;
  out << "bnm 1\n";
  for (const Variable& v : net.variables)
    out << "var " << v.name << " " << v.cardinality << "\n";
  for (int i = 0; i < net.num_vars(); ++i) {
    if (net.parents[i].empty()) continue;
    out << "parents " << net.variables[i].name;
    for (int p : net.parents[i]) out << " " << net.variables[p].name;
    out << "\n";
  }
  for (int i = 0; i < net.num_vars(); ++i) {
    out << "cpt " << net.variables[i].name << "\n";
    const long long rows = net.row_count(i);
    const int card = net.cardinality(i);
    for (long long r = 0; r < rows; ++r) {
      for (int s = 0; s < card; ++s) {
        if (s) out << " ";
        out << rational_token(net.cpt_entry(i, r, s));
      }
      out << "\n";
    }
  }
  return out.str();
}

Query parse_query(const std::string& text, const Network& net) {
  Query query;
  for (const Line& l : tokenize(text)) {
    if (l.tokens[0] == "map") {
      for (std::size_t k = 1; k < l.tokens.size(); ++k)
        query.map_vars.push_back(require_var(net, l.tokens[k], l.number));
    } else if (l.tokens[0] == "evidence") {
      for (std::size_t k = 1; k < l.tokens.size(); ++k) {
        const std::string& tok = l.tokens[k];
        auto eq = tok.find('=');
        if (eq == std::string::npos)
          throw ParseError(l.number, "expected <name>=<state>, got '" + tok + "'");
        int var = require_var(net, tok.substr(0, eq), l.number);
        int state;
        try {
          state = std::stoi(tok.substr(eq + 1));
        } catch (const std::exception&) {
          throw ParseError(l.number, "bad state index in '" + tok + "'");
        }
        if (state < 0 || state >= net.cardinality(var))
          throw ParseError(l.number, "state index out of range in '" + tok + "'");
        query.evidence.set(var, state);
      }
    } else if (l.tokens[0] == "threshold") {
      if (l.tokens.size() != 2)
        throw ParseError(l.number, "expected 'threshold <num/den>'");
      auto q = parse_prob_token(l.tokens[1]);
      if (!q) throw ParseError(l.number, "bad threshold '" + l.tokens[1] + "'");
      query.threshold = *q;
    } else {
      throw ParseError(l.number, "unknown directive '" + l.tokens[0] + "'");
    }
  }
  std::sort(query.map_vars.begin(), query.map_vars.end());
  query.map_vars.erase(
      std::unique(query.map_vars.begin(), query.map_vars.end()),
      query.map_vars.end());
  for (int v : query.map_vars)
    if (query.evidence.contains(v))
      throw ParseError(1, "variable '" + net.variables[v].name +
                              "' is both map and evidence");
  return query;
}

std::string serialize_query(const Query& query, const Network& net) {
  std::ostringstream out;
  out << "map";
  for (int v : query.map_vars) out << " " << net.variables[v].name;
  out << "\n";
  if (!query.evidence.empty()) {
    out << "evidence";
    for (const auto& [var, state] : query.evidence.items())
      out << " " << net.variables[var].name << "=" << state;
    out << "\n";
  }
  if (query.threshold) out << "threshold " << rational_token(*query.threshold) << "\n";
  return out.str();
}

}  // namespace bnmap
