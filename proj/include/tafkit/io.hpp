#pragma once

#include <string>

#include "json.hpp"
#include "tafkit/ampliation.hpp"
#include "tafkit/classify.hpp"
#include "tafkit/correspondence.hpp"
#include "tafkit/tower.hpp"

namespace tafkit::io {

using Json = nlohmann::ordered_json;

// Throws ParseError with line and column on malformed text.
Json parse(const std::string& text, const std::string& context = "");
Json read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// Every *_from_json throws ParseError naming the offending field.
// Unit pairs are written [[block,row],[block,col]], 1-based, range first.

Json to_json(const DirectedGraph& g);
DirectedGraph graph_from_json(const Json& j, const std::string& ctx = "graph");

Json to_json(const DigraphAlgebra& a);
// Also accepts {"structure":"upper-triangular"|"diagonal","n":k} and {"graph":...}.
DigraphAlgebra algebra_from_json(const Json& j, const std::string& ctx = "algebra");

Json to_json(const RegularEmbedding& e);  // explicit form with source and target
// Kinds: standard, refinement, block, explicit, tree-standard. Source and
// target come from the enclosing tower when given, otherwise from the
// "source" and "target" fields.
RegularEmbedding embedding_from_json(const Json& j, const DigraphAlgebra* source, const DigraphAlgebra* target,
                                     const std::string& ctx = "embedding");

Json to_json(const Rule& r);
Rule rule_from_json(const Json& j, const std::string& ctx = "rule");

Json to_json(const Tower& t);
Tower tower_from_json(const Json& j, const std::string& ctx = "tower");

Json to_json(const TreeRefinementSpec& s);
TreeRefinementSpec spec_from_json(const Json& j, const std::string& ctx = "spec");

Json to_json(const Supernatural& s);
Supernatural supernatural_from_json(const Json& j, const std::string& ctx = "supernatural");

Json to_json(const SummandChain& c, const Tower& t);
Json to_json(const Decision& d, const Tower& t);
Json to_json(const ClassificationResult& r);
Json to_json(const CktReport& r, const PartialIsometryFamily& f);

std::string to_dot(const DirectedGraph& g, const std::string& name = "G");

}  // namespace tafkit::io
