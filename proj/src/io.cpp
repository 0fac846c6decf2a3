#include "tafkit/io.hpp"

#include <map>
#include <fstream>
#include <sstream>

#include "tafkit/errors.hpp"

namespace tafkit::io {

namespace {

[[noreturn]] void fail(const std::string& ctx, const std::string& what) { throw ParseError(ctx, what); }

const Json& field(const Json& j, const char* key, const std::string& ctx) {
  if (!j.is_object()) fail(ctx, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(ctx, std::string("missing field \"") + key + "\"");
  return *it;
}

const Json& array_field(const Json& j, const char* key, const std::string& ctx) {
  const auto& a = field(j, key, ctx);
  if (!a.is_array()) fail(ctx + "." + key, "expected an array");
  return a;
}

std::size_t as_size(const Json& j, const std::string& ctx, std::size_t min = 0) {
  if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(min))
    fail(ctx, "expected an integer >= " + std::to_string(min));
  return j.get<std::size_t>();
}

std::string as_string(const Json& j, const std::string& ctx) {
  if (!j.is_string()) fail(ctx, "expected a string");
  return j.get<std::string>();
}

std::string at(const std::string& ctx, std::size_t i) { return ctx + "[" + std::to_string(i) + "]"; }

// Runs f, turning library errors into ParseError at ctx.
template <class F>
auto guarded(const std::string& ctx, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(ctx, e.what());
  }
}

Json unit_json(const DigraphAlgebra& a, std::size_t u) { return Json::array({a.block_of(u) + 1, a.row_in_block(u) + 1}); }

std::size_t unit_from(const DigraphAlgebra& a, const Json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 2) fail(ctx, "expected [block, row]");
  const auto b = as_size(j[0], ctx + "[0]", 1), r = as_size(j[1], ctx + "[1]", 1);
  if (b > a.blocks().size() || r > a.blocks()[b - 1]) fail(ctx, "no unit " + std::to_string(b) + "." + std::to_string(r));
  return a.unit(b - 1, r - 1);
}

Json pair_json(const DigraphAlgebra& a, UnitPair p) { return Json::array({unit_json(a, p.range), unit_json(a, p.source)}); }

// Pairs are read against the block layout only; membership is checked by the caller.
UnitPair pair_from(const DigraphAlgebra& a, const Json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 2) fail(ctx, "expected [[block,row],[block,col]]");
  return {unit_from(a, j[0], ctx + "[0]"), unit_from(a, j[1], ctx + "[1]")};
}

std::vector<std::size_t> blocks_from(const Json& j, const std::string& ctx) {
  const auto& b = array_field(j, "blocks", ctx);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < b.size(); ++i) out.push_back(as_size(b[i], at(ctx + ".blocks", i), 1));
  if (out.empty()) fail(ctx + ".blocks", "needs at least one block");
  return out;
}

Json pattern_json(const BlockPattern& p) {
  Json copies = Json::array();
  for (const auto& c : p.copies) {
    Json row = Json::array();
    for (auto x : c) row.push_back(x + 1);
    copies.push_back(row);
  }
  return Json{{"grid", p.grid}, {"copies", copies}};
}

BlockPattern pattern_from(const Json& j, const std::string& ctx) {
  BlockPattern p;
  p.grid = as_size(field(j, "grid", ctx), ctx + ".grid", 1);
  const auto& c = array_field(j, "copies", ctx);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (!c[k].is_array()) fail(at(ctx + ".copies", k), "expected an array");
    std::vector<std::size_t> row;
    for (std::size_t a = 0; a < c[k].size(); ++a) {
      const auto x = as_size(c[k][a], at(at(ctx + ".copies", k), a), 1);
      if (x > p.grid) fail(at(at(ctx + ".copies", k), a), "block index exceeds the grid");
      row.push_back(x - 1);
    }
    p.copies.push_back(std::move(row));
  }
  return p;
}

}  // namespace

Json parse(const std::string& text, const std::string& context) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (const auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
    throw ParseError(context, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

Json to_json(const DirectedGraph& g) {
  Json v = Json::array();
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    if (g.has_weights()) v.push_back(Json{{"id", g.id(i)}, {"weight", g.weight(i)}});
    else v.push_back(g.id(i));
  }
  Json e = Json::array();
  for (auto [s, r] : g.edges()) e.push_back(Json::array({g.id(s), g.id(r)}));
  return Json{{"vertices", v}, {"edges", e}};
}

DirectedGraph graph_from_json(const Json& j, const std::string& ctx) {
  const auto& v = array_field(j, "vertices", ctx);
  const auto& e = array_field(j, "edges", ctx);
  std::vector<std::string> ids;
  std::vector<std::uint64_t> w;
  bool weighted = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto c = at(ctx + ".vertices", i);
    if (v[i].is_string()) {
      ids.push_back(v[i].get<std::string>());
      w.push_back(0);
    } else {
      ids.push_back(as_string(field(v[i], "id", c), c + ".id"));
      w.push_back(v[i].contains("weight") ? as_size(v[i]["weight"], c + ".weight") : 0);
      weighted = weighted || v[i].contains("weight");
    }
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto c = at(ctx + ".edges", i);
    if (!e[i].is_array() || e[i].size() != 2) fail(c, "expected [source, range]");
    edges.emplace_back(as_string(e[i][0], c + "[0]"), as_string(e[i][1], c + "[1]"));
  }
  return guarded(ctx, [&] { return DirectedGraph(std::move(ids), edges, weighted ? std::move(w) : std::vector<std::uint64_t>{}); });
}

Json to_json(const DigraphAlgebra& a) {
  Json units = Json::array();
  for (const auto& p : a.pairs())
    if (!p.diagonal()) units.push_back(pair_json(a, p));
  return Json{{"blocks", a.blocks()}, {"units", units}};
}

DigraphAlgebra algebra_from_json(const Json& j, const std::string& ctx) {
  if (!j.is_object()) fail(ctx, "expected an object");
  if (j.contains("structure")) {
    const auto s = as_string(j["structure"], ctx + ".structure");
    const auto n = as_size(field(j, "n", ctx), ctx + ".n", 1);
    if (s == "upper-triangular") return DigraphAlgebra::upper_triangular(n);
    if (s == "diagonal") return DigraphAlgebra::diagonal(n);
    fail(ctx + ".structure", "unknown structure \"" + s + "\"");
  }
  if (j.contains("graph")) {
    const auto g = graph_from_json(j["graph"], ctx + ".graph");
    return guarded(ctx, [&] { return DigraphAlgebra::from_graph(g); });
  }
  const auto blocks = blocks_from(j, ctx);
  const auto layout = DigraphAlgebra::from_pairs(blocks, {});
  const auto& u = array_field(j, "units", ctx);
  std::vector<UnitPair> pairs;
  for (std::size_t i = 0; i < u.size(); ++i) pairs.push_back(pair_from(layout, u[i], at(ctx + ".units", i)));
  bool close = false;
  if (j.contains("close")) {
    if (!j["close"].is_boolean()) fail(ctx + ".close", "expected a boolean");
    close = j["close"].get<bool>();
  }
  return guarded(ctx, [&] { return DigraphAlgebra::from_pairs(blocks, pairs, close); });
}

Json to_json(const RegularEmbedding& e) {
  Json image = Json::array();
  for (std::size_t k = 0; k < e.source().pairs().size(); ++k) {
    Json tg = Json::array();
    for (const auto& q : e.image_at(k)) tg.push_back(pair_json(e.target(), q));
    image.push_back(Json::array({pair_json(e.source(), e.source().pairs()[k]), tg}));
  }
  return Json{{"kind", "explicit"}, {"source", to_json(e.source())}, {"target", to_json(e.target())}, {"image", image}};
}

RegularEmbedding embedding_from_json(const Json& j, const DigraphAlgebra* source, const DigraphAlgebra* target,
                                     const std::string& ctx) {
  const auto kind = as_string(field(j, "kind", ctx), ctx + ".kind");
  if (kind == "tree-standard") {
    std::vector<OutForest> sources;
    const auto& s = array_field(j, "source", ctx);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto g = graph_from_json(s[i], at(ctx + ".source", i));
      sources.push_back(guarded(at(ctx + ".source", i), [&] { return OutForest::require(g); }));
    }
    const auto tg = graph_from_json(field(j, "target", ctx), ctx + ".target");
    const auto target_tree = guarded(ctx + ".target", [&] { return OutForest::require(tg); });
    std::vector<Attachment> attach;
    const auto& a = array_field(j, "attach", ctx);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto c = at(ctx + ".attach", i);
      Attachment x;
      x.source = a[i].contains("source") ? as_size(a[i]["source"], c + ".source") : 0;
      x.root = as_string(field(a[i], "root", c), c + ".root");
      if (a[i].contains("at") && !a[i]["at"].is_null()) x.at = as_string(a[i]["at"], c + ".at");
      if (a[i].contains("map")) {
        const auto& m = a[i]["map"];
        if (!m.is_array()) fail(c + ".map", "expected an array");
        for (std::size_t k = 0; k < m.size(); ++k) {
          if (!m[k].is_array() || m[k].size() != 2) fail(at(c + ".map", k), "expected [source id, target id]");
          x.map.emplace_back(as_string(m[k][0], at(c + ".map", k)), as_string(m[k][1], at(c + ".map", k)));
        }
      }
      attach.push_back(std::move(x));
    }
    return guarded(ctx, [&] { return tree_standard_embedding(sources, target_tree, attach).embedding; });
  }

  std::optional<DigraphAlgebra> src, tgt;
  if (source) src = *source;
  else if (j.contains("source")) src = algebra_from_json(j["source"], ctx + ".source");
  if (target) tgt = *target;
  else if (j.contains("target")) tgt = algebra_from_json(j["target"], ctx + ".target");

  if (kind == "standard" || kind == "refinement") {
    const char* key = kind == "standard" ? "m" : "l";
    const auto m = as_size(field(j, key, ctx), ctx + "." + key, 1);
    if (!src) src = DigraphAlgebra::upper_triangular(as_size(field(j, "n", ctx), ctx + ".n", 1));
    else if (j.contains("n") && as_size(j["n"], ctx + ".n", 1) != src->dimension())
      fail(ctx + ".n", "does not match the source dimension " + std::to_string(src->dimension()));
    return guarded(ctx, [&] {
      const auto s = apply_rule(kind == "standard" ? Rule{StandardRule{m}} : Rule{RefinementRule{m}}, *src);
      if (!tgt) return s.map;
      return kind == "standard" ? standard_embedding(*src, m, *tgt) : refinement_embedding(*src, m, *tgt);
    });
  }
  if (kind == "block") {
    const auto p = pattern_from(j, ctx);
    if (!src) fail(ctx, "block embedding needs a source algebra");
    return guarded(ctx, [&] {
      if (!tgt) return apply_rule(BlockRule{p}, *src).map;
      return block_embedding(*src, p, *tgt);
    });
  }
  if (kind == "explicit") {
    if (!src || !tgt) fail(ctx, "explicit embedding needs source and target algebras");
    const auto& im = array_field(j, "image", ctx);
    std::vector<std::vector<UnitPair>> images(src->pairs().size());
    std::vector<char> seen(images.size(), 0);
    for (std::size_t i = 0; i < im.size(); ++i) {
      const auto c = at(ctx + ".image", i);
      if (!im[i].is_array() || im[i].size() != 2 || !im[i][1].is_array()) fail(c, "expected [pair, [pairs...]]");
      const auto p = pair_from(*src, im[i][0], c + "[0]");
      const auto k = src->pair_index(p);
      if (!k) fail(c + "[0]", "pair is not in the source relation");
      if (seen[*k]) fail(c + "[0]", "pair listed twice");
      seen[*k] = 1;
      for (std::size_t t = 0; t < im[i][1].size(); ++t) images[*k].push_back(pair_from(*tgt, im[i][1][t], at(c + "[1]", t)));
    }
    for (std::size_t k = 0; k < seen.size(); ++k)
      if (!seen[k]) fail(ctx + ".image", "no image for pair " + pair_json(*src, src->pairs()[k]).dump());
    return guarded(ctx, [&] { return RegularEmbedding(*src, *tgt, std::move(images)); });
  }
  fail(ctx + ".kind", "unknown embedding kind \"" + kind + "\"");
}

Json to_json(const Rule& r) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, StandardRule>) return Json{{"kind", "standard"}, {"m", v.m}};
        else if constexpr (std::is_same_v<T, RefinementRule>) return Json{{"kind", "refinement"}, {"l", v.l}};
        else if constexpr (std::is_same_v<T, NestRule>) return Json{{"kind", "nest"}};
        else if constexpr (std::is_same_v<T, TreeRefinementRule>) return Json{{"kind", "tree-refinement"}, {"l", v.l}};
        else {
          Json j{{"kind", "block"}};
          j.update(pattern_json(v.pattern));
          return j;
        }
      },
      r);
}

Rule rule_from_json(const Json& j, const std::string& ctx) {
  if (j.is_null()) return {};
  const auto kind = as_string(field(j, "kind", ctx), ctx + ".kind");
  if (kind == "none") return {};
  if (kind == "standard") return StandardRule{as_size(field(j, "m", ctx), ctx + ".m", 1)};
  if (kind == "refinement") return RefinementRule{as_size(field(j, "l", ctx), ctx + ".l", 1)};
  if (kind == "nest") return NestRule{};
  if (kind == "tree-refinement") return TreeRefinementRule{as_size(field(j, "l", ctx), ctx + ".l", 1)};
  if (kind == "block") return BlockRule{pattern_from(j, ctx)};
  fail(ctx + ".kind", "unknown rule \"" + kind + "\"");
}

Json to_json(const Tower& t) {
  Json levels = Json::array(), maps = Json::array();
  for (const auto& l : t.levels()) levels.push_back(to_json(l));
  for (const auto& m : t.maps()) {
    auto j = to_json(m);
    j.erase("source");
    j.erase("target");
    maps.push_back(j);
  }
  return Json{{"levels", levels}, {"maps", maps}, {"rule", to_json(t.rule())}};
}

Tower tower_from_json(const Json& j, const std::string& ctx) {
  const auto& l = array_field(j, "levels", ctx);
  std::vector<DigraphAlgebra> levels;
  for (std::size_t i = 0; i < l.size(); ++i) levels.push_back(algebra_from_json(l[i], at(ctx + ".levels", i)));
  if (levels.empty()) fail(ctx + ".levels", "needs at least one level");
  std::vector<RegularEmbedding> maps;
  if (j.contains("maps")) {
    const auto& m = array_field(j, "maps", ctx);
    if (m.size() + 1 != levels.size())
      fail(ctx + ".maps", "expected " + std::to_string(levels.size() - 1) + " maps for " +
                              std::to_string(levels.size()) + " levels");
    for (std::size_t i = 0; i < m.size(); ++i)
      maps.push_back(embedding_from_json(m[i], &levels[i], &levels[i + 1], at(ctx + ".maps", i)));
  }
  const Rule rule = j.contains("rule") ? rule_from_json(j["rule"], ctx + ".rule") : Rule{};
  return guarded(ctx, [&] { return Tower(std::move(levels), std::move(maps), rule); });
}

Json to_json(const TreeRefinementSpec& s) {
  Json j{{"base", to_json(s.base.graph())}, {"multiplicities", s.multiplicities}};
  if (s.tail) j["tail"] = *s.tail;
  return j;
}

TreeRefinementSpec spec_from_json(const Json& j, const std::string& ctx) {
  const auto g = graph_from_json(field(j, "base", ctx), ctx + ".base");
  std::vector<std::size_t> m;
  if (j.contains("multiplicities")) {
    const auto& a = array_field(j, "multiplicities", ctx);
    for (std::size_t i = 0; i < a.size(); ++i) m.push_back(as_size(a[i], at(ctx + ".multiplicities", i), 1));
  }
  std::optional<std::size_t> tail;
  if (j.contains("tail") && !j["tail"].is_null()) tail = as_size(j["tail"], ctx + ".tail", 1);
  return guarded(ctx, [&] { return TreeRefinementSpec(OutForest::require(g), m, tail); });
}

Json to_json(const Supernatural& s) {
  std::map<std::uint64_t, Json> byprime;
  for (const auto& [p, e] : s.finite) byprime[p] = e;
  for (auto p : s.infinite) byprime[p] = "inf";
  Json f = Json::object();
  for (const auto& [p, e] : byprime) f[std::to_string(p)] = e;
  return Json{{"primes", f}, {"text", to_string(s)}};
}

Supernatural supernatural_from_json(const Json& j, const std::string& ctx) {
  const auto& f = field(j, "primes", ctx);
  if (!f.is_object()) fail(ctx + ".primes", "expected an object");
  Supernatural s;
  for (const auto& [k, v] : f.items()) {
    const auto c = ctx + ".primes." + k;
    std::uint64_t p = 0;
    try {
      p = std::stoull(k);
    } catch (const std::exception&) {
      fail(c, "prime keys must be integers");
    }
    if (v.is_string() && v.get<std::string>() == "inf") s.infinite.insert(p);
    else s.finite[p] = as_size(v, c, 1);
  }
  return s;
}

Json to_json(const SummandChain& c, const Tower& t) {
  Json pairs = Json::array();
  for (std::size_t k = 0; k < c.pairs.size(); ++k) pairs.push_back(pair_json(t.level(c.start + k), c.pairs[k]));
  return Json{{"start_level", c.start + 1}, {"pairs", pairs}, {"grades", c.grades}};
}

Json to_json(const Decision& d, const Tower& input) {
  const Tower t = input.extended(d.depth);
  Json j{{"verdict", verdict_name(d.verdict())}, {"depth", d.depth}};
  if (const auto* fp = std::get_if<ForestPresentation>(&d.certificate)) {
    Json forests = Json::array(), maps = Json::array();
    for (const auto& f : fp->forests) forests.push_back(to_json(f.graph()));
    for (const auto& m : fp->maps) {
      Json image = Json::array();
      for (std::size_t k = 0; k < m.source().pairs().size(); ++k) {
        const auto& p = m.source().pairs()[k];
        if (p.diagonal() || m.source().factorization_lengths().at(p.range, p.source) != 1) continue;
        Json tg = Json::array();
        for (const auto& q : m.image_at(k)) tg.push_back(pair_json(m.target(), q));
        image.push_back(Json::array({pair_json(m.source(), p), tg}));
      }
      maps.push_back(Json{{"tree_standard", is_tree_standard(m)}, {"edge_images", image}});
    }
    j["certificate"] = Json{{"forests", forests}, {"maps", maps}};
  } else if (const auto* w = std::get_if<NoWitness>(&d.certificate)) {
    Json c = std::visit(
        [&](const auto& v) -> Json {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, NonTreeWitness>) {
            const auto& a = t.level(v.level);
            Json out{{"kind", "non-tree"},
                     {"level", v.level + 1},
                     {"triple", Json::array({unit_json(a, v.triple.x), unit_json(a, v.triple.y), unit_json(a, v.triple.z)})}};
            if (v.level + 1 < t.size()) {
              const auto& b = t.level(v.level + 1);
              out["persists"] = Json::array({unit_json(b, v.persists.x), unit_json(b, v.persists.y), unit_json(b, v.persists.z)});
            }
            return out;
          } else if constexpr (std::is_same_v<T, DoubleReceiverWitness>) {
            const auto& a = t.level(v.level);
            return Json{{"kind", "double-receiver"},
                        {"level", v.level + 1},
                        {"receiver", unit_json(a, v.receiver.vertex)},
                        {"from", Json::array({unit_json(a, v.receiver.first), unit_json(a, v.receiver.second)})}};
          } else if constexpr (std::is_same_v<T, GradeGrowthWitness>) {
            return Json{{"kind", "grade-growth"}, {"chain", to_json(v.chain, t)}, {"step", v.step + 1}};
          } else {
            return Json{{"kind", "nest"}};
          }
        },
        *w);
    c["description"] = describe(*w, t);
    j["certificate"] = c;
  } else {
    const auto& r = std::get<InconclusiveReport>(d.certificate);
    Json chains = Json::array();
    for (const auto& c : r.unstable) chains.push_back(to_json(c, t));
    j["certificate"] = Json{{"reasons", r.reasons}, {"unstable", chains}, {"unstable_total", r.unstable_total}};
  }
  return j;
}

Json to_json(const ClassificationResult& r) {
  Json j{{"verdict", classification_name(r.verdict)}, {"reason", r.reason}};
  if (r.witness) {
    Json b = Json::array();
    for (const auto& [u, v] : r.witness->bijection) b.push_back(Json::array({u, v}));
    j["witness"] = Json{{"ampliations", Json::array({r.witness->ampliations_a, r.witness->ampliations_b})},
                        {"vertex_bijection", b}};
  }
  return j;
}

Json to_json(const CktReport& r, const PartialIsometryFamily& f) {
  Json rel = Json::object();
  for (std::size_t k = 0; k < 5; ++k) rel[std::to_string(k + 1)] = r.holds[k];
  return Json{{"dimension", f.dimension()},
              {"cutoff", f.cutoff},
              {"truncated", f.truncated},
              {"relations", rel},
              {"deficiency", r.deficiency},
              {"failures", r.failures},
              {"ok", r.all()}};
}

std::string to_dot(const DirectedGraph& g, const std::string& name) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream os;
  os << "digraph " << quote(name) << " {\n";
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    os << "  " << quote(g.id(v));
    if (g.has_weights()) os << " [label=" << quote(g.id(v) + " w=" + std::to_string(g.weight(v))) << "]";
    os << ";\n";
  }
  for (auto [s, r] : g.edges()) os << "  " << quote(g.id(s)) << " -> " << quote(g.id(r)) << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace tafkit::io
