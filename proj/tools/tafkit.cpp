#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "tafkit/classify.hpp"
#include "tafkit/correspondence.hpp"
#include "tafkit/errors.hpp"
#include "tafkit/io.hpp"

using namespace tafkit;
using io::Json;

namespace {

constexpr int kParseExit = 3;
constexpr int kUsageExit = 4;

struct Options {
  std::size_t depth = 4;
  std::size_t bound = 3;
  std::optional<std::size_t> cutoff;
  std::string format = "json";
  std::uint64_t seed = 1;
  std::string out;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) std::cout << text;
  else io::write_file(o.out, text);
}

void emit_json(const Options& o, const Json& j) { emit(o, j.dump(2) + "\n"); }

std::string chain_text(const SummandChain& c, const Tower& t) {
  std::ostringstream os;
  os << "from level " << c.start + 1 << ":";
  for (std::size_t k = 0; k < c.pairs.size(); ++k) {
    const auto& a = t.level(c.start + k);
    os << " e(" << unit_name(a, c.pairs[k].range) << "," << unit_name(a, c.pairs[k].source) << ")^" << c.grades[k];
  }
  return os.str();
}

int check_tensor(const Options& o, const std::string& path) {
  const Tower t = io::tower_from_json(io::read_file(path), path);
  const Decision d = decide_tensor(t, o.depth);
  if (o.format == "text") {
    std::ostringstream os;
    os << verdict_name(d.verdict()) << " after " << d.depth << " levels\n";
    const Tower ext = t.extended(d.depth);
    if (const auto* fp = std::get_if<ForestPresentation>(&d.certificate)) {
      for (std::size_t k = 0; k < fp->forests.size(); ++k)
        os << "level " << k + 1 << ": forest with " << fp->forests[k].graph().edge_count() << " edges, "
           << fp->forests[k].roots().size() << " roots\n";
    } else if (const auto* w = std::get_if<NoWitness>(&d.certificate)) {
      os << describe(*w, ext) << "\n";
    } else {
      const auto& r = std::get<InconclusiveReport>(d.certificate);
      for (const auto& s : r.reasons) os << s << "\n";
      for (const auto& c : r.unstable) os << "  " << chain_text(c, ext) << "\n";
    }
    emit(o, os.str());
  } else {
    emit_json(o, io::to_json(d, t));
  }
  return static_cast<int>(d.verdict());
}

int ampliate_cmd(const Options& o, const std::string& path, std::size_t l, std::size_t steps) {
  const auto g = io::graph_from_json(io::read_file(path), path);
  OutForest t = OutForest::require_tree(g);
  for (std::size_t s = 0; s < steps; ++s) t = ampliate(t, l);
  if (o.format == "dot") emit(o, io::to_dot(t.graph(), "ampliation"));
  else emit_json(o, io::to_json(t.graph()));
  return 0;
}

int classify_cmd(const Options& o, const std::string& a, const std::string& b) {
  const auto sa = io::spec_from_json(io::read_file(a), a);
  const auto sb = io::spec_from_json(io::read_file(b), b);
  const auto r = classify_tree_refinement(sa, sb, o.bound);
  if (o.format == "text") {
    std::ostringstream os;
    os << classification_name(r.verdict) << ": " << r.reason << "\n";
    if (r.witness)
      for (const auto& [u, v] : r.witness->bijection) os << "  " << u << " -> " << v << "\n";
    emit(o, os.str());
  } else {
    emit_json(o, io::to_json(r));
  }
  return static_cast<int>(r.verdict);
}

int reduce_cmd(const Options& o, const std::string& path) {
  const auto r = reduce(OutForest::require_tree(io::graph_from_json(io::read_file(path), path)));
  if (o.format == "dot") {
    emit(o, io::to_dot(r.graph(), "reduced"));
  } else {
    Json j = io::to_json(r.graph());
    const auto h = heights(r);
    Json hj = Json::object();
    for (std::size_t v = 0; v < h.size(); ++v) hj[r.graph().id(v)] = h[v];
    j["heights"] = hj;
    j["code"] = canonical_code(r);
    emit_json(o, j);
  }
  return 0;
}

int iso_cmd(const Options& o, const std::string& a, const std::string& b, bool shape) {
  const auto ga = OutForest::require_tree(io::graph_from_json(io::read_file(a), a));
  const auto gb = OutForest::require_tree(io::graph_from_json(io::read_file(b), b));
  const bool iso = shape ? same_reduced_shape(ga, gb) : trees_isomorphic(ga, gb);
  Json j{{"isomorphic", iso}, {"shape_only", shape}};
  if (o.format == "text") emit(o, std::string(iso ? "isomorphic" : "not isomorphic") + "\n");
  else emit_json(o, j);
  return iso ? 0 : 1;
}

int supernatural_cmd(const Options& o, const std::string& path, const std::vector<std::size_t>& mults,
                     std::optional<std::size_t> tail) {
  Supernatural s;
  if (!path.empty()) s = supernatural(io::spec_from_json(io::read_file(path), path));
  else s = supernatural(mults, tail);
  if (o.format == "text") emit(o, to_string(s) + "\n");
  else emit_json(o, io::to_json(s));
  return 0;
}

int verify_ckt(const Options& o, const std::string& path) {
  const auto g = io::graph_from_json(io::read_file(path), path);
  const auto f = build_ckt_family(g, o.cutoff);
  const auto r = check_ckt(f);
  if (o.format == "text") {
    std::ostringstream os;
    os << "dimension " << f.dimension() << (f.truncated ? ", truncated at " : ", full path space, longest path ")
       << f.cutoff << "\n";
    for (std::size_t k = 0; k < 5; ++k) os << "(" << k + 1 << ") " << (r.holds[k] ? "holds" : "FAILS") << "\n";
    if (f.truncated) os << "deficiency of (3) on cutoff paths: " << r.deficiency << "\n";
    for (const auto& s : r.failures) os << s << "\n";
    emit(o, os.str());
  } else {
    emit_json(o, io::to_json(r, f));
  }
  return r.all() ? 0 : 1;
}

CorrespondenceVector vector_from(const Json& j, const std::string& ctx, std::uint64_t seed) {
  if (!j.contains("graph")) throw ParseError(ctx, "missing field \"graph\"");
  const auto g = io::graph_from_json(j["graph"], ctx + ".graph");
  if (!j.contains("amplitudes")) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<Complex> a(g.edge_count());
    for (auto& c : a) c = {z(rng), z(rng)};
    return CorrespondenceVector(g, a);
  }
  const auto& a = j["amplitudes"];
  if (!a.is_array()) throw ParseError(ctx + ".amplitudes", "expected an array");
  std::map<std::pair<std::string, std::string>, Complex> m;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto c = ctx + ".amplitudes[" + std::to_string(i) + "]";
    const auto& x = a[i];
    if (!x.is_object() || !x.contains("edge") || !x["edge"].is_array() || x["edge"].size() != 2 ||
        !x["edge"][0].is_string() || !x["edge"][1].is_string())
      throw ParseError(c, "expected {\"edge\":[source, range], \"re\":x, \"im\":y}");
    const double re = x.value("re", 0.0), im = x.value("im", 0.0);
    m[{x["edge"][0].get<std::string>(), x["edge"][1].get<std::string>()}] = {re, im};
  }
  try {
    return CorrespondenceVector::from_edges(g, m);
  } catch (const GraphError& e) {
    throw ParseError(ctx + ".amplitudes", e.what());
  }
}

int norm_cmd(const Options& o, const std::string& path) {
  const auto x = vector_from(io::read_file(path), path, o.seed);
  const double module = module_norm(x);
  const auto f = build_ckt_family(x.graph(), o.cutoff.value_or(3));
  const double op = operator_norm(f, x);
  const auto ip = module_inner_product(x, x);
  Json per = Json::object();
  for (std::size_t v = 0; v < ip.size(); ++v) per[x.graph().id(v)] = ip[v].real();
  const bool agree = std::abs(module - op) <= 1e-12 * std::max(1.0, module);
  if (o.format == "text") {
    std::ostringstream os;
    os.precision(17);
    os << "module norm " << module << "\noperator norm " << op << "\n" << (agree ? "agree" : "DISAGREE") << "\n";
    emit(o, os.str());
  } else {
    emit_json(o, Json{{"module_norm", module}, {"operator_norm", op}, {"inner_product", per}, {"agree", agree}});
  }
  return agree ? 0 : 1;
}

int emit_dot(const Options& o, const std::string& path, std::size_t level) {
  const auto j = io::read_file(path);
  DirectedGraph g;
  if (j.contains("levels")) {
    const auto t = io::tower_from_json(j, path);
    if (level < 1 || level > t.size()) throw ParseError(path, "no level " + std::to_string(level));
    g = covering_graph(semigroupoid_graph(t.level(level - 1)));
  } else if (j.contains("base")) {
    g = io::spec_from_json(j, path).base.graph();
  } else {
    g = io::graph_from_json(j, path);
  }
  emit(o, io::to_dot(g));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triangular limit algebras: tensor-algebra decisions, ampliation and classification"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c, bool dot) {
    c->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember(dot ? std::vector<std::string>{"json", "text", "dot"}
                                  : std::vector<std::string>{"json", "text"}));
    c->add_option("--out", o.out, "Write the report to a file");
  };

  std::string in, in2;
  auto* ct = app.add_subcommand("check-tensor", "Decide the tensor-algebra criterion at finite depth");
  ct->add_option("tower", in, "Tower JSON")->required();
  ct->add_option("--depth", o.depth, "Levels to inspect")->check(CLI::PositiveNumber);
  common(ct, false);

  std::size_t l = 2, steps = 1;
  auto* am = app.add_subcommand("ampliate", "Ampliate an out-tree");
  am->add_option("graph", in, "Graph JSON")->required();
  am->add_option("-l,--multiplicity", l, "Multiplicity")->check(CLI::PositiveNumber);
  am->add_option("--steps", steps, "Number of ampliations")->check(CLI::NonNegativeNumber);
  common(am, true);

  auto* cl = app.add_subcommand("classify", "Compare two tree-refinement algebras");
  cl->add_option("a", in, "Spec JSON")->required();
  cl->add_option("b", in2, "Spec JSON")->required();
  cl->add_option("--bound", o.bound, "Ampliation search bound")->check(CLI::NonNegativeNumber);
  common(cl, false);

  auto* rd = app.add_subcommand("reduce", "Reduced form of an out-tree");
  rd->add_option("graph", in, "Graph JSON")->required();
  common(rd, true);

  bool shape = false;
  auto* is = app.add_subcommand("iso", "Rooted-tree isomorphism through reduced forms");
  is->add_option("a", in, "Graph JSON")->required();
  is->add_option("b", in2, "Graph JSON")->required();
  is->add_flag("--shape", shape, "Ignore weights on the reductions");
  common(is, false);

  std::vector<std::size_t> mults;
  std::optional<std::size_t> tail;
  auto* sn = app.add_subcommand("supernatural", "Supernatural number of a spec or multiplicity list");
  sn->add_option("spec", in, "Spec JSON");
  sn->add_option("--mults", mults, "Multiplicities")->delimiter(',');
  sn->add_option("--tail", tail, "Stationary multiplicity");
  common(sn, false);

  auto* vc = app.add_subcommand("verify-ckt", "Check the Cuntz-Krieger-Toeplitz relations");
  vc->add_option("graph", in, "Graph JSON")->required();
  vc->add_option("--cutoff", o.cutoff, "Path length cutoff for cyclic graphs")->check(CLI::PositiveNumber);
  common(vc, false);

  auto* nm = app.add_subcommand("norm", "Module norm against the operator norm of t(x)");
  nm->add_option("vector", in, "JSON with graph and amplitudes")->required();
  nm->add_option("--cutoff", o.cutoff, "Path length cutoff")->check(CLI::PositiveNumber);
  nm->add_option("--seed", o.seed, "Seed for amplitudes when none are given");
  common(nm, false);

  std::size_t level = 1;
  auto* ed = app.add_subcommand("emit-dot", "DOT for a graph, spec base, or tower level cover");
  ed->add_option("file", in, "Graph, spec or tower JSON")->required();
  ed->add_option("--level", level, "Tower level, 1-based")->check(CLI::PositiveNumber);
  ed->add_option("--out", o.out, "Write the DOT to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageExit;
  }

  try {
    if (*ct) return check_tensor(o, in);
    if (*am) return ampliate_cmd(o, in, l, steps);
    if (*cl) return classify_cmd(o, in, in2);
    if (*rd) return reduce_cmd(o, in);
    if (*is) return iso_cmd(o, in, in2, shape);
    if (*sn) {
      if (in.empty() && mults.empty() && !tail) {
        std::cerr << "supernatural: give a spec file or --mults/--tail\n";
        return kUsageExit;
      }
      return supernatural_cmd(o, in, mults, tail);
    }
    if (*vc) return verify_ckt(o, in);
    if (*nm) return norm_cmd(o, in);
    if (*ed) return emit_dot(o, in, level);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParseExit;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseExit;
  }
  return kUsageExit;
}
