#include "tafkit/embedding.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "tafkit/errors.hpp"

namespace tafkit {

namespace {

std::string pname(const DigraphAlgebra& a, UnitPair p) {
  return "e(" + unit_name(a, p.range) + "," + unit_name(a, p.source) + ")";
}

}  // namespace

RegularEmbedding::RegularEmbedding(DigraphAlgebra source, DigraphAlgebra target,
                                   std::vector<std::vector<UnitPair>> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  for (auto& im : images_) std::sort(im.begin(), im.end());
  validate();
}

void RegularEmbedding::validate() const {
  const auto& pairs = source_.pairs();
  if (images_.size() != pairs.size())
    throw EmbeddingError("image list covers " + std::to_string(images_.size()) + " pairs, source has " +
                         std::to_string(pairs.size()));
  std::vector<int> owner(target_.dimension(), -1);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& im = images_[k];
    if (im.empty()) throw EmbeddingError("empty image for " + pname(source_, pairs[k]));
    if (std::adjacent_find(im.begin(), im.end()) != im.end())
      throw EmbeddingError("repeated summand in the image of " + pname(source_, pairs[k]));
    for (const auto& q : im)
      if (!target_.contains(q))
        throw EmbeddingError("image of " + pname(source_, pairs[k]) + " leaves the target relation");
    if (!pairs[k].diagonal()) continue;
    for (const auto& q : im) {
      if (!q.diagonal())
        throw EmbeddingError("diagonal unit " + unit_name(source_, pairs[k].range) + " maps off the diagonal");
      if (owner[q.range] != -1)
        throw EmbeddingError("diagonal images of units " + unit_name(source_, static_cast<std::size_t>(owner[q.range])) +
                             " and " + unit_name(source_, pairs[k].range) + " overlap");
      owner[q.range] = static_cast<int>(pairs[k].range);
    }
  }
  auto diag = [&](std::size_t u) {
    std::vector<std::size_t> d;
    for (const auto& q : images_[*source_.pair_index({u, u})]) d.push_back(q.range);
    return d;
  };
  // Ranges biject with diag_image(i), sources with diag_image(j).
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    std::vector<std::size_t> r, s;
    for (const auto& q : images_[k]) {
      r.push_back(q.range);
      s.push_back(q.source);
    }
    std::sort(r.begin(), r.end());
    std::sort(s.begin(), s.end());
    if (r != diag(pairs[k].range) || s != diag(pairs[k].source))
      throw EmbeddingError("image of " + pname(source_, pairs[k]) + " is not a partial isometry between the "
                           "images of its range and source projections");
  }
  // image(i,j) image(j,k) = image(i,k), summand by summand.
  const std::size_t tn = target_.dimension();
  std::vector<std::size_t> via(tn);
  const BitMatrix above = source_.relation().transposed();
  for (std::size_t j = 0; j < source_.dimension(); ++j) {
    const auto ranges = above.row_indices(j);
    for (std::size_t k : source_.relation().row_indices(j)) {
      for (const auto& q : images_[*source_.pair_index({j, k})]) via[q.range] = q.source;
      for (std::size_t i : ranges) {
        const auto& ik = images_[*source_.pair_index({i, k})];
        for (const auto& q : images_[*source_.pair_index({i, j})]) {
          const UnitPair want{q.range, via[q.source]};
          if (!std::binary_search(ik.begin(), ik.end(), want))
            throw EmbeddingError("images of " + pname(source_, {i, j}) + " and " + pname(source_, {j, k}) +
                                 " do not compose into the image of " + pname(source_, {i, k}));
        }
      }
    }
  }
  // Every unit of a block has the same distribution over target blocks.
  for (std::size_t u = 1; u < source_.dimension(); ++u) {
    if (source_.block_of(u) != source_.block_of(u - 1)) continue;
    std::map<std::size_t, std::size_t> a, b;
    for (std::size_t t : diag(u)) ++a[target_.block_of(t)];
    for (std::size_t t : diag(u - 1)) ++b[target_.block_of(t)];
    if (a != b) throw EmbeddingError("units of one block have different multiplicities");
  }
}

RegularEmbedding RegularEmbedding::from_copies(DigraphAlgebra source, DigraphAlgebra target,
                                               const std::vector<Copy>& copies) {
  std::vector<std::vector<UnitPair>> images(source.pairs().size());
  for (std::size_t k = 0; k < source.pairs().size(); ++k) {
    const auto p = source.pairs()[k];
    for (const auto& c : copies) {
      if (c.size() != source.dimension()) throw EmbeddingError("copy map has the wrong length");
      if (!c[p.range]) continue;
      if (!c[p.source]) throw EmbeddingError("copy map covers only part of a block");
      images[k].push_back({*c[p.range], *c[p.source]});
    }
  }
  return RegularEmbedding(std::move(source), std::move(target), std::move(images));
}

RegularEmbedding RegularEmbedding::identity(const DigraphAlgebra& a) {
  std::vector<std::vector<UnitPair>> images;
  for (const auto& p : a.pairs()) images.push_back({p});
  return RegularEmbedding(a, a, std::move(images));
}

std::span<const UnitPair> RegularEmbedding::image(UnitPair p) const {
  const auto k = source_.pair_index(p);
  if (!k) throw EmbeddingError("pair is not in the source relation");
  return images_[*k];
}

std::vector<std::size_t> RegularEmbedding::diag_image(std::size_t unit) const {
  std::vector<std::size_t> out;
  for (const auto& q : image({unit, unit})) out.push_back(q.range);
  return out;
}

std::vector<std::vector<std::size_t>> RegularEmbedding::multiplicities() const {
  std::vector<std::vector<std::size_t>> m(source_.blocks().size(),
                                          std::vector<std::size_t>(target_.blocks().size(), 0));
  for (std::size_t b = 0; b < source_.blocks().size(); ++b)
    for (std::size_t t : diag_image(source_.unit(b, 0))) ++m[b][target_.block_of(t)];
  return m;
}

RegularEmbedding standard_embedding(const DigraphAlgebra& source, std::size_t m, const DigraphAlgebra& target) {
  if (m == 0) throw EmbeddingError("multiplicity must be positive");
  const std::size_t n = source.dimension();
  std::vector<RegularEmbedding::Copy> copies(m, RegularEmbedding::Copy(n));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < n; ++i) copies[k][i] = i + k * n;
  return RegularEmbedding::from_copies(source, target, copies);
}

RegularEmbedding standard_embedding(std::size_t n, std::size_t m) {
  return standard_embedding(DigraphAlgebra::upper_triangular(n), m, DigraphAlgebra::upper_triangular(n * m));
}

RegularEmbedding refinement_embedding(const DigraphAlgebra& source, std::size_t l, const DigraphAlgebra& target) {
  if (l == 0) throw EmbeddingError("multiplicity must be positive");
  const std::size_t n = source.dimension();
  std::vector<RegularEmbedding::Copy> copies(l, RegularEmbedding::Copy(n));
  for (std::size_t s = 0; s < l; ++s)
    for (std::size_t i = 0; i < n; ++i) copies[s][i] = i * l + s;
  return RegularEmbedding::from_copies(source, target, copies);
}

RegularEmbedding refinement_embedding(std::size_t n, std::size_t l) {
  return refinement_embedding(DigraphAlgebra::upper_triangular(n), l, DigraphAlgebra::upper_triangular(n * l));
}

RegularEmbedding block_embedding(const DigraphAlgebra& source, const BlockPattern& pattern,
                                 const DigraphAlgebra& target) {
  if (pattern.copies.empty()) throw EmbeddingError("block pattern has no copies");
  const std::size_t parts = pattern.copies.front().size();
  const std::size_t n = source.dimension();
  if (parts == 0 || n % parts != 0)
    throw EmbeddingError("source dimension " + std::to_string(n) + " is not divisible into " +
                         std::to_string(parts) + " blocks");
  const std::size_t b = n / parts;
  if (target.dimension() != pattern.grid * b)
    throw EmbeddingError("target dimension must be grid * block size = " + std::to_string(pattern.grid * b));
  std::vector<RegularEmbedding::Copy> copies;
  for (const auto& c : pattern.copies) {
    if (c.size() != parts) throw EmbeddingError("block pattern copies differ in length");
    RegularEmbedding::Copy copy(n);
    for (std::size_t a = 0; a < parts; ++a) {
      if (c[a] >= pattern.grid) throw EmbeddingError("block index outside the grid");
      for (std::size_t r = 0; r < b; ++r) copy[a * b + r] = c[a] * b + r;
    }
    copies.push_back(std::move(copy));
  }
  return RegularEmbedding::from_copies(source, target, copies);
}

BlockPattern tuhf_pattern() { return {9, {{0, 1, 4}, {2, 3, 5}, {6, 7, 8}}}; }

namespace {

struct Component {
  std::size_t forest;
  std::size_t root;
  std::vector<std::size_t> vertices;  // declaration order
  std::size_t offset;                 // first global unit
};

std::vector<Component> components_of(const std::vector<OutForest>& forests) {
  std::vector<Component> out;
  std::size_t offset = 0;
  for (std::size_t f = 0; f < forests.size(); ++f) {
    const auto comps = forests[f].components();
    for (std::size_t c = 0; c < comps.size(); ++c) {
      out.push_back({f, forests[f].roots()[c], comps[c], offset});
      offset += comps[c].size();
    }
  }
  return out;
}

}  // namespace

DigraphAlgebra forest_algebra(const std::vector<OutForest>& forests) {
  const auto comps = components_of(forests);
  std::vector<std::size_t> blocks;
  std::vector<UnitPair> pairs;
  for (const auto& c : comps) {
    blocks.push_back(c.vertices.size());
    const auto& f = forests[c.forest];
    auto local = [&](std::size_t v) {
      return c.offset + static_cast<std::size_t>(std::find(c.vertices.begin(), c.vertices.end(), v) -
                                                 c.vertices.begin());
    };
    for (std::size_t v : c.vertices)
      for (std::size_t u = v; f.parent(u);) {
        u = *f.parent(u);
        pairs.push_back({local(v), local(u)});
      }
  }
  return DigraphAlgebra::from_pairs(std::move(blocks), pairs);
}

TreeStandardEmbedding tree_standard_embedding(const std::vector<OutForest>& sources, const OutForest& target,
                                              const std::vector<Attachment>& attach) {
  if (!target.is_tree()) throw IllFormedAttachment("tree-standard target must be an out-tree");
  const auto comps = components_of(sources);
  const DigraphAlgebra src = forest_algebra(sources);
  const DigraphAlgebra tgt = DigraphAlgebra::from_graph(target.graph());
  const DirectedGraph& h = target.graph();
  std::vector<bool> used(h.vertex_count(), false);
  std::vector<bool> attached(comps.size(), false);
  std::vector<RegularEmbedding::Copy> copies;
  TreeStandardEmbedding out{RegularEmbedding::identity(DigraphAlgebra()), std::vector<std::vector<std::size_t>>(comps.size())};

  for (const auto& a : attach) {
    if (a.source >= sources.size()) throw IllFormedAttachment("attachment names source " + std::to_string(a.source));
    const auto& f = sources[a.source];
    const auto rv = f.graph().find(a.root);
    if (!rv) throw IllFormedAttachment("unknown root '" + a.root + "'");
    std::size_t ci = comps.size();
    for (std::size_t c = 0; c < comps.size(); ++c)
      if (comps[c].forest == a.source && comps[c].root == *rv) ci = c;
    if (ci == comps.size()) throw IllFormedAttachment("'" + a.root + "' is not a root of its source forest");
    const Component& comp = comps[ci];

    std::map<std::size_t, std::size_t> pinned;
    for (const auto& [s, t] : a.map) {
      const auto sv = f.graph().find(s);
      const auto tv = h.find(t);
      if (!sv || !tv) throw IllFormedAttachment("explicit map entry '" + s + "' -> '" + t + "' names unknown vertices");
      pinned[*sv] = *tv;
    }
    std::map<std::size_t, std::size_t> img;
    auto claim = [&](std::size_t v, std::size_t t) {
      if (used[t]) throw IllFormedAttachment("target vertex '" + h.id(t) + "' is already covered");
      used[t] = true;
      img[v] = t;
    };
    auto next_child = [&](std::size_t parent) -> std::size_t {
      for (std::size_t c : h.successors(parent))
        if (!used[c]) return c;
      throw IllFormedAttachment("no free child below '" + h.id(parent) + "'");
    };

    std::size_t root_img;
    if (auto p = pinned.find(*rv); p != pinned.end()) {
      root_img = p->second;
      if (a.at ? target.parent(root_img) != h.find(*a.at) : target.parent(root_img).has_value())
        throw IllFormedAttachment("pinned root image does not hang from the attachment vertex");
    } else if (a.at) {
      const auto at = h.find(*a.at);
      if (!at) throw IllFormedAttachment("unknown attachment vertex '" + *a.at + "'");
      root_img = next_child(*at);
    } else {
      root_img = target.root();
    }
    claim(*rv, root_img);
    std::vector<std::size_t> stack{*rv};
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      const auto kids = f.children(u);
      for (std::size_t c : kids) {
        std::size_t t;
        if (auto p = pinned.find(c); p != pinned.end()) {
          t = p->second;
          if (target.parent(t) != img[u])
            throw IllFormedAttachment("edge " + f.graph().id(u) + " -> " + f.graph().id(c) +
                                      " is not sent to a target edge");
        } else {
          t = next_child(img[u]);
        }
        claim(c, t);
      }
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }

    RegularEmbedding::Copy copy(src.dimension());
    std::vector<std::size_t> vmap;
    for (std::size_t k = 0; k < comp.vertices.size(); ++k) {
      copy[comp.offset + k] = img.at(comp.vertices[k]);
      vmap.push_back(img.at(comp.vertices[k]));
    }
    copies.push_back(std::move(copy));
    out.vertex_maps[ci].insert(out.vertex_maps[ci].end(), vmap.begin(), vmap.end());
    attached[ci] = true;
  }
  for (std::size_t c = 0; c < comps.size(); ++c)
    if (!attached[c])
      throw IllFormedAttachment("tree rooted at '" + sources[comps[c].forest].graph().id(comps[c].root) +
                                "' is never attached");
  out.embedding = RegularEmbedding::from_copies(src, tgt, copies);
  return out;
}

bool is_tree_standard(const RegularEmbedding& e) {
  const auto& sc = e.source().covering();
  const auto& tc = e.target().covering();
  for (std::size_t k = 0; k < e.source().pairs().size(); ++k) {
    const auto p = e.source().pairs()[k];
    if (p.diagonal() || !sc.get(p.range, p.source)) continue;
    for (const auto& q : e.image_at(k))
      if (!tc.get(q.range, q.source)) return false;
  }
  return true;
}

RegularEmbedding compose(const RegularEmbedding& f, const RegularEmbedding& g) {
  if (!(f.target() == g.source()))
    throw MismatchedLevels("cannot compose: first target differs from second source");
  std::vector<std::vector<UnitPair>> images(f.source().pairs().size());
  for (std::size_t k = 0; k < images.size(); ++k)
    for (const auto& q : f.image_at(k))
      for (const auto& r : g.image(q)) images[k].push_back(r);
  return RegularEmbedding(f.source(), g.target(), std::move(images));
}

Rational normalized_trace(const std::vector<std::size_t>& units, const DigraphAlgebra& a) {
  if (a.blocks().size() != 1) throw MultiBlockUnsupported("normalized trace needs a single-block algebra");
  std::set<std::size_t> s(units.begin(), units.end());
  if (s.size() != units.size()) throw AlgebraError("repeated diagonal unit in projection");
  if (!s.empty() && *s.rbegin() >= a.dimension()) throw AlgebraError("diagonal unit out of range");
  return Rational(static_cast<long long>(s.size()), static_cast<long long>(a.dimension()));
}

}  // namespace tafkit
