#include "torsionlab/generator.hpp"

#include <algorithm>
#include <cmath>

namespace torsionlab::generator {

using bundles::BundleModel;
using geomcx::MorseBottModel;

std::uint64_t Rng::next() {
  // splitmix64; fixed reference sequence independent of the standard library.
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::unit() { return double(next() >> 11) * 0x1.0p-53; }
double Rng::range(double lo, double hi) { return lo + (hi - lo) * unit(); }
int Rng::below(int n) { return n <= 1 ? 0 : static_cast<int>(next() % std::uint64_t(n)); }
double Rng::signed_range(double lo, double hi) {
  const double v = range(lo, hi);
  return (next() & 1) ? -v : v;
}

Matrix random_matrix(Rng& rng, Index rows, Index cols, double lo, double hi) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.range(lo, hi);
  return m;
}

Matrix random_invertible(Rng& rng, Index n, double max_cond) {
  if (n == 0) return Matrix(0, 0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Matrix m = random_matrix(rng, n, n);
    Eigen::BDCSVD<Matrix> svd(m);
    const Vector sv = svd.singularValues();
    if (sv(n - 1) > 0 && sv(0) / sv(n - 1) < max_cond) return m;
  }
  // Fall back to a well-conditioned shift.
  Matrix m = random_matrix(rng, n, n) * 0.25 + Matrix::Identity(n, n);
  return m;
}

MetricSpace random_metric(Rng& rng, Index n, double spread) {
  if (n == 0) return MetricSpace();
  const Matrix a = random_matrix(rng, n, n);
  const Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  Vector ev(n);
  for (Index i = 0; i < n; ++i) ev(i) = rng.range(1.0 / spread, spread);
  Matrix g = q * ev.asDiagonal() * q.transpose();
  return MetricSpace(n, 0.5 * (g + g.transpose()));
}

namespace {

MetricSpace make_metric(Rng& rng, Index n, MetricMode mode, const Matrix& p) {
  switch (mode) {
    case MetricMode::unit:
      return MetricSpace::euclidean(n);
    case MetricMode::random:
      return random_metric(rng, n);
    case MetricMode::transported: {
      if (n == 0) return MetricSpace();
      const Matrix pinv = p.inverse();
      Matrix g = pinv.transpose() * pinv;
      return MetricSpace(n, 0.5 * (g + g.transpose()));
    }
  }
  return MetricSpace::euclidean(n);
}

struct Atom {
  int q;        // source degree (arrows go q -> q+1); cohomology atoms use q only
  bool arrow;
  double weight;
  int level_src = 0, level_tgt = 0;
};

std::vector<Atom> draw_atoms(Rng& rng, int q_min, int degrees, Index cap, bool acyclic,
                             int levels) {
  std::vector<Atom> atoms;
  Index total = 0;
  for (int qi = 0; qi < degrees; ++qi) {
    const int q = q_min + qi;
    if (!acyclic) {
      const int h = rng.below(3);
      for (int t = 0; t < h && total + 1 <= cap; ++t) {
        Atom a{q, false, 0.0, 0, 0};
        a.level_src = rng.below(levels);
        atoms.push_back(a);
        total += 1;
      }
    }
    if (qi + 1 < degrees) {
      const int narrow = 1 + rng.below(3);
      for (int t = 0; t < narrow && total + 2 <= cap; ++t) {
        Atom a{q, true, rng.signed_range(0.5, 2.0), 0, 0};
        a.level_src = rng.below(levels);
        a.level_tgt = a.level_src + rng.below(levels - a.level_src);
        atoms.push_back(a);
        total += 2;
      }
    }
  }
  if (atoms.empty()) atoms.push_back({q_min, false, 0.0, 0, 0});
  return atoms;
}

struct Assembly {
  GradedMetricComplex complex;                  // conjugated
  std::vector<Matrix> change;                   // per degree, new = change * atom coords
  std::vector<std::vector<int>> slot_levels;    // per degree, level of each atom slot
};

/// Lay out atoms into per-degree slots (sorted by descending level so the
/// filtration is a column prefix), build the atom differential, then
/// conjugate by level-triangular invertible maps.
Assembly assemble_atoms(Rng& rng, const std::vector<Atom>& atoms, int q_min, int degrees,
                        int levels, MetricMode mode) {
  struct Slot {
    int level;
    int atom;
    bool is_target;
  };
  std::vector<std::vector<Slot>> slots(degrees);
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    const auto& atom = atoms[a];
    slots[atom.q - q_min].push_back({atom.level_src, static_cast<int>(a), false});
    if (atom.arrow)
      slots[atom.q + 1 - q_min].push_back({atom.level_tgt, static_cast<int>(a), true});
  }
  for (auto& s : slots)
    std::stable_sort(s.begin(), s.end(),
                     [](const Slot& x, const Slot& y) { return x.level > y.level; });

  Assembly out;
  out.complex.q_min = q_min;
  out.slot_levels.resize(degrees);
  std::vector<std::vector<std::pair<int, Index>>> find(degrees);
  for (int qi = 0; qi < degrees; ++qi) {
    for (Index j = 0; j < static_cast<Index>(slots[qi].size()); ++j) {
      out.slot_levels[qi].push_back(slots[qi][j].level);
      find[qi].push_back({slots[qi][j].atom * 2 + (slots[qi][j].is_target ? 1 : 0), j});
    }
  }
  auto locate = [&](int qi, int atom, bool tgt) -> Index {
    for (const auto& [key, j] : find[qi])
      if (key == atom * 2 + (tgt ? 1 : 0)) return j;
    throw Error("generator: atom slot lost");
  };

  std::vector<Matrix> d_atoms(degrees > 0 ? degrees - 1 : 0);
  for (int qi = 0; qi + 1 < degrees; ++qi)
    d_atoms[qi] = Matrix::Zero(slots[qi + 1].size(), slots[qi].size());
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if (!atoms[a].arrow) continue;
    const int qi = atoms[a].q - q_min;
    d_atoms[qi](locate(qi + 1, static_cast<int>(a), true),
                locate(qi, static_cast<int>(a), false)) = atoms[a].weight;
  }

  // Level-triangular conjugation: column j may hit rows of level >= level_j,
  // which in the descending ordering means rows above the block or inside it.
  out.change.resize(degrees);
  for (int qi = 0; qi < degrees; ++qi) {
    const Index n = static_cast<Index>(slots[qi].size());
    Matrix p = Matrix::Zero(n, n);
    Index start = 0;
    while (start < n) {
      Index stop = start;
      while (stop < n && slots[qi][stop].level == slots[qi][start].level) ++stop;
      p.block(start, start, stop - start, stop - start) =
          random_invertible(rng, stop - start);
      if (start > 0)
        p.block(0, start, start, stop - start) =
            0.5 * random_matrix(rng, start, stop - start);
      start = stop;
    }
    (void)levels;
    out.change[qi] = p;
  }

  for (int qi = 0; qi < degrees; ++qi) {
    const Index n = static_cast<Index>(slots[qi].size());
    out.complex.spaces.push_back(make_metric(rng, n, mode, out.change[qi]));
  }
  for (int qi = 0; qi + 1 < degrees; ++qi) {
    const Matrix pinv = out.change[qi].size() > 0 ? out.change[qi].inverse() : out.change[qi];
    out.complex.diffs.push_back(out.change[qi + 1] * d_atoms[qi] * pinv);
  }
  return out;
}

}  // namespace

GradedMetricComplex gen_complex(std::uint64_t seed, const ComplexParams& params) {
  Rng rng(seed ^ 0xc0ffee11ull);
  const auto atoms =
      draw_atoms(rng, params.q_min, params.degrees, params.max_total_dim, params.acyclic, 1);
  return assemble_atoms(rng, atoms, params.q_min, params.degrees, 1, params.metric).complex;
}

FilteredMetricComplex gen_filtered(std::uint64_t seed, const FilteredParams& params) {
  Rng rng(seed ^ 0xf117e23dull);
  const int levels = std::max(1, params.levels);
  const auto atoms = draw_atoms(rng, params.q_min, params.degrees, params.max_total_dim,
                                params.acyclic, levels);
  auto asm_out =
      assemble_atoms(rng, atoms, params.q_min, params.degrees, levels, params.metric);

  FilteredMetricComplex f;
  f.complex = std::move(asm_out.complex);
  f.p_min = 0;
  f.level_bases.resize(levels);
  for (int p = 0; p < levels; ++p) {
    auto& per_degree = f.level_bases[p];
    per_degree.resize(f.complex.spaces.size());
    for (int qi = 0; qi < static_cast<int>(f.complex.spaces.size()); ++qi) {
      Index cols = 0;
      for (int lvl : asm_out.slot_levels[qi])
        if (lvl >= p) ++cols;
      // Levels are sorted descending, so F_p is a column prefix of the
      // conjugation matrix.
      per_degree[qi] = asm_out.change[qi].leftCols(cols);
    }
  }
  return f;
}

SesInstance gen_ses(std::uint64_t seed, const FilteredParams& params) {
  FilteredParams two = params;
  two.levels = 2;
  const FilteredMetricComplex f = gen_filtered(seed ^ 0x5e5a11ceull, two);
  const auto& c1 = f.complex;
  const Tolerance tol;

  SesInstance inst;
  inst.c1 = c1;
  inst.c0.q_min = c1.q_min;
  inst.c2.q_min = c1.q_min;
  inst.incl.q_min = c1.q_min;
  inst.proj.q_min = c1.q_min;

  std::vector<Matrix> sub(c1.spaces.size()), quot(c1.spaces.size());
  for (int q = c1.q_min; q <= c1.q_max(); ++q) {
    const Matrix b = f.basis(1, q);
    sub[q - c1.q_min] = b;
    inst.c0.spaces.emplace_back(b.cols(), b.transpose() * c1.space(q).gram * b);
    const auto sq = numeric::subquotient(c1.space(q), Matrix::Identity(c1.dim(q), c1.dim(q)),
                                         b, tol);
    quot[q - c1.q_min] = sq.basis;
    inst.c2.spaces.push_back(sq.space);
    inst.incl.blocks.push_back(b);
    // Quotient map: G-orthogonal projection onto the complement realization,
    // expressed in its columns.
    Matrix proj(sq.space.dim, c1.dim(q));
    if (sq.space.dim > 0) {
      proj = sq.space.gram.llt().solve(sq.basis.transpose() * c1.space(q).gram);
    }
    inst.proj.blocks.push_back(std::move(proj));
  }
  for (int q = c1.q_min; q < c1.q_max(); ++q) {
    const int qi = q - c1.q_min;
    inst.c0.diffs.push_back(numeric::coordinates_in(c1.space(q + 1), sub[qi + 1],
                                                    c1.d(q) * sub[qi], tol));
    inst.c2.diffs.push_back(inst.proj.blocks[qi + 1] * (c1.d(q) * quot[qi]));
  }
  return inst;
}

MorseBottModel gen_morse_bott(std::uint64_t seed, const MorseBottParams& params) {
  Rng rng(seed ^ 0x30b0d711ull);
  MorseBottModel m;
  const int n_comp = 1 + rng.below(params.max_components);

  if (params.points_only) {
    for (int i = 0; i < n_comp; ++i) {
      geomcx::Component comp;
      comp.label = "p" + std::to_string(i);
      comp.index = rng.below(params.max_index + 1);
      comp.complex.q_min = 0;
      comp.complex.spaces.push_back(MetricSpace::euclidean(1));
      m.components.push_back(std::move(comp));
    }
    // Role split keeps compositions of instantons structurally zero.
    std::vector<bool> sender(n_comp);
    for (int i = 0; i < n_comp; ++i) sender[i] = rng.below(2) == 0;
    for (int i = 0; i < n_comp; ++i)
      for (int j = 0; j < n_comp; ++j) {
        if (m.components[i].index != m.components[j].index + 1) continue;
        if (!sender[j] || sender[i]) continue;  // j emits, i absorbs
        if (rng.unit() < 0.3) continue;
        geomcx::InstantonMap u;
        u.to = i;
        u.from = j;
        u.blocks[0] = Matrix::Constant(1, 1, rng.signed_range(0.5, 2.0));
        m.instantons.push_back(std::move(u));
      }
    return m;
  }

  // Components with small internal complexes; cross-component atoms use
  // private slots so the total differential squares to zero by construction.
  struct Cross {
    int to, from, k_src;
    double weight;
  };
  std::vector<Cross> crosses;
  std::vector<int> indices(n_comp);
  for (int i = 0; i < n_comp; ++i) indices[i] = rng.below(params.max_index + 1);

  // Per component per degree dims, grown as atoms are drawn.
  const int deg = std::max(1, params.comp_degrees);
  std::vector<std::vector<Index>> dims(n_comp, std::vector<Index>(deg, 0));
  std::vector<std::vector<std::vector<std::pair<Index, Index>>>> internal(n_comp);
  for (int i = 0; i < n_comp; ++i) internal[i].resize(deg > 0 ? deg - 1 : 0);
  Index total = 0;
  const Index cap = params.max_total_dim;

  for (int i = 0; i < n_comp; ++i) {
    const int h = 1 + rng.below(2);
    for (int t = 0; t < h && total < cap; ++t) {
      const int k = rng.below(deg);
      dims[i][k] += 1;
      total += 1;
    }
    const int arrows = rng.below(2);
    for (int t = 0; t < arrows && total + 2 <= cap && deg >= 2; ++t) {
      const int k = rng.below(deg - 1);
      internal[i][k].push_back({dims[i][k], dims[i][k + 1]});
      dims[i][k] += 1;
      dims[i][k + 1] += 1;
      total += 2;
    }
  }
  std::vector<std::vector<std::vector<double>>> internal_w(n_comp);
  for (int i = 0; i < n_comp; ++i) {
    internal_w[i].resize(deg > 0 ? deg - 1 : 0);
    for (int k = 0; k + 1 < deg; ++k)
      for (std::size_t t = 0; t < internal[i][k].size(); ++t)
        internal_w[i][k].push_back(rng.signed_range(0.5, 2.0));
  }

  struct CrossSlot {
    int to, from, k_src, k_tgt;
    Index row, col;
    double weight;
  };
  std::vector<CrossSlot> cross_slots;
  for (int i = 0; i < n_comp; ++i)
    for (int j = 0; j < n_comp; ++j) {
      if (indices[i] <= indices[j]) continue;
      const int shift = indices[i] - indices[j] - 1;
      if (rng.unit() < 0.45) continue;
      const int tries = 1 + rng.below(2);
      for (int t = 0; t < tries && total + 2 <= cap; ++t) {
        const int k_src = rng.below(deg);
        const int k_tgt = k_src - shift;
        if (k_tgt < 0 || k_tgt >= deg) continue;
        CrossSlot cs{i, j, k_src, k_tgt, dims[i][k_tgt], dims[j][k_src],
                     rng.signed_range(0.5, 2.0)};
        dims[j][k_src] += 1;
        dims[i][k_tgt] += 1;
        total += 2;
        cross_slots.push_back(cs);
      }
    }

  // Materialize components (conjugated within each degree).
  std::vector<std::vector<Matrix>> change(n_comp);
  for (int i = 0; i < n_comp; ++i) {
    geomcx::Component comp;
    comp.label = "c" + std::to_string(i);
    comp.index = indices[i];
    comp.complex.q_min = 0;
    change[i].resize(deg);
    for (int k = 0; k < deg; ++k) {
      change[i][k] = random_invertible(rng, dims[i][k]);
      comp.complex.spaces.push_back(
          make_metric(rng, dims[i][k], params.metric, change[i][k]));
    }
    for (int k = 0; k + 1 < deg; ++k) {
      Matrix d = Matrix::Zero(dims[i][k + 1], dims[i][k]);
      for (std::size_t t = 0; t < internal[i][k].size(); ++t)
        d(internal[i][k][t].second, internal[i][k][t].first) = internal_w[i][k][t];
      const Matrix pinv = change[i][k].size() > 0 ? change[i][k].inverse() : change[i][k];
      comp.complex.diffs.push_back(change[i][k + 1] * d * pinv);
    }
    m.components.push_back(std::move(comp));
  }

  std::map<std::pair<int, int>, geomcx::InstantonMap> merged;
  for (const auto& cs : cross_slots) {
    auto& u = merged[{cs.to, cs.from}];
    u.to = cs.to;
    u.from = cs.from;
    auto it = u.blocks.find(cs.k_src);
    if (it == u.blocks.end()) {
      Matrix blk = Matrix::Zero(dims[cs.to][cs.k_tgt], dims[cs.from][cs.k_src]);
      it = u.blocks.emplace(cs.k_src, std::move(blk)).first;
    }
    it->second(cs.row, cs.col) += cs.weight;
  }
  // Conjugate the instanton blocks and strip the sign operator so that the
  // assembled differential reproduces the atom differential.
  for (auto& [key, u] : merged) {
    for (auto& [k, blk] : u.blocks) {
      const int shift = indices[u.to] - indices[u.from] - 1;
      const Matrix pinv =
          change[u.from][k].size() > 0 ? change[u.from][k].inverse() : change[u.from][k];
      blk = sign_of_degree(k) * (change[u.to][k - shift] * blk * pinv);
    }
    m.instantons.push_back(std::move(u));
  }
  return m;
}

geomcx::IntegrationMap gen_integration_map(std::uint64_t seed, const GradedMetricComplex& target,
                                           const Tolerance& tol) {
  Rng rng(seed ^ 0x1a7e6ca1ull);
  const auto h = complexes::hodge_cohomology(target, tol);
  geomcx::IntegrationMap im;
  im.ambient.q_min = target.q_min;
  im.map.q_min = target.q_min;
  for (int q = target.q_min; q <= target.q_max(); ++q) {
    const int b = h.betti(q);
    im.ambient.spaces.push_back(random_metric(rng, b));
    Matrix mq(target.dim(q), b);
    if (b > 0) {
      mq = h.at(q).harmonic_basis * random_invertible(rng, b);
      if (target.dim(q - 1) > 0) {
        const Matrix mix = random_matrix(rng, target.dim(q - 1), b, -0.5, 0.5);
        mq += target.d(q - 1) * mix;
      }
    } else {
      mq.setZero();
    }
    im.map.blocks.push_back(std::move(mq));
  }
  for (int q = target.q_min; q < target.q_max(); ++q) {
    const int b = h.betti(q);
    im.ambient.diffs.push_back(Matrix::Zero(h.betti(q + 1), b));
  }
  return im;
}

BundleModel gen_bundle(std::uint64_t seed, const BundleParams& params) {
  Rng rng(seed ^ 0xb0bb1e5eull);
  BundleModel b;
  const int n_pts = std::max(2, 1 + rng.below(params.base_points));
  std::vector<bool> sender(n_pts);
  for (int i = 0; i < n_pts; ++i) {
    b.points.push_back({"z" + std::to_string(i), rng.below(params.max_index + 1)});
    sender[i] = rng.below(2) == 0;
  }
  b.r_min = 0;
  for (int r = 0; r < params.fiber_degrees; ++r) {
    const Index d = 1 + rng.below(static_cast<int>(params.fiber_dim));
    b.fiber.push_back(params.metric == MetricMode::unit ? MetricSpace::euclidean(d)
                                                        : random_metric(rng, d));
  }
  for (int i = 0; i < n_pts; ++i)
    for (int j = 0; j < n_pts; ++j) {
      if (b.points[i].index != b.points[j].index + 1) continue;
      if (!sender[j] || sender[i]) continue;
      if (rng.unit() < 0.3) continue;
      for (int r = 0; r < params.fiber_degrees; ++r)
        b.transports.push_back(
            {i, j, r, random_matrix(rng, b.fiber[r].dim, b.fiber[r].dim)});
    }
  return b;
}

namespace {

bundles::WangData finish_edge_data(Rng& rng, FilteredMetricComplex total, int n,
                                   bool compatible, const Tolerance& tol) {
  bundles::WangData w;
  w.n = n;
  w.total = std::move(total);
  const auto& c = w.total.complex;
  const auto h = complexes::hodge_cohomology(c, tol);

  if (!compatible) {
    const auto im = gen_integration_map(rng.next(), c, tol);
    w.ambient = im.ambient;
    w.quasi_iso = im.map;
    return w;
  }

  // Ambient basis built from the stabilized page: classes of the deeper
  // filtration level first, then the complementary classes; unit Gram. This
  // realizes the compatibility that makes the edge maps volume-one.
  const auto res = spectral::log_t_comb(w.total, tol);
  const auto& last = res.pages.back();
  w.ambient.q_min = c.q_min;
  w.quasi_iso.q_min = c.q_min;
  for (int q = c.q_min; q <= c.q_max(); ++q) {
    const int b = h.betti(q);
    w.ambient.spaces.push_back(MetricSpace::euclidean(b));
    Matrix cols(c.dim(q), 0);
    for (int p = last.p_max; p >= last.p_min; --p) {
      const auto& e = last.entry(p, q);
      if (e.dim() == 0) continue;
      Matrix ext(c.dim(q), cols.cols() + e.dim());
      ext << cols, e.emb;
      cols = std::move(ext);
    }
    if (cols.cols() != b)
      throw Error("generator: stabilized page does not span the cohomology");
    w.quasi_iso.blocks.push_back(std::move(cols));
  }
  for (int q = c.q_min; q < c.q_max(); ++q)
    w.ambient.diffs.push_back(Matrix::Zero(h.betti(q + 1), h.betti(q)));
  return w;
}

}  // namespace

bundles::WangData gen_wang(std::uint64_t seed, const WangParams& params) {
  Rng rng(seed ^ 0x7a9c0de5ull);
  const Tolerance tol;
  BundleModel b;
  b.points.push_back({"z0", 0});
  b.points.push_back({"zn", params.n});
  b.r_min = 0;
  for (int r = 0; r < params.fiber_degrees; ++r) {
    const Index d = 1 + rng.below(static_cast<int>(params.max_fiber_dim));
    b.fiber.push_back(params.compatible_metrics ? MetricSpace::euclidean(d)
                                                : random_metric(rng, d));
  }
  // One block per fiber degree where the shift stays in range; occasionally
  // zero so that the cohomology is nontrivial.
  for (int r = 0; r < params.fiber_degrees; ++r) {
    const int r_tgt = r - params.n + 1;
    if (r_tgt < 0 || r_tgt >= params.fiber_degrees) continue;
    if (rng.unit() < 0.35) continue;
    Matrix blk = random_matrix(rng, b.fiber[r_tgt].dim, b.fiber[r].dim);
    if (params.n == 1)
      b.transports.push_back({1, 0, r, std::move(blk)});
    else
      b.jumps.push_back({1, 0, r, std::move(blk)});
  }
  auto g = geomcx::assemble(bundles::to_morse_bott(b), tol);
  return finish_edge_data(rng, std::move(g.total), params.n, params.compatible_metrics, tol);
}

MappingTorusInstance gen_mapping_torus(std::uint64_t seed, int fiber_degrees,
                                       Index max_fiber_dim) {
  Rng rng(seed ^ 0x3a9917c5ull);
  const Tolerance tol;
  MappingTorusInstance inst;
  BundleModel b;
  b.points.push_back({"min", 0});
  b.points.push_back({"max", 1});
  b.r_min = 0;
  for (int r = 0; r < fiber_degrees; ++r) {
    const Index d = 1 + rng.below(static_cast<int>(max_fiber_dim));
    b.fiber.push_back(MetricSpace::euclidean(d));
    // Monodromy with det(phi - I) bounded away from zero.
    Matrix phi;
    for (int attempt = 0;; ++attempt) {
      phi = random_matrix(rng, d, d);
      const Matrix m = phi - Matrix::Identity(d, d);
      if (std::abs(m.determinant()) > 0.05) break;
      if (attempt > 128) {
        phi = 2.0 * Matrix::Identity(d, d);
        break;
      }
    }
    inst.monodromies.push_back(phi);
    b.transports.push_back({1, 0, r, phi - Matrix::Identity(d, d)});
  }
  auto g = geomcx::assemble(bundles::to_morse_bott(b), tol);
  inst.data = finish_edge_data(rng, std::move(g.total), 1, false, tol);
  return inst;
}

bundles::GysinData gen_gysin(std::uint64_t seed, const GysinParams& params) {
  Rng rng(seed ^ 0x6e51a9d1ull);
  const Tolerance tol;
  BundleModel b;
  const int top = params.n + std::max(1, params.base_span) - 1;
  for (int p = 0; p <= top; ++p)
    b.points.push_back({"z" + std::to_string(p), p});
  b.r_min = 0;
  b.fiber.resize(params.n + 1);
  for (int r = 0; r <= params.n; ++r)
    b.fiber[r] = (r == 0 || r == params.n)
                     ? (params.compatible_metrics ? MetricSpace::euclidean(params.fiber_dim)
                                                  : random_metric(rng, params.fiber_dim))
                     : MetricSpace();
  // Perfect base: no transports, only jumps of index difference n + 1.
  for (int p = 0; p + params.n + 1 <= top; ++p) {
    if (rng.unit() < 0.3) continue;
    b.jumps.push_back(
        {p + params.n + 1, p, params.n,
         random_matrix(rng, b.fiber[0].dim, b.fiber[params.n].dim)});
  }
  auto g = geomcx::assemble(bundles::to_morse_bott(b), tol);

  bundles::GysinData out;
  auto w = finish_edge_data(rng, std::move(g.total), params.n + 1, params.compatible_metrics, tol);
  out.n = params.n;
  out.total = std::move(w.total);
  out.ambient = std::move(w.ambient);
  out.quasi_iso = std::move(w.quasi_iso);
  return out;
}

LstInstance gen_lst(std::uint64_t seed, const BundleParams& params) {
  Rng rng(seed ^ 0x157a51edull);
  const Tolerance tol;
  LstInstance inst;
  inst.model = gen_bundle(seed ^ 0x157a51edull, params);
  const auto g = geomcx::assemble(bundles::to_morse_bott(inst.model), tol);
  inst.total_integration = gen_integration_map(rng.next(), g.total.complex, tol);
  double t_met_base_alt = 0.0;
  std::vector<double> t_comb_base;
  for (int r = inst.model.r_min; r <= inst.model.r_max(); ++r) {
    const auto bc = bundles::base_complex(inst.model, r, tol);
    inst.base_integrations.push_back(gen_integration_map(rng.next(), bc, tol));
    const auto& im = inst.base_integrations.back();
    t_met_base_alt +=
        sign_of_degree(r) * geomcx::metric_torsion_map(im.ambient, bc, im.map, tol);
    t_comb_base.push_back(complexes::torsion_tc(bc, tol));
  }
  const double t_met_total = geomcx::metric_torsion(g, inst.total_integration, tol);
  const auto res = spectral::log_t_comb(g.total, tol);
  double sum_rho_high = 0.0;
  for (std::size_t k = 1; k < res.rho.size(); ++k) sum_rho_high += res.rho[k];

  auto& in = inst.inputs;
  in.r_term_total = rng.signed_range(0.0, 1.0);
  for (std::size_t i = 0; i < inst.model.points.size(); ++i)
    in.t_an_fiber.push_back(rng.signed_range(0.0, 1.0));
  for (int r = inst.model.r_min; r <= inst.model.r_max(); ++r) {
    const double r_term = rng.signed_range(0.0, 1.0);
    in.r_term_base.push_back(r_term);
    const double t_met_r =
        geomcx::metric_torsion_map(inst.base_integrations[r - inst.model.r_min].ambient,
                                   bundles::base_complex(inst.model, r, tol),
                                   inst.base_integrations[r - inst.model.r_min].map, tol);
    // Analytic base torsion consistent with the combinatorial one.
    in.t_an_base.push_back(t_comb_base[r - inst.model.r_min] + t_met_r + r_term);
  }

  // Left-hand side assembled through the same decomposition the ledger uses.
  double lhs = in.r_term_total + t_met_total + sum_rho_high;
  for (std::size_t i = 0; i < inst.model.points.size(); ++i)
    lhs += sign_of_degree(inst.model.points[i].index) * in.t_an_fiber[i];
  for (int r = inst.model.r_min; r <= inst.model.r_max(); ++r)
    lhs += sign_of_degree(r) * t_comb_base[r - inst.model.r_min];
  in.lhs = lhs;
  return inst;
}

}  // namespace torsionlab::generator
