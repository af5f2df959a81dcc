#include "gpw/khintchine.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

namespace gpw {

namespace {

struct SplitLegs {
  std::vector<Letter> l1, l2, l3;
  std::vector<const Mat*> a1, a2, a3;
};

SplitLegs split_legs(const SimpleGraph& g, const PureTensor& x, const TripleSplit& om) {
  const auto perm = shuffle_permutation(g, std::vector<Word>{om.w1, om.w2, om.w3});
  std::vector<const Mat*> src(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) src[static_cast<std::size_t>(perm[i])] = &x.legs[i];
  SplitLegs s;
  const auto n1 = static_cast<std::size_t>(om.w1.length());
  const auto n2 = static_cast<std::size_t>(om.w2.length());
  s.l1 = om.w1.letters;
  s.l2 = om.w2.letters;
  s.l3 = om.w3.letters;
  s.a1.assign(src.begin(), src.begin() + static_cast<long>(n1));
  s.a2.assign(src.begin() + static_cast<long>(n1), src.begin() + static_cast<long>(n1 + n2));
  s.a3.assign(src.begin() + static_cast<long>(n1 + n2), src.end());
  return s;
}

Mat kron_all(const std::vector<const Mat*>& ops) {
  Mat k = Mat::Ones(1, 1);
  for (const Mat* m : ops) {
    Mat n = Eigen::kroneckerProduct(k, *m).eval();
    k = std::move(n);
  }
  return k;
}

// Creation (column) or annihilation (row) coefficients of a tensor of centered
// operators: key letters with multi-index, coefficient Π a_i(j_i+1, 0) or Π a_i(0, j_i+1).
std::vector<std::pair<BasisKey, cd>> leg_vector(const std::vector<Letter>& letters, const std::vector<const Mat*>& ops,
                                                bool column) {
  std::vector<int> rad;
  for (const Mat* m : ops) rad.push_back(static_cast<int>(m->rows()) - 1);
  long total = 1;
  for (int r : rad) total *= r;
  std::vector<std::pair<BasisKey, cd>> out;
  for (long l = 0; l < total; ++l) {
    const auto mi = mixed_digits(l, rad);
    cd c = 1.0;
    for (std::size_t i = 0; i < ops.size() && c != cd(0); ++i)
      c *= column ? (*ops[i])(mi[i] + 1, 0) : (*ops[i])(0, mi[i] + 1);
    if (c != cd(0)) out.emplace_back(BasisKey{Word(letters), mi}, c);
  }
  return out;
}

long middle_size(const FockSpace& fs, const Word& t) {
  long h = 1;
  for (Letter x : t.letters) h *= fs.vertex(x).dim;
  return h;
}

void add_scaled(XdElement& acc, const XdElement& y, cd c) {
  for (const auto& [rho, comp] : y.components) {
    auto& dst = acc.components[rho];
    dst.middle_dim = comp.middle_dim;
    for (const auto& [key, m] : comp.entries) {
      auto it = dst.entries.find(key);
      if (it == dst.entries.end())
        dst.entries.emplace(key, c * m);
      else
        it->second += c * m;
    }
  }
}

std::vector<PureTensor> degree_generators(const FockSpace& fs, int d) {
  std::vector<PureTensor> gens;
  if (d == 0) {
    gens.push_back(PureTensor{});
    return gens;
  }
  for (const auto& w : fs.words())
    if (w.length() == d)
      for (auto& p : basis_generators(fs, w)) gens.push_back(std::move(p));
  return gens;
}

AlgebraicElement as_element(const PureTensor& p) {
  if (p.word.empty()) return AlgebraicElement::identity(p.coef);
  return AlgebraicElement::of(p);
}

template <class Map>
double map_distance(const Map& a, const Map& b) {
  double s = 0;
  for (const auto& [k, c] : a) {
    auto it = b.find(k);
    s += std::norm(c - (it == b.end() ? cd(0) : it->second));
  }
  for (const auto& [k, c] : b)
    if (!a.count(k)) s += std::norm(c);
  return std::sqrt(s);
}

}  // namespace

// ---------------------------------------------------------- free Fock legs

FockSpace make_free_fock(const FockSpace& fs, int depth) {
  return FockSpace(fs.graph().edgeless(), fs.vertices(), depth);
}

std::pair<Mat, Mat> theta1_rho1(const FockSpace& free, Letter v, const Mat& a) {
  if (std::abs(a(0, 0)) > kIdentityTol) throw std::invalid_argument("θ_1 and ρ_1 take centered elements");
  return {Mat(lambda_v_sparse(free, v, a, Part::Cre)), Mat(lambda_v_sparse(free, v, a, Part::Ann))};
}

Mat diag_w(const FockSpace& free, const SimpleGraph& g, const Word& w, const Mat& a) {
  if (normal_form(g, w.letters).length() != w.length() || !is_clique_word(g, w))
    throw std::invalid_argument("Diag_w needs a word equivalent to a clique word");
  std::vector<int> full, cen;
  for (Letter x : w.letters) {
    full.push_back(free.vertex(x).dim);
    cen.push_back(free.vertex(x).centered_dim());
  }
  long hfull = 1, hcen = 1;
  for (std::size_t i = 0; i < full.size(); ++i) {
    hfull *= full[i];
    hcen *= cen[i];
  }
  if (a.rows() != hfull || a.cols() != hfull) throw std::invalid_argument("Diag_w operand has the wrong size");
  // P a P on the centered legs, in centered multi-index order.
  std::vector<long> lift(static_cast<std::size_t>(hcen));
  for (long l = 0; l < hcen; ++l) {
    auto dg = mixed_digits(l, cen);
    for (auto& x : dg) ++x;
    lift[static_cast<std::size_t>(l)] = mixed_index(dg, full);
  }
  Mat out = Mat::Zero(free.dim(), free.dim());
  const auto k = static_cast<std::size_t>(w.length());
  for (int id = 0; id < free.word_count(); ++id) {
    const Word& v = free.word(id);
    if (v.letters.size() < k || !std::equal(w.letters.begin(), w.letters.end(), v.letters.begin())) continue;
    const long tail = free.block_dim(id) / hcen;
    const long off = free.offset(id);
    for (long i = 0; i < hcen; ++i)
      for (long j = 0; j < hcen; ++j) {
        const cd c = a(lift[static_cast<std::size_t>(i)], lift[static_cast<std::size_t>(j)]);
        if (c == cd(0)) continue;
        for (long s = 0; s < tail; ++s) out(off + i * tail + s, off + j * tail + s) = c;
      }
  }
  return out;
}

// --------------------------------------------------------------- Θ̃_d, j_d

XdElement theta_tilde_d(const FockSpace& fs, const AlgebraicElement& x, int d) {
  if (!x.homogeneous(d)) throw InhomogeneousError("Θ̃_d takes homogeneous elements of degree " + std::to_string(d));
  const auto& g = fs.graph();
  XdElement out;
  out.d = d;
  for (const auto& rho : enumerate_rho(g, d)) out.components[rho].middle_dim = middle_size(fs, rho.t);
  if (d == 0) {
    cd s = x.scalar;
    for (const auto& t : x.terms) s += t.coef;
    out.components[RhoTuple{}].entries[{BasisKey{}, BasisKey{}}] = Mat::Constant(1, 1, s);
    return out;
  }
  for (const auto& term : x.terms) {
    for (auto& [rho, comp] : out.components) {
      for (const auto& om : splittings_for_rho(g, term.word, rho)) {
        const auto s = split_legs(g, term, om);
        const Mat mid = term.coef * kron_all(s.a2);
        const auto col = leg_vector(s.l1, s.a1, true);
        const auto row = leg_vector(s.l3, s.a3, false);
        for (const auto& [ck, cc] : col)
          for (const auto& [rk, rc] : row) {
            auto it = comp.entries.find({ck, rk});
            if (it == comp.entries.end())
              comp.entries.emplace(XdKey{ck, rk}, cc * rc * mid);
            else
              it->second += cc * rc * mid;
          }
      }
    }
  }
  return out;
}

XdElement apply_diag(const FockSpace& free, const SimpleGraph& g, const XdElement& y) {
  XdElement out;
  out.d = y.d;
  for (const auto& [rho, comp] : y.components) {
    auto& dst = out.components[rho];
    dst.middle_dim = free.dim();
    for (const auto& [key, m] : comp.entries) dst.entries.emplace(key, diag_w(free, g, rho.t, m));
  }
  return out;
}

XdElement j_d(const FockSpace& fs, const FockSpace& free, const AlgebraicElement& x, int d) {
  return apply_diag(free, fs.graph(), theta_tilde_d(fs, x, d));
}

double component_norm(const XdComponent& c) {
  std::vector<std::vector<XdElement>> grid(1, std::vector<XdElement>(1));
  grid[0][0].components[RhoTuple{}] = c;
  return xd_norm(grid);
}

double xd_norm(const XdElement& y) {
  double best = 0;
  for (const auto& [rho, c] : y.components) best = std::max(best, component_norm(c));
  return best;
}

double xd_norm(const std::vector<std::vector<XdElement>>& grid) {
  const std::size_t k = grid.size();
  std::map<RhoTuple, long> rhos;
  for (const auto& row : grid)
    for (const auto& cell : row)
      for (const auto& [rho, comp] : cell.components) rhos[rho] = comp.middle_dim;
  double best = 0;
  for (const auto& [rho, h] : rhos) {
    std::map<BasisKey, long> rk, ck;
    for (const auto& row : grid)
      for (const auto& cell : row) {
        auto it = cell.components.find(rho);
        if (it == cell.components.end()) continue;
        for (const auto& [key, m] : it->second.entries) {
          rk.emplace(key.first, 0);
          ck.emplace(key.second, 0);
        }
      }
    if (rk.empty()) continue;
    long i = 0;
    for (auto& [key, idx] : rk) idx = i++;
    i = 0;
    for (auto& [key, idx] : ck) idx = i++;
    const long R = static_cast<long>(rk.size()), C = static_cast<long>(ck.size());
    Mat big = Mat::Zero(static_cast<long>(k) * R * h, static_cast<long>(k) * C * h);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        auto it = grid[a][b].components.find(rho);
        if (it == grid[a][b].components.end()) continue;
        for (const auto& [key, m] : it->second.entries)
          big.block((static_cast<long>(a) * R + rk[key.first]) * h, (static_cast<long>(b) * C + ck[key.second]) * h, h, h) = m;
      }
    best = std::max(best, opnorm(big));
  }
  return best;
}

AlgebraicElement e_d_reconstruct(const FockSpace& fs, const FockSpace& free, const XdElement& y, int d, double tol) {
  const auto gens = degree_generators(fs, d);
  std::vector<XdElement> images;
  for (const auto& p : gens) images.push_back(j_d(fs, free, as_element(p), d));
  using Pos = std::tuple<RhoTuple, XdKey, long, long>;
  std::map<Pos, long> index;
  auto collect = [&](const XdElement& e) {
    for (const auto& [rho, comp] : e.components)
      for (const auto& [key, m] : comp.entries)
        for (long i = 0; i < m.rows(); ++i)
          for (long j = 0; j < m.cols(); ++j)
            if (m(i, j) != cd(0)) index.emplace(Pos{rho, key, i, j}, 0);
  };
  for (const auto& e : images) collect(e);
  collect(y);
  long n = 0;
  for (auto& [p, idx] : index) idx = n++;
  auto flatten = [&](const XdElement& e) {
    Vec v = Vec::Zero(n);
    for (const auto& [rho, comp] : e.components)
      for (const auto& [key, m] : comp.entries)
        for (long i = 0; i < m.rows(); ++i)
          for (long j = 0; j < m.cols(); ++j)
            if (m(i, j) != cd(0)) v(index.at(Pos{rho, key, i, j})) = m(i, j);
    return v;
  };
  Mat gm(n, static_cast<long>(gens.size()));
  for (std::size_t k = 0; k < gens.size(); ++k) gm.col(static_cast<long>(k)) = flatten(images[k]);
  const Vec yv = flatten(y);
  const Vec coef = gm.completeOrthogonalDecomposition().solve(yv);
  const double res = (gm * coef - yv).norm();
  if (res > tol * std::max(1.0, yv.norm())) throw RangeError(res);
  AlgebraicElement out;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const cd c = coef(static_cast<long>(k));
    if (c == cd(0)) continue;
    out += as_element(gens[k]).scaled(c);
  }
  return out;
}

double distance(const TensorVector& a, const TensorVector& b) { return map_distance(a, b); }

// --------------------------------------------------------------- J_ρ^{L,R}

JRhoIsometries::JRhoIsometries(SimpleGraph g, std::vector<int> vertex_dims, RhoTuple rho, int depth)
    : g_(std::move(g)), dims_(std::move(vertex_dims)), rho_(std::move(rho)) {
  if (depth < required_depth(rho_)) throw InsufficientDepth(required_depth(rho_), depth);
  nl_ = rho_.nl + rho_.ul.length();
  nr_ = rho_.nr + rho_.ur.length();
  ult_ = multiply(g_, rho_.ul, rho_.t);
  urt_ = multiply(g_, rho_.ur, rho_.t);
  for (int r : middle_radices()) middle_dim_ *= r;
}

int JRhoIsometries::required_depth(const RhoTuple& rho) {
  return std::max(rho.nl + rho.ul.length(), rho.nr + rho.ur.length()) + rho.t.length();
}

std::vector<int> JRhoIsometries::middle_radices() const {
  std::vector<int> r;
  for (Letter x : rho_.t.letters) r.push_back(dims_[static_cast<std::size_t>(x)]);
  return r;
}

namespace {

// Splits the ℋ_t index into the sub-clique r of nonzero legs and their centered indices.
std::pair<std::vector<Letter>, std::vector<int>> unshuffle_middle(const Word& t, long middle, const std::vector<int>& rad) {
  const auto dg = mixed_digits(middle, rad);
  std::vector<Letter> r;
  std::vector<int> mi;
  for (std::size_t i = 0; i < dg.size(); ++i)
    if (dg[i] != 0) {
      r.push_back(t.letters[i]);
      mi.push_back(dg[i] - 1);
    }
  return {r, mi};
}

std::optional<BasisKey> shuffle_key(const SimpleGraph& g, const std::vector<Letter>& src, const std::vector<int>& src_mi) {
  const Word target = normal_form(g, src);
  if (target.length() != static_cast<int>(src.size())) return std::nullopt;
  const auto perm = shuffle_permutation(g, src);
  BasisKey k{target, std::vector<int>(perm.size())};
  for (std::size_t i = 0; i < perm.size(); ++i) k.mi[i] = src_mi[static_cast<std::size_t>(perm[i])];
  return k;
}

}  // namespace

std::optional<std::pair<BasisKey, std::vector<BasisKey>>> JRhoIsometries::right(long middle,
                                                                                const std::vector<BasisKey>& legs) const {
  if (static_cast<int>(legs.size()) != nr_) throw std::invalid_argument("wrong number of right legs");
  std::vector<Letter> s;
  std::vector<int> smi;
  std::vector<BasisKey> tails;
  for (const auto& l : legs) {
    if (l.word.empty()) return std::nullopt;
    s.push_back(l.word[0]);
    smi.push_back(l.mi[0]);
    tails.push_back(BasisKey{Word(std::vector<Letter>(l.word.letters.begin() + 1, l.word.letters.end())),
                             std::vector<int>(l.mi.begin() + 1, l.mi.end())});
  }
  const Word z(s);
  if (normal_form(g_, s) != z) return std::nullopt;
  const Word vr = inverse(g_, multiply(g_, rho_.ur, z));
  if (vr.length() != rho_.nr || z.length() != rho_.nr + rho_.ur.length() || !in_right_tilde(g_, urt_, vr))
    return std::nullopt;
  const auto [r, rmi] = unshuffle_middle(rho_.t, middle, middle_radices());
  std::vector<Letter> src(s.rbegin(), s.rend());
  std::vector<int> src_mi(smi.rbegin(), smi.rend());
  src.insert(src.end(), r.begin(), r.end());
  src_mi.insert(src_mi.end(), rmi.begin(), rmi.end());
  auto key = shuffle_key(g_, src, src_mi);
  if (!key) return std::nullopt;
  return std::make_pair(*key, tails);
}

std::optional<std::pair<std::vector<BasisKey>, BasisKey>> JRhoIsometries::left(const std::vector<BasisKey>& legs,
                                                                               long middle) const {
  if (static_cast<int>(legs.size()) != nl_) throw std::invalid_argument("wrong number of left legs");
  std::vector<Letter> s;
  std::vector<int> smi;
  std::vector<BasisKey> tails;
  for (const auto& l : legs) {
    if (l.word.empty()) return std::nullopt;
    s.push_back(l.word[0]);
    smi.push_back(l.mi[0]);
    tails.push_back(BasisKey{Word(std::vector<Letter>(l.word.letters.begin() + 1, l.word.letters.end())),
                             std::vector<int>(l.mi.begin() + 1, l.mi.end())});
  }
  const Word xw(s);
  if (normal_form(g_, s) != xw) return std::nullopt;
  const Word vl = multiply(g_, xw, rho_.ul);
  if (vl.length() != rho_.nl || xw.length() != rho_.nl + rho_.ul.length() || !in_right_tilde(g_, ult_, vl))
    return std::nullopt;
  const auto [r, rmi] = unshuffle_middle(rho_.t, middle, middle_radices());
  std::vector<Letter> src = s;
  std::vector<int> src_mi = smi;
  src.insert(src.end(), r.begin(), r.end());
  src_mi.insert(src_mi.end(), rmi.begin(), rmi.end());
  auto key = shuffle_key(g_, src, src_mi);
  if (!key) return std::nullopt;
  return std::make_pair(tails, *key);
}

std::vector<std::pair<std::vector<BasisKey>, long>> JRhoIsometries::left_adjoint(const std::vector<BasisKey>& tails,
                                                                                 const BasisKey& y) const {
  if (static_cast<int>(tails.size()) != nl_) throw std::invalid_argument("wrong number of left legs");
  std::vector<std::pair<std::vector<BasisKey>, long>> out;
  const auto rad = middle_radices();
  for (const auto& rl : subcliques(rho_.t)) {
    if (!ends_with(g_, y.word, rl)) continue;
    const Word xw = multiply(g_, y.word, rl);
    const Word vl = multiply(g_, xw, rho_.ul);
    if (vl.length() != rho_.nl || xw.length() != rho_.nl + rho_.ul.length() || !in_right_tilde(g_, ult_, vl)) continue;
    std::vector<Letter> src = xw.letters;
    src.insert(src.end(), rl.letters.begin(), rl.letters.end());
    if (normal_form(g_, src) != y.word) continue;
    const auto perm = shuffle_permutation(g_, src);
    std::vector<int> src_mi(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) src_mi[static_cast<std::size_t>(perm[i])] = y.mi[i];
    std::vector<BasisKey> legs;
    bool ok = true;
    for (int i = 0; i < nl_ && ok; ++i) {
      const auto& tl = tails[static_cast<std::size_t>(i)];
      const Letter v = xw[i];
      if (!tl.word.empty() && tl.word[0] == v) {
        ok = false;
        break;
      }
      BasisKey k;
      k.word.letters.push_back(v);
      k.word.letters.insert(k.word.letters.end(), tl.word.letters.begin(), tl.word.letters.end());
      k.mi.push_back(src_mi[static_cast<std::size_t>(i)]);
      k.mi.insert(k.mi.end(), tl.mi.begin(), tl.mi.end());
      legs.push_back(std::move(k));
    }
    if (!ok) continue;
    std::vector<int> dg(rad.size(), 0);
    for (std::size_t p = 0; p < rho_.t.letters.size(); ++p) {
      auto it = std::find(rl.letters.begin(), rl.letters.end(), rho_.t.letters[p]);
      if (it != rl.letters.end())
        dg[p] = src_mi[static_cast<std::size_t>(nl_) + static_cast<std::size_t>(it - rl.letters.begin())] + 1;
    }
    out.emplace_back(std::move(legs), mixed_index(dg, rad));
  }
  return out;
}

// ------------------------------------------------------ dilation identity

namespace {

void cartesian(const std::vector<KeyVector>& legs, std::size_t i, std::vector<BasisKey>& cur, cd c,
               const std::function<void(const std::vector<BasisKey>&, cd)>& f) {
  if (c == cd(0)) return;
  if (i == legs.size()) {
    f(cur, c);
    return;
  }
  for (const auto& [k, v] : legs[i]) {
    cur.push_back(k);
    cartesian(legs, i + 1, cur, c * v, f);
    cur.pop_back();
  }
}

}  // namespace

TensorVector theta_tilde_apply(const SimpleGraph& g, const AlgebraicElement& x, const RhoTuple& rho,
                               const TensorKey& in) {
  TensorVector out;
  const SimpleGraph free = g.edgeless();
  if (rho.length() == 0 && in.left.empty() && in.right.empty()) {
    cd s = x.scalar;
    for (const auto& t : x.terms)
      if (t.word.empty()) s += t.coef;
    if (s != cd(0)) out[in] += s;
  }
  for (const auto& term : x.terms) {
    if (term.word.length() != rho.length() || term.word.empty()) continue;
    for (const auto& om : splittings_for_rho(g, term.word, rho)) {
      const auto s = split_legs(g, term, om);
      if (in.left.size() != s.a1.size() || in.right.size() != s.a3.size())
        throw std::invalid_argument("input legs do not match the component");
      std::vector<KeyVector> lv, rv;
      for (std::size_t i = 0; i < s.a1.size(); ++i)
        lv.push_back(lambda_v_keys(free, s.l1[i], *s.a1[i], Part::Cre, KeyVector{{in.left[i], 1.0}}));
      for (std::size_t i = 0; i < s.a3.size(); ++i)
        rv.push_back(lambda_v_keys(free, s.l3[i], *s.a3[i], Part::Ann, KeyVector{{in.right[i], 1.0}}));
      const Mat mid = kron_all(s.a2);
      std::vector<BasisKey> cl, cr;
      cartesian(lv, 0, cl, term.coef, [&](const std::vector<BasisKey>& left, cd c1) {
        cartesian(rv, 0, cr, c1, [&](const std::vector<BasisKey>& right, cd c2) {
          for (long m = 0; m < mid.rows(); ++m) {
            const cd c = c2 * mid(m, in.middle);
            if (c != cd(0)) out[TensorKey{left, m, right}] += c;
          }
        });
      });
    }
  }
  return out;
}

TensorVector dilation_rhs_apply(const JRhoIsometries& j, const AlgebraicElement& x, const TensorKey& in) {
  TensorVector out;
  const auto jr = j.right(in.middle, in.right);
  if (!jr) return out;
  const KeyVector start{{jr->first, 1.0}};
  KeyVector img;
  if (x.scalar != cd(0)) img[jr->first] += x.scalar;
  for (const auto& t : x.terms)
    for (const auto& [k, c] : lambda_keys(j.graph(), t, start)) img[k] += c;
  for (const auto& [y, c] : img) {
    if (c == cd(0)) continue;
    for (const auto& [legs, m] : j.left_adjoint(in.left, y)) out[TensorKey{legs, m, jr->second}] += c;
  }
  return out;
}

DilationReport verify_dilation(const FockSpace& fs, const AlgebraicElement& x, const RhoTuple& rho) {
  const auto& g = fs.graph();
  std::vector<int> dims;
  for (const auto& v : fs.vertices()) dims.push_back(v.dim);
  const JRhoIsometries j(g, dims, rho, fs.depth());
  const int n = g.size();
  DilationReport rep;
  double res2 = 0, lhs2 = 0;
  // Right-leg first letters with centered indices, flattened as (letter, index).
  std::vector<std::pair<Letter, int>> singles;
  for (Letter v = 0; v < n; ++v)
    for (int c = 0; c < fs.vertex(v).centered_dim(); ++c) singles.emplace_back(v, c);
  const long combos = static_cast<long>(std::pow(static_cast<double>(singles.size()), j.n_right()));
  for (int tailed = 0; tailed < 2; ++tailed) {
    if (tailed && n < 2) break;
    std::vector<BasisKey> left(static_cast<std::size_t>(j.n_left()));
    if (tailed)
      for (auto& k : left) k = BasisKey{Word({0}), {0}};
    for (long c = 0; c < combos; ++c) {
      std::vector<BasisKey> right;
      long rem = c;
      for (int i = 0; i < j.n_right(); ++i) {
        const auto& [v, m] = singles[static_cast<std::size_t>(rem % static_cast<long>(singles.size()))];
        rem /= static_cast<long>(singles.size());
        BasisKey k{Word({v}), {m}};
        if (tailed) {
          k.word.letters.push_back((v + 1) % n);
          k.mi.push_back(0);
        }
        right.push_back(std::move(k));
      }
      for (long mid = 0; mid < j.middle_dim(); ++mid) {
        const TensorKey in{left, mid, right};
        const auto lhs = theta_tilde_apply(g, x, rho, in);
        const auto rhs = dilation_rhs_apply(j, x, in);
        const double dd = distance(lhs, rhs);
        res2 += dd * dd;
        for (const auto& [k, v] : lhs) lhs2 += std::norm(v);
        ++rep.inputs;
      }
    }
  }
  rep.residual = std::sqrt(res2);
  rep.lhs_norm = std::sqrt(lhs2);
  return rep;
}

// ------------------------------------------------------------ contraction

ContractionResult contraction_search(const FockSpace& fs, int d, int level, int samples, std::uint64_t seed,
                                     int climb_steps) {
  ContractionResult best;
  if (fs.depth() < d) throw InsufficientDepth(d, fs.depth());
  std::vector<PureTensor> gens;
  for (const auto& w : fs.words())
    if (w.length() == d && d > 0)
      for (auto& p : basis_generators(fs, w)) gens.push_back(std::move(p));
  if (d == 0) gens.push_back(PureTensor{});
  if (gens.empty()) return best;
  std::vector<XdElement> th;
  std::vector<Mat> lam;
  for (const auto& p : gens) {
    const auto e = as_element(p);
    th.push_back(theta_tilde_d(fs, e, d));
    lam.push_back(lambda(fs, e, fs.dim()));
  }
  const long k = level;
  const long ng = static_cast<long>(gens.size());
  const long dim = fs.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  auto ratio_of = [&](const Mat& coef, double& num, double& den) {
    std::vector<std::vector<XdElement>> grid(static_cast<std::size_t>(k), std::vector<XdElement>(static_cast<std::size_t>(k)));
    Mat big = Mat::Zero(k * dim, k * dim);
    for (long a = 0; a < k; ++a)
      for (long b = 0; b < k; ++b) {
        auto& cell = grid[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        for (long q = 0; q < ng; ++q) {
          const cd c = coef(a * k + b, q);
          add_scaled(cell, th[static_cast<std::size_t>(q)], c);
          big.block(a * dim, b * dim, dim, dim) += c * lam[static_cast<std::size_t>(q)];
        }
      }
    num = xd_norm(grid);
    den = opnorm(big);
    return den > 0 ? num / den : 0.0;
  };
  auto random_coef = [&]() {
    Mat c(k * k, ng);
    for (long i = 0; i < c.rows(); ++i)
      for (long q = 0; q < ng; ++q) c(i, q) = cd(nd(rng), nd(rng));
    return c;
  };
  Mat best_coef;
  for (int s = 0; s < samples; ++s) {
    const Mat c = random_coef();
    double num = 0, den = 0;
    const double r = ratio_of(c, num, den);
    ++best.samples;
    if (r > best.ratio) {
      best = {r, num, den, best.samples};
      best_coef = c;
    }
  }
  double step = 0.3;
  for (int it = 0; it < climb_steps && best_coef.size() > 0; ++it) {
    const Mat c = best_coef + step * random_coef();
    double num = 0, den = 0;
    const double r = ratio_of(c, num, den);
    ++best.samples;
    if (r > best.ratio) {
      best = {r, num, den, best.samples};
      best_coef = c;
    } else {
      step *= 0.9;
    }
  }
  return best;
}

}  // namespace gpw
