#include "gpw/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace gpw {

namespace {

std::vector<int> radices_of(const FockSpace& fs, const Word& w) {
  std::vector<int> r;
  for (Letter x : w.letters) r.push_back(fs.vertex(x).centered_dim());
  return r;
}

long block_size(const FockSpace& fs, const Word& w) {
  long b = 1;
  for (Letter x : w.letters) b *= fs.vertex(x).centered_dim();
  return b;
}

// Right-tilde words of exact length n, cut at the depth of the space.
std::vector<Word> right_tilde_n(const SimpleGraph& g, const Word& u, int n) {
  std::vector<Word> out;
  for (const auto& w : enumerate_words(g, n))
    if (w.length() == n && in_right_tilde(g, u, w)) out.push_back(w);
  return out;
}

}  // namespace

// ------------------------------------------------------------- V_n^{u,r}

PartialIsometryVnur::PartialIsometryVnur(const FockSpace& fs, Word u, Word r, int n)
    : fs_(&fs), u_(std::move(u)), r_(std::move(r)), n_(n) {
  const auto& g = fs.graph();
  if (!is_clique_word(g, r_) || !ends_with(g, u_, r_)) throw std::invalid_argument("r must be a clique word u ends with");
  const Word ur = multiply(g, u_, r_);
  for (const auto& vr : right_tilde_n(g, u_, n_)) {
    const Word head = multiply(g, vr, u_);
    for (const auto& tail : fs.words()) {
      if (head.length() + tail.length() > fs.depth()) break;
      if (!in_left(g, u_, tail)) continue;
      const Word target = multiply(g, head, tail);
      Piece p;
      p.target = fs.word_id(target);
      if (p.target < 0) continue;
      const Word x1 = multiply(g, vr, ur);
      const Word x2 = multiply(g, r_, tail);
      p.x1 = fs.word_id(x1);
      p.x2 = fs.word_id(x2);
      const auto perm = shuffle_permutation(g, std::vector<Word>{x1, x2});
      auto src_rad = radices_of(fs, x1);
      const auto r2 = radices_of(fs, x2);
      src_rad.insert(src_rad.end(), r2.begin(), r2.end());
      const auto tgt_rad = radices_of(fs, target);
      const long total = fs.block_dim(p.x1) * fs.block_dim(p.x2);
      p.local_map.resize(static_cast<std::size_t>(total));
      std::vector<int> td(perm.size());
      for (long l = 0; l < total; ++l) {
        const auto sd = mixed_digits(l, src_rad);
        for (std::size_t k = 0; k < perm.size(); ++k) td[k] = sd[static_cast<std::size_t>(perm[k])];
        p.local_map[static_cast<std::size_t>(l)] = mixed_index(td, tgt_rad);
      }
      by_x2_[p.x2].push_back(pieces_.size());
      pieces_.push_back(std::move(p));
    }
  }
}

const std::vector<std::size_t>& PartialIsometryVnur::pieces_with_x2(int x2) const {
  static const std::vector<std::size_t> none;
  auto it = by_x2_.find(x2);
  return it == by_x2_.end() ? none : it->second;
}

long PartialIsometryVnur::domain_dim() const {
  long s = 0;
  for (const auto& p : pieces_) s += static_cast<long>(p.local_map.size());
  return s;
}

SpMat PartialIsometryVnur::matrix() const {
  std::vector<Eigen::Triplet<cd>> trip;
  long col = 0;
  for (const auto& p : pieces_) {
    for (std::size_t l = 0; l < p.local_map.size(); ++l)
      trip.emplace_back(fs_->offset(p.target) + p.local_map[l], col + static_cast<long>(l), cd(1.0));
    col += static_cast<long>(p.local_map.size());
  }
  SpMat m(fs_->dim(), col);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

const PartialIsometryVnur& VCache::get(const Word& u, const Word& r, int n) {
  auto key = std::make_tuple(u, r, n);
  auto it = cache_.find(key);
  if (it != cache_.end()) return *it->second;
  auto p = std::make_unique<PartialIsometryVnur>(*fs_, u, r, n);
  const auto& ref = *p;
  cache_.emplace(std::move(key), std::move(p));
  return ref;
}

// ------------------------------------------------------------------ H_τ

Mat h_tau_apply(const FockSpace& fs, const TauTuple& tau, const Mat& x, VCache& cache) {
  const auto& g = fs.graph();
  const auto& rho = tau.rho;
  const auto& vl = cache.get(multiply(g, rho.ul, rho.t), tau.r, rho.nl);
  const auto& vr = cache.get(multiply(g, rho.ur, rho.t), tau.r, rho.nr);
  const long cols = x.cols();
  Mat out = Mat::Zero(fs.dim(), cols);
  for (const auto& pr : vr.pieces()) {
    const long tr_off = fs.offset(pr.target);
    if (tr_off >= cols) continue;
    const long d2 = fs.block_dim(pr.x2);
    const long d1r = fs.block_dim(pr.x1);
    const long x1r_off = fs.offset(pr.x1);
    for (std::size_t li : vl.pieces_with_x2(pr.x2)) {
      const auto& pl = vl.pieces()[li];
      const long d1l = fs.block_dim(pl.x1);
      const long x1l_off = fs.offset(pl.x1);
      const long tl_off = fs.offset(pl.target);
      for (long j = 0; j < d1r; ++j) {
        if (x1r_off + j >= cols) continue;
        for (long k = 0; k < d2; ++k) {
          const long c = tr_off + pr.local_map[static_cast<std::size_t>(j * d2 + k)];
          if (c >= cols) continue;
          for (long i = 0; i < d1l; ++i) {
            const cd val = x(x1l_off + i, x1r_off + j);
            if (val == cd(0)) continue;
            out(tl_off + pl.local_map[static_cast<std::size_t>(i * d2 + k)], c) += val;
          }
        }
      }
    }
  }
  return out;
}

Mat h_tilde_apply(const FockSpace& fs, const RhoTuple& rho, const Mat& x, VCache& cache) {
  Mat out = Mat::Zero(fs.dim(), x.cols());
  for (const auto& r : subcliques(rho.t)) {
    const double sign = (r.length() % 2 == 0) ? 1.0 : -1.0;
    out += sign * h_tau_apply(fs, TauTuple{rho, r}, x, cache);
  }
  return out;
}

Mat p_d_via_h_tau(const FockSpace& fs, int d, const Mat& x, VCache& cache) {
  Mat out = Mat::Zero(fs.dim(), x.cols());
  for (const auto& rho : enumerate_rho(fs.graph(), d)) out += h_tilde_apply(fs, rho, x, cache);
  return out;
}

AlgebraicElement p_d_direct(const AlgebraicElement& x, int d) { return x.degree_part(d); }

bool ptau_keeps_block(const SimpleGraph& g, const TauTuple& tau, const TripleSplit& om, const Word& v) {
  const auto& rho = tau.rho;
  const Word ult = multiply(g, rho.ul, rho.t);
  const Word urt = multiply(g, rho.ur, rho.t);
  const Word w23 = multiply(g, om.w2, om.w3);
  const Word w13 = multiply(g, om.w1, om.w3);
  for (const auto& vr : right_tilde_n(g, urt, rho.nr)) {
    const Word head = multiply(g, vr, urt);
    if (!starts_with(g, v, head)) continue;
    const Word tail = multiply(g, inverse(g, head), v);
    if (!in_left(g, ult, tail) || !in_left(g, urt, tail)) continue;
    const Word headr = multiply(g, head, tau.r);
    if (headr.length() != w23.length() + multiply(g, w23, headr).length()) continue;
    const Word w3v = multiply(g, om.w3, v);
    if (multiply(g, om.w1, w3v).length() != om.w1.length() + w3v.length()) continue;
    const Word y = multiply(g, w13, v);
    const Word vl = multiply(g, {y, inverse(g, tail), inverse(g, ult)});
    if (vl.length() != rho.nl || !in_right_tilde(g, ult, vl)) continue;
    if (y.length() != vl.length() + ult.length() + tail.length()) continue;
    return true;
  }
  return false;
}

// ---------------------------------------------------------- superoperators

Superoperator h_tau(const FockSpace& fs, const TauTuple& tau, std::shared_ptr<VCache> cache) {
  Superoperator s;
  s.descriptor = "H_tau " + to_string(tau.rho) + " r=" + to_string(tau.r);
  s.apply = [&fs, tau, cache](const Mat& x) { return h_tau_apply(fs, tau, x, *cache); };
  return s;
}

Superoperator h_tilde_rho(const FockSpace& fs, const RhoTuple& rho, std::shared_ptr<VCache> cache) {
  Superoperator s;
  s.descriptor = "H~ " + to_string(rho);
  s.apply = [&fs, rho, cache](const Mat& x) { return h_tilde_apply(fs, rho, x, *cache); };
  return s;
}

Superoperator p_d(const FockSpace& fs, int d, PdMode mode, std::shared_ptr<VCache> cache) {
  if (d < 0) throw std::invalid_argument("negative degree");
  Superoperator s;
  if (mode == PdMode::Direct) {
    s.descriptor = "P_" + std::to_string(d) + " direct";
    s.algebraic_apply = [d](const AlgebraicElement& x) { return p_d_direct(x, d); };
  } else {
    s.descriptor = "P_" + std::to_string(d) + " via H_tau";
    s.apply = [&fs, d, cache](const Mat& x) { return p_d_via_h_tau(fs, d, x, *cache); };
  }
  return s;
}

Superoperator radial(const FockSpace& fs, double r, std::optional<int> n, std::shared_ptr<VCache> cache) {
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("radial parameter must lie in [0,1]");
  const int top = n ? std::min(*n, fs.depth()) : fs.depth();
  Superoperator s;
  s.descriptor = "T_r r=" + std::to_string(r) + (n ? " n=" + std::to_string(*n) : std::string());
  s.apply = [&fs, r, top, cache](const Mat& x) {
    Mat out = Mat::Zero(fs.dim(), x.cols());
    for (int k = 0; k <= top; ++k) out += std::pow(r, k) * p_d_via_h_tau(fs, k, x, *cache);
    return out;
  };
  const std::optional<int> cut = n;
  s.algebraic_apply = [r, cut](const AlgebraicElement& x) {
    AlgebraicElement out;
    out.scalar = x.scalar;
    for (const auto& t : x.terms) {
      if (cut && t.word.length() > *cut) continue;
      PureTensor p = t;
      p.coef *= std::pow(r, t.word.length());
      out.terms.push_back(std::move(p));
    }
    return out;
  };
  return s;
}

// ------------------------------------------------------ vertex map actions

VertexOpMap vertex_op_map(const CpMap& t, const GNSData& source, const GNSData& target) {
  return [t, source, target](const Mat& op) { return target.rep(t.apply(source.element_of(op.col(0)))); };
}

AlgebraicElement graph_product_algebraic(const std::vector<VertexOpMap>& maps, const AlgebraicElement& x) {
  AlgebraicElement out;
  out.scalar = x.scalar;
  for (const auto& t : x.terms) {
    PureTensor p;
    p.coef = t.coef;
    p.word = t.word;
    for (std::size_t i = 0; i < t.legs.size(); ++i)
      p.legs.push_back(maps[static_cast<std::size_t>(t.word.letters[i])](t.legs[i]));
    out.terms.push_back(std::move(p));
  }
  return out;
}

// ------------------------------------------------------ u.c.p. dilation

UcpGraphProduct::UcpGraphProduct(const FockSpace& fs, std::vector<GNSData> gns, std::vector<CpMap> maps)
    : fs_(&fs), gns_(std::move(gns)), maps_(std::move(maps)) {
  const int n = fs.graph().size();
  if (static_cast<int>(gns_.size()) != n || static_cast<int>(maps_.size()) != n)
    throw std::invalid_argument("one map per vertex");
  std::vector<VertexSpace> hat_spaces;
  for (int v = 0; v < n; ++v) {
    const auto& t = maps_[static_cast<std::size_t>(v)];
    if (!is_ucp(t)) throw std::invalid_argument("vertex " + std::to_string(v) + ": map is not u.c.p.");
    if (!t.is_state_preserving()) throw std::invalid_argument("vertex " + std::to_string(v) + ": map is not state-preserving");
    op_maps_.push_back(vertex_op_map(t, gns_[static_cast<std::size_t>(v)], gns_[static_cast<std::size_t>(v)]));
    dil_.push_back(stinespring(t, gns_[static_cast<std::size_t>(v)]));
    const Mat& vv = dil_.back().v;
    const long big = vv.rows();
    Mat seed(big, big + 1);
    seed.col(0) = vv.col(0);
    seed.rightCols(big) = Mat::Identity(big, big);
    Eigen::HouseholderQR<Mat> qr(seed);
    Mat q = qr.householderQ() * Mat::Identity(big, big);
    const cd phase = q.col(0).dot(vv.col(0));
    q.col(0) *= phase / std::abs(phase);
    q_.push_back(q);
    vhat_.push_back(q.adjoint() * vv);
    hat_spaces.push_back(VertexSpace::bare(static_cast<int>(big)));
  }
  hat_ = std::make_unique<FockSpace>(fs.graph(), hat_spaces, fs.depth());

  std::vector<Eigen::Triplet<cd>> trip;
  for (int id = 0; id < fs.word_count(); ++id) {
    const Word& w = fs.word(id);
    const int hid = hat_->word_id(w);
    const auto hrad = radices_of(*hat_, w);
    for (long l = 0; l < fs.block_dim(id); ++l) {
      const auto mi = fs.multi_index(id, l);
      for (long h = 0; h < hat_->block_dim(hid); ++h) {
        const auto hm = mixed_digits(h, hrad);
        cd c = 1.0;
        for (std::size_t i = 0; i < mi.size() && c != cd(0); ++i)
          c *= vhat_[static_cast<std::size_t>(w.letters[i])](hm[i] + 1, mi[i] + 1);
        if (std::abs(c) > 1e-15) trip.emplace_back(hat_->offset(hid) + h, fs.offset(id) + l, c);
      }
    }
  }
  v_.resize(hat_->dim(), fs.dim());
  v_.setFromTriplets(trip.begin(), trip.end());
}

Mat UcpGraphProduct::pi_hat(Letter v, const Mat& op) const {
  const auto vi = static_cast<std::size_t>(v);
  const Mat a = gns_[vi].element_of(op.col(0));
  return q_[vi].adjoint() * dil_[vi].pi(a) * q_[vi];
}

Mat UcpGraphProduct::theta_lambda(const AlgebraicElement& x, long cols) const {
  return lambda(*fs_, graph_product_algebraic(op_maps_, x), cols);
}

Mat UcpGraphProduct::dilated(const AlgebraicElement& x, long cols) const {
  const Mat in = v_ * Mat::Identity(fs_->dim(), cols);
  Mat acc = x.scalar * in;
  for (const auto& t : x.terms) {
    PureTensor p;
    p.coef = t.coef;
    p.word = t.word;
    for (std::size_t i = 0; i < t.legs.size(); ++i) p.legs.push_back(pi_hat(t.word.letters[i], t.legs[i]));
    acc += lambda_apply(*hat_, p, in);
  }
  return v_.adjoint() * acc;
}

double UcpGraphProduct::isometry_defect(long cols) const {
  const Mat in = v_ * Mat::Identity(fs_->dim(), cols);
  const Mat vv = v_.adjoint() * in;
  return (vv - Mat::Identity(fs_->dim(), cols)).cwiseAbs().maxCoeff();
}

// --------------------------------------------------------- norm bookkeeping

long clique_count(const SimpleGraph& g) { return static_cast<long>(cliques(g).size()); }

double td_bound(const SimpleGraph& g, int d, double max_c) {
  const double k = static_cast<double>(clique_count(g));
  return k * k * k * d * std::pow(max_c, d);
}

double td_difference_bound(const SimpleGraph& g, int d, double max_c, double max_diff) {
  const double k = static_cast<double>(clique_count(g));
  return k * k * k * d * d * std::pow(max_c, d - 1) * max_diff;
}

double radial_tail_bound(const SimpleGraph& g, double r, int n) {
  return static_cast<double>(c_gamma(g)) * n * std::pow(r, n) / ((1 - r) * (1 - r));
}

Mat centered_hat_matrix(const CpMap& t, const GNSData& source, const GNSData& target) {
  Mat m(target.dim() - 1, source.dim() - 1);
  for (int i = 1; i < source.dim(); ++i) {
    const Vec h = target.hat(t.apply(source.element_of(Vec::Unit(source.dim(), i))));
    m.col(i - 1) = h.tail(target.dim() - 1);
  }
  return m;
}

Mat graph_product_on_fock(const FockSpace& fs, const std::vector<Mat>& centered_maps, int d) {
  long total = 0;
  for (int id = 0; id < fs.word_count(); ++id)
    if (fs.word(id).length() == d) total += fs.block_dim(id);
  Mat out = Mat::Zero(total, total);
  long off = 0;
  for (int id = 0; id < fs.word_count(); ++id) {
    const Word& w = fs.word(id);
    if (w.length() != d) continue;
    Mat k = Mat::Ones(1, 1);
    for (Letter x : w.letters) {
      Mat n = Eigen::kroneckerProduct(k, centered_maps[static_cast<std::size_t>(x)]).eval();
      k = n;
    }
    if (k.rows() != block_size(fs, w)) throw std::invalid_argument("centered map has the wrong size");
    out.block(off, off, k.rows(), k.cols()) = k;
    off += k.rows();
  }
  return out;
}

double lambda_norm_upper(const AlgebraicElement& x) {
  double s = std::abs(x.scalar);
  for (const auto& t : x.terms) {
    double p = std::abs(t.coef);
    for (const auto& l : t.legs) p *= opnorm(l);
    s += p;
  }
  return s;
}

// --------------------------------------------------------------- CCAP nets

CcapNet CcapNet::synthetic(const std::vector<VertexAlgebra>& algebras, const std::vector<double>& eps,
                           std::uint64_t seed) {
  CcapNet net;
  net.algebras = algebras;
  net.eps = eps;
  net.v_maps.resize(algebras.size());
  net.u_maps.resize(algebras.size());
  for (std::size_t v = 0; v < algebras.size(); ++v) {
    const auto& a = algebras[v];
    const CpMap r = CpMap::random_ucp(a, seed + 7919 * v);
    const CpMap delta = r - CpMap::identity(a);
    const MapNorms dn = norms(delta, seed + v, 1, 1);
    // ‖Δ‖_cb ≤ 2 as a difference of two u.c.p. maps.
    const double scale = 2.0 + dn.l2_A + dn.l2_Aop;
    for (double e : eps) {
      const CpMap u = CpMap::radial(a, 1.0 - e);
      net.u_maps[v].push_back(u);
      net.v_maps[v].push_back(u + delta.scaled(e / scale));
    }
  }
  return net;
}

GapReport ccap_gap_bounds(const SimpleGraph& g, const CcapNet& net, int n, int j) {
  GapReport rep;
  rep.n = n;
  rep.j = j;
  rep.eps = net.eps[static_cast<std::size_t>(j)];
  const double r = 1.0 - 1.0 / std::sqrt(static_cast<double>(n));
  const double k = static_cast<double>(clique_count(g));
  const double cg = static_cast<double>(c_gamma(g));
  rep.cb_tail = radial_tail_bound(g, r, n);
  rep.cb_upper = rep.cb_tail;
  rep.l2_upper = std::pow(r, n + 1);
  for (int d = 1; d <= n; ++d) {
    const double p = std::pow(2.0, d - 1) * rep.eps;
    rep.cb_upper += k * k * k * d * d * p * cg * d;
    rep.l2_upper += d * p;
  }
  return rep;
}

namespace {

std::vector<VertexOpMap> net_maps(const std::vector<std::vector<CpMap>>& maps, const std::vector<GNSData>& gns, int j) {
  std::vector<VertexOpMap> out;
  for (std::size_t v = 0; v < maps.size(); ++v)
    out.push_back(vertex_op_map(maps[v][static_cast<std::size_t>(j)], gns[v], gns[v]));
  return out;
}

}  // namespace

AlgebraicElement ccap_d_apply(const CcapNet& net, const std::vector<GNSData>& gns, int n, int j,
                              const AlgebraicElement& x) {
  const double r = 1.0 - 1.0 / std::sqrt(static_cast<double>(n));
  const auto maps = net_maps(net.v_maps, gns, j);
  AlgebraicElement out;
  out.scalar = x.scalar;
  for (int d = 1; d <= n; ++d) out += graph_product_algebraic(maps, x.degree_part(d)).scaled(std::pow(r, d));
  return out;
}

AlgebraicElement ccap_e_apply(const CcapNet& net, const std::vector<GNSData>& gns, int n, int j,
                              const AlgebraicElement& x) {
  const double r = 1.0 - 1.0 / std::sqrt(static_cast<double>(n));
  const auto maps = net_maps(net.u_maps, gns, j);
  AlgebraicElement out;
  out.scalar = x.scalar;
  for (int d = 1; d <= x.max_length(); ++d)
    out += graph_product_algebraic(maps, x.degree_part(d)).scaled(std::pow(r, d));
  return out;
}

}  // namespace gpw
