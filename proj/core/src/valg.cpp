#include "gpw/valg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

namespace gpw {

namespace {

Mat random_gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> nd;
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      double re = nd(rng);
      double im = nd(rng);
      m(i, j) = cd(re, im);
    }
  return m;
}

}  // namespace

Mat hermitian_power(const Mat& h, double p) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) ev(i) = std::pow(std::max(ev(i), 0.0), p);
  return es.eigenvectors() * ev.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
}

double opnorm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  if (std::min(m.rows(), m.cols()) <= 16) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

// ---------------------------------------------------------------- VertexAlgebra

VertexAlgebra::VertexAlgebra(std::vector<int> blocks, std::vector<Mat> densities)
    : blocks_(std::move(blocks)), densities_(std::move(densities)) {
  if (blocks_.empty()) throw std::invalid_argument("vertex algebra needs at least one block");
  if (blocks_.size() != densities_.size()) throw std::invalid_argument("one density per block required");
  double total = 0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const int n = blocks_[i];
    const Mat& d = densities_[i];
    if (n <= 0) throw std::invalid_argument("block dimensions must be positive");
    if (d.rows() != n || d.cols() != n) throw std::invalid_argument("density size does not match block");
    if ((d - d.adjoint()).norm() > 1e-12) throw std::invalid_argument("density not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(d);
    if (es.eigenvalues().minCoeff() <= 1e-12)
      throw std::invalid_argument("rank-deficient density: only faithful states are supported");
    total += d.trace().real();
    offsets_.push_back(size_);
    size_ += n;
    dim_ += n * n;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("state weights must sum to 1");
}

VertexAlgebra VertexAlgebra::abelian(const std::vector<double>& weights) {
  std::vector<int> b(weights.size(), 1);
  std::vector<Mat> d;
  for (double w : weights) d.push_back(Mat::Constant(1, 1, cd(w, 0)));
  return VertexAlgebra(std::move(b), std::move(d));
}

VertexAlgebra VertexAlgebra::matrix_trace(int n) {
  return VertexAlgebra({n}, {Mat::Identity(n, n) / static_cast<double>(n)});
}

VertexAlgebra VertexAlgebra::matrix_state(const Mat& density) {
  return VertexAlgebra({static_cast<int>(density.rows())}, {density});
}

Mat VertexAlgebra::density() const {
  Mat d = Mat::Zero(size_, size_);
  for (std::size_t i = 0; i < blocks_.size(); ++i) d.block(offsets_[i], offsets_[i], blocks_[i], blocks_[i]) = densities_[i];
  return d;
}

cd VertexAlgebra::state(const Mat& a) const { return (density() * a).trace(); }

bool VertexAlgebra::is_element(const Mat& a, double tol) const {
  if (a.rows() != size_ || a.cols() != size_) return false;
  return (a - from_coords(coords(a))).norm() <= tol;
}

Vec VertexAlgebra::coords(const Mat& a) const {
  Vec c(dim_);
  int p = 0;
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    for (int r = 0; r < blocks_[i]; ++r)
      for (int s = 0; s < blocks_[i]; ++s) c(p++) = a(offsets_[i] + r, offsets_[i] + s);
  return c;
}

Mat VertexAlgebra::from_coords(const Vec& c) const {
  Mat a = Mat::Zero(size_, size_);
  int p = 0;
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    for (int r = 0; r < blocks_[i]; ++r)
      for (int s = 0; s < blocks_[i]; ++s) a(offsets_[i] + r, offsets_[i] + s) = c(p++);
  return a;
}

Mat VertexAlgebra::unit(int p) const { return from_coords(Vec::Unit(dim_, p)); }

Mat center(const Mat& a, const VertexAlgebra& alg) { return a - alg.state(a) * alg.identity(); }

// ---------------------------------------------------------------------- GNS

GNSData::GNSData(const VertexAlgebra& alg) : alg_(alg), dim_(alg.dim()) {
  for (const auto& d : alg.densities()) {
    Eigen::SelfAdjointEigenSolver<Mat> es(d);
    eigvecs_.push_back(es.eigenvectors());
    eigvals_.push_back(es.eigenvalues());
  }
  const Vec x = raw(alg.identity());
  // Complete ξ to an orthonormal basis; Householder QR is deterministic.
  Mat m(dim_, dim_ + 1);
  m.col(0) = x;
  m.rightCols(dim_) = Mat::Identity(dim_, dim_);
  Eigen::HouseholderQR<Mat> qr(m);
  change_ = qr.householderQ() * Mat::Identity(dim_, dim_);
  const cd phase = change_.col(0).dot(x);  // conj(col0)·x
  change_.col(0) *= phase / std::abs(phase);
  for (int j = 0; j < dim_; ++j) basis_ops_.push_back(rep(element_of(Vec::Unit(dim_, j))));
}

Vec GNSData::raw(const Mat& a) const {
  Vec r(dim_);
  int p = 0;
  for (std::size_t i = 0; i < alg_.blocks().size(); ++i) {
    const int n = alg_.blocks()[i];
    const int off = alg_.block_offset(static_cast<int>(i));
    Mat af = eigvecs_[i].adjoint() * a.block(off, off, n, n) * eigvecs_[i];
    for (int mm = 0; mm < n; ++mm)
      for (int k = 0; k < n; ++k) r(p++) = std::sqrt(eigvals_[i](k)) * af(mm, k);
  }
  return r;
}

Mat GNSData::from_raw(const Vec& r) const {
  Mat a = Mat::Zero(alg_.matrix_size(), alg_.matrix_size());
  int p = 0;
  for (std::size_t i = 0; i < alg_.blocks().size(); ++i) {
    const int n = alg_.blocks()[i];
    const int off = alg_.block_offset(static_cast<int>(i));
    Mat af(n, n);
    for (int mm = 0; mm < n; ++mm)
      for (int k = 0; k < n; ++k) af(mm, k) = r(p++) / std::sqrt(eigvals_[i](k));
    a.block(off, off, n, n) = eigvecs_[i] * af * eigvecs_[i].adjoint();
  }
  return a;
}

Mat GNSData::rep_raw(const Mat& a) const {
  Mat out = Mat::Zero(dim_, dim_);
  int p = 0;
  for (std::size_t i = 0; i < alg_.blocks().size(); ++i) {
    const int n = alg_.blocks()[i];
    const int off = alg_.block_offset(static_cast<int>(i));
    Mat af = eigvecs_[i].adjoint() * a.block(off, off, n, n) * eigvecs_[i];
    out.block(p, p, n * n, n * n) = Eigen::kroneckerProduct(af, Mat::Identity(n, n)).eval();
    p += n * n;
  }
  return out;
}

Mat GNSData::rep(const Mat& a) const { return change_.adjoint() * rep_raw(a) * change_; }
Vec GNSData::hat(const Mat& a) const { return change_.adjoint() * raw(a); }
Mat GNSData::element_of(const Vec& h) const { return from_raw(change_ * h); }

GNSData gns(const VertexAlgebra& alg) { return GNSData(alg); }

// -------------------------------------------------------------------- CpMap

CpMap::CpMap(VertexAlgebra source, VertexAlgebra target, Mat action, std::string name)
    : source_(std::move(source)), target_(std::move(target)), action_(std::move(action)), name_(std::move(name)) {
  if (action_.rows() != target_.dim() || action_.cols() != source_.dim())
    throw std::invalid_argument("CpMap action has the wrong shape");
}

CpMap CpMap::identity(const VertexAlgebra& a) {
  return CpMap(a, a, Mat::Identity(a.dim(), a.dim()), "identity");
}

CpMap CpMap::radial(const VertexAlgebra& a, double r) {
  if (r < 0 || r > 1) throw std::invalid_argument("radial parameter outside [0,1]");
  return from_function(a, a, [&](const Mat& x) { Mat y = r * x + (1 - r) * a.state(x) * a.identity(); return y; },
                       "U_r(" + std::to_string(r) + ")");
}

CpMap CpMap::state_map(const VertexAlgebra& a) {
  return from_function(a, a, [&](const Mat& x) { Mat y = a.state(x) * a.identity(); return y; }, "state-map");
}

CpMap CpMap::scaling(const VertexAlgebra& a, cd c) {
  return CpMap(a, a, c * Mat::Identity(a.dim(), a.dim()), "scaling");
}

CpMap CpMap::transpose(const VertexAlgebra& a) {
  return from_function(a, a, [&](const Mat& x) { Mat y = x.transpose(); return y; }, "transpose");
}

CpMap CpMap::random_ucp(const VertexAlgebra& a, std::uint64_t seed, int kraus) {
  if (a.blocks().size() != 1) {
    // Block-preserving Kraus maps need not be state-preserving; mix the
    // identity with the state map instead.
    std::mt19937_64 rng(seed);
    const double s = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    CpMap m = identity(a).scaled(1.0 - s) + state_map(a).scaled(s);
    return CpMap(a, a, m.action(), "random-ucp(" + std::to_string(seed) + ")");
  }
  const int n = a.blocks()[0];
  const Mat rho = a.densities()[0];
  const Mat rho_half = hermitian_power(rho, 0.5);
  std::mt19937_64 rng(seed);
  std::vector<Mat> ks;
  // The alternating unital/state scaling stalls for some draws; redraw from
  // the same stream until both conditions hold.
  for (int attempt = 0; attempt < 100; ++attempt) {
    ks.clear();
    for (int l = 0; l < kraus; ++l) ks.push_back(random_gaussian(rng, n, n));
    for (int it = 0; it < 2000; ++it) {
      Mat s = Mat::Zero(n, n);
      for (const auto& k : ks) s += k * k.adjoint();
      const Mat s_inv_half = hermitian_power(s, -0.5);
      for (auto& k : ks) k = s_inv_half * k;
      Mat m = Mat::Zero(n, n);
      for (const auto& k : ks) m += k.adjoint() * rho * k;
      const Mat fix = hermitian_power(m, -0.5) * rho_half;
      for (auto& k : ks) k = k * fix;
      Mat s2 = Mat::Zero(n, n);
      for (const auto& k : ks) s2 += k * k.adjoint();
      if ((s2 - Mat::Identity(n, n)).norm() < 1e-15) break;
    }
    // Final unital normalization, then test the state condition.
    Mat s = Mat::Zero(n, n);
    for (const auto& k : ks) s += k * k.adjoint();
    const Mat s_inv_half = hermitian_power(s, -0.5);
    for (auto& k : ks) k = s_inv_half * k;
    Mat m = Mat::Zero(n, n);
    for (const auto& k : ks) m += k.adjoint() * rho * k;
    if ((m - rho).norm() < 1e-13) break;
  }
  return from_function(a, a,
                       [&](const Mat& x) {
                         Mat y = Mat::Zero(n, n);
                         for (const auto& k : ks) y += k * x * k.adjoint();
                         return y;
                       },
                       "random-ucp(" + std::to_string(seed) + ")");
}

Mat CpMap::apply(const Mat& a) const { return target_.from_coords(action_ * source_.coords(a)); }

bool CpMap::is_unital(double tol) const {
  return (apply(source_.identity()) - target_.identity()).norm() <= tol;
}

bool CpMap::is_state_preserving(double tol) const {
  for (int p = 0; p < source_.dim(); ++p) {
    const Mat u = source_.unit(p);
    if (std::abs(target_.state(apply(u)) - source_.state(u)) > tol) return false;
  }
  return true;
}

CpMap CpMap::operator+(const CpMap& o) const { return CpMap(source_, target_, action_ + o.action_, name_ + "+" + o.name_); }
CpMap CpMap::operator-(const CpMap& o) const { return CpMap(source_, target_, action_ - o.action_, name_ + "-" + o.name_); }
CpMap CpMap::scaled(cd c) const { return CpMap(source_, target_, c * action_, name_); }
CpMap CpMap::compose(const CpMap& inner) const {
  return CpMap(inner.source_, target_, action_ * inner.action_, name_ + "∘" + inner.name_);
}

// --------------------------------------------------------------------- Choi

Mat choi(const CpMap& t) {
  const auto& s = t.source();
  const int nt = t.target().matrix_size();
  int total = 0;
  for (int n : s.blocks()) total += n * nt;
  Mat c = Mat::Zero(total, total);
  int off = 0;
  for (std::size_t i = 0; i < s.blocks().size(); ++i) {
    const int n = s.blocks()[i];
    const int so = s.block_offset(static_cast<int>(i));
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Mat e = Mat::Zero(s.matrix_size(), s.matrix_size());
        e(so + j, so + k) = 1;
        c.block(off + j * nt, off + k * nt, nt, nt) = t.apply(e);
      }
    off += n * nt;
  }
  return c;
}

double min_choi_eigenvalue(const CpMap& t) {
  const Mat c = choi(t);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (c + c.adjoint()));
  return es.eigenvalues().minCoeff();
}

bool is_cp(const CpMap& t, double tol) { return min_choi_eigenvalue(t) >= tol; }
bool is_ucp(const CpMap& t, double tol) { return is_cp(t, tol) && t.is_unital(); }

// --------------------------------------------------------------- Stinespring

Mat StinespringDilation::pi(const Mat& a) const {
  Mat out = Mat::Zero(dim(), dim());
  int row = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const int n = blocks[i], l = multiplicity[i];
    out.block(row, row, n * l, n * l) =
        Eigen::kroneckerProduct(a.block(offsets[i], offsets[i], n, n), Mat::Identity(l, l)).eval();
    row += n * l;
  }
  return out;
}

StinespringDilation stinespring(const CpMap& t, const GNSData& tg) {
  const auto& s = t.source();
  const int h = tg.dim();
  StinespringDilation d;
  std::vector<Mat> parts;
  // T restricted to each block is CP on its own; dilate block by block.
  for (std::size_t b = 0; b < s.blocks().size(); ++b) {
    const int n = s.blocks()[b];
    const int off = s.block_offset(static_cast<int>(b));
    Mat c(n * h, n * h);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Mat e = Mat::Zero(s.matrix_size(), s.matrix_size());
        e(off + j, off + k) = 1;
        c.block(j * h, k * h, h, h) = tg.rep(t.apply(e));
      }
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (c + c.adjoint()));
    const double lo = es.eigenvalues().minCoeff();
    if (lo < kPsdTol) throw NotCompletelyPositive(lo);
    const double cut = 1e-12 * std::max(1.0, es.eigenvalues().maxCoeff());
    std::vector<int> keep;
    for (int l = 0; l < es.eigenvalues().size(); ++l)
      if (es.eigenvalues()(l) > cut) keep.push_back(l);
    const int L = static_cast<int>(keep.size());
    // Kraus K_l (h × n) has columns K_l e_j = √λ_l · (block j of eigenvector l);
    // V_b η = Σ_l K_l* η ⊗ e_l.
    Mat vb = Mat::Zero(n * L, h);
    for (int li = 0; li < L; ++li) {
      const int l = keep[static_cast<std::size_t>(li)];
      const Vec col = std::sqrt(es.eigenvalues()(l)) * es.eigenvectors().col(l);
      Mat kl(h, n);
      for (int j = 0; j < n; ++j) kl.col(j) = col.segment(j * h, h);
      const Mat kad = kl.adjoint();  // n × h
      for (int a = 0; a < n; ++a) vb.row(a * L + li) = kad.row(a);
    }
    d.blocks.push_back(n);
    d.offsets.push_back(off);
    d.multiplicity.push_back(L);
    parts.push_back(std::move(vb));
  }
  long rows = 0;
  for (const auto& p : parts) rows += p.rows();
  d.v = Mat::Zero(rows, h);
  long r = 0;
  for (const auto& p : parts) {
    d.v.middleRows(r, p.rows()) = p;
    r += p.rows();
  }
  return d;
}

// -------------------------------------------------------------------- norms

namespace {

Mat gram(const VertexAlgebra& a, bool opposite) {
  Mat g(a.dim(), a.dim());
  for (int p = 0; p < a.dim(); ++p)
    for (int q = 0; q < a.dim(); ++q) {
      const Mat ep = a.unit(p), eq = a.unit(q);
      g(p, q) = opposite ? a.state(eq * ep.adjoint()) : a.state(ep.adjoint() * eq);
    }
  return g;
}

double l2_norm(const CpMap& t, bool opposite) {
  const Mat gs = gram(t.source(), opposite), gt = gram(t.target(), opposite);
  return opnorm(hermitian_power(gt, 0.5) * t.action() * hermitian_power(gs, -0.5));
}

// Unit ball maximizer of Re tr(F* X) over block-diagonal X in M_k(A).
Mat polar_in_algebra(const Mat& f, const VertexAlgebra& a, int k) {
  const int N = a.matrix_size();
  Mat x = Mat::Zero(k * N, k * N);
  for (std::size_t i = 0; i < a.blocks().size(); ++i) {
    const int n = a.blocks()[i];
    const int off = a.block_offset(static_cast<int>(i));
    Mat fb(k * n, k * n);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) fb.block(r * n, c * n, n, n) = f.block(r * N + off, c * N + off, n, n);
    Eigen::JacobiSVD<Mat> svd(fb, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Mat xb = svd.matrixU() * svd.matrixV().adjoint();
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) x.block(r * N + off, c * N + off, n, n) = xb.block(r * n, c * n, n, n);
  }
  return x;
}

Mat amplify(const CpMap& t, const Mat& x, int k) {
  const int Ns = t.source().matrix_size(), Nt = t.target().matrix_size();
  Mat y(k * Nt, k * Nt);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) y.block(r * Nt, c * Nt, Nt, Nt) = t.apply(x.block(r * Ns, c * Ns, Ns, Ns));
  return y;
}

}  // namespace

double cb_lower_at_level(const CpMap& t, int k, std::uint64_t seed, int restarts, int iters) {
  const auto& s = t.source();
  const auto& tg = t.target();
  const int Ns = s.matrix_size(), Nt = tg.matrix_size();
  std::mt19937_64 rng(seed * 7919 + static_cast<std::uint64_t>(k));
  double best = 0;
  for (int rs = 0; rs < restarts; ++rs) {
    Mat x = polar_in_algebra(random_gaussian(rng, k * Ns, k * Ns), s, k);
    for (int it = 0; it < iters; ++it) {
      const double xn = opnorm(x);
      if (xn < 1e-300) break;
      const Mat y = amplify(t, x, k);
      Eigen::JacobiSVD<Mat> svd(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const double val = svd.singularValues()(0) / xn;
      best = std::max(best, val);
      const Vec u = svd.matrixV().col(0), v = svd.matrixU().col(0);
      // F_ab = T†(v_a u_b*), T† acting by the adjoint coordinate matrix.
      Mat f(k * Ns, k * Ns);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
          const Mat vu = v.segment(a * Nt, Nt) * u.segment(b * Nt, Nt).adjoint();
          f.block(a * Ns, b * Ns, Ns, Ns) = s.from_coords(t.action().adjoint() * tg.coords(vu));
        }
      const Mat next = polar_in_algebra(f, s, k);
      if ((next - x).norm() < 1e-13) break;
      x = next;
    }
  }
  return best;
}

MapNorms norms(const CpMap& t, std::uint64_t seed, int max_level, int restarts) {
  MapNorms out;
  for (int k = 1; k <= max_level; ++k) {
    const double v = cb_lower_at_level(t, k, seed, restarts);
    if (v > out.cb_lower * (1 + 1e-12)) {
      out.cb_lower = v;
      out.cb_level = k;
    }
  }
  out.l2_A = l2_norm(t, false);
  out.l2_Aop = l2_norm(t, true);
  const GNSData gs(t.source()), gt(t.target());
  Mat m(gt.dim() - 1, gs.dim() - 1);
  for (int j = 1; j < gs.dim(); ++j) m.col(j - 1) = gt.hat(t.apply(gs.element_of(Vec::Unit(gs.dim(), j)))).tail(gt.dim() - 1);
  out.l2_centered = opnorm(m);
  return out;
}

}  // namespace gpw
