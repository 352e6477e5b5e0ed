#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "shellvib/error.hpp"
#include "shellvib/solver.hpp"

namespace shellvib {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRigidRatio = 1e-3;
constexpr int kMaxRigid = 6;
constexpr int kRefinements = 4;

struct RitzPairs {
  Eigen::VectorXd theta;
  Eigen::MatrixXd vectors;
  int restarts = 0;
  bool converged = false;
};

// Block Lanczos with full M-orthogonalisation and thick restarts for the
// largest eigenvalues of an M-self-adjoint operator T. Column j of the basis
// is expanded into column j + b, so the basis spans a block Krylov space and
// repeated eigenvalues up to multiplicity b are resolved.
class BlockLanczos {
 public:
  BlockLanczos(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& op, const SpMat& m, int nev, int block)
      : op_(op), m_(m), n_(static_cast<int>(m.rows())), nev_(nev), b_(std::min(block, n_)) {
    dim_ = std::min(std::max(2 * nev_, nev_ + 3 * b_) + b_, n_ - b_);
    dim_ = std::max(dim_, nev_ + b_ + 1);
    if (dim_ + b_ > n_) throw Error(ErrorCode::EigenNoConvergence, "system too small for the iterative eigensolver");
  }

  RitzPairs run(double tol, int max_restarts) {
    std::mt19937 rng(20240611);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd v(n_, dim_ + b_);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim_ + b_, dim_ + b_);
    int cols = 0;
    for (int k = 0; k < b_; ++k) {
      Eigen::VectorXd w(n_);
      for (int i = 0; i < n_; ++i) w[i] = normal(rng);
      append(v, cols, w, rng);
    }
    int expanded = 0;
    RitzPairs out;
    for (int restart = 0;; ++restart) {
      while (expanded < dim_) {
        Eigen::VectorXd w = op_(v.col(expanded));
        const double before = m_norm(w);
        Eigen::VectorXd c = orthogonalize(v, cols, w);
        h.col(expanded).head(cols) = c;
        const double norm = m_norm(w);
        if (norm <= 1e-10 * before) {
          Eigen::VectorXd r(n_);
          for (int i = 0; i < n_; ++i) r[i] = normal(rng);
          append(v, cols, r, rng);
        } else {
          h(cols, expanded) = norm;
          v.col(cols++) = w / norm;
        }
        ++expanded;
      }

      Eigen::MatrixXd hs = h.topLeftCorner(dim_, dim_).triangularView<Eigen::Upper>();
      hs.triangularView<Eigen::StrictlyLower>() = hs.transpose().triangularView<Eigen::StrictlyLower>();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hs);
      const Eigen::VectorXd theta = es.eigenvalues().reverse();
      const Eigen::MatrixXd y = es.eigenvectors().rowwise().reverse();
      const Eigen::MatrixXd ey = h.block(dim_, 0, b_, dim_) * y;

      bool done = true;
      for (int i = 0; i < nev_; ++i) done = done && ey.col(i).norm() <= tol * std::abs(theta[i]);
      if (done || restart >= max_restarts) {
        out.theta = theta.head(nev_);
        out.vectors = v.leftCols(dim_) * y.leftCols(nev_);
        out.restarts = restart;
        out.converged = done;
        return out;
      }

      const int keep = std::min(nev_ + (dim_ - nev_) / 2, dim_ - b_ - 1);
      const Eigen::MatrixXd ritz = v.leftCols(dim_) * y.leftCols(keep);
      const Eigen::MatrixXd residual_block = v.middleCols(dim_, b_);
      v.leftCols(keep) = ritz;
      v.middleCols(keep, b_) = residual_block;
      h.setZero();
      for (int i = 0; i < keep; ++i) h(i, i) = theta[i];
      expanded = keep;
      cols = keep + b_;
    }
  }

 private:
  double m_norm(const Eigen::VectorXd& w) const { return std::sqrt(std::max(0.0, w.dot(m_ * w))); }

  // Two passes of classical Gram-Schmidt in the M inner product.
  Eigen::VectorXd orthogonalize(const Eigen::MatrixXd& v, int cols, Eigen::VectorXd& w) const {
    Eigen::VectorXd total = Eigen::VectorXd::Zero(cols);
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd mw = m_ * w;
      const Eigen::VectorXd c = v.leftCols(cols).transpose() * mw;
      w.noalias() -= v.leftCols(cols) * c;
      total += c;
    }
    return total;
  }

  void append(Eigen::MatrixXd& v, int& cols, Eigen::VectorXd w, std::mt19937& rng) const {
    std::normal_distribution<double> normal;
    for (int attempt = 0; attempt < 5; ++attempt) {
      const double before = m_norm(w);
      orthogonalize(v, cols, w);
      const double norm = m_norm(w);
      if (norm > 1e-8 * before) {
        v.col(cols++) = w / norm;
        return;
      }
      for (int i = 0; i < n_; ++i) w[i] = normal(rng);
    }
    throw Error(ErrorCode::EigenNoConvergence, "could not extend the Krylov basis");
  }

  const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& op_;
  const SpMat& m_;
  int n_;
  int nev_;
  int b_;
  int dim_ = 0;
};

void flag_rigid(ModalResult& r) {
  const int n = r.size();
  r.rigid.assign(n, false);
  if (n == 0) return;
  const double fmax = r.frequencies.maxCoeff();
  double fref = fmax;
  for (int i = 0; i < n; ++i) {
    if (r.frequencies[i] >= kRigidRatio * fmax) fref = std::min(fref, r.frequencies[i]);
  }
  for (int i = 0; i < n; ++i) r.rigid[i] = r.frequencies[i] < kRigidRatio * fref;
}

// Keeps every rigid mode and the first `wanted` flexible ones.
ModalResult select(const ModalResult& all, int wanted) {
  std::vector<int> pick;
  int flexible = 0;
  for (int i = 0; i < all.size(); ++i) {
    if (all.rigid[i]) {
      pick.push_back(i);
    } else if (flexible < wanted) {
      pick.push_back(i);
      ++flexible;
    }
  }
  ModalResult r;
  const int k = static_cast<int>(pick.size());
  r.eigenvalues.resize(k);
  r.frequencies.resize(k);
  r.residuals.resize(k);
  r.modes.resize(all.modes.rows(), k);
  if (all.psi.size() > 0) r.psi.resize(all.psi.rows(), k);
  if (all.phi.size() > 0) r.phi.resize(all.phi.rows(), k);
  for (int c = 0; c < k; ++c) {
    const int i = pick[c];
    r.eigenvalues[c] = all.eigenvalues[i];
    r.frequencies[c] = all.frequencies[i];
    r.residuals[c] = all.residuals[i];
    r.modes.col(c) = all.modes.col(i);
    if (all.psi.size() > 0) r.psi.col(c) = all.psi.col(i);
    if (all.phi.size() > 0) r.phi.col(c) = all.phi.col(i);
    r.rigid.push_back(all.rigid[i]);
  }
  r.dense = all.dense;
  r.restarts = all.restarts;
  return r;
}

// One step of subspace inverse iteration followed by Rayleigh-Ritz on
// Z = T X. With (A + sigma M) Z = M X the projected stiffness needs no extra
// solves; the step damps the stiff error components that dominate
// |A u - lambda M u| after the Krylov phase.
void refine(Eigen::MatrixXd& x, Eigen::VectorXd& lambda,
            const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& t, const SpMat& m, double sigma) {
  const int k = static_cast<int>(x.cols());
  Eigen::MatrixXd z(x.rows(), k);
  for (int i = 0; i < k; ++i) z.col(i) = t(x.col(i));
  const Eigen::MatrixXd mz = m * z;
  const Eigen::MatrixXd mx = m * x;
  Eigen::MatrixXd a = z.transpose() * (mx - sigma * mz);
  Eigen::MatrixXd b = z.transpose() * mz;
  a = 0.5 * (a + a.transpose()).eval();
  b = 0.5 * (b + b.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::EigenNoConvergence, "Rayleigh-Ritz step failed");
  lambda = es.eigenvalues();
  x = z * es.eigenvectors();
}

void finish(ModalResult& r, const AssembledSystem& sys, const ReducedOperator& op, double sigma) {
  const int k = static_cast<int>(r.eigenvalues.size());
  r.frequencies.resize(k);
  r.residuals.resize(k);
  const bool has_psi = sys.Cpsi.size() > 0;
  const bool has_phi = sys.Cphi.size() > 0;
  if (has_psi) r.psi.resize(sys.Cpsi.cols(), k);
  if (has_phi) r.phi.resize(sys.Cphi.cols(), k);
  for (int i = 0; i < k; ++i) {
    const double lambda = r.eigenvalues[i];
    const Eigen::VectorXd u = r.modes.col(i);
    const Eigen::VectorXd mu = sys.M * u;
    r.residuals[i] = (op.apply(u) - lambda * mu).norm() / mu.norm();
    r.frequencies[i] = std::sqrt(std::max(lambda, 0.0)) / kTwoPi;
    const auto [psi, phi] = op.potentials(u);
    if (has_psi) r.psi.col(i) = psi;
    if (has_phi) r.phi.col(i) = phi;
  }
  flag_rigid(r);
  double scale = sigma;
  for (int i = 0; i < k; ++i) {
    if (!r.rigid[i]) {
      scale = std::max(scale, r.eigenvalues[i]);
      break;
    }
  }
  for (int i = 0; i < k; ++i) r.residuals[i] /= std::max({std::abs(r.eigenvalues[i]), sigma, r.rigid[i] ? scale : 0.0});
}

}  // namespace

int ModalResult::num_rigid() const { return static_cast<int>(std::count(rigid.begin(), rigid.end(), true)); }

ModalResult solve_modal(const AssembledSystem& sys, const ModalOptions& options) {
  if (options.num_modes < 1) throw Error(ErrorCode::EigenNoConvergence, "at least one mode must be requested");
  const int n = static_cast<int>(sys.K.rows());
  ModalResult all;
  if (n == 0) return all;
  const int nev = std::min(options.num_modes + kMaxRigid, n);
  const double sigma = std::pow(kTwoPi * options.shift_hz, 2);
  const ReducedOperator op(sys);

  if (n <= options.dense_threshold) {
    const Eigen::MatrixXd a = schur_reduce_dense(sys);
    const Eigen::MatrixXd m = Eigen::MatrixXd(sys.M);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, m);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::EigenNoConvergence, "dense eigensolver failed");
    all.eigenvalues = es.eigenvalues().head(nev);
    all.modes = es.eigenvectors().leftCols(nev);
    all.dense = true;
    finish(all, sys, op, sigma);
    if (!(all.residuals.maxCoeff() <= options.tolerance)) {
      const Eigen::LLT<Eigen::MatrixXd> llt(a + sigma * m);
      const std::function<Eigen::VectorXd(const Eigen::VectorXd&)> t = [&](const Eigen::VectorXd& x) {
        return Eigen::VectorXd(llt.solve(m * x));
      };
      for (int pass = 0; pass < kRefinements && !(all.residuals.maxCoeff() <= options.tolerance); ++pass) {
        refine(all.modes, all.eigenvalues, t, sys.M, sigma);
        finish(all, sys, op, sigma);
      }
    }
  } else {
    const ShiftedSolver solver(sys, sigma);
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)> t = [&](const Eigen::VectorXd& x) {
      return solver.solve(sys.M * x);
    };
    BlockLanczos lanczos(t, sys.M, nev, options.block_size);
    const RitzPairs ritz = lanczos.run(1e-9, options.max_restarts);
    Eigen::MatrixXd x = ritz.vectors;
    for (int pass = 0; pass < kRefinements; ++pass) {
      refine(x, all.eigenvalues, t, sys.M, sigma);
      all.modes = x;
      finish(all, sys, op, sigma);
      if (all.residuals.maxCoeff() <= options.tolerance) break;
    }
    all.restarts = ritz.restarts;
  }
  if (!(all.residuals.maxCoeff() <= options.tolerance)) {
    std::ostringstream msg;
    msg << "eigenpairs did not reach the residual tolerance " << options.tolerance << "; achieved:";
    for (int i = 0; i < all.size(); ++i) msg << ' ' << all.residuals[i];
    throw Error(ErrorCode::EigenNoConvergence, msg.str());
  }
  return select(all, options.num_modes);
}

ModalResult solve_modal(const SpMat& a, const SpMat& m, const ModalOptions& options) {
  if (a.rows() != a.cols() || m.rows() != a.rows() || m.cols() != a.cols()) {
    throw Error(ErrorCode::AssemblyError, "A and M must be square and of equal size");
  }
  AssembledSystem sys;
  sys.K = a;
  sys.M = m;
  sys.free_dofs.resize(a.rows());
  std::iota(sys.free_dofs.begin(), sys.free_dofs.end(), 0);
  sys.constrained = true;
  return solve_modal(sys, options);
}

}  // namespace shellvib
