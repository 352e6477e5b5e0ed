#include <cmath>
#include <string>

#include <Eigen/CholmodSupport>

#include "shellvib/error.hpp"
#include "shellvib/solver.hpp"

namespace shellvib {

namespace {

using Llt = Eigen::CholmodSupernodalLLT<SpMat, Eigen::Lower>;

bool present(const SpMat& c) { return c.size() > 0; }

void check_dimensions(const AssembledSystem& sys) {
  const Eigen::Index n = sys.K.rows();
  if (sys.M.rows() != n || sys.M.cols() != n || sys.K.cols() != n) {
    throw Error(ErrorCode::AssemblyError, "K and M dimensions differ");
  }
  for (const auto* pair : {&sys.Cpsi, &sys.Cphi}) {
    if (present(*pair) && pair->rows() != n) throw Error(ErrorCode::AssemblyError, "coupling block has wrong row count");
  }
  if (present(sys.Cpsi) && sys.D1.rows() != sys.Cpsi.cols()) throw Error(ErrorCode::AssemblyError, "D1 size mismatch");
  if (present(sys.Cphi) && sys.D2.rows() != sys.Cphi.cols()) throw Error(ErrorCode::AssemblyError, "D2 size mismatch");
}

std::unique_ptr<Llt> factor_dielectric(const SpMat& d, const char* name) {
  auto f = std::make_unique<Llt>();
  f->cholmod().print = 0;
  f->compute(d);
  if (f->info() != Eigen::Success) {
    throw Error(ErrorCode::SingularDielectric, std::string(name) + " is not positive definite");
  }
  return f;
}

double max_diagonal(const SpMat& m) {
  double v = 0.0;
  for (Eigen::Index k = 0; k < m.rows(); ++k) v = std::max(v, std::abs(m.coeff(k, k)));
  return v;
}

}  // namespace

struct ReducedOperator::Impl {
  const AssembledSystem* sys;
  std::unique_ptr<Llt> d1;
  std::unique_ptr<Llt> d2;
};

ReducedOperator::ReducedOperator(const AssembledSystem& sys) : impl_(std::make_unique<Impl>()) {
  check_dimensions(sys);
  impl_->sys = &sys;
  if (present(sys.Cpsi)) impl_->d1 = factor_dielectric(sys.D1, "D1");
  if (present(sys.Cphi)) impl_->d2 = factor_dielectric(sys.D2, "D2");
}

ReducedOperator::~ReducedOperator() = default;
ReducedOperator::ReducedOperator(ReducedOperator&&) noexcept = default;

int ReducedOperator::size() const noexcept { return static_cast<int>(impl_->sys->K.rows()); }

std::pair<Eigen::VectorXd, Eigen::VectorXd> ReducedOperator::potentials(const Eigen::VectorXd& u) const {
  const AssembledSystem& s = *impl_->sys;
  if (u.size() != s.K.rows()) throw Error(ErrorCode::AssemblyError, "displacement vector has the wrong size");
  Eigen::VectorXd psi, phi;
  if (impl_->d1) psi = impl_->d1->solve(Eigen::VectorXd(s.Cpsi.transpose() * u));
  if (impl_->d2) phi = impl_->d2->solve(Eigen::VectorXd(s.Cphi.transpose() * u));
  return {psi, phi};
}

Eigen::VectorXd ReducedOperator::apply(const Eigen::VectorXd& u) const {
  const AssembledSystem& s = *impl_->sys;
  const auto [psi, phi] = potentials(u);
  Eigen::VectorXd out = s.K * u;
  if (psi.size() > 0) out += s.Cpsi * psi;
  if (phi.size() > 0) out += s.Cphi * phi;
  return out;
}

Eigen::MatrixXd schur_reduce_dense(const AssembledSystem& sys) {
  check_dimensions(sys);
  Eigen::MatrixXd a = Eigen::MatrixXd(sys.K);
  const auto add = [&](const SpMat& c, const SpMat& d, const char* name) {
    if (!present(c)) return;
    const auto f = factor_dielectric(d, name);
    const Eigen::MatrixXd x = f->solve(Eigen::MatrixXd(c.transpose()));
    a.noalias() += c * x;
  };
  add(sys.Cpsi, sys.D1, "D1");
  add(sys.Cphi, sys.D2, "D2");
  return 0.5 * (a + a.transpose());
}

SpMat schur_reduce(const AssembledSystem& sys) {
  if (!present(sys.Cpsi) && !present(sys.Cphi)) return sys.K;
  return schur_reduce_dense(sys).sparseView(1.0, 0.0);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> recover_potentials(const AssembledSystem& sys, const Eigen::VectorXd& u) {
  return ReducedOperator(sys).potentials(u);
}

struct ShiftedSolver::Impl {
  int n = 0;
  int nd = 0;
  double scale = 1.0;
  Llt llt;
  Eigen::CholmodDecomposition<SpMat, Eigen::Lower> ldlt;
};

ShiftedSolver::ShiftedSolver(const AssembledSystem& sys, double shift) : impl_(std::make_unique<Impl>()) {
  check_dimensions(sys);
  Impl& im = *impl_;
  im.n = static_cast<int>(sys.K.rows());
  const SpMat k = shift == 0.0 ? sys.K : SpMat(sys.K + shift * sys.M);
  const int npsi = present(sys.Cpsi) ? static_cast<int>(sys.Cpsi.cols()) : 0;
  const int nphi = present(sys.Cphi) ? static_cast<int>(sys.Cphi.cols()) : 0;
  im.nd = npsi + nphi;
  if (im.n == 0) return;

  im.llt.cholmod().print = 0;
  im.ldlt.cholmod().print = 0;
  if (im.nd == 0) {
    im.llt.compute(k);
    if (im.llt.info() != Eigen::Success) {
      throw Error(ErrorCode::SingularStiffness, "stiffness factorisation failed; the structure is not restrained");
    }
    return;
  }

  // Potentials are rescaled so that both diagonal blocks have similar size.
  double dmax = 0.0;
  if (npsi > 0) dmax = std::max(dmax, max_diagonal(sys.D1));
  if (nphi > 0) dmax = std::max(dmax, max_diagonal(sys.D2));
  im.scale = std::sqrt(max_diagonal(k) / dmax);
  const double s = im.scale;

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(k.nonZeros() + 2 * (sys.Cpsi.nonZeros() + sys.Cphi.nonZeros()) + sys.D1.nonZeros() + sys.D2.nonZeros());
  const auto put = [&](const SpMat& m, int r0, int c0, double f) {
    for (int c = 0; c < m.outerSize(); ++c)
      for (SpMat::InnerIterator it(m, c); it; ++it) {
        if (r0 + it.row() >= c0 + c) t.emplace_back(r0 + static_cast<int>(it.row()), c0 + c, f * it.value());
      }
  };
  const auto put_transposed = [&](const SpMat& m, int r0, double f) {
    for (int c = 0; c < m.outerSize(); ++c)
      for (SpMat::InnerIterator it(m, c); it; ++it) t.emplace_back(r0 + c, static_cast<int>(it.row()), f * it.value());
  };
  put(k, 0, 0, 1.0);
  if (npsi > 0) {
    put_transposed(sys.Cpsi, im.n, s);
    put(sys.D1, im.n, im.n, -s * s);
  }
  if (nphi > 0) {
    put_transposed(sys.Cphi, im.n + npsi, s);
    put(sys.D2, im.n + npsi, im.n + npsi, -s * s);
  }
  const int total = im.n + im.nd;
  SpMat b(total, total);
  b.setFromTriplets(t.begin(), t.end());
  im.ldlt.setMode(Eigen::CholmodLDLt);
  im.ldlt.compute(b);
  if (im.ldlt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularStiffness, "factorisation of the coupled block system failed");
  }
}

ShiftedSolver::~ShiftedSolver() = default;
ShiftedSolver::ShiftedSolver(ShiftedSolver&&) noexcept = default;

int ShiftedSolver::size() const noexcept { return impl_->n; }

Eigen::VectorXd ShiftedSolver::solve(const Eigen::VectorXd& b) const {
  const Impl& im = *impl_;
  if (b.size() != im.n) throw Error(ErrorCode::AssemblyError, "right-hand side has the wrong size");
  if (im.n == 0) return b;
  if (im.nd == 0) return im.llt.solve(b);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(im.n + im.nd);
  rhs.head(im.n) = b;
  const Eigen::VectorXd x = im.ldlt.solve(rhs);
  return x.head(im.n);
}

}  // namespace shellvib
