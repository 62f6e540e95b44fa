#include "taulab/linsys.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "taulab/errors.hpp"

namespace taulab {

namespace {

constexpr double kSpecRel = 1e-8;
constexpr double kRcondFloor = 1e-13;
constexpr double kRcondDirect = 1e-3;

double norm_or_one(const CMat& A) {
  const double n = A.norm();
  return n > 0.0 ? n : 1.0;
}

CVec eigenvalues(const CMat& A) {
  if (A.rows() == 0) return CVec();
  Eigen::ComplexEigenSolver<CMat> es(A, false);
  return es.eigenvalues();
}

void check_separation(const CMat& A1, const CMat& A2) {
  const CVec l1 = eigenvalues(A1), l2 = eigenvalues(A2);
  const double eps = kSpecRel * std::max(norm_or_one(A1), norm_or_one(A2));
  for (Eigen::Index j = 0; j < l1.size(); ++j)
    for (Eigen::Index k = 0; k < l2.size(); ++k)
      if (std::abs(l1(j) + l2(k)) < eps) {
        std::ostringstream os;
        os << "spectrum collision: lambda_" << j << " = " << l1(j) << ", lambda_" << k << " = "
           << l2(k) << " sum to within " << eps << " of zero";
        throw SpectrumCollision(os.str());
      }
}

}  // namespace

LinearSystem::LinearSystem(CMat A, CMat B, CMat C, CMat R0, bool scattering)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), R0_(std::move(R0)),
      scattering_(scattering) {}

LinearSystem LinearSystem::make(CMat A, CMat B, CMat C, bool scattering) {
  if (A.rows() != A.cols() || B.rows() != A.rows() || C.cols() != A.rows() ||
      B.cols() != C.rows())
    throw InvalidArgument("linear system: inconsistent dimensions");
  if (scattering) {
    for (const cplx& l : eigenvalues(A))
      if (!(l.real() > 0.0))
        throw InvalidArgument("scattering-class system needs Re(lambda) > 0 for every eigenvalue of A");
  }
  CMat R0 = solve_lyapunov(A, B * C);
  return LinearSystem(std::move(A), std::move(B), std::move(C), std::move(R0), scattering);
}

LinearSystem LinearSystem::with_state(CMat A, CMat B, CMat C, CMat R0, bool scattering) {
  return LinearSystem(std::move(A), std::move(B), std::move(C), std::move(R0), scattering);
}

LinearSystem LinearSystem::direct_sum(const LinearSystem& a, const LinearSystem& b) {
  const auto n1 = a.n(), n2 = b.n(), m1 = a.B().cols(), m2 = b.B().cols();
  CMat A = CMat::Zero(n1 + n2, n1 + n2);
  CMat B = CMat::Zero(n1 + n2, m1 + m2);
  CMat C = CMat::Zero(a.m() + b.m(), n1 + n2);
  A.topLeftCorner(n1, n1) = a.A();
  A.bottomRightCorner(n2, n2) = b.A();
  B.topLeftCorner(n1, m1) = a.B();
  B.bottomRightCorner(n2, m2) = b.B();
  C.topLeftCorner(a.m(), n1) = a.C();
  C.bottomRightCorner(b.m(), n2) = b.C();
  return make(A, B, C, a.scattering_class() && b.scattering_class());
}

LinearSystem LinearSystem::diagonal(const CVec& lambda, const CVec& b, const CVec& c,
                                    bool scattering) {
  const auto n = lambda.size();
  CMat A = lambda.asDiagonal();
  CMat B = b;
  CMat C = c.transpose();
  CMat R0(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      const cplx s = lambda(j) + lambda(k);
      if (std::abs(s) < kSpecRel * norm_or_one(A)) throw SpectrumCollision("diagonal system: lambda_j + lambda_k = 0");
      R0(j, k) = b(j) * c(k) / s;
    }
  if (scattering)
    for (const cplx& l : lambda)
      if (!(l.real() > 0.0)) throw InvalidArgument("scattering-class system needs Re(lambda) > 0");
  return LinearSystem(std::move(A), std::move(B), std::move(C), std::move(R0), scattering);
}

double LinearSystem::min_re_spectrum() const {
  double best = std::numeric_limits<double>::infinity();
  for (const cplx& l : eigenvalues(A_)) best = std::min(best, l.real());
  return best;
}

CMat matrix_exp(const CMat& A, double x) { return CMat(-x * A).exp(); }

CMat matrix_exp(const CMat& A, cplx x) { return CMat(-x * A).exp(); }

CMat expm(const CMat& X) { return X.exp(); }

double spectral_separation(const CMat& A, const CMat& A2) {
  const CVec l1 = eigenvalues(A), l2 = eigenvalues(A2);
  double best = std::numeric_limits<double>::infinity();
  for (const cplx& a : l1)
    for (const cplx& b : l2) best = std::min(best, std::abs(a + b));
  return best;
}

CMat solve_sylvester(const CMat& A1, const CMat& A2, const CMat& M) {
  check_separation(A1, A2);
  const auto n1 = A1.rows(), n2 = A2.rows();
  if (n1 == 0 || n2 == 0) return CMat::Zero(n1, n2);
  Eigen::ComplexSchur<CMat> s1(A1), s2(A2);
  const CMat& U1 = s1.matrixU();
  const CMat& T1 = s1.matrixT();
  const CMat& U2 = s2.matrixU();
  const CMat& T2 = s2.matrixT();
  const CMat F = U1.adjoint() * M * U2;
  CMat Y(n1, n2);
  for (Eigen::Index k = 0; k < n2; ++k) {
    CVec rhs = F.col(k);
    for (Eigen::Index i = 0; i < k; ++i) rhs -= Y.col(i) * T2(i, k);
    CMat Tk = T1;
    Tk.diagonal().array() += T2(k, k);
    Y.col(k) = Tk.triangularView<Eigen::Upper>().solve(rhs);
  }
  return U1 * Y * U2.adjoint();
}

CMat solve_lyapunov(const CMat& A, const CMat& M) {
  check_separation(A, A);
  const auto n = A.rows();
  if (n == 0) return CMat();
  Eigen::ComplexEigenSolver<CMat> es(A);
  const CMat& V = es.eigenvectors();
  Eigen::PartialPivLU<CMat> lu(V);
  const double cond = (lu.rcond() > 0.0) ? 1.0 / lu.rcond() : std::numeric_limits<double>::infinity();
  if (cond < 1e6) {
    const CVec& d = es.eigenvalues();
    CMat Mt = lu.solve(M * V);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) Mt(j, k) /= d(j) + d(k);
    return V * Mt * lu.inverse();
  }
  return solve_sylvester(A, A, M);
}

CMat solve_lyapunov_kron(const CMat& A, const CMat& M) {
  check_separation(A, A);
  const auto n = A.rows();
  if (n > 64) throw InvalidArgument("Kronecker Lyapunov solver limited to n <= 64");
  const CMat I = CMat::Identity(n, n);
  CMat K = CMat::Zero(n * n, n * n);
  // vec(A R + R A) = (I kron A + A^T kron I) vec(R), column-major vec.
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      K.block(j * n, k * n, n, n) += I(j, k) * A;
      K.block(j * n, k * n, n, n) += A(k, j) * I;
    }
  const CVec r = K.fullPivLu().solve(Eigen::Map<const CVec>(M.data(), n * n));
  return Eigen::Map<const CMat>(r.data(), n, n);
}

StateOperator resolvent_at(const LinearSystem& sys, double x) {
  StateOperator s;
  s.x = x;
  if (x == 0.0) {
    s.R = sys.R0();
    s.provenance = StateOperator::Provenance::LyapunovSolved;
    return s;
  }
  const CMat E = matrix_exp(sys.A(), x);
  s.R = E * sys.R0() * E;
  return s;
}

cplx tau(const LinearSystem& sys, double x, cplx mu) {
  const auto n = sys.n();
  if (n == 0) return 1.0;
  const CMat R = resolvent_at(sys, x).R;
  return (CMat::Identity(n, n) + mu * R).partialPivLu().determinant();
}

namespace {

struct Pieces {
  CMat E, R, G, Finv;  // e^{-xA}, R_x, e^{-xA} B C e^{-xA}, (I + mu R)^{-1}
};

// LU of Dr K Dc with Dr, Dc diagonal scalings that bring every row and
// column to unit max-norm. Exponentially graded entries (fast solitons, far
// left x, large t) otherwise make a harmless matrix look singular.
struct Equilibrated {
  RVec dr, dc;
  Eigen::PartialPivLU<CMat> lu;
  double rcond = 0.0;

  explicit Equilibrated(const CMat& K) : dr(RVec::Ones(K.rows())), dc(RVec::Ones(K.cols())) {
    for (Eigen::Index i = 0; i < K.rows(); ++i) {
      const double m = K.row(i).cwiseAbs().maxCoeff();
      if (m > 0.0 && std::isfinite(m)) dr(i) = 1.0 / m;
    }
    CMat S = dr.asDiagonal() * K;
    for (Eigen::Index j = 0; j < K.cols(); ++j) {
      const double m = S.col(j).cwiseAbs().maxCoeff();
      if (m > 0.0 && std::isfinite(m)) dc(j) = 1.0 / m;
    }
    S = S * dc.asDiagonal();
    lu.compute(S);
    rcond = S.allFinite() ? lu.rcond() : 0.0;
  }
  CMat inverse() const { return dc.asDiagonal() * lu.inverse() * dr.asDiagonal(); }
};

Pieces pieces(const LinearSystem& sys, double x, cplx mu) {
  Pieces p;
  const auto n = sys.n();
  p.E = matrix_exp(sys.A(), x);
  p.R = p.E * sys.R0() * p.E;
  p.G = p.E * sys.B() * sys.C() * p.E;
  const Equilibrated direct(CMat::Identity(n, n) + mu * p.R);
  if (direct.rcond >= kRcondDirect) {
    p.Finv = direct.inverse();
    return p;
  }
  // For x far left R_x is huge and badly scaled; I + mu R_x = E (e^{2xA} + mu R0) E
  // keeps the middle factor well conditioned.
  const Equilibrated mid(matrix_exp(sys.A(), -2.0 * x) + mu * sys.R0());
  if (std::max(direct.rcond, mid.rcond) < kRcondFloor) {
    std::ostringstream os;
    os << "I + mu R_x numerically singular at x = " << x << " (rcond " << std::max(direct.rcond, mid.rcond) << ")";
    throw SingularResolvent(os.str());
  }
  if (direct.rcond >= mid.rcond) {
    p.Finv = direct.inverse();
  } else {
    const CMat Einv = matrix_exp(sys.A(), -x);
    p.Finv = Einv * mid.inverse() * Einv;
  }
  return p;
}

}  // namespace

cplx log_tau_d1(const LinearSystem& sys, double x, cplx mu) {
  if (sys.n() == 0) return 0.0;
  const Pieces p = pieces(sys, x, mu);
  return -mu * (p.Finv * p.G).trace();
}

cplx log_tau_d2(const LinearSystem& sys, double x, cplx mu) {
  if (sys.n() == 0) return 0.0;
  const Pieces p = pieces(sys, x, mu);
  const CMat& A = sys.A();
  const CMat FG = p.Finv * p.G;
  return -mu * (mu * (FG * FG).trace() - (p.Finv * (A * p.G + p.G * A)).trace());
}

CMat scattering(const LinearSystem& sys, double x) {
  return sys.C() * matrix_exp(sys.A(), x) * sys.B();
}

CMat resolvent_F(const LinearSystem& sys, double x) { return pieces(sys, x, 1.0).Finv; }

CMat bracket(const LinearSystem& sys, double x, const CMat& P) {
  const Pieces p = pieces(sys, x, 1.0);
  return sys.C() * p.E * p.Finv * P * p.Finv * p.E * sys.B();
}

CMat bracket_derivative(const LinearSystem& sys, double x, const CMat& P) {
  const Pieces p = pieces(sys, x, 1.0);
  const auto n = sys.n();
  const CMat K = CMat::Identity(n, n) - 2.0 * p.Finv;
  const CMat Q = sys.A() * K * P + P * K * sys.A();
  return sys.C() * p.E * p.Finv * Q * p.Finv * p.E * sys.B();
}

cplx potential(const LinearSystem& sys, double x) {
  if (sys.n() == 0) return 0.0;
  if (sys.m() == 1) return -4.0 * bracket(sys, x, sys.A())(0, 0);
  return potential_logdet(sys, x);
}

cplx potential_logdet(const LinearSystem& sys, double x) { return -2.0 * log_tau_d2(sys, x, 1.0); }

cplx potential_fd(const LinearSystem& sys, double x, double h) {
  auto lt = [&](double s) { return std::log(tau(sys, s)); };
  // 5-point second derivative of log tau; log branch is harmless for
  // tau bounded away from the negative axis on [x-2h, x+2h].
  const cplx d2 = (-lt(x + 2 * h) + 16.0 * lt(x + h) - 30.0 * lt(x) + 16.0 * lt(x - h) - lt(x - 2 * h)) /
                  (12.0 * h * h);
  return -2.0 * d2;
}

double lyapunov_residual(const LinearSystem& sys, double x) {
  const CMat E = matrix_exp(sys.A(), x);
  const CMat R = E * sys.R0() * E;
  return (sys.A() * R + R * sys.A() - E * sys.B() * sys.C() * E).norm();
}

}  // namespace taulab
