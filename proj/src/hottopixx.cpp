#include "conered/hottopixx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "conered/matrix_io.hpp"

namespace conered {

ModelH::ModelH(Matrix A, Index r) : A_(std::move(A)), r_(r) {
  if (A_.cols() < 1 || A_.rows() < 1) throw Error(ErrorCode::invalid_argument, "model H: empty data matrix");
  if (r_ < 1 || r_ > A_.cols()) {
    throw Error(ErrorCode::bad_rank,
                "model H: r = " + std::to_string(r_) + " outside [1, " + std::to_string(A_.cols()) + "]");
  }
  if (!A_.allFinite()) throw Error(ErrorCode::invalid_argument, "model H: non-finite data");
}

Index ModelH::variable_count() const noexcept { return columns() * columns() + rows() * columns(); }

Index ModelH::constraint_count() const noexcept {
  const Index m = columns();
  return 2 * rows() * m + 1 + 2 * m * m + m;
}

DenseLp ModelH::to_dense_lp() const {
  const Index m = columns();
  const Index q = rows();
  const Index nv = variable_count();
  DenseLp lp;
  lp.c = Vector::Zero(nv);
  lp.c.tail(q * m).setOnes();

  const Index n_ub = 2 * q * m + m * m + m;
  lp.A_ub = Matrix::Zero(n_ub, nv);
  lp.b_ub = Vector::Zero(n_ub);
  Index row = 0;
  // A - AX <= T   ->  -(AX) - T <= -A
  // AX - A <= T   ->   (AX) - T <=  A
  for (int sign : {-1, 1}) {
    for (Index j = 0; j < m; ++j) {
      for (Index k = 0; k < q; ++k) {
        for (Index i = 0; i < m; ++i) lp.A_ub(row, x_var(i, j)) = sign * A_(k, i);
        lp.A_ub(row, t_var(k, j)) = -1.0;
        lp.b_ub(row) = sign * A_(k, j);
        ++row;
      }
    }
  }
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < m; ++i) {
      lp.A_ub(row, x_var(i, j)) += 1.0;
      lp.A_ub(row, x_var(i, i)) -= 1.0;
      ++row;
    }
  }
  for (Index i = 0; i < m; ++i) {
    lp.A_ub(row, x_var(i, i)) = 1.0;
    lp.b_ub(row) = 1.0;
    ++row;
  }

  lp.A_eq = Matrix::Zero(1, nv);
  for (Index i = 0; i < m; ++i) lp.A_eq(0, x_var(i, i)) = 1.0;
  lp.b_eq = Vector::Constant(1, static_cast<double>(r_));
  return lp;
}

namespace {

std::string xname(Index i, Index j) { return "x_" + std::to_string(i + 1) + "_" + std::to_string(j + 1); }
std::string tname(Index k, Index j) { return "t_" + std::to_string(k + 1) + "_" + std::to_string(j + 1); }

void write_term(std::ostream& out, double coef, const std::string& name, bool& first) {
  if (coef == 0.0) return;
  out << (coef < 0.0 ? " - " : (first ? " " : " + "));
  const double a = std::abs(coef);
  if (a != 1.0) out << format_double(a) << ' ';
  out << name;
  first = false;
}

}  // namespace

void ModelH::write_lp(std::ostream& out) const {
  const Index m = columns();
  const Index q = rows();
  out << "\\ self-dictionary model, m = " << m << ", rows = " << q << ", r = " << r_ << "\n";
  out << "Minimize\n obj:";
  bool first = true;
  for (Index j = 0; j < m; ++j)
    for (Index k = 0; k < q; ++k) write_term(out, 1.0, tname(k, j), first);
  out << "\nSubject To\n";
  for (Index j = 0; j < m; ++j) {
    for (Index k = 0; k < q; ++k) {
      for (int sign : {1, -1}) {
        out << (sign > 0 ? " up_" : " lo_") << k + 1 << '_' << j + 1 << ':';
        first = true;
        write_term(out, 1.0, tname(k, j), first);
        for (Index i = 0; i < m; ++i) write_term(out, sign * A_(k, i), xname(i, j), first);
        out << " >= " << format_double(sign * A_(k, j)) << '\n';
      }
    }
  }
  out << " trace:";
  first = true;
  for (Index i = 0; i < m; ++i) write_term(out, 1.0, xname(i, i), first);
  out << " = " << r_ << '\n';
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < m; ++i) {
      if (i == j) continue;
      out << " dom_" << i + 1 << '_' << j + 1 << ':';
      first = true;
      write_term(out, 1.0, xname(i, j), first);
      write_term(out, -1.0, xname(i, i), first);
      out << " <= 0\n";
    }
  }
  out << "Bounds\n";
  for (Index i = 0; i < m; ++i) out << " " << xname(i, i) << " <= 1\n";
  out << "End\n";
}

double model_h_objective(const Matrix& A, const Matrix& X) {
  if (X.rows() != A.cols() || X.cols() != A.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "model H objective: X must be m x m");
  }
  return (A - A * X).cwiseAbs().sum();
}

ConstraintAudit audit_model_h(const Matrix& X, Index r, double tol) {
  if (X.rows() != X.cols()) throw Error(ErrorCode::dimension_mismatch, "audit: X must be square");
  const Index m = X.rows();
  double worst = std::abs(X.trace() - static_cast<double>(r));
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < m; ++i) {
      worst = std::max(worst, -X(i, j));
      worst = std::max(worst, X(i, j) - X(i, i));
    }
    worst = std::max(worst, X(j, j) - 1.0);
  }
  if (!X.allFinite()) worst = std::numeric_limits<double>::infinity();
  return {worst, worst <= tol};
}

LpSolution solve_model_h_simplex(const ModelH& model, Index max_columns) {
  if (model.columns() > max_columns) {
    throw Error(ErrorCode::too_many_columns, "model H simplex: m = " + std::to_string(model.columns()) +
                                                 " exceeds the dense limit " + std::to_string(max_columns));
  }
  const LpResult res = solve_dense_simplex(model.to_dense_lp());
  LpSolution sol;
  sol.status = res.status;
  sol.iterations = res.iterations;
  if (res.status != LpStatus::optimal) return sol;
  const Index m = model.columns();
  sol.X = Eigen::Map<const Matrix>(res.x.data(), m, m);
  sol.objective = model_h_objective(model.data(), sol.X);
  return sol;
}

// ---------------------------------------------------------------------------
// Interior point method.
//
// Inequality form  G z <= h  (slack s, multiplier lambda), equality trace = r
// (multiplier y), z = (X, T). Blocks:
//   1:  -(AX) - T <= -A        (q x m)
//   2:   (AX) - T <=  A        (q x m)
//   3:  -X <= 0                (m x m)
//   4:  X(i,j) - X(i,i) <= 0   (m x m, diagonal unused)
//   5:  X(i,i) <= 1            (m)
// ---------------------------------------------------------------------------
namespace {

struct Blocks {
  Matrix b1, b2, b3, b4;
  Vector b5;

  Blocks() = default;
  Blocks(Index q, Index m)
      : b1(Matrix::Zero(q, m)), b2(Matrix::Zero(q, m)), b3(Matrix::Zero(m, m)), b4(Matrix::Zero(m, m)),
        b5(Vector::Zero(m)) {}

  template <class F>
  void zip(const Blocks& o, F f) {
    b1 = b1.binaryExpr(o.b1, f);
    b2 = b2.binaryExpr(o.b2, f);
    b3 = b3.binaryExpr(o.b3, f);
    b4 = b4.binaryExpr(o.b4, f);
    b5 = b5.binaryExpr(o.b5, f);
    b4.diagonal().setZero();
  }

  double dot(const Blocks& o) const {
    return (b1.cwiseProduct(o.b1)).sum() + (b2.cwiseProduct(o.b2)).sum() + (b3.cwiseProduct(o.b3)).sum() +
           (b4.cwiseProduct(o.b4)).sum() - b4.diagonal().dot(o.b4.diagonal()) + b5.dot(o.b5);
  }

  double max_abs() const {
    double v = std::max({b1.cwiseAbs().maxCoeff(), b2.cwiseAbs().maxCoeff(), b3.cwiseAbs().maxCoeff(),
                         b5.cwiseAbs().maxCoeff()});
    for (Index j = 0; j < b4.cols(); ++j)
      for (Index i = 0; i < b4.rows(); ++i)
        if (i != j) v = std::max(v, std::abs(b4(i, j)));
    return v;
  }

  /// Largest alpha with this + alpha * d >= 0 (infinity if unbounded).
  double max_step(const Blocks& d) const {
    double alpha = std::numeric_limits<double>::infinity();
    auto scan = [&](const auto& v, const auto& dv, bool skip_diag) {
      for (Index j = 0; j < v.cols(); ++j)
        for (Index i = 0; i < v.rows(); ++i) {
          if (skip_diag && i == j) continue;
          if (dv(i, j) < 0.0) alpha = std::min(alpha, -v(i, j) / dv(i, j));
        }
    };
    scan(b1, d.b1, false);
    scan(b2, d.b2, false);
    scan(b3, d.b3, false);
    scan(b4, d.b4, true);
    scan(b5, d.b5, false);
    return alpha;
  }
};

struct Primal {
  Matrix X, T;
};

class IpmSystem {
 public:
  explicit IpmSystem(const Matrix& A) : A_(A), q_(A.rows()), m_(A.cols()) {}

  Index q() const { return q_; }
  Index m() const { return m_; }
  Index pairs() const { return 2 * q_ * m_ + m_ * m_ + m_ * (m_ - 1) + m_; }

  Blocks apply_g(const Primal& z) const {
    Blocks g;
    const Matrix AX = A_ * z.X;
    g.b1 = -AX - z.T;
    g.b2 = AX - z.T;
    g.b3 = -z.X;
    g.b4 = z.X;
    for (Index i = 0; i < m_; ++i) g.b4.row(i).array() -= z.X(i, i);
    g.b4.diagonal().setZero();
    g.b5 = z.X.diagonal();
    return g;
  }

  Blocks h() const {
    Blocks hb(q_, m_);
    hb.b1 = -A_;
    hb.b2 = A_;
    hb.b5.setOnes();
    return hb;
  }

  Primal apply_gt(const Blocks& u) const {
    Primal out;
    out.X = A_.transpose() * (u.b2 - u.b1) - u.b3;
    Matrix off = u.b4;
    off.diagonal().setZero();
    out.X += off;
    out.X.diagonal() += u.b5 - off.rowwise().sum();
    out.T = -u.b1 - u.b2;
    return out;
  }

  /// Factorizes the Newton matrix G^T D G + reg I (bordered by the trace
  /// row) for scaling D. T is eliminated in closed form; then, column by
  /// column, the off-diagonal entries of X are eliminated by a dense Cholesky
  /// factor, leaving an m x m Schur complement on the diagonal of X. This is
  /// a block Cholesky factorization, which stays backward stable as D
  /// degenerates near the optimum.
  void factorize(const Blocks& d, double reg) {
    d_ = d;
    reg_ = reg;
    const Matrix sum12 = d.b1 + d.b2;
    omega_ = (4.0 * d.b1.cwiseProduct(d.b2)).cwiseQuotient(sum12);
    tfac_ = (d.b1 - d.b2).cwiseQuotient(sum12);
    tdiag_ = sum12;

    store_factors_ = m_ <= kStoreLimit;
    factors_.clear();
    if (store_factors_) factors_.resize(static_cast<std::size_t>(m_));
    bvec_ = Matrix::Zero(m_, m_);

    Matrix S = Matrix::Zero(m_, m_);
    for (Index j = 0; j < m_; ++j) {
      Eigen::LLT<Matrix> llt = column_factor(j);
      Vector b = A_.transpose() * omega_.col(j).cwiseProduct(A_.col(j));
      b(j) = 0.0;
      bvec_.col(j) = b;

      // Coupling of the off-diagonal entries with the diagonal of X.
      Matrix C = Matrix::Zero(m_, m_);
      for (Index i = 0; i < m_; ++i)
        if (i != j) C(i, i) = -d.b4(i, j);
      C.col(j) = b;
      const Matrix W = llt.matrixL().solve(C);
      S.selfadjointView<Eigen::Lower>().rankUpdate(W.transpose(), -1.0);

      for (Index i = 0; i < m_; ++i)
        if (i != j) S(i, i) += d.b4(i, j);
      S(j, j) += A_.col(j).cwiseAbs2().dot(omega_.col(j)) + d.b3(j, j) + d.b5(j) + reg;
      if (store_factors_) factors_[static_cast<std::size_t>(j)] = std::move(llt);
    }

    schur_.compute(S);
    if (schur_.info() != Eigen::Success) {
      throw Error(ErrorCode::numerical_breakdown, "model H IPM: Schur factorization failed");
    }
    sinv_one_ = schur_.solve(Vector::Ones(m_));
  }

  /// Solves (G^T D G + reg I) dz + E^T dy = rho, E dz = rhs_eq.
  Primal solve(const Primal& rho, double rhs_eq, double& dy) const {
    const Matrix rx = rho.X - A_.transpose() * tfac_.cwiseProduct(rho.T);

    std::vector<Vector> u(static_cast<std::size_t>(m_));
    Vector rhs = rx.diagonal();
    for (Index j = 0; j < m_; ++j) {
      Vector ro = rx.col(j);
      ro(j) = 0.0;
      const Vector uj = apply_ninv(j, ro);
      rhs(j) -= bvec_.col(j).dot(uj);
      for (Index i = 0; i < m_; ++i)
        if (i != j) rhs(i) += d_.b4(i, j) * uj(i);
    }

    const Vector s_rhs = schur_.solve(rhs);
    dy = (s_rhs.sum() - rhs_eq) / sinv_one_.sum();
    const Vector delta = s_rhs - dy * sinv_one_;

    Primal dz;
    dz.X.resize(m_, m_);
    for (Index j = 0; j < m_; ++j) {
      Vector v = rx.col(j) - bvec_.col(j) * delta(j);
      for (Index i = 0; i < m_; ++i)
        if (i != j) v(i) += d_.b4(i, j) * delta(i);
      v(j) = 0.0;
      dz.X.col(j) = apply_ninv(j, v);
      dz.X(j, j) = delta(j);
    }
    const Matrix ADX = A_ * dz.X;
    dz.T = (rho.T - (d_.b1 - d_.b2).cwiseProduct(ADX)).cwiseQuotient(tdiag_);
    return dz;
  }

  /// Matrix-free product (G^T D G + reg I) dz + E^T dy.
  Primal apply_newton(const Primal& dz, double dy) const {
    Blocks g = apply_g(dz);
    g.b1 = g.b1.cwiseProduct(d_.b1);
    g.b2 = g.b2.cwiseProduct(d_.b2);
    g.b3 = g.b3.cwiseProduct(d_.b3);
    g.b4 = g.b4.cwiseProduct(d_.b4);
    g.b4.diagonal().setZero();
    g.b5 = g.b5.cwiseProduct(d_.b5);
    Primal out = apply_gt(g);
    out.X += reg_ * dz.X;
    out.X.diagonal().array() += dy;
    return out;
  }

 private:
  // Per-column factors are kept when they fit in roughly 130 MB.
  static constexpr Index kStoreLimit = 256;

  /// Cholesky factor of the off-diagonal block of column j after eliminating
  /// T: diag(d3 + d4 + reg) + A^T Omega_j A, with row/column j replaced by
  /// the identity.
  Eigen::LLT<Matrix> column_factor(Index j) const {
    Matrix U = omega_.col(j).cwiseSqrt().asDiagonal() * A_;
    U.col(j).setZero();
    Matrix N = Matrix::Zero(m_, m_);
    N.selfadjointView<Eigen::Lower>().rankUpdate(U.transpose());
    for (Index i = 0; i < m_; ++i) N(i, i) += i == j ? 1.0 : d_.b3(i, j) + d_.b4(i, j) + reg_;
    Eigen::LLT<Matrix> llt(N);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::numerical_breakdown, "model H IPM: column factorization failed");
    }
    return llt;
  }

  Vector apply_ninv(Index j, const Vector& v) const {
    Vector out = store_factors_ ? factors_[static_cast<std::size_t>(j)].solve(v) : column_factor(j).solve(v);
    out(j) = 0.0;
    return out;
  }

  const Matrix& A_;
  Index q_, m_;

  Blocks d_;
  double reg_ = 0.0;
  Matrix omega_, tfac_, tdiag_;
  bool store_factors_ = true;
  std::vector<Eigen::LLT<Matrix>> factors_;
  Matrix bvec_;
  Eigen::LLT<Matrix> schur_;
  Vector sinv_one_;
};

double inf_norm(const Primal& p) {
  return std::max(p.X.cwiseAbs().maxCoeff(), p.T.size() ? p.T.cwiseAbs().maxCoeff() : 0.0);
}

struct Iterate {
  Primal z;
  Blocks s, lam;
  double y = 0.0;
};

struct Residuals {
  Blocks rp;
  Primal rd;
  double re = 0.0;
  double pres = 0.0, dres = 0.0, gap = 0.0, mu = 0.0;
};

}  // namespace

LpSolution solve_model_h(const ModelH& model, double tol_lp, const IpmOptions& options) {
  const Matrix& A = model.data();
  const Index q = model.rows();
  const Index m = model.columns();
  const double r = static_cast<double>(model.rank());
  IpmSystem sys(A);
  const Blocks hb = sys.h();
  const double hscale = 1.0 + A.cwiseAbs().maxCoeff();

  // Start from a scaled identity with a little off-diagonal mass.
  Iterate it;
  it.z.X = Matrix::Constant(m, m, 0.5 * r / (static_cast<double>(m) * static_cast<double>(m)));
  it.z.X.diagonal().setConstant(r / static_cast<double>(m));
  const Matrix R = A - A * it.z.X;
  it.z.T = R.cwiseAbs().array() + hscale;
  {
    Blocks g = sys.apply_g(it.z);
    it.s = hb;
    it.s.zip(g, [](double a, double b) { return std::max(a - b, 0.5); });
  }
  it.lam = Blocks(q, m);
  it.lam.zip(it.lam, [](double, double) { return 1.0; });

  const double n_pairs = static_cast<double>(sys.pairs());

  auto residuals = [&](const Iterate& x) {
    Residuals res;
    res.rp = sys.apply_g(x.z);
    res.rp.zip(x.s, [](double a, double b) { return a + b; });
    res.rp.zip(hb, [](double a, double b) { return a - b; });
    res.rd = sys.apply_gt(x.lam);
    res.rd.T.array() += 1.0;
    res.rd.X.diagonal().array() += x.y;
    res.re = x.z.X.trace() - r;
    const double pobj = x.z.T.sum();
    const double dobj = -hb.dot(x.lam) - r * x.y;
    res.mu = x.s.dot(x.lam) / n_pairs;
    res.pres = std::max(res.rp.max_abs(), std::abs(res.re)) / hscale;
    res.dres = inf_norm(res.rd) / 2.0;
    res.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
    return res;
  };

  LpSolution sol;
  sol.status = LpStatus::iteration_limit;
  Iterate best = it;
  double best_err = std::numeric_limits<double>::infinity();
  double progress_mark = best_err;
  int since_progress = 0;

  for (int k = 0; k <= options.max_iterations; ++k) {
    const Residuals res = residuals(it);
    const double err = std::max({res.pres, res.dres, res.gap});
    if (err < best_err) {
      best_err = err;
      best = it;
      sol.iterations = k;
      sol.primal_residual = res.pres;
      sol.dual_residual = res.dres;
      sol.gap = res.gap;
    }
    if (err <= 0.5 * progress_mark) {
      progress_mark = err;
      since_progress = 0;
    } else if (++since_progress >= options.stall_iterations) {
      break;
    }
    if (err <= options.target || k == options.max_iterations) break;

    Blocks d = it.lam;
    d.zip(it.s, [](double l, double s) { return l / s; });
    // Near the optimum the Schur complement can lose definiteness in
    // floating point; retry with growing primal regularization.
    bool factored = false;
    double reg_now = 0.0;
    for (int attempt = 0; attempt < 8 && !factored; ++attempt) {
      try {
        sys.factorize(d, reg_now);
        factored = true;
      } catch (const Error&) {
        reg_now = std::max(reg_now * 100.0, 1e-14 * (1.0 + d.max_abs()));
      }
    }
    if (!factored) break;

    auto direction = [&](const Blocks& rc, Primal& dz, Blocks& ds, Blocks& dl, double& dy) {
      // w = rp - rc / lambda
      Blocks w = rc;
      w.zip(it.lam, [](double a, double l) { return a / l; });
      w.zip(res.rp, [](double a, double b) { return b - a; });
      Blocks dw = w;
      dw.zip(d, [](double a, double b) { return a * b; });
      Primal rho = sys.apply_gt(dw);
      rho.X = -res.rd.X - rho.X;
      rho.T = -res.rd.T - rho.T;

      dz = sys.solve(rho, -res.re, dy);
      for (int refine = 0; refine < 2; ++refine) {
        Primal check = sys.apply_newton(dz, dy);
        Primal diff{rho.X - check.X, rho.T - check.T};
        const double eq_diff = -res.re - dz.X.trace();
        if (inf_norm(diff) <= 1e-14 * (1.0 + inf_norm(rho)) && std::abs(eq_diff) <= 1e-14) break;
        double ddy = 0.0;
        Primal corr = sys.solve(diff, eq_diff, ddy);
        dz.X += corr.X;
        dz.T += corr.T;
        dy += ddy;
      }

      Blocks gdz = sys.apply_g(dz);
      ds = gdz;
      ds.zip(res.rp, [](double g, double p) { return -p - g; });
      dl = gdz;
      dl.zip(w, [](double g, double ww) { return g + ww; });
      dl.zip(d, [](double a, double b) { return a * b; });
    };

    Blocks rc = it.s;
    rc.zip(it.lam, [](double s, double l) { return s * l; });
    Primal dz_aff;
    Blocks ds_aff, dl_aff;
    double dy_aff = 0.0;
    direction(rc, dz_aff, ds_aff, dl_aff, dy_aff);

    const double ap_aff = std::min(1.0, it.s.max_step(ds_aff));
    const double ad_aff = std::min(1.0, it.lam.max_step(dl_aff));
    Blocks s_aff = ds_aff, l_aff = dl_aff;
    s_aff.zip(it.s, [&](double dv, double v) { return v + ap_aff * dv; });
    l_aff.zip(it.lam, [&](double dv, double v) { return v + ad_aff * dv; });
    const double mu_aff = s_aff.dot(l_aff) / n_pairs;
    const double sigma = std::pow(std::max(mu_aff, 0.0) / res.mu, 3.0);

    Blocks cross = ds_aff;
    cross.zip(dl_aff, [](double a, double b) { return a * b; });
    rc.zip(cross, [&](double a, double c) { return a + c - sigma * res.mu; });
    Primal dz;
    Blocks ds, dl;
    double dy = 0.0;
    direction(rc, dz, ds, dl, dy);
    if (!dz.X.allFinite() || !dz.T.allFinite()) break;

    const double step_p = std::min(1.0, 0.995 * it.s.max_step(ds));
    const double step_d = std::min(1.0, 0.995 * it.lam.max_step(dl));

    it.z.X += step_p * dz.X;
    it.z.T += step_p * dz.T;
    it.s.zip(ds, [&](double v, double dv) { return std::max(v + step_p * dv, 1e-300); });
    it.lam.zip(dl, [&](double v, double dv) { return std::max(v + step_d * dv, 1e-300); });
    it.y += step_d * dy;
  }

  sol.X = best.z.X;
  sol.objective = model_h_objective(A, sol.X);
  const double err = std::max({sol.primal_residual, sol.dual_residual, sol.gap});
  const bool audit_ok = audit_model_h(sol.X, model.rank(), tol_lp).feasible;
  if (err <= tol_lp && audit_ok) {
    sol.status = LpStatus::optimal;
  } else if (!std::isfinite(err)) {
    throw Error(ErrorCode::numerical_breakdown, "model H IPM: iterates lost finiteness");
  } else {
    sol.status = LpStatus::iteration_limit;
  }
  return sol;
}

IndexSet postprocess_method_c(const Matrix& A, const Matrix& X, Index r) {
  const Index m = A.cols();
  if (X.rows() != m || X.cols() != m) throw Error(ErrorCode::dimension_mismatch, "method-C: X must be m x m");
  if (r < 1 || r > m) throw Error(ErrorCode::bad_rank, "method-C: r outside [1, m]");

  constexpr double grid = 1e-9;
  auto quant = [](double v) { return std::round(v / grid); };

  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return quant(X(a, a)) > quant(X(b, b)); });
  std::vector<Index> seeds(order.begin(), order.begin() + r);
  for (Index s : seeds) {
    if (quant(X(s, s)) <= 0.0) {
      throw Error(ErrorCode::degenerate_diagonal, "method-C: fewer than r nonzero diagonal entries");
    }
  }
  std::sort(seeds.begin(), seeds.end());

  std::vector<std::vector<Index>> clusters(seeds.size());
  for (Index j = 0; j < m; ++j) {
    if (quant(X(j, j)) <= 0.0) continue;
    std::size_t owner = seeds.size();
    for (std::size_t c = 0; c < seeds.size(); ++c) {
      if (seeds[c] == j) owner = c;
    }
    if (owner == seeds.size()) {
      owner = 0;
      for (std::size_t c = 1; c < seeds.size(); ++c) {
        if (quant(X(seeds[c], j)) > quant(X(seeds[owner], j))) owner = c;
      }
    }
    clusters[owner].push_back(j);
  }

  std::vector<Index> picked;
  for (const auto& members : clusters) {
    Vector centroid = Vector::Zero(A.rows());
    for (Index j : members) centroid += A.col(j);
    centroid /= static_cast<double>(members.size());
    Index best = members.front();
    double best_dist = std::numeric_limits<double>::infinity();
    for (Index j : members) {
      const double dist = quant((A.col(j) - centroid).norm());
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    picked.push_back(best);
  }
  return IndexSet::from_unsorted(std::move(picked));
}

}  // namespace conered
