#ifndef PNPH_LINALG_HPP
#define PNPH_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace pnph {

using Vec = std::vector<double>;

/// Small dense row-major matrix for effective tensors and block operators.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static Mat diag(const std::vector<double>& d) {
    Mat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
  }

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  Mat transposed() const {
    Mat t(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
  }

  double symmetry_defect() const {
    double m = 0.0;
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
    return m;
  }
};

inline Mat operator*(double s, const Mat& m) {
  Mat r = m;
  for (double& v : r.a) v *= s;
  return r;
}

inline Mat operator*(const Mat& x, const Mat& y) {
  Mat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const double xv = x(i, k);
      if (xv == 0.0) continue;
      for (int j = 0; j < y.cols; ++j) r(i, j) += xv * y(k, j);
    }
  return r;
}

inline std::vector<double> operator*(const Mat& m, const std::vector<double>& v) {
  std::vector<double> r(m.rows, 0.0);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) r[i] += m(i, j) * v[j];
  return r;
}

inline double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

inline void axpy(double a, const Vec& x, Vec& y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

/// Cyclic Jacobi eigensolver for small symmetric matrices (n <= 9 in practice).
/// Returns eigenvalues ascending and the orthonormal eigenvector matrix V
/// (columns are eigenvectors): A = V diag(w) V'.
struct SymEig {
  std::vector<double> values;
  Mat vectors;
};

inline SymEig sym_eig(Mat A) {
  const int n = A.rows;
  Mat V = Mat::identity(n);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-300) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) < 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  // sort ascending
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (A(order[j], order[j]) < A(order[i], order[i])) std::swap(order[i], order[j]);
  SymEig r;
  r.values.resize(n);
  r.vectors = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    r.values[j] = A(order[j], order[j]);
    for (int i = 0; i < n; ++i) r.vectors(i, j) = V(i, order[j]);
  }
  return r;
}

struct IterStats {
  int iterations = 0;
  double residual = 0.0;   // final |Ax-b| / |b|
  bool converged = false;
};

/// Preconditioned conjugate gradient for SPD operators given as functors.
/// `apply(x, y)` computes y = A x; `precond(r, z)` computes z = M^{-1} r
/// (pass identity for none). Convergence on relative unpreconditioned residual.
inline IterStats cg_solve(const std::function<void(const Vec&, Vec&)>& apply,
                          const std::function<void(const Vec&, Vec&)>& precond,
                          const Vec& b, Vec& x, double tol, int max_iter) {
  const size_t n = b.size();
  Vec r(n), z(n), p(n), Ap(n);
  apply(x, Ap);
  for (size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
  const double bnorm = norm2(b);
  const double stop = tol * (bnorm > 0 ? bnorm : 1.0);
  IterStats st;
  double rnorm = norm2(r);
  if (rnorm <= stop) {
    st.converged = true;
    st.residual = (bnorm > 0 ? rnorm / bnorm : rnorm);
    return st;
  }
  precond(r, z);
  p = z;
  double rz = dot(r, z);
  for (int it = 0; it < max_iter; ++it) {
    apply(p, Ap);
    const double pAp = dot(p, Ap);
    if (pAp == 0.0) break;
    const double alpha = rz / pAp;
    axpy(alpha, p, x);
    axpy(-alpha, Ap, r);
    rnorm = norm2(r);
    st.iterations = it + 1;
    if (rnorm <= stop) {
      st.converged = true;
      break;
    }
    precond(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  st.residual = (bnorm > 0 ? rnorm / bnorm : rnorm);
  return st;
}

/// BiCGStab with diagonal preconditioning hook, for the nonsymmetric
/// drift-diffusion systems. Same functor conventions as cg_solve. The
/// recursive residual can drift from the true one on stiff systems, so
/// convergence is only accepted after an explicit residual check; breakdowns
/// restart from the current iterate.
inline IterStats bicgstab_solve(const std::function<void(const Vec&, Vec&)>& apply,
                                const std::function<void(const Vec&, Vec&)>& precond,
                                const Vec& b, Vec& x, double tol, int max_iter) {
  const size_t n = b.size();
  Vec r(n), r0(n), p(n), v(n), s(n), t(n), phat(n), shat(n);
  const double bnorm = norm2(b);
  const double stop = tol * (bnorm > 0 ? bnorm : 1.0);
  IterStats st;

  auto true_residual = [&](Vec& out) {
    apply(x, out);
    for (size_t i = 0; i < n; ++i) out[i] = b[i] - out[i];
    return norm2(out);
  };

  double rnorm = true_residual(r);
  if (rnorm <= stop) {
    st.converged = true;
    st.residual = (bnorm > 0 ? rnorm / bnorm : rnorm);
    return st;
  }
  r0 = r;
  p = r;
  double rho_old = dot(r0, r);
  int it = 0;
  while (it < max_iter) {
    ++it;
    st.iterations = it;
    precond(p, phat);
    apply(phat, v);
    const double r0v = dot(r0, v);
    if (r0v == 0.0) {  // breakdown: restart from the current iterate
      rnorm = true_residual(r);
      if (rnorm <= stop) break;
      r0 = r;
      p = r;
      rho_old = dot(r0, r);
      continue;
    }
    const double alpha = rho_old / r0v;
    for (size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    if (norm2(s) <= 0.1 * stop) {
      axpy(alpha, phat, x);
      rnorm = true_residual(r);
      if (rnorm <= stop) break;
      r0 = r;
      p = r;
      rho_old = dot(r0, r);
      continue;
    }
    precond(s, shat);
    apply(shat, t);
    const double tt = dot(t, t);
    if (tt == 0.0) {
      axpy(alpha, phat, x);
      rnorm = true_residual(r);
      if (rnorm <= stop) break;
      r0 = r;
      p = r;
      rho_old = dot(r0, r);
      continue;
    }
    const double omega = dot(t, s) / tt;
    for (size_t i = 0; i < n; ++i) x[i] += alpha * phat[i] + omega * shat[i];
    for (size_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
    rnorm = norm2(r);
    if (rnorm <= stop) {
      // accept only if the true residual agrees
      rnorm = true_residual(r);
      if (rnorm <= stop) break;
      r0 = r;
      p = r;
      rho_old = dot(r0, r);
      continue;
    }
    if (omega == 0.0) {
      rnorm = true_residual(r);
      if (rnorm <= stop) break;
      r0 = r;
      p = r;
      rho_old = dot(r0, r);
      continue;
    }
    const double rho = dot(r0, r);
    if (rho == 0.0) {
      rnorm = true_residual(r);
      if (rnorm <= stop) break;
      r0 = r;
      p = r;
      rho_old = dot(r0, r);
      continue;
    }
    const double beta = (rho / rho_old) * (alpha / omega);
    for (size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    rho_old = rho;
  }
  st.converged = rnorm <= stop;
  st.residual = (bnorm > 0 ? rnorm / bnorm : rnorm);
  return st;
}

} // namespace pnph

#endif
