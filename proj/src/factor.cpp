#include "divstat/factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace divstat {

namespace {

constexpr double kPdRelTol = 1e-12;
constexpr double kPairRelTol = 1e-8;

}  // namespace

CMatrix cmat_mul(const CMatrix& a, const CMatrix& b) {
  if (a.cols != b.rows) throw DimensionError("cmat_mul shape mismatch");
  CMatrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const std::complex<double> aik = a.at(i, k);
      for (int j = 0; j < b.cols; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

std::complex<double> cmat_trace(const CMatrix& a) {
  std::complex<double> t = 0.0;
  for (int i = 0; i < std::min(a.rows, a.cols); ++i) t += a.at(i, i);
  return t;
}

CMatrix complex_embed(const Matrix& a) {
  const int beta = a.beta();
  if (beta <= 2) {
    CMatrix c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j)
        c.at(i, j) = {a.coeff(i, j, 0), beta == 2 ? a.coeff(i, j, 1) : 0.0};
    return c;
  }
  CMatrix c(2 * a.rows(), 2 * a.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      const std::complex<double> alpha{a.coeff(i, j, 0), a.coeff(i, j, 1)};
      const std::complex<double> gamma{a.coeff(i, j, 2), a.coeff(i, j, 3)};
      c.at(2 * i, 2 * j) = alpha;
      c.at(2 * i, 2 * j + 1) = gamma;
      c.at(2 * i + 1, 2 * j) = -std::conj(gamma);
      c.at(2 * i + 1, 2 * j + 1) = std::conj(alpha);
    }
  }
  return c;
}

CMatrix complex_embed(const HermMatrix& h) { return complex_embed(h.to_matrix()); }

std::vector<double> complex_hermitian_eigenvalues(const CMatrix& a, CMatrix* vectors) {
  if (a.rows != a.cols) throw DimensionError("eigenvalues need a square matrix");
  const int n = a.rows;
  CMatrix w = a;

  // Accumulate U = J_K ... J_1 so that diag = U A U*; eigenvectors are the
  // columns of U*.
  CMatrix u;
  if (vectors) {
    u = CMatrix(n, n);
    for (int i = 0; i < n; ++i) u.at(i, i) = 1.0;
  }

  double scale = 0.0;
  for (const auto& z : w.data) scale = std::max(scale, std::abs(z));
  if (scale == 0.0) scale = 1.0;

  const int max_sweeps = 80;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(w.at(p, q)));
    if (off <= 1e-15 * scale) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const std::complex<double> apq = w.at(p, q);
        const double h = std::abs(apq);
        if (h <= 1e-300) continue;
        const std::complex<double> phase = apq / h;
        const double app = w.at(p, p).real();
        const double aqq = w.at(q, q).real();
        const double zeta = (aqq - app) / (2.0 * h);
        const double t =
            (zeta >= 0.0 ? -1.0 : 1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;

        // Rows p, q of the unitary J differ from the identity by
        //   [c, s*phase; -s*conj(phase), c].
        auto rotate_rows = [&](CMatrix& m) {
          for (int j = 0; j < m.cols; ++j) {
            const std::complex<double> xp = m.at(p, j);
            const std::complex<double> xq = m.at(q, j);
            m.at(p, j) = c * xp + s * phase * xq;
            m.at(q, j) = -s * std::conj(phase) * xp + c * xq;
          }
        };
        rotate_rows(w);
        // Columns transform by J*.
        for (int i = 0; i < n; ++i) {
          const std::complex<double> xp = w.at(i, p);
          const std::complex<double> xq = w.at(i, q);
          w.at(i, p) = c * xp + s * std::conj(phase) * xq;
          w.at(i, q) = -s * phase * xp + c * xq;
        }
        if (vectors) rotate_rows(u);
      }
    }
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return w.at(i, i).real() > w.at(j, j).real(); });

  std::vector<double> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    values[static_cast<std::size_t>(i)] = w.at(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]).real();

  if (vectors) {
    *vectors = CMatrix(n, n);
    for (int jout = 0; jout < n; ++jout) {
      const int src = order[static_cast<std::size_t>(jout)];
      // Column jout of V = U* is the conjugate of row src of U.
      for (int i = 0; i < n; ++i) vectors->at(i, jout) = std::conj(u.at(src, i));
    }
  }
  return values;
}

std::vector<double> herm_eigenvalues(const HermMatrix& h) {
  const std::vector<double> ev = complex_hermitian_eigenvalues(complex_embed(h));
  if (h.beta() != 4) return ev;

  double scale = 0.0;
  for (double v : ev) scale = std::max(scale, std::abs(v));
  std::vector<double> out;
  out.reserve(ev.size() / 2);
  for (std::size_t i = 0; i + 1 < ev.size(); i += 2) {
    if (std::abs(ev[i] - ev[i + 1]) > kPairRelTol * std::max(scale, 1e-300)) {
      throw InternalConsistencyError(
          "quaternion eigenvalue pair mismatch: " + std::to_string(ev[i]) + " vs " +
          std::to_string(ev[i + 1]));
    }
    out.push_back(0.5 * (ev[i] + ev[i + 1]));
  }
  return out;
}

bool is_positive_definite(const HermMatrix& h, double rel_tol) {
  const std::vector<double> ev = herm_eigenvalues(h);
  const double largest = ev.front();
  const double smallest = ev.back();
  return largest > 0.0 && smallest > rel_tol * largest;
}

double logdet_hpd(const HermMatrix& h) {
  const std::vector<double> ev = herm_eigenvalues(h);
  if (ev.back() <= 0.0) {
    throw NotPositiveDefiniteError("logdet of a non positive definite matrix");
  }
  double s = 0.0;
  for (double v : ev) s += std::log(v);
  return s;
}

Matrix cholesky(const HermMatrix& h) {
  const int n = h.dim();
  Matrix l(h.beta(), n, n);
  double max_diag = 0.0;
  for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, h.diag(i));
  if (max_diag <= 0.0) throw NotPositiveDefiniteError("cholesky: nonpositive diagonal");

  for (int j = 0; j < n; ++j) {
    double piv = h.diag(j);
    for (int k = 0; k < j; ++k) piv -= l.at(j, k).norm_sq();
    if (piv <= kPdRelTol * max_diag) {
      throw NotPositiveDefiniteError("cholesky pivot " + std::to_string(j) +
                                     " not positive: " + std::to_string(piv));
    }
    const double d = std::sqrt(piv);
    l.set(j, j, Scalar(h.beta(), d));
    const double inv_d = 1.0 / d;
    for (int i = j + 1; i < n; ++i) {
      Scalar acc = h.at(i, j);
      for (int k = 0; k < j; ++k) acc -= l.at(i, k) * l.at(j, k).conj();
      l.set(i, j, acc * inv_d);
    }
  }
  return l;
}

HermMatrix inverse_hpd(const HermMatrix& h) {
  const Matrix l = cholesky(h);
  const Matrix linv = solve_lower_left(l, Matrix::identity(h.beta(), h.dim()));
  return gram_reverse(linv);  // (L^{-1})* L^{-1} = H^{-1}
}

namespace {

HermMatrix unembed_hermitian(const CMatrix& e, int beta, int dim) {
  HermMatrix out(beta, dim);
  if (beta <= 2) {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < i; ++j) {
        Scalar s(beta);
        s.set_coeff(0, e.at(i, j).real());
        if (beta == 2) s.set_coeff(1, e.at(i, j).imag());
        out.set(i, j, s);
      }
      out.set_diag(i, e.at(i, i).real());
    }
    return out;
  }

  double scale = 0.0;
  for (const auto& z : e.data) scale = std::max(scale, std::abs(z));
  scale = std::max(scale, 1e-300);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      const std::complex<double> b00 = e.at(2 * i, 2 * j);
      const std::complex<double> b01 = e.at(2 * i, 2 * j + 1);
      const std::complex<double> b10 = e.at(2 * i + 1, 2 * j);
      const std::complex<double> b11 = e.at(2 * i + 1, 2 * j + 1);
      const double resid = std::abs(b00 - std::conj(b11)) + std::abs(b01 + std::conj(b10));
      if (resid > 1e-8 * scale) {
        throw InternalConsistencyError(
            "complex matrix is not in the image of the quaternion embedding");
      }
      const std::complex<double> alpha = 0.5 * (b00 + std::conj(b11));
      const std::complex<double> gamma = 0.5 * (b01 - std::conj(b10));
      Scalar s(4);
      s.set_coeff(0, alpha.real());
      s.set_coeff(1, alpha.imag());
      s.set_coeff(2, gamma.real());
      s.set_coeff(3, gamma.imag());
      if (i == j) {
        out.set_diag(i, alpha.real());
      } else {
        out.set(i, j, s);
      }
    }
  }
  return out;
}

}  // namespace

HermMatrix sqrt_hpd(const HermMatrix& h) {
  CMatrix v;
  const std::vector<double> ev = complex_hermitian_eigenvalues(complex_embed(h), &v);
  if (ev.back() <= 0.0) throw NotPositiveDefiniteError("sqrt of a non PD matrix");
  const int n = v.rows;
  CMatrix root(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::complex<double> acc = 0.0;
      for (int k = 0; k < n; ++k)
        acc += v.at(i, k) * std::sqrt(ev[static_cast<std::size_t>(k)]) * std::conj(v.at(j, k));
      root.at(i, j) = acc;
    }
  }
  return unembed_hermitian(root, h.beta(), h.dim());
}

SvdResult svd(const Matrix& x) {
  const int m = x.rows();
  const int n = x.cols();
  if (m > n) throw DimensionError("svd requires rows <= cols");
  const int beta = x.beta();

  Matrix w = x;                            // rows become orthogonal
  Matrix v = Matrix::identity(beta, m);    // accumulated rotations, X = V* D W1

  auto row_dot = [&](const Matrix& a, int p, int q) {
    Scalar acc(beta);
    for (int k = 0; k < a.cols(); ++k) acc += a.at(p, k) * a.at(q, k).conj();
    return acc;
  };
  auto row_norm_sq = [&](const Matrix& a, int p) {
    double s = 0.0;
    for (int k = 0; k < a.cols(); ++k) s += a.at(p, k).norm_sq();
    return s;
  };

  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double worst = 0.0;
    for (int p = 0; p < m; ++p) {
      for (int q = p + 1; q < m; ++q) {
        const double a = row_norm_sq(w, p);
        const double b = row_norm_sq(w, q);
        const Scalar hpq = row_dot(w, p, q);
        const double habs = hpq.norm();
        if (a <= 0.0 || b <= 0.0) continue;
        worst = std::max(worst, habs / std::sqrt(a * b));
        if (habs <= 1e-15 * std::sqrt(a * b)) continue;

        const Scalar u = hpq * (1.0 / habs);
        const double zeta = (b - a) / (2.0 * habs);
        const double t =
            (zeta >= 0.0 ? -1.0 : 1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;

        // [row_p; row_q] <- [[c, s u], [-s conj(u), c]] [row_p; row_q]
        auto rotate_rows = [&](Matrix& mref) {
          for (int k = 0; k < mref.cols(); ++k) {
            const Scalar xp = mref.at(p, k);
            const Scalar xq = mref.at(q, k);
            mref.set(p, k, xp * c + (u * xq) * s);
            mref.set(q, k, xq * c - (u.conj() * xp) * s);
          }
        };
        rotate_rows(w);
        rotate_rows(v);
      }
    }
    if (worst <= 1e-14) break;
  }

  std::vector<int> order(static_cast<std::size_t>(m));
  std::vector<double> norms(static_cast<std::size_t>(m));
  for (int p = 0; p < m; ++p) {
    order[static_cast<std::size_t>(p)] = p;
    norms[static_cast<std::size_t>(p)] = std::sqrt(row_norm_sq(w, p));
  }
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return norms[static_cast<std::size_t>(i)] > norms[static_cast<std::size_t>(j)];
  });

  SvdResult r;
  r.singulars.resize(static_cast<std::size_t>(m));
  r.left = Matrix(beta, m, m);
  r.right_rows = Matrix(beta, m, n);
  for (int p = 0; p < m; ++p) {
    const int src = order[static_cast<std::size_t>(p)];
    const double sigma = norms[static_cast<std::size_t>(src)];
    r.singulars[static_cast<std::size_t>(p)] = sigma;
    for (int j = 0; j < m; ++j) r.left.set(p, j, v.at(src, j));
    if (sigma > 0.0) {
      const double inv = 1.0 / sigma;
      for (int j = 0; j < n; ++j) r.right_rows.set(p, j, w.at(src, j) * inv);
    }
  }

  const double smax = r.singulars.front();
  if (smax <= 0.0 || r.singulars.back() < 1e-12 * smax) {
    throw DegenerateInputError("svd: input is rank deficient");
  }
  for (std::size_t i = 0; i + 1 < r.singulars.size(); ++i) {
    if (r.singulars[i] - r.singulars[i + 1] < 1e-12 * smax) r.degenerate_ties = true;
  }
  return r;
}

}  // namespace divstat
