#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "divstat/errors.hpp"
#include "divstat/factor.hpp"
#include "divstat/matrix.hpp"
#include "divstat/scalar.hpp"

using namespace divstat;

namespace {

Scalar random_scalar(int beta, std::mt19937_64& gen) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Scalar s(beta);
  for (int k = 0; k < beta; ++k) s.set_coeff(k, nd(gen));
  return s;
}

Matrix random_matrix(int beta, int rows, int cols, std::mt19937_64& gen) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix m(beta, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      for (int k = 0; k < beta; ++k) m.set_coeff(i, j, k, nd(gen));
  return m;
}

// Random Hermitian positive definite matrix A A* + eps I.
HermMatrix random_hpd(int beta, int dim, std::mt19937_64& gen) {
  HermMatrix h = gram(random_matrix(beta, dim, dim + 2, gen));
  for (int i = 0; i < dim; ++i) h.set_diag(i, h.diag(i) + 0.5);
  return h;
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

// Octonion basis multiplication table, built here from scratch as an oracle.
// Basis (e0..e7), e0 = 1.  The seven oriented triples (a, b, c) each mean
// ea eb = ec, eb ec = ea, ec ea = eb (and the reversed products negate).
// Together with e0 central and ek^2 = -1 this fixes all 64 products.
struct OctTable {
  // sign[a][b] and index[a][b] encode ea eb = sign * e_index.
  int sign[8][8];
  int index[8][8];

  OctTable() {
    const int triples[7][3] = {{1, 2, 3}, {1, 4, 5}, {1, 7, 6}, {2, 4, 6},
                               {2, 5, 7}, {3, 4, 7}, {3, 6, 5}};
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) {
        sign[a][b] = 0;
        index[a][b] = -1;
      }
    for (int k = 0; k < 8; ++k) {
      sign[0][k] = sign[k][0] = 1;
      index[0][k] = index[k][0] = k;
      if (k > 0) {
        sign[k][k] = -1;
        index[k][k] = 0;
      }
    }
    for (const auto& t : triples) {
      const int a = t[0], b = t[1], c = t[2];
      const int cyc[3][3] = {{a, b, c}, {b, c, a}, {c, a, b}};
      for (const auto& p : cyc) {
        sign[p[0]][p[1]] = 1;
        index[p[0]][p[1]] = p[2];
        sign[p[1]][p[0]] = -1;
        index[p[1]][p[0]] = p[2];
      }
    }
  }
};

}  // namespace

TEST_CASE("beta validation") {
  CHECK(valid_beta(1));
  CHECK(valid_beta(2));
  CHECK(valid_beta(4));
  CHECK(valid_beta(8));
  CHECK_FALSE(valid_beta(3));
  CHECK_THROWS_AS(Scalar(5), ParameterError);
  CHECK_THROWS_AS(Matrix(8, 2, 2), ParameterError);   // octonion matrices unsupported
  CHECK_THROWS_AS(HermMatrix(8, 2), ParameterError);
}

TEST_CASE("quaternion basis products") {
  const Scalar i = Scalar::unit(4, 1);
  const Scalar j = Scalar::unit(4, 2);
  const Scalar k = Scalar::unit(4, 3);
  CHECK(approx_equal(i * j, k, 0.0));
  CHECK(approx_equal(j * k, i, 0.0));
  CHECK(approx_equal(k * i, j, 0.0));
  CHECK(approx_equal(j * i, -k, 0.0));
  CHECK(approx_equal(i * i, Scalar(4, -1.0), 0.0));
}

TEST_CASE("octonion basis products match the oriented-triple table") {
  const OctTable table;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const Scalar got = Scalar::unit(8, a) * Scalar::unit(8, b);
      Scalar want = Scalar::unit(8, table.index[a][b]) * double(table.sign[a][b]);
      CAPTURE(a);
      CAPTURE(b);
      CHECK(approx_equal(got, want, 0.0));
    }
}

TEST_CASE("octonions are nonassociative but alternative") {
  const Scalar e1 = Scalar::unit(8, 1);
  const Scalar e2 = Scalar::unit(8, 2);
  const Scalar e4 = Scalar::unit(8, 4);
  // (e1 e2) e4 = e3 e4 = e7 while e1 (e2 e4) = e1 e6 = -e7.
  CHECK(approx_equal((e1 * e2) * e4, Scalar::unit(8, 7), 0.0));
  CHECK(approx_equal(e1 * (e2 * e4), -Scalar::unit(8, 7), 0.0));

  std::mt19937_64 gen(7u);
  for (int rep = 0; rep < 200; ++rep) {
    const Scalar x = random_scalar(8, gen);
    const Scalar y = random_scalar(8, gen);
    const Scalar lhs1 = (x * x) * y, rhs1 = x * (x * y);
    const Scalar lhs2 = (x * y) * y, rhs2 = x * (y * y);
    CHECK(approx_equal(lhs1, rhs1, 1e-12 * (lhs1.norm() + 1.0)));
    CHECK(approx_equal(lhs2, rhs2, 1e-12 * (lhs2.norm() + 1.0)));
  }
}

TEST_CASE("multiplicative norm, conjugation, inverses") {
  std::mt19937_64 gen(11u);
  for (int beta : {1, 2, 4, 8}) {
    for (int rep = 0; rep < 10000; ++rep) {
      const Scalar x = random_scalar(beta, gen);
      const Scalar y = random_scalar(beta, gen);
      const Scalar xy = x * y;
      CHECK(rel_err(xy.norm(), x.norm() * y.norm()) < 1e-12);
      if (rep < 200) {
        // conj(x y) = conj(y) conj(x)
        const Scalar lhs = xy.conj();
        const Scalar rhs = y.conj() * x.conj();
        CHECK(approx_equal(lhs, rhs, 1e-12 * (lhs.norm() + 1.0)));
        // x x^{-1} = 1
        const Scalar unit = x * x.inverse();
        CHECK(approx_equal(unit, Scalar(beta, 1.0), 1e-12));
      }
    }
  }
  CHECK_THROWS_AS(Scalar(4).inverse(), DomainError);
}

TEST_CASE("matrix product order respects noncommutativity") {
  // [j] * [i] must give [-k], not [k].
  Matrix a(4, 1, 1), b(4, 1, 1);
  a.set(0, 0, Scalar::unit(4, 2));
  b.set(0, 0, Scalar::unit(4, 1));
  CHECK(approx_equal(matmul(a, b).at(0, 0), -Scalar::unit(4, 3), 0.0));

  std::mt19937_64 gen(13u);
  for (int beta : {1, 2, 4}) {
    const Matrix x = random_matrix(beta, 3, 4, gen);
    const Matrix y = random_matrix(beta, 4, 2, gen);
    // adjoint(X Y) = adjoint(Y) adjoint(X)
    const Matrix lhs = adjoint(matmul(x, y));
    const Matrix rhs = matmul(adjoint(y), adjoint(x));
    CHECK((lhs - rhs).frobenius_norm() < 1e-12 * (1.0 + lhs.frobenius_norm()));
  }
}

TEST_CASE("hermitian packing and gram constructions") {
  std::mt19937_64 gen(17u);
  for (int beta : {1, 2, 4}) {
    const Matrix x = random_matrix(beta, 3, 5, gen);
    const HermMatrix g = gram(x);
    const Matrix full = matmul(x, adjoint(x));
    CHECK((g.to_matrix() - full).frobenius_norm() < 1e-12 * (1.0 + full.frobenius_norm()));

    const HermMatrix gr = gram_reverse(x);
    const Matrix fullr = matmul(adjoint(x), x);
    CHECK((gr.to_matrix() - fullr).frobenius_norm() < 1e-12 * (1.0 + fullr.frobenius_norm()));

    // from_matrix round trip and symmetry validation
    const HermMatrix packed = HermMatrix::from_matrix(full, 1e-9);
    CHECK((packed.to_matrix() - full).frobenius_norm() < 1e-12 * (1.0 + full.frobenius_norm()));
    CHECK_THROWS_AS(HermMatrix::from_matrix(x), DimensionError);
    CHECK_THROWS_AS(HermMatrix::from_matrix(x.block(0, 0, 3, 3)), DomainError);

    Matrix asym = full;
    asym.set_coeff(0, 1, 0, asym.coeff(0, 1, 0) + 1.0);
    CHECK_THROWS_AS(HermMatrix::from_matrix(asym), DomainError);

    // trace_product(A, B) = Re tr(A B)
    const HermMatrix a = random_hpd(beta, 3, gen);
    const HermMatrix b = random_hpd(beta, 3, gen);
    const Matrix ab = matmul(a.to_matrix(), b.to_matrix());
    double tr = 0.0;
    for (int i = 0; i < 3; ++i) tr += ab.coeff(i, i, 0);
    CHECK(rel_err(trace_product(a, b), tr) < 1e-12);
  }
}

TEST_CASE("triangular solves") {
  std::mt19937_64 gen(19u);
  for (int beta : {1, 2, 4}) {
    Matrix l = random_matrix(beta, 4, 4, gen);
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) l.set(i, j, Scalar(beta));
      l.set(i, i, Scalar(beta, 2.0 + i));
    }
    const Matrix u = adjoint(l);
    const Matrix b = random_matrix(beta, 4, 3, gen);
    const Matrix wide = random_matrix(beta, 3, 4, gen);

    const Matrix x1 = solve_lower_left(l, b);
    CHECK((matmul(l, x1) - b).frobenius_norm() < 1e-10);

    const Matrix x2 = solve_upper_left(u, b);
    CHECK((matmul(u, x2) - b).frobenius_norm() < 1e-10);

    const Matrix x3 = solve_upper_right(u, wide);
    CHECK((matmul(x3, u) - wide).frobenius_norm() < 1e-10);
  }
}

TEST_CASE("cholesky of a known matrix") {
  HermMatrix h(1, 2);
  h.set_diag(0, 4.0);
  h.set_diag(1, 3.0);
  h.set(1, 0, Scalar(1, 2.0));
  const Matrix l = cholesky(h);
  CHECK(l.coeff(0, 0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(l.coeff(0, 1, 0) == doctest::Approx(0.0));
  CHECK(l.coeff(1, 0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(l.coeff(1, 1, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(logdet_hpd(h) == doctest::Approx(std::log(8.0)).epsilon(1e-12));
}

TEST_CASE("cholesky, inverse and square root round trips") {
  std::mt19937_64 gen(23u);
  for (int beta : {1, 2, 4}) {
    for (int dim : {1, 2, 4}) {
      const HermMatrix h = random_hpd(beta, dim, gen);
      const Matrix l = cholesky(h);
      CHECK((gram(l).to_matrix() - h.to_matrix()).frobenius_norm() <
            1e-9 * (1.0 + h.to_matrix().frobenius_norm()));
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) CHECK(l.at(i, j).norm() == 0.0);

      const HermMatrix inv = inverse_hpd(h);
      const Matrix prod = matmul(h.to_matrix(), inv.to_matrix());
      CHECK((prod - Matrix::identity(beta, dim)).frobenius_norm() < 1e-9);

      const HermMatrix s = sqrt_hpd(h);
      const Matrix s2 = matmul(s.to_matrix(), s.to_matrix());
      CHECK((s2 - h.to_matrix()).frobenius_norm() <
            1e-8 * (1.0 + h.to_matrix().frobenius_norm()));

      CHECK(is_positive_definite(h));
      HermMatrix neg = h;
      neg.set_diag(0, -1.0);
      CHECK_FALSE(is_positive_definite(neg));
    }
  }
  HermMatrix singular(2, 2);
  singular.set_diag(0, 1.0);
  singular.set_diag(1, 1.0);
  singular.set(1, 0, Scalar(2, 1.0));
  CHECK_THROWS_AS(cholesky(singular), NotPositiveDefiniteError);
}

TEST_CASE("complex embedding is an algebra homomorphism") {
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) {
      Matrix a(4, 1, 1), b(4, 1, 1);
      a.set(0, 0, Scalar::unit(4, p));
      b.set(0, 0, Scalar::unit(4, q));
      const CMatrix lhs = cmat_mul(complex_embed(a), complex_embed(b));
      const CMatrix rhs = complex_embed(matmul(a, b));
      REQUIRE(lhs.rows == 2);
      REQUIRE(lhs.cols == 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          CHECK(std::abs(lhs.at(i, j) - rhs.at(i, j)) < 1e-15);
    }

  // j embeds to [[0, 1], [-1, 0]]
  Matrix j(4, 1, 1);
  j.set(0, 0, Scalar::unit(4, 2));
  const CMatrix ej = complex_embed(j);
  CHECK(ej.at(0, 0) == std::complex<double>(0.0, 0.0));
  CHECK(ej.at(0, 1) == std::complex<double>(1.0, 0.0));
  CHECK(ej.at(1, 0) == std::complex<double>(-1.0, 0.0));
  CHECK(ej.at(1, 1) == std::complex<double>(0.0, 0.0));

  std::mt19937_64 gen(29u);
  for (int beta : {1, 2, 4}) {
    const Matrix x = random_matrix(beta, 3, 3, gen);
    const Matrix y = random_matrix(beta, 3, 3, gen);
    const CMatrix lhs = cmat_mul(complex_embed(x), complex_embed(y));
    const CMatrix rhs = complex_embed(matmul(x, y));
    double err = 0.0;
    for (int i = 0; i < lhs.rows; ++i)
      for (int jj = 0; jj < lhs.cols; ++jj) err += std::abs(lhs.at(i, jj) - rhs.at(i, jj));
    CHECK(err < 1e-12);

    // Embedded trace and log determinant scale with the embedding multiplicity.
    const HermMatrix h = random_hpd(beta, 3, gen);
    const double mult = beta == 4 ? 2.0 : 1.0;
    CHECK(rel_err(cmat_trace(complex_embed(h)).real(), mult * h.trace()) < 1e-12);

    const std::vector<double> ev = complex_hermitian_eigenvalues(complex_embed(h));
    double ld = 0.0;
    for (double v : ev) ld += std::log(v);
    CHECK(rel_err(ld, mult * logdet_hpd(h)) < 1e-9);
  }
}

TEST_CASE("hermitian eigenvalues of known matrices") {
  {
    HermMatrix h(2, 2);
    h.set_diag(0, 2.0);
    h.set_diag(1, 2.0);
    Scalar off(2);  // entry (1,0) = -i, so that (0,1) = i
    off.set_coeff(1, -1.0);
    h.set(1, 0, off);
    const std::vector<double> ev = herm_eigenvalues(h);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    HermMatrix h(4, 2);
    h.set_diag(0, 2.0);
    h.set_diag(1, 2.0);
    Scalar off(4);  // entry (1,0) = -j, so that (0,1) = j
    off.set_coeff(2, -1.0);
    h.set(1, 0, off);
    const std::vector<double> ev = herm_eigenvalues(h);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("eigen decomposition reconstructs the matrix") {
  std::mt19937_64 gen(31u);
  for (int beta : {1, 2, 4}) {
    const HermMatrix h = random_hpd(beta, 4, gen);
    const CMatrix a = complex_embed(h);
    CMatrix vecs;
    const std::vector<double> ev = complex_hermitian_eigenvalues(a, &vecs);
    REQUIRE(int(ev.size()) == a.rows);
    for (size_t i = 1; i < ev.size(); ++i) CHECK(ev[i - 1] >= ev[i] - 1e-12);

    // A V = V diag(ev)
    const CMatrix av = cmat_mul(a, vecs);
    double err = 0.0;
    for (int i = 0; i < a.rows; ++i)
      for (int j = 0; j < a.cols; ++j)
        err += std::abs(av.at(i, j) - vecs.at(i, j) * ev[static_cast<size_t>(j)]);
    CHECK(err < 1e-9 * (1.0 + std::abs(cmat_trace(a))));

    // Eigenvalue sum and product match trace and determinant.
    double sum = 0.0;
    for (double v : ev) sum += v;
    CHECK(rel_err(sum, cmat_trace(a).real()) < 1e-11);
  }
}

TEST_CASE("singular value decomposition over each algebra") {
  std::mt19937_64 gen(37u);
  for (int beta : {1, 2, 4}) {
    for (auto [m, n] : {std::pair{2, 2}, std::pair{2, 5}, std::pair{3, 4}}) {
      const Matrix x = random_matrix(beta, m, n, gen);
      const SvdResult res = svd(x);
      REQUIRE(int(res.singulars.size()) == m);
      for (int i = 1; i < m; ++i) CHECK(res.singulars[i - 1] >= res.singulars[i]);
      CHECK(res.singulars[m - 1] > 0.0);

      // Reconstruction X = V* D W.
      Matrix dw = res.right_rows;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
          dw.set(i, j, dw.at(i, j) * res.singulars[static_cast<size_t>(i)]);
      const Matrix rec = matmul(adjoint(res.left), dw);
      CHECK((rec - x).frobenius_norm() < 1e-10 * (1.0 + x.frobenius_norm()));

      // Factors are unitary / row-orthonormal.
      CHECK((gram(res.left).to_matrix() - Matrix::identity(beta, m)).frobenius_norm() < 1e-10);
      CHECK((gram(res.right_rows).to_matrix() - Matrix::identity(beta, m)).frobenius_norm() <
            1e-10);

      // Squared singular values are the eigenvalues of X X*.
      const std::vector<double> ev = herm_eigenvalues(gram(x));
      REQUIRE(int(ev.size()) == m);
      for (int i = 0; i < m; ++i)
        CHECK(rel_err(res.singulars[static_cast<size_t>(i)] *
                          res.singulars[static_cast<size_t>(i)],
                      ev[static_cast<size_t>(i)]) < 1e-9);
    }
  }

  // Rank-deficient input is rejected.
  Matrix bad(1, 2, 3);
  for (int j = 0; j < 3; ++j) {
    bad.set_coeff(0, j, 0, 1.0 + j);
    bad.set_coeff(1, j, 0, 2.0 * (1.0 + j));
  }
  CHECK_THROWS_AS(svd(bad), DegenerateInputError);
}
