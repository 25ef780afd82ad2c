#include <doctest.h>

#include <cmath>
#include <complex>

#include "fadecap/numerics.hpp"

using namespace fadecap;

TEST_CASE("rng stream replays under copy") {
  RngStream a(7, 1);
  RngStream b = a;
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
}

TEST_CASE("rng streams with different addresses diverge") {
  RngStream a(7, 1);
  RngStream b(7, 2);
  RngStream c(8, 1);
  bool ab = true, ac = true;
  for (int i = 0; i < 16; ++i) {
    const double x = a.normal();
    ab = ab && x == b.normal();
    ac = ac && x == c.normal();
  }
  CHECK_FALSE(ab);
  CHECK_FALSE(ac);
}

TEST_CASE("substream derivation leaves the parent untouched") {
  RngStream a(3, 5);
  RngStream mirror = a;
  (void)a.substream(2);
  (void)a.substream(9);
  for (int i = 0; i < 32; ++i) CHECK(a.normal() == mirror.normal());
}

TEST_CASE("substreams are distinct and reproducible") {
  RngStream base(11, 0);
  RngStream s1 = base.substream(1);
  RngStream s1_again = base.substream(1);
  RngStream s2 = base.substream(2);
  CHECK(s1.normal() == s1_again.normal());
  RngStream t1 = base.substream(1);
  RngStream t2 = base.substream(2);
  bool same = true;
  for (int i = 0; i < 16; ++i) same = same && t1.normal() == t2.normal();
  CHECK_FALSE(same);
}

TEST_CASE("gaussian moments") {
  RngStream rng(123, 0);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sq / n - 1.0) < 0.03);
}

TEST_CASE("complex gaussian is circular with unit variance") {
  RngStream rng(123, 1);
  const int n = 200000;
  std::complex<double> mean = 0.0;
  double var = 0.0, re2 = 0.0, im2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::complex<double> z = rng.cnormal();
    mean += z;
    var += std::norm(z);
    re2 += z.real() * z.real();
    im2 += z.imag() * z.imag();
  }
  CHECK(std::abs(mean) / n < 0.02);
  CHECK(std::abs(var / n - 1.0) < 0.03);
  CHECK(std::abs(re2 / n - 0.5) < 0.02);
  CHECK(std::abs(im2 / n - 0.5) < 0.02);
}

TEST_CASE("uniform_below stays in range and rejects zero bound") {
  RngStream rng(5, 0);
  for (int i = 0; i < 1000; ++i) CHECK(rng.uniform_below(7) < 7);
  CHECK_THROWS_AS((void)rng.uniform_below(0), std::invalid_argument);
}

TEST_CASE("hermitian predicate") {
  ComplexMatrix h(2, 2);
  h << std::complex<double>(1, 0), std::complex<double>(2, 3),
      std::complex<double>(2, -3), std::complex<double>(4, 0);
  CHECK(is_hermitian(h));
  h(1, 0) = std::complex<double>(2, -2.9);
  CHECK_FALSE(is_hermitian(h));
  CHECK_THROWS_AS(require_hermitian(h, "test"), std::invalid_argument);
}

TEST_CASE("ginibre sampling shape and scale") {
  RngStream rng(17, 0);
  const ComplexMatrix g = sample_ginibre(3, 2, rng);
  CHECK(g.rows() == 3);
  CHECK(g.cols() == 2);
  double acc = 0.0;
  RngStream rng2(17, 1);
  const int draws = 3000;
  for (int i = 0; i < draws; ++i) acc += sample_ginibre(2, 2, rng2).squaredNorm();
  CHECK(std::abs(acc / draws - 4.0) < 0.15);  // E|g_ij|^2 = 1, 4 entries
}

TEST_CASE("covariance factor reproduces the covariance") {
  RngStream rng(29, 0);
  const ComplexMatrix a = sample_ginibre(3, 3, rng);
  const ComplexMatrix cov = a * a.adjoint();
  CovarianceFactor factor(cov);
  CHECK(factor.dim() == 3);
  CHECK(factor.trace() == doctest::Approx(cov.trace().real()).epsilon(1e-12));

  ComplexMatrix emp = ComplexMatrix::Zero(3, 3);
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) {
    const ComplexVector v = factor.sample(rng);
    emp += v * v.adjoint();
  }
  emp /= draws;
  const double scale = cov.cwiseAbs().maxCoeff();
  CHECK((emp - cov).cwiseAbs().maxCoeff() / scale < 0.05);
}

TEST_CASE("covariance factor keeps rank-deficient draws in range") {
  ComplexMatrix cov = ComplexMatrix::Zero(3, 3);
  cov(0, 0) = 2.0;  // rank one
  CovarianceFactor factor(cov);
  CHECK(factor.rank() == 1);
  RngStream rng(31, 0);
  for (int i = 0; i < 50; ++i) {
    const ComplexVector v = factor.sample(rng);
    CHECK(std::abs(v(1)) == 0.0);
    CHECK(std::abs(v(2)) == 0.0);
  }
}

TEST_CASE("covariance factor rejects non-psd and non-hermitian input") {
  ComplexMatrix bad(2, 2);
  bad << 1.0, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(CovarianceFactor{bad}, std::invalid_argument);
  ComplexMatrix skew(2, 2);
  skew << 1.0, std::complex<double>(0, 1), std::complex<double>(0, 1), 1.0;
  CHECK_THROWS_AS(CovarianceFactor{skew}, std::invalid_argument);
}

TEST_CASE("logdet agrees with direct determinants and is base 2") {
  ComplexMatrix a(2, 2);
  a << 5.0, std::complex<double>(1, 1), std::complex<double>(1, -1), 3.0;
  const double direct = std::log2(std::abs(a.determinant()));
  CHECK(logdet_hpd(a) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(logdet_hpd(ComplexMatrix::Identity(4, 4)) == doctest::Approx(0.0));
  CHECK(logdet_hpd(2.0 * ComplexMatrix::Identity(3, 3)) == doctest::Approx(3.0));
}

TEST_CASE("logdet rejects indefinite matrices and reports the eigenvalue") {
  ComplexMatrix a(2, 2);
  a << 1.0, 0.0, 0.0, -2.0;
  try {
    (void)logdet_hpd(a);
    FAIL("expected NotPositiveDefiniteError");
  } catch (const NotPositiveDefiniteError& e) {
    CHECK(e.smallest_eigenvalue == doctest::Approx(-2.0).epsilon(1e-9));
  }
}

TEST_CASE("operator norm matches known values") {
  ComplexMatrix a(2, 2);
  a << 3.0, 0.0, 0.0, -4.0;
  CHECK(operator_norm(a) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(operator_norm(ComplexMatrix::Zero(2, 3)) == doctest::Approx(0.0));
  // Rank-one uv^H has norm |u||v|.
  ComplexVector u(2), v(3);
  u << 1.0, 2.0;
  v << 2.0, 0.0, 1.0;
  CHECK(operator_norm(u * v.adjoint()) ==
        doctest::Approx(u.norm() * v.norm()).epsilon(1e-12));
}

TEST_CASE("covariance matrix accepts the feasible set only") {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  CovarianceMatrix ok(0.5 * id, 2.0);
  CHECK(ok.trace() == doctest::Approx(1.0));
  CHECK(ok.power_budget() == 2.0);
  CHECK(ok.dim() == 2);

  CHECK_THROWS_AS(CovarianceMatrix(3.0 * id, 2.0), std::invalid_argument);  // budget
  ComplexMatrix neg(2, 2);
  neg << 1.0, 0.0, 0.0, -0.2;
  CHECK_THROWS_AS(CovarianceMatrix(neg, 2.0), std::invalid_argument);
  ComplexMatrix nonherm(2, 2);
  nonherm << 1.0, 0.5, 0.2, 1.0;
  CHECK_THROWS_AS(CovarianceMatrix(nonherm, 4.0), std::invalid_argument);
}

TEST_CASE("projection clips negatives and meets an exceeded budget exactly") {
  ComplexMatrix a(2, 2);
  a << 3.0, 0.0, 0.0, -1.0;
  const CovarianceMatrix proj = project_to_feasible(a, 2.0);
  CHECK(proj.matrix()(0, 0).real() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::abs(proj.matrix()(1, 1)) < 1e-9);
  CHECK(proj.trace() == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("projection is the identity on feasible points") {
  RngStream rng(41, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const ComplexMatrix g = sample_ginibre(3, 3, rng);
    ComplexMatrix q = g * g.adjoint();
    q *= 2.0 / q.trace().real();  // trace 2 < budget 3
    const CovarianceMatrix proj = project_to_feasible(q, 3.0);
    CHECK((proj.matrix() - q).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("projection output is always feasible") {
  RngStream rng(43, 0);
  for (int rep = 0; rep < 50; ++rep) {
    ComplexMatrix h = sample_ginibre(3, 3, rng);
    h = ((h + h.adjoint()) / 2.0).eval();  // Hermitian, generally indefinite
    const double budget = 1.0 + 2.0 * rng.uniform();
    const CovarianceMatrix proj = project_to_feasible(h, budget);
    CHECK(proj.trace() <= budget + 1e-9);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(proj.matrix());
    CHECK(es.eigenvalues().minCoeff() > -1e-9);
  }
}

TEST_CASE("projection moves no feasible point closer than the result") {
  // Frobenius projections are characterized by <h - proj, f - proj> <= 0 for
  // every feasible f; spot-check against random feasible points.
  RngStream rng(47, 0);
  for (int rep = 0; rep < 10; ++rep) {
    ComplexMatrix h = sample_ginibre(2, 2, rng);
    h = ((h + h.adjoint()) * 1.5).eval();
    const double budget = 2.0;
    const ComplexMatrix proj = project_to_feasible(h, budget).matrix();
    for (int k = 0; k < 10; ++k) {
      ComplexMatrix f = sample_ginibre(2, 2, rng);
      f = (f * f.adjoint()).eval();
      f *= budget * rng.uniform() / f.trace().real();
      const double inner = ((h - proj) * (f - proj)).trace().real();
      CHECK(inner <= 1e-7);
    }
  }
}
