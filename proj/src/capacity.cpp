#include "fadecap/capacity.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace fadecap {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double logdet_bits_from_llt(const Eigen::LLT<ComplexMatrix>& llt, Eigen::Index n) {
  double bits = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < n; ++i) bits += std::log2(l(i, i).real());
  return 2.0 * bits;
}

}  // namespace

double capacity_integrand(const ComplexMatrix& gains, const ComplexMatrix& q,
                          double sigma2) {
  if (gains.rows() == 1 && gains.cols() == 1) {
    const double s = std::norm(gains(0, 0)) * q(0, 0).real() / sigma2;
    return std::log2(1.0 + s);
  }
  const Eigen::Index nr = gains.rows();
  ComplexMatrix m = ComplexMatrix::Identity(nr, nr) + gains * q * gains.adjoint() / sigma2;
  m = 0.5 * (m + m.adjoint()).eval();
  Eigen::LLT<ComplexMatrix> llt(m);
  if (llt.info() != Eigen::Success) return logdet_hpd(m);
  return logdet_bits_from_llt(llt, nr);
}

McEstimate phi(const CovarianceMatrix& q, const ChannelParams& params,
               std::size_t samples, RngStream rng, int threads) {
  params.validate();
  if (q.dim() != params.n_t)
    throw std::invalid_argument("phi: covariance dimension does not match n_t");
  const ComplexMatrix& qm = q.matrix();
  McAccumulator acc = run_mc_accumulate(
      samples, rng, threads,
      [&](std::size_t, std::size_t count, RngStream& stream, McAccumulator& a) {
        ComplexMatrix g(params.n_r, params.n_t);
        for (std::size_t i = 0; i < count; ++i) {
          fill_ginibre(g, stream);
          a.add(capacity_integrand(g, qm, params.sigma2));
        }
      });
  return McEstimate{acc.mean(), acc.standard_error(), acc.count(), rng.master_seed()};
}

ComplexMatrix phi_gradient(const CovarianceMatrix& q, const ChannelParams& params,
                           std::size_t samples, RngStream rng, int threads) {
  params.validate();
  if (q.dim() != params.n_t)
    throw std::invalid_argument("phi_gradient: covariance dimension does not match n_t");
  const ComplexMatrix& qm = q.matrix();
  const Eigen::Index nr = params.n_r;
  const Eigen::Index nt = params.n_t;
  ComplexMatrix mean = run_mc_matrix_mean(
      nt, nt, samples, rng, threads,
      [&](std::size_t, std::size_t count, RngStream& stream, ComplexMatrix& sum) {
        ComplexMatrix g(nr, nt);
        const ComplexMatrix eye = ComplexMatrix::Identity(nr, nr);
        for (std::size_t i = 0; i < count; ++i) {
          fill_ginibre(g, stream);
          ComplexMatrix m = eye + g * qm * g.adjoint() / params.sigma2;
          m = 0.5 * (m + m.adjoint()).eval();
          sum += g.adjoint() * Eigen::LLT<ComplexMatrix>(m).solve(g);
        }
      });
  mean /= params.sigma2 * kLn2;
  return 0.5 * (mean + mean.adjoint()).eval();
}

void SolverOptions::validate() const {
  if (samples_per_iteration < 1)
    throw std::invalid_argument("SolverOptions: samples_per_iteration must be positive");
  if (!(step_size >= 0.0))
    throw std::invalid_argument("SolverOptions: step_size must be nonnegative");
  if (!(tolerance > 0.0))
    throw std::invalid_argument("SolverOptions: tolerance must be positive");
  if (restarts < 1) throw std::invalid_argument("SolverOptions: restarts must be at least 1");
}

SolveResult solve_capacity(const ChannelParams& params, const SolverOptions& opts,
                           RngStream rng, int threads) {
  params.validate();
  opts.validate();
  const double iso = params.p / params.n_t;
  const ComplexMatrix isotropic = iso * ComplexMatrix::Identity(params.n_t, params.n_t);
  const std::size_t fresh =
      opts.final_samples > 0 ? opts.final_samples : opts.samples_per_iteration;
  const RngStream saa = rng.substream(1);
  const RngStream final_stream = rng.substream(2);

  if (opts.max_iterations == 0) {
    CovarianceMatrix q0(isotropic, params.p);
    McEstimate cap = phi(q0, params, fresh, final_stream, threads);
    return SolveResult{cap, std::move(q0), false, 0};
  }

  const auto objective = [&](const CovarianceMatrix& q) {
    return phi(q, params, opts.samples_per_iteration, saa, threads).mean;
  };
  const double step0 =
      opts.step_size > 0.0 ? opts.step_size : 0.1 * params.sigma2 * kLn2 / params.n_r;

  double best_value = 0.0;
  bool best_converged = false;
  bool have_best = false;
  ComplexMatrix best_q;
  std::size_t iterations = 0;

  for (std::size_t r = 0; r < opts.restarts; ++r) {
    CovarianceMatrix q = [&] {
      if (r == 0) return CovarianceMatrix(isotropic, params.p);
      RngStream init = rng.substream(16 + r);
      const ComplexMatrix a = sample_ginibre(params.n_t, params.n_t, init);
      return project_to_feasible(iso * (a * a.adjoint()) / params.n_t, params.p);
    }();
    double value = objective(q);
    double step = step0;
    std::size_t quiet = 0;
    bool converged = false;
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
      ++iterations;
      const ComplexMatrix grad =
          phi_gradient(q, params, opts.samples_per_iteration, saa, threads);
      CovarianceMatrix candidate =
          project_to_feasible(q.matrix() + step * grad, params.p);
      const double candidate_value = objective(candidate);
      double improvement = candidate_value - value;
      if (improvement > 0.0) {
        q = std::move(candidate);
        value = candidate_value;
      } else {
        step *= 0.5;
        improvement = 0.0;
      }
      quiet = improvement < opts.tolerance ? quiet + 1 : 0;
      if (quiet >= 5) {
        converged = true;
        break;
      }
    }
    if (!have_best || value > best_value) {
      have_best = true;
      best_value = value;
      best_q = q.matrix();
      best_converged = converged;
    }
  }

  CovarianceMatrix argmax(best_q, params.p);
  McEstimate cap = phi(argmax, params, fresh, final_stream, threads);
  return SolveResult{cap, std::move(argmax), best_converged, iterations};
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double siso_capacity_quadrature(double snr) {
  if (!(snr > 0.0))
    throw std::invalid_argument("siso_capacity_quadrature: snr must be positive");
  const auto f = [snr](double x) { return std::log2(1.0 + snr * x) * std::exp(-x); };
  // Beyond x0 the exponential weight makes the remainder negligible next to
  // the 1e-10 quadrature tolerance.
  const double x0 = 64.0 + 8.0 * std::log1p(snr);
  const double fa = f(0.0);
  const double fm = f(0.5 * x0);
  const double fb = f(x0);
  const double whole = x0 / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, 0.0, x0, fa, fm, fb, whole, 1e-10, 48);
}

}  // namespace fadecap
