#pragma once

// Martingale kernels and their Lipschitz-Markov certification.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kellerer/measures.hpp"

namespace kellerer {

/// A transition kernel x -> pi_x on finitely many source points.
///
/// Sources are strictly increasing; `targets()[i]` is the law of the next
/// state given the current state `sources()[i]`. The martingale property
/// (each target has mean equal to its source) is not enforced here, use
/// `validate_kernel`.
class MartingaleKernel {
 public:
  MartingaleKernel(std::vector<double> sources, std::vector<DiscreteMeasure> targets);

  static MartingaleKernel identity(std::span<const double> points);

  const std::vector<double>& sources() const { return sources_; }
  const std::vector<DiscreteMeasure>& targets() const { return targets_; }
  std::size_t size() const { return sources_.size(); }

  /// Index of the source equal to x within 1e-12 (relative), or size().
  std::size_t find_source(double x) const;
  const DiscreteMeasure& target_of(double x) const;

 private:
  std::vector<double> sources_;
  std::vector<DiscreteMeasure> targets_;
};

struct KernelReport {
  bool pass = false;
  std::vector<double> mean_deviation;  // |mean(pi_x) - x| per source
  double max_deviation = 0.0;
};

KernelReport validate_kernel(const MartingaleKernel& k, double tol = Tolerances{}.mean);

/// Law of the next state when the current state has law mu.
DiscreteMeasure pushforward(const DiscreteMeasure& mu, const MartingaleKernel& k);

/// Two-step kernel x -> sum_y first_x({y}) second_y.
MartingaleKernel compose(const MartingaleKernel& first, const MartingaleKernel& second);

/// Piecewise-linear function with slopes bounded by one in absolute value:
///   f(y) = offset + slopes[0] * y + sum_j (slopes[j+1] - slopes[j]) * (y - knots[j])_+
class Lip1TestFunction {
 public:
  Lip1TestFunction(std::string name, double offset, std::vector<double> knots,
                   std::vector<double> slopes);

  static Lip1TestFunction identity();
  static Lip1TestFunction negated_identity();
  /// y -> |y - a|
  static Lip1TestFunction hinge(double a);
  /// y -> clamp(y, lo, hi)
  static Lip1TestFunction clipped_identity(double lo, double hi);
  /// The maximizer of the Kantorovich dual for W1(alpha, beta): slope
  /// sign(F_alpha - F_beta) between consecutive atoms, so that
  /// integral f d(beta - alpha) = W1(alpha, beta).
  static Lip1TestFunction dual_witness(const DiscreteMeasure& alpha,
                                       const DiscreteMeasure& beta);

  double operator()(double y) const;
  double integrate(const DiscreteMeasure& mu) const;
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  double offset_;
  std::vector<double> knots_;
  std::vector<double> slopes_;
};

struct LmPair {
  std::size_t index = 0;  // sources (index, index + 1)
  double gap = 0.0;
  double w1 = 0.0;
  bool fsd = false;
};

struct LmCertificate {
  bool pass = false;
  std::vector<LmPair> pairs;
  double worst_excess = 0.0;  // max over pairs of w1 - gap
};

/// Lipschitz-Markov check through first order dominance of consecutive
/// targets; the certificate also carries each exact W1.
LmCertificate is_lipschitz_markov(const MartingaleKernel& k, double tol = Tolerances{}.order);

/// W1 between consecutive targets.
std::vector<double> w1_profile(const MartingaleKernel& k);

struct ConditionalReport {
  std::vector<double> values;  // x -> integral f dpi_x
  bool lipschitz = false;
  double worst_excess = 0.0;   // max |g(x_{i+1}) - g(x_i)| - gap
};

ConditionalReport lipschitz_conditional(const MartingaleKernel& k, const Lip1TestFunction& f,
                                        double tol = Tolerances{}.order);

/// Hinges at every target atom, +/- identity and the dual witness of each
/// consecutive pair. Passing all of them is equivalent to Lipschitz-Markov.
std::vector<Lip1TestFunction> lip1_test_family(const MartingaleKernel& k);

}  // namespace kellerer
