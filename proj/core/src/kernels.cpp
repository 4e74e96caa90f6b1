#include "kellerer/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kellerer {

namespace {
bool matches(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a));
}
}  // namespace

MartingaleKernel::MartingaleKernel(std::vector<double> sources,
                                   std::vector<DiscreteMeasure> targets)
    : sources_(std::move(sources)), targets_(std::move(targets)) {
  if (sources_.size() != targets_.size()) {
    throw std::invalid_argument("kernel: need one target per source");
  }
  for (std::size_t i = 0; i + 1 < sources_.size(); ++i) {
    if (!(sources_[i] < sources_[i + 1])) {
      throw std::invalid_argument("kernel: sources must be strictly increasing");
    }
  }
}

MartingaleKernel MartingaleKernel::identity(std::span<const double> points) {
  std::vector<double> src(points.begin(), points.end());
  std::vector<DiscreteMeasure> tgt;
  tgt.reserve(src.size());
  for (double x : src) tgt.push_back(DiscreteMeasure::dirac(x));
  return MartingaleKernel(std::move(src), std::move(tgt));
}

std::size_t MartingaleKernel::find_source(double x) const {
  auto it = std::lower_bound(sources_.begin(), sources_.end(), x);
  if (it != sources_.end() && matches(*it, x)) return static_cast<std::size_t>(it - sources_.begin());
  if (it != sources_.begin() && matches(*(it - 1), x)) {
    return static_cast<std::size_t>(it - sources_.begin()) - 1;
  }
  return sources_.size();
}

const DiscreteMeasure& MartingaleKernel::target_of(double x) const {
  const std::size_t i = find_source(x);
  if (i == sources_.size()) {
    throw std::out_of_range("kernel: no source at " + std::to_string(x));
  }
  return targets_[i];
}

KernelReport validate_kernel(const MartingaleKernel& k, double tol) {
  KernelReport r;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double d = std::abs(mean(k.targets()[i]) - k.sources()[i]);
    r.mean_deviation.push_back(d);
    r.max_deviation = std::max(r.max_deviation, d);
  }
  r.pass = r.max_deviation <= tol;
  return r;
}

DiscreteMeasure pushforward(const DiscreteMeasure& mu, const MartingaleKernel& k) {
  std::vector<double> xs;
  std::vector<double> ws;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto& target = k.target_of(mu.atoms()[i]);
    for (std::size_t j = 0; j < target.size(); ++j) {
      xs.push_back(target.atoms()[j]);
      ws.push_back(mu.weights()[i] * target.weights()[j]);
    }
  }
  return DiscreteMeasure(std::move(xs), std::move(ws));
}

MartingaleKernel compose(const MartingaleKernel& first, const MartingaleKernel& second) {
  std::vector<DiscreteMeasure> targets;
  targets.reserve(first.size());
  for (const auto& t : first.targets()) {
    try {
      targets.push_back(pushforward(t, second));
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("compose: a target of the first kernel leaves the "
                                  "source set of the second");
    }
  }
  return MartingaleKernel(first.sources(), std::move(targets));
}

Lip1TestFunction::Lip1TestFunction(std::string name, double offset, std::vector<double> knots,
                                   std::vector<double> slopes)
    : name_(std::move(name)), offset_(offset), knots_(std::move(knots)), slopes_(std::move(slopes)) {
  if (slopes_.size() != knots_.size() + 1) {
    throw std::invalid_argument("lip1: need one more slope than knots");
  }
  for (double s : slopes_) {
    if (std::abs(s) > 1.0) throw std::invalid_argument("lip1: slope exceeds one");
  }
  if (!std::is_sorted(knots_.begin(), knots_.end())) {
    throw std::invalid_argument("lip1: knots must be sorted");
  }
}

Lip1TestFunction Lip1TestFunction::identity() { return {"identity", 0.0, {}, {1.0}}; }

Lip1TestFunction Lip1TestFunction::negated_identity() { return {"-identity", 0.0, {}, {-1.0}}; }

Lip1TestFunction Lip1TestFunction::hinge(double a) {
  return {"hinge@" + std::to_string(a), a, {a}, {-1.0, 1.0}};
}

Lip1TestFunction Lip1TestFunction::clipped_identity(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("lip1: clip bounds must satisfy lo < hi");
  return {"clip[" + std::to_string(lo) + "," + std::to_string(hi) + "]", lo, {lo, hi}, {0.0, 1.0, 0.0}};
}

Lip1TestFunction Lip1TestFunction::dual_witness(const DiscreteMeasure& alpha,
                                                const DiscreteMeasure& beta) {
  const auto z = union_atoms(alpha, beta);
  std::vector<double> slopes{0.0};
  double fa = 0.0;
  double fb = 0.0;
  std::size_t ia = 0;
  std::size_t ib = 0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    while (ia < alpha.size() && alpha.atoms()[ia] <= z[j]) fa += alpha.weights()[ia++];
    while (ib < beta.size() && beta.atoms()[ib] <= z[j]) fb += beta.weights()[ib++];
    if (j + 1 == z.size()) {
      slopes.push_back(0.0);
    } else {
      const double d = fa - fb;
      slopes.push_back(d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0));
    }
  }
  // Anchor f(z[0]) = 0: with slope 0 to the left, the offset is 0.
  return {"dual-witness", 0.0, z, slopes};
}

double Lip1TestFunction::operator()(double y) const {
  double v = offset_ + slopes_[0] * y;
  for (std::size_t j = 0; j < knots_.size(); ++j) {
    v += (slopes_[j + 1] - slopes_[j]) * std::max(y - knots_[j], 0.0);
  }
  return v;
}

double Lip1TestFunction::integrate(const DiscreteMeasure& mu) const {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += mu.weights()[i] * (*this)(mu.atoms()[i]);
  return s;
}

LmCertificate is_lipschitz_markov(const MartingaleKernel& k, double tol) {
  LmCertificate c;
  c.pass = true;
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    LmPair p;
    p.index = i;
    p.gap = k.sources()[i + 1] - k.sources()[i];
    p.w1 = w1(k.targets()[i], k.targets()[i + 1]);
    p.fsd = fsd(k.targets()[i], k.targets()[i + 1], tol);
    c.worst_excess = std::max(c.worst_excess, p.w1 - p.gap);
    c.pass = c.pass && p.fsd;
    c.pairs.push_back(p);
  }
  return c;
}

std::vector<double> w1_profile(const MartingaleKernel& k) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < k.size(); ++i) out.push_back(w1(k.targets()[i], k.targets()[i + 1]));
  return out;
}

ConditionalReport lipschitz_conditional(const MartingaleKernel& k, const Lip1TestFunction& f,
                                        double tol) {
  ConditionalReport r;
  for (const auto& t : k.targets()) r.values.push_back(f.integrate(t));
  r.lipschitz = true;
  r.worst_excess = k.size() > 1 ? -INFINITY : 0.0;
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    const double gap = k.sources()[i + 1] - k.sources()[i];
    const double excess = std::abs(r.values[i + 1] - r.values[i]) - gap;
    r.worst_excess = std::max(r.worst_excess, excess);
    if (excess > tol) r.lipschitz = false;
  }
  return r;
}

std::vector<Lip1TestFunction> lip1_test_family(const MartingaleKernel& k) {
  std::vector<Lip1TestFunction> family{Lip1TestFunction::identity(),
                                       Lip1TestFunction::negated_identity()};
  std::vector<double> atoms;
  for (const auto& t : k.targets()) atoms.insert(atoms.end(), t.atoms().begin(), t.atoms().end());
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  for (double a : atoms) family.push_back(Lip1TestFunction::hinge(a));
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    family.push_back(Lip1TestFunction::dual_witness(k.targets()[i], k.targets()[i + 1]));
  }
  return family;
}

}  // namespace kellerer
