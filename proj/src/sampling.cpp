#include "apc/sampling.hpp"

#include "apc/error.hpp"
#include "apc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace apc {

std::string_view to_string(Sampler sampler) {
  switch (sampler) {
    case Sampler::induced:
      return "induced";
    case Sampler::mc:
      return "mc";
    case Sampler::equilibrium:
      return "equilibrium";
  }
  return "unknown";
}

Sampler parse_sampler(std::string_view name) {
  if (name == "induced") return Sampler::induced;
  if (name == "mc") return Sampler::mc;
  if (name == "equilibrium" || name == "csa") return Sampler::equilibrium;
  throw Error("unknown sampler '" + std::string(name) + "' (expected induced, mc or equilibrium)");
}

DiscreteDistribution::DiscreteDistribution(std::vector<double> weights) : probabilities_(std::move(weights)) {
  if (probabilities_.empty()) throw Error("discrete distribution needs at least one atom");
  double total = 0.0;
  for (double w : probabilities_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error("discrete distribution weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw Error("discrete distribution weights sum to zero");
  cumulative_.resize(probabilities_.size());
  double running = 0.0;
  for (std::size_t j = 0; j < probabilities_.size(); ++j) {
    probabilities_[j] /= total;
    running += probabilities_[j];
    cumulative_[j] = running;
  }
  // Pin the end of the table so every u in [0, 1) lands on an atom. Trailing
  // zero-mass atoms stay unreachable.
  for (std::size_t j = cumulative_.size(); j-- > 0;) {
    if (probabilities_[j] > 0.0 || j == 0) {
      std::fill(cumulative_.begin() + static_cast<std::ptrdiff_t>(j), cumulative_.end(), 1.0);
      break;
    }
  }
}

std::size_t DiscreteDistribution::index_for(double u) const {
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) return cumulative_.size() - 1;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

namespace {

std::vector<double> induced_masses(const std::vector<double>& kappa, const std::vector<double>& base) {
  if (base.empty()) return kappa;
  if (base.size() != kappa.size()) throw Error("one base weight per atom required");
  std::vector<double> mass(kappa.size());
  for (std::size_t j = 0; j < kappa.size(); ++j) mass[j] = base[j] * kappa[j];
  return mass;
}

}  // namespace

InducedDiscreteMeasure::InducedDiscreteMeasure(Eigen::MatrixXd atoms, std::vector<double> kappa,
                                               const std::vector<double>& base_weights)
    : atoms_(std::move(atoms)), kappa_(std::move(kappa)), table_(induced_masses(kappa_, base_weights)) {
  if (static_cast<Eigen::Index>(kappa_.size()) != atoms_.rows()) throw Error("one kappa value per atom required");
}

InducedDiscreteMeasure induced_measure(const TensorBasis& basis, const SampleSet& samples) {
  if (basis.dim() != samples.dim()) throw Error("basis and sample set dimensions differ");
  std::vector<double> kappa(static_cast<std::size_t>(samples.count()));
  Eigen::VectorXd z(samples.dim());
  for (Eigen::Index j = 0; j < samples.count(); ++j) {
    z = samples.point(j).transpose();
    kappa[static_cast<std::size_t>(j)] =
        basis.christoffel(std::span<const double>(z.data(), static_cast<std::size_t>(z.size())));
  }
  const bool uniform = (samples.weights().array() == samples.weights()[0]).all();
  if (uniform) return InducedDiscreteMeasure(samples.points(), std::move(kappa));
  return InducedDiscreteMeasure(
      samples.points(), std::move(kappa),
      std::vector<double>(samples.weights().data(), samples.weights().data() + samples.count()));
}

SubsamplePlan draw_induced(const InducedDiscreteMeasure& measure, Eigen::Index count, std::uint64_t seed) {
  if (count < 1) throw Error("sample count must be >= 1");
  Rng rng(seed);
  SubsamplePlan plan;
  plan.sampler = Sampler::induced;
  plan.seed = seed;
  plan.points.resize(count, measure.atoms().cols());
  plan.weights.resize(count);
  plan.source_rows.resize(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) {
    const auto row = measure.table().index_for(rng.uniform());
    plan.points.row(i) = measure.atoms().row(static_cast<Eigen::Index>(row));
    plan.weights[i] = 1.0 / measure.kappa()[row];
    plan.source_rows[static_cast<std::size_t>(i)] = static_cast<long>(row);
  }
  return plan;
}

SubsamplePlan draw_mc(const SampleSet& samples, Eigen::Index count, std::uint64_t seed) {
  if (count < 1) throw Error("sample count must be >= 1");
  const DiscreteDistribution table(
      std::vector<double>(samples.weights().data(), samples.weights().data() + samples.count()));
  Rng rng(seed);
  SubsamplePlan plan;
  plan.sampler = Sampler::mc;
  plan.seed = seed;
  plan.points.resize(count, samples.dim());
  plan.weights = Eigen::VectorXd::Ones(count);
  plan.source_rows.resize(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) {
    const auto row = table.index_for(rng.uniform());
    plan.points.row(i) = samples.point(static_cast<Eigen::Index>(row));
    plan.source_rows[static_cast<std::size_t>(i)] = static_cast<long>(row);
  }
  return plan;
}

SubsamplePlan draw_equilibrium(const TensorBasis& basis, const std::vector<Interval>& bounds, Eigen::Index count,
                               std::uint64_t seed) {
  if (count < 1) throw Error("sample count must be >= 1");
  if (bounds.size() != static_cast<std::size_t>(basis.dim())) throw Error("need one bound per dimension");
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    if (!(bounds[i].hi > bounds[i].lo) || !std::isfinite(bounds[i].lo) || !std::isfinite(bounds[i].hi)) {
      throw Error("degenerate equilibrium bounds in dimension " + std::to_string(i + 1));
    }
  }
  Rng rng(seed);
  SubsamplePlan plan;
  plan.sampler = Sampler::equilibrium;
  plan.seed = seed;
  plan.points.resize(count, basis.dim());
  plan.weights.resize(count);
  plan.source_rows.assign(static_cast<std::size_t>(count), -1);
  Eigen::VectorXd z(basis.dim());
  for (Eigen::Index r = 0; r < count; ++r) {
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      const double mid = 0.5 * (bounds[i].lo + bounds[i].hi);
      const double half = 0.5 * (bounds[i].hi - bounds[i].lo);
      z[static_cast<Eigen::Index>(i)] = mid + half * std::cos(std::numbers::pi * rng.uniform());
    }
    plan.points.row(r) = z.transpose();
    plan.weights[r] = 1.0 / basis.christoffel(std::span<const double>(z.data(), static_cast<std::size_t>(z.size())));
  }
  return plan;
}

}  // namespace apc
