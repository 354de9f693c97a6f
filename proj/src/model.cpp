#include "rjmcmc/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rjmcmc/sampler.hpp"

namespace rjmcmc {

ChainState ModelDefinition::within_model_update(const ChainState& state,
                                                std::span<const double> scales,
                                                Rng& rng) const {
  return mh_within_model_step(state, scales, *this, rng);
}

void ModelSpace::add_model(std::unique_ptr<ModelDefinition> model,
                           double prior_prob) {
  models_.push_back(std::move(model));
  prior_.push_back(prior_prob);
  jumps_.emplace_back();
}

void ModelSpace::use_nearest_neighbour_jumps() {
  const int n = size();
  for (int i = 0; i < n; ++i) {
    std::vector<JumpEdge> edges;
    if (n == 1) {
      edges.push_back({0, 1.0});
    } else if (i == 0) {
      edges.push_back({1, 1.0});
    } else if (i == n - 1) {
      edges.push_back({n - 2, 1.0});
    } else {
      edges.push_back({i - 1, 0.5});
      edges.push_back({i + 1, 0.5});
    }
    jumps_[static_cast<std::size_t>(i)] = std::move(edges);
  }
}

void ModelSpace::set_jumps(int from, std::vector<JumpEdge> edges) {
  jumps_.at(static_cast<std::size_t>(from)) = std::move(edges);
}

void ModelSpace::validate() const {
  if (models_.empty()) throw std::invalid_argument("ModelSpace: no models");
  double total = 0.0;
  for (double p : prior_) {
    if (!(p >= 0.0)) throw std::invalid_argument("ModelSpace: negative p(k)");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("ModelSpace: model prior does not sum to 1");
  for (int i = 0; i < size(); ++i) {
    const auto& edges = jumps_[static_cast<std::size_t>(i)];
    if (edges.empty())
      throw std::invalid_argument("ModelSpace: no jumps from index " +
                                  std::to_string(i));
    double row = 0.0;
    for (const auto& e : edges) {
      if (e.target < 0 || e.target >= size())
        throw std::invalid_argument("ModelSpace: jump target out of range");
      if (!(e.prob > 0.0))
        throw std::invalid_argument("ModelSpace: non-positive jump prob");
      row += e.prob;
      if (e.target != i && jump_prob(e.target, i) <= 0.0)
        throw std::invalid_argument(
            "ModelSpace: jump graph not reversible between " +
            std::to_string(i) + " and " + std::to_string(e.target));
    }
    if (std::abs(row - 1.0) > 1e-12)
      throw std::invalid_argument("ModelSpace: jump row " + std::to_string(i) +
                                  " does not sum to 1");
  }
}

double ModelSpace::log_model_prior(int index) const {
  const double p = model_prior(index);
  return p > 0.0 ? std::log(p) : -HUGE_VAL;
}

double ModelSpace::jump_prob(int from, int to) const {
  for (const auto& e : jumps_.at(static_cast<std::size_t>(from)))
    if (e.target == to) return e.prob;
  return 0.0;
}

int ModelSpace::index_of_label(int label) const {
  for (int i = 0; i < size(); ++i)
    if (model(i).label() == label) return i;
  throw std::invalid_argument("ModelSpace: no model with label " +
                              std::to_string(label));
}

ChainState ModelSpace::make_state(int index, std::vector<double> params) const {
  const ModelDefinition& m = model(index);
  if (static_cast<int>(params.size()) != m.dimension())
    throw std::invalid_argument("ModelSpace::make_state: wrong dimension for " +
                                m.name());
  ChainState s;
  s.model_index = index;
  s.params = std::move(params);
  s.log_likelihood = m.log_likelihood(s.params);
  s.log_prior = m.log_prior(s.params);
  return s;
}

}  // namespace rjmcmc
