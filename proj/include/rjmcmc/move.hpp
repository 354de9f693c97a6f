#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rjmcmc/rng.hpp"

namespace rjmcmc {

class ModelSpace;

// Random input of a between-model proposal: a continuous vector plus an
// optional discrete choice (which component to split, which change-point
// to delete, ...). The choice does not enter dimension matching; its
// selection probability is part of the proposal density.
struct UVec {
  int choice = -1;
  std::vector<double> values;
};

// A between-model transition template, oriented from one model index to
// another. The pair (theta_from, u) maps bijectively to (theta_to, u_rev),
// where u_rev is the randomness the reverse transition would consume;
// dimension matching requires
//   dim(theta_from) + u_dim() == dim(theta_to) + u_dim_reverse().
// Proposal densities may depend on the departure state (calibrated
// proposals) but must be deterministic functions of it, and they include
// the probability of any discrete choice.
class JumpMove {
public:
  virtual ~JumpMove() = default;

  virtual std::string name() const = 0;
  virtual int from_index() const = 0;
  virtual int to_index() const = 0;
  virtual int u_dim() const = 0;
  virtual int u_dim_reverse() const = 0;
  // True when the reverse transition consumes no randomness at all
  // (no continuous vector, no discrete choice). Multi-step wrappers
  // require this of their base move.
  virtual bool deterministic_reverse() const { return u_dim_reverse() == 0; }

  // Both maps return false on degenerate input (treated as a rejected
  // proposal, never an error).
  virtual bool apply_forward(std::span<const double> theta, const UVec& u,
                             std::vector<double>& theta_out,
                             UVec& u_rev_out) const = 0;
  virtual bool apply_reverse(std::span<const double> theta,
                             const UVec& u_rev,
                             std::vector<double>& theta_out,
                             UVec& u_out) const = 0;

  // log |d(theta_to, u_rev) / d(theta_from, u)| at (theta, u).
  virtual double log_jacobian_forward(std::span<const double> theta,
                                      const UVec& u) const = 0;

  virtual UVec sample_u_forward(std::span<const double> theta_from,
                                Rng& rng) const = 0;
  virtual UVec sample_u_reverse(std::span<const double> theta_to,
                                Rng& rng) const = 0;
  virtual double log_u_density_forward(std::span<const double> theta_from,
                                       const UVec& u) const = 0;
  virtual double log_u_density_reverse(std::span<const double> theta_to,
                                       const UVec& u_rev) const = 0;
};

// Registry of moves keyed by ordered model-index pair. Several moves may
// serve the same pair (split/merge plus birth/death); they are selected
// with probability proportional to their registered weight and the
// selection probability enters the acceptance ratio.
class MoveSet {
public:
  struct Binding {
    const JumpMove* move = nullptr;
    bool forward = true;
    double weight = 1.0;  // unnormalised
  };

  void add(std::unique_ptr<JumpMove> move, double weight = 1.0);

  const std::vector<Binding>* bindings(int from, int to) const;
  // Probability of selecting this binding's move among all moves on the
  // (from -> to) edge.
  double selection_prob(int from, int to, const JumpMove* move) const;
  // Every between-model edge of the space's jump graph must be served by
  // at least one move.
  void validate_against(const ModelSpace& space) const;

  bool empty() const { return moves_.empty(); }

private:
  std::vector<std::unique_ptr<JumpMove>> moves_;
  std::map<std::pair<int, int>, std::vector<Binding>> table_;
};

}  // namespace rjmcmc
