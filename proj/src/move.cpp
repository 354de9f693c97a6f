#include "rjmcmc/move.hpp"

#include <stdexcept>
#include <string>

#include "rjmcmc/model.hpp"

namespace rjmcmc {

void MoveSet::add(std::unique_ptr<JumpMove> move, double weight) {
  if (!(weight > 0.0))
    throw std::invalid_argument("MoveSet::add: weight must be > 0");
  const JumpMove* m = move.get();
  if (m->from_index() == m->to_index())
    throw std::invalid_argument("MoveSet::add: self-move " + m->name());
  table_[{m->from_index(), m->to_index()}].push_back({m, true, weight});
  table_[{m->to_index(), m->from_index()}].push_back({m, false, weight});
  moves_.push_back(std::move(move));
}

const std::vector<MoveSet::Binding>* MoveSet::bindings(int from,
                                                       int to) const {
  auto it = table_.find({from, to});
  return it == table_.end() ? nullptr : &it->second;
}

double MoveSet::selection_prob(int from, int to, const JumpMove* move) const {
  const auto* list = bindings(from, to);
  if (list == nullptr) return 0.0;
  double total = 0.0;
  double own = 0.0;
  for (const auto& b : *list) {
    total += b.weight;
    if (b.move == move) own = b.weight;
  }
  return total > 0.0 ? own / total : 0.0;
}

void MoveSet::validate_against(const ModelSpace& space) const {
  for (const auto& move : moves_) {
    const int n_from = space.model(move->from_index()).dimension();
    const int n_to = space.model(move->to_index()).dimension();
    if (n_from + move->u_dim() != n_to + move->u_dim_reverse())
      throw std::invalid_argument(
          "MoveSet: dimension matching violated by " + move->name() + ": " +
          std::to_string(n_from) + " + " + std::to_string(move->u_dim()) +
          " != " + std::to_string(n_to) + " + " +
          std::to_string(move->u_dim_reverse()));
  }
  for (int i = 0; i < space.size(); ++i) {
    for (const auto& e : space.jumps_from(i)) {
      if (e.target == i) continue;  // self-jump mass needs no move
      if (bindings(i, e.target) == nullptr)
        throw std::invalid_argument("MoveSet: no move serves edge " +
                                    std::to_string(i) + " -> " +
                                    std::to_string(e.target));
    }
  }
}

}  // namespace rjmcmc
