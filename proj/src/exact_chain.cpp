#include <cmath>
#include <map>
#include <vector>

#include "rmab/error.hpp"
#include "rmab/simulator.hpp"

namespace rmab {

namespace {

// Replays a fixed prefix of decisions, then answers "true" to every new
// random choice while recording it, so that a depth-first walk over prefixes
// visits each outcome path once.
class EnumeratingChoice final : public ChoiceSource {
 public:
  explicit EnumeratingChoice(const std::vector<char>& prefix) : prefix_(prefix) {}
  bool bernoulli(double p) override {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    const std::size_t k = decisions_.size();
    const bool d = k < prefix_.size() ? prefix_[k] != 0 : true;
    decisions_.push_back(d ? 1 : 0);
    prob_ *= d ? p : 1.0 - p;
    return d;
  }
  const std::vector<char>& decisions() const { return decisions_; }
  double prob() const { return prob_; }

 private:
  const std::vector<char>& prefix_;
  std::vector<char> decisions_;
  double prob_ = 1.0;
};

struct Branch {
  double prob;
  Actions actions;
  std::vector<int> memory;
};

std::vector<Branch> enumerate_step(const Policy& proto, const std::vector<int>& memory,
                                   const ArmPopulation& pop) {
  std::vector<Branch> out;
  std::vector<std::vector<char>> stack{{}};
  while (!stack.empty()) {
    const std::vector<char> prefix = std::move(stack.back());
    stack.pop_back();
    std::unique_ptr<Policy> p = proto.clone();
    p->set_internal_state(memory);
    EnumeratingChoice choice(prefix);
    Branch b;
    p->act(pop, choice, b.actions);
    b.prob = choice.prob();
    b.memory = p->internal_state();
    const auto& d = choice.decisions();
    for (std::size_t k = prefix.size(); k < d.size(); ++k) {
      std::vector<char> alt(d.begin(), d.begin() + static_cast<long>(k));
      alt.push_back(0);
      stack.push_back(std::move(alt));
    }
    if (b.prob > 0.0) out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

double exact_chain_eval(const PolicyContext& ctx, const Policy& proto_in, int n_arms,
                        const InitialCondition& init, std::size_t max_states) {
  const Instance& inst = ctx.inst;
  const int n_states = inst.n_states();
  if (n_arms < 1 || n_arms > 3) throw Error(ErrorCode::kStateSpaceTooLarge, "exact chain supports N <= 3");
  const int budget = budget_for(inst, n_arms);
  std::unique_ptr<Policy> proto = proto_in.clone();
  proto->reset(n_arms);
  const std::vector<int> memory0 = proto->internal_state();

  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> keys;
  auto key_of = [&](const std::vector<int>& states, const std::vector<int>& memory) {
    std::vector<int> key = states;
    key.insert(key.end(), memory.begin(), memory.end());
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (keys.size() >= max_states) throw Error(ErrorCode::kStateSpaceTooLarge, "population chain too large");
    const int id = static_cast<int>(keys.size());
    index.emplace(key, id);
    keys.push_back(key);
    return id;
  };

  // Initial law.
  std::vector<std::pair<int, double>> start;
  if (init.kind == InitKind::kUniformOver) {
    const int k = static_cast<int>(init.support.size());
    int combos = 1;
    for (int i = 0; i < n_arms; ++i) combos *= k;
    for (int c = 0; c < combos; ++c) {
      std::vector<int> states(n_arms);
      int rest = c;
      for (int i = 0; i < n_arms; ++i, rest /= k) states[i] = init.support[rest % k];
      start.emplace_back(key_of(states, memory0), 1.0 / combos);
    }
  } else {
    RandomStream unused(0);
    start.emplace_back(key_of(initial_states(init, ctx.lp, n_arms, unused), memory0), 1.0);
  }

  struct Edge {
    int to;
    double p;
  };
  std::vector<std::vector<Edge>> edges;
  std::vector<double> reward;
  for (std::size_t cur = 0; cur < keys.size(); ++cur) {
    const std::vector<int> key = keys[cur];
    std::vector<int> states(key.begin(), key.begin() + n_arms);
    std::vector<int> memory(key.begin() + n_arms, key.end());
    const ArmPopulation pop(n_states, states);
    std::map<int, double> out;
    double r = 0.0;
    for (const Branch& b : enumerate_step(*proto, memory, pop)) {
      int active = 0;
      double step = 0.0;
      for (int i = 0; i < n_arms; ++i) {
        active += b.actions[i];
        step += inst.r(states[i], b.actions[i]);
      }
      if (active != budget) throw Error(ErrorCode::kBudgetUnreachable, "policy broke the budget");
      r += b.prob * step / n_arms;
      int combos = 1;
      for (int i = 0; i < n_arms; ++i) combos *= n_states;
      std::vector<int> next(n_arms);
      for (int c = 0; c < combos; ++c) {
        int rest = c;
        double p = b.prob;
        for (int i = 0; i < n_arms; ++i, rest /= n_states) {
          next[i] = rest % n_states;
          p *= inst.p(states[i], b.actions[i], next[i]);
        }
        if (p > 0.0) out[key_of(next, b.memory)] += p;
      }
    }
    edges.emplace_back();
    for (auto [to, p] : out) edges.back().push_back({to, p});
    reward.push_back(r);
  }

  // Cesaro limit via the lazy chain (I + P) / 2, which converges for
  // periodic and multichain structure alike.
  const std::size_t m = keys.size();
  std::vector<double> d(m, 0.0), next(m);
  for (auto [id, p] : start) d[id] += p;
  bool converged = false;
  for (int iter = 0; iter < 1000000 && !converged; ++iter) {
    for (std::size_t i = 0; i < m; ++i) next[i] = 0.5 * d[i];
    for (std::size_t i = 0; i < m; ++i)
      for (const Edge& e : edges[i]) next[e.to] += 0.5 * d[i] * e.p;
    double diff = 0.0;
    for (std::size_t i = 0; i < m; ++i) diff += std::abs(next[i] - d[i]);
    d.swap(next);
    converged = diff < 1e-13;
  }
  if (!converged) throw Error(ErrorCode::kNumericalFailure, "Cesaro averaging did not settle");
  double value = 0.0;
  for (std::size_t i = 0; i < m; ++i) value += d[i] * reward[i];
  return value;
}

double exact_chain_eval(std::shared_ptr<const PolicyContext> ctx, const std::string& policy, int n_arms,
                        const InitialCondition& init) {
  const std::unique_ptr<Policy> proto = make_policy(policy, ctx);
  return exact_chain_eval(*ctx, *proto, n_arms, init);
}

}  // namespace rmab
