#include "rmab/instance.hpp"

#include <cmath>
#include <sstream>

#include "rmab/error.hpp"

namespace rmab {

Instance::Instance(std::string name, int n_states, double alpha,
                   std::vector<double> transition, std::vector<double> reward)
    : name_(std::move(name)),
      n_states_(n_states),
      alpha_(alpha),
      transition_(std::move(transition)),
      reward_(std::move(reward)) {}

Eigen::MatrixXd Instance::action_matrix(int a) const {
  Eigen::MatrixXd m(n_states_, n_states_);
  for (int s = 0; s < n_states_; ++s)
    for (int t = 0; t < n_states_; ++t) m(s, t) = p(s, a, t);
  return m;
}

double Instance::r_max() const {
  double out = 0.0;
  for (double v : reward_) out = std::max(out, std::abs(v));
  return out;
}

std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> report;
  const int n = inst.n_states();
  if (n <= 0) {
    report.push_back("n_states must be positive");
    return report;
  }
  const std::size_t want_p = static_cast<std::size_t>(n) * 2 * n;
  if (inst.transition_data().size() != want_p) {
    report.push_back("transition has " + std::to_string(inst.transition_data().size()) +
                     " entries, expected " + std::to_string(want_p));
  } else {
    for (int s = 0; s < n; ++s) {
      for (int a = 0; a < 2; ++a) {
        double sum = 0.0;
        for (int t = 0; t < n; ++t) {
          const double v = inst.p(s, a, t);
          if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            std::ostringstream msg;
            msg << "entry P(s=" << s << ",a=" << a << ",s'=" << t << ") = " << v
                << " outside [0,1]";
            report.push_back(msg.str());
          }
          sum += v;
        }
        if (!(std::abs(sum - 1.0) <= 1e-12)) {
          std::ostringstream msg;
          msg << "row (s=" << s << ",a=" << a << ") sums to " << sum;
          report.push_back(msg.str());
        }
      }
    }
  }
  if (inst.reward_data().size() != static_cast<std::size_t>(n) * 2) {
    report.push_back("reward has " + std::to_string(inst.reward_data().size()) +
                     " entries, expected " + std::to_string(2 * n));
  } else {
    for (int s = 0; s < n; ++s)
      for (int a = 0; a < 2; ++a)
        if (!std::isfinite(inst.r(s, a)))
          report.push_back("reward r(s=" + std::to_string(s) + ",a=" + std::to_string(a) +
                           ") is not finite");
  }
  if (!(inst.alpha() > 0.0 && inst.alpha() < 1.0)) report.push_back("alpha outside (0,1)");
  return report;
}

void require_valid(const Instance& inst) {
  const auto report = validate_instance(inst);
  if (report.empty()) return;
  std::string msg = "instance '" + inst.name() + "' is invalid:";
  for (const auto& line : report) msg += "\n  " + line;
  throw Error(ErrorCode::kInvalidInstance, msg);
}

int budget_for(const Instance& inst, int n_arms) {
  if (n_arms <= 0) throw Error(ErrorCode::kOutOfRange, "number of arms must be positive");
  const double target = inst.alpha() * n_arms;
  const double rounded = std::round(target);
  if (std::abs(target - rounded) > 1e-9) {
    std::ostringstream msg;
    msg << "alpha*N = " << inst.alpha() << "*" << n_arms << " is not an integer";
    throw Error(ErrorCode::kAlphaNNotIntegral, msg.str());
  }
  return static_cast<int>(rounded);
}

ArmPopulation::ArmPopulation(int n_states, std::vector<int> states)
    : n_states_(n_states), states_(std::move(states)) {
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i] < 0 || states_[i] >= n_states_)
      throw Error(ErrorCode::kOutOfRange,
                  "arm " + std::to_string(i) + " has state " + std::to_string(states_[i]));
}

int StateCount::total() const {
  int out = 0;
  for (int c : counts) out += c;
  return out;
}

Eigen::RowVectorXd StateCount::scaled() const {
  Eigen::RowVectorXd v(counts.size());
  for (std::size_t s = 0; s < counts.size(); ++s) v(s) = static_cast<double>(counts[s]) / n_arms;
  return v;
}

StateCount operator+(const StateCount& a, const StateCount& b) {
  if (a.n_arms != b.n_arms || a.counts.size() != b.counts.size())
    throw Error(ErrorCode::kOutOfRange, "adding counts of different populations");
  StateCount out = a;
  for (std::size_t s = 0; s < out.counts.size(); ++s) out.counts[s] += b.counts[s];
  return out;
}

StateCount state_count(const ArmPopulation& pop, std::span<const int> subset) {
  StateCount out{std::vector<int>(pop.n_states(), 0), pop.n_arms()};
  for (int arm : subset) {
    if (arm < 0 || arm >= pop.n_arms())
      throw Error(ErrorCode::kOutOfRange, "arm id " + std::to_string(arm) + " out of range");
    ++out.counts[pop.state(arm)];
  }
  return out;
}

StateCount state_count(const ArmPopulation& pop) {
  StateCount out{std::vector<int>(pop.n_states(), 0), pop.n_arms()};
  for (int s : pop.states()) ++out.counts[s];
  return out;
}

Eigen::MatrixXd StateActionCount::scaled() const {
  const int n = static_cast<int>(counts.size() / 2);
  Eigen::MatrixXd y(n, 2);
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < 2; ++a) y(s, a) = value(s, a);
  return y;
}

StateActionCount state_action_count(const ArmPopulation& pop,
                                    std::span<const std::uint8_t> actions) {
  if (static_cast<int>(actions.size()) != pop.n_arms())
    throw Error(ErrorCode::kOutOfRange, "actions length " + std::to_string(actions.size()) +
                                            " does not match " + std::to_string(pop.n_arms()) +
                                            " arms");
  StateActionCount out{std::vector<int>(static_cast<std::size_t>(pop.n_states()) * 2, 0),
                       pop.n_arms()};
  for (int i = 0; i < pop.n_arms(); ++i) ++out.counts[pop.state(i) * 2 + (actions[i] ? 1 : 0)];
  return out;
}

}  // namespace rmab
