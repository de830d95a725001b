#pragma once

#include <cstdint>
#include <random>

namespace rmab {

std::uint64_t splitmix64(std::uint64_t& state);

// Seed of an independent stream: splitmix64 chained over the three words.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication, std::uint64_t tag);

enum StreamTag : std::uint64_t {
  kTagInitialState = 0x494e4954,
  kTagTransitions = 0x54524e53,
  kTagPolicy = 0x504f4c59,
  kTagInstance = 0x494e5354,
};

// Policies draw all their randomness through this interface, which lets the
// exact-chain evaluator enumerate every outcome instead of sampling.
class ChoiceSource {
 public:
  virtual ~ChoiceSource() = default;
  // p <= 0 returns false and p >= 1 returns true without consuming a choice.
  virtual bool bernoulli(double p) = 0;
};

class RandomStream final : public ChoiceSource {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) override {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }
  // Uniform integer in [0, n).
  int below(int n) { return static_cast<int>(uniform() * n); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rmab
