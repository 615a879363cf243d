#ifndef BIDISK_RUNTIME_HPP
#define BIDISK_RUNTIME_HPP

#include <cstdint>
#include <functional>
#include <random>

namespace bidisk {

/// Thread budget for batch loops. Reads BIDISK_PICK_THREADS once (clamped to
/// [1, hardware_concurrency]); defaults to 1 so results are reproducible
/// across machines unless the user opts in.
int thread_budget();

/// Runs fn(i) for i in [0, count). Splits the index range across at most
/// thread_budget() threads; fn must only write to slots owned by its index.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Deterministic RNG. mt19937_64 is bit-exact per the standard; the double
/// conversions are done by hand so streams do not depend on the standard
/// library's distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal();

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace bidisk

#endif
