#pragma once
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace ppfl {

// Purpose tags for derived streams. Every random decision in a run pulls from
// its own (seed, round, client, tag) stream, so execution order and thread
// count cannot perturb any draw.
namespace rng_tag {
inline constexpr std::uint64_t init_theta = 1;
inline constexpr std::uint64_t block_choice = 2;
inline constexpr std::uint64_t theta_batch = 3;
inline constexpr std::uint64_t c_batch = 4;
inline constexpr std::uint64_t data = 5;
inline constexpr std::uint64_t split = 6;
inline constexpr std::uint64_t output_index = 7;
inline constexpr std::uint64_t truth = 8;
}  // namespace rng_tag

// Client slot for server-scoped draws.
inline constexpr std::uint64_t kServer = ~std::uint64_t{0};

class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : eng_(key) {}

  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal();             // N(0, 1)
  double gamma(double shape);  // Gamma(shape, 1)
  std::uint64_t uniform_int(std::uint64_t n);  // [0, n)
  std::vector<double> dirichlet(double alpha, std::size_t k);

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[static_cast<std::size_t>(uniform_int(i))]);
  }

 private:
  std::mt19937_64 eng_;
};

std::uint64_t rng_key(std::uint64_t seed, std::uint64_t round, std::uint64_t client,
                      std::uint64_t tag);
RngStream rng_derive(std::uint64_t seed, std::uint64_t round, std::uint64_t client,
                     std::uint64_t tag);

}  // namespace ppfl
