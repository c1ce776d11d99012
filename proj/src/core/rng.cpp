#include "ppfl/core/rng.hpp"

#include "ppfl/core/error.hpp"

namespace ppfl {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

std::uint64_t absorb(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + kGolden + (h << 6) + (h >> 2)));
}

}  // namespace

std::uint64_t rng_key(std::uint64_t seed, std::uint64_t round, std::uint64_t client,
                      std::uint64_t tag) {
  std::uint64_t h = mix64(seed + kGolden);
  h = absorb(h, round);
  h = absorb(h, client);
  h = absorb(h, tag);
  return h;
}

RngStream rng_derive(std::uint64_t seed, std::uint64_t round, std::uint64_t client,
                     std::uint64_t tag) {
  return RngStream(rng_key(seed, round, client, tag));
}

// Distribution objects are constructed fresh per draw: std distributions may
// cache state (normal keeps a spare variate), and hidden state would make the
// draw sequence depend on call history rather than on the stream alone.
double RngStream::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }

double RngStream::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(eng_);
}

double RngStream::normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }

double RngStream::gamma(double shape) {
  return std::gamma_distribution<double>(shape, 1.0)(eng_);
}

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
  require(n > 0, "uniform_int over empty range");
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_);
}

std::vector<double> RngStream::dirichlet(double alpha, std::size_t k) {
  require(alpha > 0.0 && k > 0, "dirichlet needs alpha > 0 and k > 0");
  std::vector<double> v(k);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    v[i] = gamma(alpha);
    sum += v[i];
  }
  if (sum <= 0.0) {  // all gamma draws underflowed (tiny alpha); fall back to uniform
    for (double& x : v) x = 1.0 / static_cast<double>(k);
    return v;
  }
  for (double& x : v) x /= sum;
  return v;
}

}  // namespace ppfl
