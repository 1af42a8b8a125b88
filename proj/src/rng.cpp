#include "berrylab/rng.hpp"

#include "berrylab/errors.hpp"

namespace berrylab {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t seed = mix64(master);
  for (std::uint64_t component : path) {
    seed = mix64(seed ^ mix64(component + 0x9e3779b97f4a7c15ULL));
  }
  return seed;
}

const char* error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain-error";
    case ErrorKind::Precondition: return "precondition-violation";
    case ErrorKind::Config: return "config-error";
    case ErrorKind::Numerical: return "numerical-failure";
    case ErrorKind::Io: return "io-error";
  }
  return "unknown";
}

}  // namespace berrylab
