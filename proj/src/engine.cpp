#include "disco/engine.hpp"

namespace disco {

namespace {

// splitmix64 finalizer (Steele, Lea, Flood; public domain reference mixer).
std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t job_seed, std::uint64_t doc_id) noexcept {
  // job_seed + odd * (doc_id + 1) is injective in doc_id, and the finalizer is
  // a bijection, so distinct documents always get distinct seeds.
  return mix64(job_seed + 0x9e3779b97f4a7c15ULL * (doc_id + 1));
}

}  // namespace disco
