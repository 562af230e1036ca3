#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tq {

struct Permutation {
  std::vector<std::uint32_t> forward;  // position -> position, a bijection

  std::size_t size() const { return forward.size(); }
  Permutation inverse() const;
  void validate() const;  // throws if not a bijection
};

// Dithered relative-prime permutation: a local read dither, the map
// i -> (offset + i * prime) mod size, then a local write dither. Dither
// window lengths must divide size; prime must be coprime with size.
Permutation make_drp(std::size_t size, std::span<const std::uint32_t> read_dither,
                     std::span<const std::uint32_t> write_dither,
                     std::uint64_t prime, std::uint64_t offset);

Permutation make_random_permutation(std::size_t size, std::uint64_t seed);

// Plain-text format: `size` whitespace-separated integers, the forward image
// of each position in order.
Permutation load_permutation(std::istream& in);
Permutation load_permutation_file(const std::string& path);
void save_permutation(std::ostream& out, const Permutation& p);

// Minimum cyclic distance between the images of adjacent positions.
std::size_t spread(const Permutation& p);

template <typename T>
std::vector<T> interleave(const Permutation& p, std::span<const T> seq) {
  if (seq.size() != p.size()) throw std::invalid_argument("interleave: length mismatch");
  std::vector<T> out(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) out[p.forward[i]] = seq[i];
  return out;
}

template <typename T>
std::vector<T> deinterleave(const Permutation& p, std::span<const T> seq) {
  if (seq.size() != p.size()) throw std::invalid_argument("deinterleave: length mismatch");
  std::vector<T> out(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) out[i] = seq[p.forward[i]];
  return out;
}

}  // namespace tq
