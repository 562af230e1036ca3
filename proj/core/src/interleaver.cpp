#include "tq/interleaver.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "tq/rng.hpp"

namespace tq {

Permutation Permutation::inverse() const {
  Permutation inv;
  inv.forward.resize(forward.size());
  for (std::uint32_t i = 0; i < forward.size(); ++i)
    inv.forward[forward[i]] = i;
  return inv;
}

void Permutation::validate() const {
  std::vector<std::uint8_t> seen(forward.size(), 0);
  for (const std::uint32_t image : forward) {
    if (image >= forward.size() || seen[image])
      throw std::invalid_argument("permutation: forward map is not a bijection");
    seen[image] = 1;
  }
}

namespace {

void check_dither(std::span<const std::uint32_t> dither, std::size_t size,
                  const char* which) {
  if (dither.empty() || size % dither.size() != 0)
    throw std::invalid_argument(std::string("drp: ") + which +
                                " dither window must divide the size");
  std::vector<std::uint8_t> seen(dither.size(), 0);
  for (const std::uint32_t v : dither) {
    if (v >= dither.size() || seen[v])
      throw std::invalid_argument(std::string("drp: ") + which +
                                  " dither is not a permutation of its window");
    seen[v] = 1;
  }
}

}  // namespace

Permutation make_drp(std::size_t size, std::span<const std::uint32_t> read_dither,
                     std::span<const std::uint32_t> write_dither,
                     std::uint64_t prime, std::uint64_t offset) {
  if (size == 0) throw std::invalid_argument("drp: empty permutation");
  if (std::gcd(prime, static_cast<std::uint64_t>(size)) != 1)
    throw std::invalid_argument("drp: prime must be coprime with the size");
  check_dither(read_dither, size, "read");
  check_dither(write_dither, size, "write");

  const std::size_t rw = read_dither.size();
  const std::size_t ww = write_dither.size();
  Permutation p;
  p.forward.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t read = i / rw * rw + read_dither[i % rw];
    const std::size_t rp = (offset + read * prime) % size;
    p.forward[i] = static_cast<std::uint32_t>(rp / ww * ww + write_dither[rp % ww]);
  }
  p.validate();
  return p;
}

Permutation make_random_permutation(std::size_t size, std::uint64_t seed) {
  Permutation p;
  p.forward.resize(size);
  std::iota(p.forward.begin(), p.forward.end(), 0u);
  std::mt19937_64 engine(seed);
  for (std::size_t i = size; i > 1; --i) {
    const std::size_t j = engine() % i;
    std::swap(p.forward[i - 1], p.forward[j]);
  }
  return p;
}

Permutation load_permutation(std::istream& in) {
  Permutation p;
  long long v;
  while (in >> v) {
    if (v < 0) throw std::invalid_argument("permutation file: negative entry");
    p.forward.push_back(static_cast<std::uint32_t>(v));
  }
  if (p.forward.empty())
    throw std::invalid_argument("permutation file: no entries");
  p.validate();
  return p;
}

Permutation load_permutation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("permutation file: cannot open " + path);
  return load_permutation(in);
}

void save_permutation(std::ostream& out, const Permutation& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    out << p.forward[i] << (i + 1 == p.size() ? '\n' : ' ');
}

std::size_t spread(const Permutation& p) {
  const std::size_t n = p.size();
  if (n < 2) return n;
  std::size_t best = n;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t a = p.forward[i];
    const std::size_t b = p.forward[i + 1];
    const std::size_t d = a > b ? a - b : b - a;
    best = std::min(best, std::min(d, n - d));
  }
  return best;
}

}  // namespace tq
