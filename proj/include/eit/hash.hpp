#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace eit {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;

inline std::uint64_t fnv1a(const void* data, std::size_t n,
                           std::uint64_t h = kFnvOffset) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = kFnvOffset) {
  return fnv1a(s.data(), s.size(), h);
}

template <typename Derived>
std::uint64_t fnv1a(const Eigen::PlainObjectBase<Derived>& m,
                    std::uint64_t h = kFnvOffset) {
  return fnv1a(m.data(), sizeof(typename Derived::Scalar) *
                             static_cast<std::size_t>(m.size()),
               h);
}

std::string hash_hex(std::uint64_t h);
std::uint64_t parse_hash_hex(const std::string& s);

// FNV-1a over a file's bytes; throws UsageError if the file cannot be read.
std::uint64_t hash_file(const std::string& path);

}  // namespace eit
