#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "coxkl/kl_engine.hpp"

namespace coxkl {

struct CacheFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CacheVersionError : CacheFormatError {
    using CacheFormatError::CacheFormatError;
};
struct CacheChecksumError : CacheFormatError {
    using CacheFormatError::CacheFormatError;
};

// CRC-64/XZ (reflected ECMA-182 polynomial).
uint64_t crc64(const void* data, size_t len, uint64_t seed = 0);

// Binary cache file, little-endian:
//   magic "COXKL", u32 version, u32 degree, i32 level,
//   u64 pair/glossary/mu counts, three length-prefixed sections
//   (glossary, pair table, mu table), trailing CRC64 of everything before it.
// Glossary indices are remapped to a canonical polynomial order on save, and
// only polynomials referenced by the pair table are written, so the bytes do
// not depend on computation order.
constexpr uint32_t kCacheVersion = 1;

void save_cache(const KLStore& store, const std::string& path);
KLStore load_cache(const std::string& path);

}  // namespace coxkl
