#ifndef BHCHAOS_SPECTRUM_CACHE_HPP
#define BHCHAOS_SPECTRUM_CACHE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>

#include "bhchaos/spectral_statistics.hpp"

namespace bhchaos {

// On-disk layout of a cached spectrum set, one directory per model:
//   manifest.json  {format_version, L, N, u, created, code_version,
//                   blocks: [{j, parity, dim, checksum}], degeneracy_groups}
//   spectra.bin    "BHSPEC" magic, u32 format version, then per block the raw
//                  little-endian doubles of its eigenvalues in manifest order.
// Block checksums are CRC-32 of the block's bytes.

inline constexpr std::uint32_t kCacheFormatVersion = 1;

void save_spectra(const SpectrumSet& set, const std::filesystem::path& directory);

/// Throws CacheVersionError, CacheChecksumError (including truncation) or
/// CacheError for missing or malformed files.
SpectrumSet load_spectra(const std::filesystem::path& directory);

/// Cache directory for a model under `root`, e.g. root/L9_N9_u0.5.
std::filesystem::path cache_directory(const std::filesystem::path& root,
                                      const ModelParams& params);

/// Loads the cached set when its manifest describes `params`; nullopt when no
/// cache exists. A manifest for different parameters raises CacheMismatchError.
std::optional<SpectrumSet> try_load_cached(const std::filesystem::path& directory,
                                           const ModelParams& params);

}  // namespace bhchaos

#endif  // BHCHAOS_SPECTRUM_CACHE_HPP
