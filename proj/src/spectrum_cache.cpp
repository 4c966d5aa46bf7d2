#include "bhchaos/spectrum_cache.hpp"

#include <zlib.h>

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <json.hpp>

namespace bhchaos {

static_assert(std::endian::native == std::endian::little,
              "spectrum cache assumes a little-endian host");

namespace {

using nlohmann::json;
constexpr char kMagic[6] = {'B', 'H', 'S', 'P', 'E', 'C'};

std::uint32_t crc_of(const std::vector<double>& values) {
  const auto bytes = values.size() * sizeof(double);
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(values.data()), static_cast<uInt>(bytes)));
}

Parity parity_from(const std::string& text) {
  if (text == "even") return Parity::even;
  if (text == "odd") return Parity::odd;
  if (text == "none") return Parity::none;
  throw CacheError("unknown parity '" + text + "' in manifest");
}

json read_manifest(const std::filesystem::path& directory) {
  std::ifstream in(directory / "manifest.json");
  if (!in) throw CacheError("missing manifest in " + directory.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw CacheError("malformed manifest in " + directory.string() + ": " + e.what());
  }
}

}  // namespace

void save_spectra(const SpectrumSet& set, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  json manifest;
  manifest["format_version"] = kCacheFormatVersion;
  manifest["L"] = set.params.sites;
  manifest["N"] = set.params.particles;
  manifest["u"] = set.params.u;
  manifest["created"] = set.created;
  manifest["code_version"] = set.code_version;
  manifest["blocks"] = json::array();
  for (const auto& spectrum : set.blocks) {
    manifest["blocks"].push_back({{"j", spectrum.block.j},
                                  {"parity", to_string(spectrum.block.parity)},
                                  {"dim", spectrum.block.dim},
                                  {"checksum", crc_of(spectrum.eigenvalues)}});
  }
  manifest["degeneracy_groups"] = set.degeneracies.groups;

  // write the payload first so a manifest never points at a partial file
  const auto bin_path = directory / "spectra.bin";
  {
    std::ofstream out(bin_path, std::ios::binary | std::ios::trunc);
    out.write(kMagic, sizeof kMagic);
    const std::uint32_t version = kCacheFormatVersion;
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    for (const auto& spectrum : set.blocks) {
      out.write(reinterpret_cast<const char*>(spectrum.eigenvalues.data()),
                static_cast<std::streamsize>(spectrum.eigenvalues.size() * sizeof(double)));
    }
    if (!out) throw CacheError("failed writing " + bin_path.string());
  }
  std::ofstream out(directory / "manifest.json", std::ios::trunc);
  out << manifest.dump(2) << '\n';
  if (!out) throw CacheError("failed writing manifest in " + directory.string());
}

SpectrumSet load_spectra(const std::filesystem::path& directory) {
  const auto manifest = read_manifest(directory);
  SpectrumSet set;
  try {
    if (manifest.at("format_version").get<std::uint32_t>() != kCacheFormatVersion) {
      throw CacheVersionError("cache format version " +
                              manifest.at("format_version").dump() + " is not supported");
    }
    set.params.sites = manifest.at("L").get<unsigned>();
    set.params.particles = manifest.at("N").get<unsigned>();
    set.params.u = manifest.at("u").get<double>();
    set.created = manifest.value("created", "");
    set.code_version = manifest.value("code_version", "");
    set.degeneracies.groups =
        manifest.at("degeneracy_groups").get<std::vector<std::vector<std::size_t>>>();
    for (const auto& entry : manifest.at("blocks")) {
      BlockSpectrum spectrum;
      spectrum.block.j = entry.at("j").get<unsigned>();
      spectrum.block.parity = parity_from(entry.at("parity").get<std::string>());
      spectrum.block.dim = entry.at("dim").get<std::size_t>();
      set.blocks.push_back(std::move(spectrum));
    }
  } catch (const json::exception& e) {
    throw CacheError("malformed manifest in " + directory.string() + ": " + e.what());
  }

  const auto bin_path = directory / "spectra.bin";
  std::ifstream in(bin_path, std::ios::binary);
  if (!in) throw CacheError("missing " + bin_path.string());
  char magic[sizeof kMagic];
  std::uint32_t version = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  if (!in) throw CacheChecksumError("truncated header in " + bin_path.string());
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw CacheError(bin_path.string() + " is not a spectrum file");
  }
  if (version != kCacheFormatVersion) {
    throw CacheVersionError("spectrum file version " + std::to_string(version) +
                            " is not supported");
  }
  const auto& entries = manifest.at("blocks");
  for (std::size_t b = 0; b < set.blocks.size(); ++b) {
    auto& spectrum = set.blocks[b];
    spectrum.eigenvalues.resize(spectrum.block.dim);
    in.read(reinterpret_cast<char*>(spectrum.eigenvalues.data()),
            static_cast<std::streamsize>(spectrum.block.dim * sizeof(double)));
    if (!in) {
      throw CacheChecksumError("block " + spectrum.block.label() + " is truncated in " +
                               bin_path.string());
    }
    if (crc_of(spectrum.eigenvalues) != entries[b].at("checksum").get<std::uint32_t>()) {
      throw CacheChecksumError("checksum mismatch for block " + spectrum.block.label());
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw CacheChecksumError("trailing bytes in " + bin_path.string());
  }
  return set;
}

std::filesystem::path cache_directory(const std::filesystem::path& root,
                                      const ModelParams& params) {
  char name[96];
  std::snprintf(name, sizeof name, "L%u_N%u_u%.12g", params.sites, params.particles, params.u);
  return root / name;
}

std::optional<SpectrumSet> try_load_cached(const std::filesystem::path& directory,
                                           const ModelParams& params) {
  if (!std::filesystem::exists(directory / "manifest.json")) return std::nullopt;
  auto set = load_spectra(directory);
  if (set.params.sites != params.sites || set.params.particles != params.particles ||
      set.params.u != params.u) {
    throw CacheMismatchError("cache in " + directory.string() + " was built for L=" +
                             std::to_string(set.params.sites) +
                             " N=" + std::to_string(set.params.particles) +
                             " u=" + std::to_string(set.params.u));
  }
  return set;
}

}  // namespace bhchaos
