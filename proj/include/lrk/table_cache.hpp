#pragma once

// On-disk cache of correlator tables.
//
// File layout, all fields little-endian:
//   offset  0  char[8]   magic "LRKGTAB\0"
//   offset  8  uint32    format version (1)
//   offset 12  uint32    reserved, 0
//   offset 16  float64   mu, t, delta, alpha, beta
//   offset 56  int64     x_max
//   offset 64  float64   abs_tol
//   offset 72  uint64    count (= 2 * x_max + 3)
//   offset 80  float64   G_x for x = -(x_max + 1) .. x_max + 1

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "lrk/correlators.hpp"

namespace lrk {

inline constexpr std::uint32_t kTableFormatVersion = 1;

/// 16 hex digits identifying (params, x_max, abs_tol).
std::string table_cache_key(const ModelParams& p, int x_max, double abs_tol);

void save_table(const std::filesystem::path& path, const CorrelatorTable& tbl, double abs_tol);

struct LoadedTable {
    CorrelatorTable table;
    double abs_tol;
};

/// Throws InvalidInput on a malformed or truncated file.
LoadedTable load_table(const std::filesystem::path& path);

/// Directory of cached tables named <key>.gtab.
class TableCache {
public:
    explicit TableCache(std::filesystem::path dir);

    [[nodiscard]] std::filesystem::path path_for(const ModelParams& p, int x_max, double abs_tol) const;

    /// Cached table if a matching file exists, otherwise nullopt.
    [[nodiscard]] std::optional<CorrelatorTable> find(const ModelParams& p, int x_max, double abs_tol) const;

    /// Loads or computes (and stores) the table.
    CorrelatorTable get(const ModelParams& p, int x_max, const QuadratureConfig& q);

private:
    std::filesystem::path dir_;
};

}  // namespace lrk
