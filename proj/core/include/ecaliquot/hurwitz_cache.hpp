#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>

#include "ecaliquot/classnum.hpp"

namespace ecaliquot {

/// Memo of H(D), shared between workers and optionally persisted.
///
/// On-disk format: one record per line, "D<TAB>12H" in decimal, sorted by |D|.
/// The file is read fully on construction; flush() merges with whatever is on
/// disk and replaces the file by rename, so readers never see a torn file.
///
/// Lookups take a shared lock; misses are computed outside the lock and
/// inserted under an exclusive one. Two workers racing on the same D must
/// agree, otherwise std::logic_error is thrown.
class HurwitzCache {
 public:
  HurwitzCache() = default;
  explicit HurwitzCache(std::filesystem::path file);

  HurwitzCache(const HurwitzCache&) = delete;
  HurwitzCache& operator=(const HurwitzCache&) = delete;

  /// H(D) for D < 0 (0 for D = 2, 3 mod 4); throws std::invalid_argument for D >= 0.
  HurwitzValue get(i64 D);
  i64 twelfths(i64 D) { return get(D).twelfths(); }

  /// Use a precomputed class-number table for misses with |D| in range.
  void attach_table(std::shared_ptr<const ClassNumberTable> table);

  /// Writes new entries to the backing file, if any. Returns the number of records written.
  std::size_t flush();

  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] std::size_t pending() const;
  [[nodiscard]] const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

  /// $ECALIQUOT_HCACHE, else $XDG_DATA_HOME/ecaliquot/hcache.tsv, else ~/.local/share/ecaliquot/hcache.tsv.
  [[nodiscard]] static std::filesystem::path default_path();

  /// Parses a cache file into (|D| -> 12H). Throws std::runtime_error on malformed lines.
  [[nodiscard]] static std::map<i64, i64> read_file(const std::filesystem::path& file);

 private:
  void insert_locked(i64 abs_d, i64 twelve_h);

  mutable std::shared_mutex mutex_;
  std::map<i64, i64> values_;  // keyed by |D|
  std::size_t pending_ = 0;
  std::optional<std::filesystem::path> path_;
  std::shared_ptr<const ClassNumberTable> table_;
};

}  // namespace ecaliquot
