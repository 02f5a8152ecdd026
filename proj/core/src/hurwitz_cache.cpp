#include "ecaliquot/hurwitz_cache.hpp"

#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unistd.h>

namespace ecaliquot {

HurwitzCache::HurwitzCache(std::filesystem::path file) : path_(std::move(file)) {
  if (std::filesystem::exists(*path_)) values_ = read_file(*path_);
}

std::map<i64, i64> HurwitzCache::read_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open H cache " + file.string());
  std::map<i64, i64> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    try {
      if (tab == std::string::npos) throw std::invalid_argument("missing tab");
      std::size_t used_d = 0;
      std::size_t used_h = 0;
      const i64 D = std::stoll(line.substr(0, tab), &used_d);
      const i64 twelve_h = std::stoll(line.substr(tab + 1), &used_h);
      if (used_d != tab || used_h != line.size() - tab - 1 || D >= 0 || twelve_h < 0) {
        throw std::invalid_argument("bad field");
      }
      out[-D] = twelve_h;
    } catch (const std::logic_error&) {
      throw std::runtime_error("malformed H cache record at " + file.string() + ":" + std::to_string(lineno));
    }
  }
  return out;
}

std::filesystem::path HurwitzCache::default_path() {
  if (const char* env = std::getenv("ECALIQUOT_HCACHE"); env != nullptr && *env != '\0') return env;
  if (const char* xdg = std::getenv("XDG_DATA_HOME"); xdg != nullptr && *xdg != '\0') {
    return std::filesystem::path(xdg) / "ecaliquot" / "hcache.tsv";
  }
  const char* home = std::getenv("HOME");
  return std::filesystem::path(home != nullptr ? home : ".") / ".local" / "share" / "ecaliquot" / "hcache.tsv";
}

void HurwitzCache::attach_table(std::shared_ptr<const ClassNumberTable> table) {
  std::unique_lock lock(mutex_);
  table_ = std::move(table);
}

HurwitzValue HurwitzCache::get(i64 D) {
  if (D >= 0) throw std::invalid_argument("HurwitzCache::get: D must be negative");
  std::shared_ptr<const ClassNumberTable> table;
  {
    std::shared_lock lock(mutex_);
    if (auto it = values_.find(-D); it != values_.end()) return HurwitzValue::from_twelfths(it->second);
    table = table_;
  }
  const HurwitzValue value = (table && -D <= table->max_abs()) ? table->H(D) : hurwitz_H(D);
  std::unique_lock lock(mutex_);
  insert_locked(-D, value.twelfths());
  return value;
}

void HurwitzCache::insert_locked(i64 abs_d, i64 twelve_h) {
  auto [it, inserted] = values_.emplace(abs_d, twelve_h);
  if (inserted) {
    ++pending_;
  } else if (it->second != twelve_h) {
    throw std::logic_error("H cache disagreement at D=-" + std::to_string(abs_d));
  }
}

std::size_t HurwitzCache::flush() {
  std::unique_lock lock(mutex_);
  if (!path_ || pending_ == 0) return 0;

  if (std::filesystem::exists(*path_)) {
    for (const auto& [abs_d, twelve_h] : read_file(*path_)) {
      auto [it, inserted] = values_.emplace(abs_d, twelve_h);
      if (!inserted && it->second != twelve_h) {
        throw std::logic_error("H cache file disagrees with computed value at D=-" + std::to_string(abs_d));
      }
    }
  }
  if (path_->has_parent_path()) std::filesystem::create_directories(path_->parent_path());

  auto tmp = *path_;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write H cache " + tmp.string());
    for (const auto& [abs_d, twelve_h] : values_) out << -abs_d << '\t' << twelve_h << '\n';
    if (!out.flush()) throw std::runtime_error("write failed for H cache " + tmp.string());
  }
  std::filesystem::rename(tmp, *path_);
  pending_ = 0;
  return values_.size();
}

std::size_t HurwitzCache::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

std::size_t HurwitzCache::pending() const {
  std::shared_lock lock(mutex_);
  return pending_;
}

}  // namespace ecaliquot
