#pragma once

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "klow/kone.hpp"

namespace klow {

/// Bumped whenever stored group data or its key changes meaning; entries of
/// other versions live in sibling directories and are never read.
inline constexpr const char* kCacheVersion = "1";

namespace detail {

inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_str(std::string& out, const std::string& s) {
  put_u64(out, s.size());
  out += s;
}

class Reader {
 public:
  explicit Reader(const std::string& b) : b_(b) {}
  bool u64(std::uint64_t& v) {
    if (pos_ + 8 > b_.size()) return false;
    v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return true;
  }
  bool str(std::string& s) {
    std::uint64_t n = 0;
    if (!u64(n) || n > b_.size() - pos_) return false;
    s = b_.substr(pos_, n);
    pos_ += n;
    return true;
  }
  std::size_t pos() const { return pos_; }

 private:
  const std::string& b_;
  std::size_t pos_ = 0;
};

/// Advisory flock on a lock file, released on destruction.
class FileLock {
 public:
  FileLock(const std::filesystem::path& p, bool exclusive) {
    fd_ = ::open(p.c_str(), O_RDWR | O_CREAT, 0644);
    if (fd_ >= 0) ::flock(fd_, exclusive ? LOCK_EX : LOCK_SH);
  }
  ~FileLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace detail

/// GroupStore persisted as one checksummed binary file per key
/// (kind, ring digest, n). Corrupt entries are deleted with a warning and
/// reported as misses so the caller recomputes.
class FileGroupStore : public GroupStore {
 public:
  explicit FileGroupStore(std::filesystem::path root, std::ostream* warn = nullptr)
      : root_(std::move(root)), dir_(root_ / (std::string("v") + kCacheVersion)), warn_(warn) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw BadInput("cannot create cache directory " + dir_.string() + ": " + ec.message());
  }

  std::optional<Entry> load(const std::string& kind, const FiniteRing& r, std::size_t n) override {
    const auto p = path_of(kind, r, n);
    std::string bytes;
    {
      detail::FileLock lock(dir_ / ".lock", false);
      std::ifstream in(p, std::ios::binary);
      if (!in) {
        ++misses_;
        return std::nullopt;
      }
      bytes.assign(std::istreambuf_iterator<char>(in), {});
    }
    auto e = decode(bytes, kind, r, n);
    if (!e) {
      evict(p);
      ++misses_;
      return std::nullopt;
    }
    ++hits_;
    return e;
  }

  void save(const std::string& kind, const FiniteRing& r, std::size_t n, const Entry& e) override {
    const auto p = path_of(kind, r, n);
    const std::string bytes = encode(kind, r, n, e);
    detail::FileLock lock(dir_ / ".lock", true);
    const auto tmp = p.string() + ".tmp" + std::to_string(::getpid());
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) return;  // an unwritable cache only costs recomputation
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    std::error_code ec;
    std::filesystem::rename(tmp, p, ec);
    if (ec) std::filesystem::remove(tmp, ec);
  }

  /// Removes every entry of every version; returns the number removed.
  std::size_t clear() {
    std::size_t removed = 0;
    std::error_code ec;
    for (const auto& sub : std::filesystem::directory_iterator(root_, ec)) {
      if (!sub.is_directory() || sub.path().filename().string().rfind('v', 0) != 0) continue;
      detail::FileLock lock(sub.path() / ".lock", true);
      for (const auto& f : std::filesystem::directory_iterator(sub.path(), ec))
        if (f.path().extension() == ".klc" && std::filesystem::remove(f.path(), ec)) ++removed;
    }
    return removed;
  }

  std::filesystem::path path_of(const std::string& kind, const FiniteRing& r, std::size_t n) const {
    return dir_ / (kind + "-" + r.digest() + "-n" + std::to_string(n) + ".klc");
  }

  const std::filesystem::path& directory() const { return dir_; }
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }
  std::size_t evictions() const { return evictions_; }

 private:
  static constexpr const char* magic = "KLOWGRP1";

  static std::string encode(const std::string& kind, const FiniteRing& r, std::size_t n, const Entry& e) {
    std::string b(magic);
    detail::put_str(b, kCacheVersion);
    detail::put_str(b, kind);
    detail::put_str(b, r.digest());
    detail::put_u64(b, n);
    detail::put_u64(b, e.flags);
    detail::put_u64(b, e.elements.size());
    for (auto x : e.elements) detail::put_u64(b, x);
    detail::put_u64(b, detail::fnv1a(b));
    return b;
  }

  static std::optional<Entry> decode(const std::string& b, const std::string& kind, const FiniteRing& r, std::size_t n) {
    const std::size_t m = std::strlen(magic);
    if (b.size() < m + 8 || b.compare(0, m, magic) != 0) return std::nullopt;
    std::uint64_t sum = 0;
    {
      const std::string tail = b.substr(b.size() - 8);
      detail::Reader t(tail);
      t.u64(sum);
    }
    const std::string body = b.substr(0, b.size() - 8);
    if (detail::fnv1a(body) != sum) return std::nullopt;
    const std::string payload = body.substr(m);
    detail::Reader rd(payload);
    std::string version, k, digest;
    std::uint64_t nn = 0, count = 0;
    Entry e;
    if (!rd.str(version) || !rd.str(k) || !rd.str(digest) || !rd.u64(nn) || !rd.u64(e.flags) || !rd.u64(count))
      return std::nullopt;
    if (version != kCacheVersion || k != kind || digest != r.digest() || nn != n) return std::nullopt;
    if (count != (payload.size() - rd.pos()) / 8 || (payload.size() - rd.pos()) % 8 != 0) return std::nullopt;
    e.elements.resize(count);
    for (auto& x : e.elements)
      if (!rd.u64(x)) return std::nullopt;
    return e;
  }

  void evict(const std::filesystem::path& p) {
    detail::FileLock lock(dir_ / ".lock", true);
    std::error_code ec;
    std::filesystem::remove(p, ec);
    ++evictions_;
    if (warn_) *warn_ << "warning: evicted corrupt cache entry " << p.filename().string() << "\n";
  }

  std::filesystem::path root_, dir_;
  std::ostream* warn_;
  std::size_t hits_ = 0, misses_ = 0, evictions_ = 0;
};

}  // namespace klow
