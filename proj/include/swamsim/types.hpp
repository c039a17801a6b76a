#pragma once

#include <cstdint>
#include <string>

namespace swamsim {

using AppId = std::uint32_t;
using PageId = std::uint64_t;
using FileId = std::uint64_t;
using TimeMs = std::int64_t;

constexpr std::int64_t page_bytes = 4096;
constexpr std::int64_t minute_ms = 60'000;
constexpr std::int64_t hour_ms = 3'600'000;
constexpr std::int64_t day_ms = 86'400'000;
constexpr AppId no_app = 0xffffffffu;

constexpr std::int64_t mib(std::int64_t n) { return n * 1024 * 1024; }

enum class PageKind : std::uint8_t { SO, ANON, FILE };

/// Where a page's content currently lives. NOT_PRESENT means the content
/// was dropped by a cleaner and must be rebuilt on the next access.
enum class Location : std::uint8_t { RESIDENT, ZRAM, SWAM_FILE, NAND, NOT_PRESENT };

enum class Role : std::uint8_t { FOREGROUND, BACKGROUND };
enum class AppState : std::uint8_t { RUNNING, KILLED };

/// Ordered by kill priority: CACHED apps are terminated first.
enum class OomBand : std::uint8_t {
  NATIVE = 0,
  PERSISTENT = 1,
  FOREGROUND = 2,
  VISIBLE = 3,
  SERVICE = 4,
  CACHED = 5,
};

enum class Policy : std::uint8_t { NAND_SWAP, ZRAM, ZRAM_NAND, SWAM };
enum class KillerKind : std::uint8_t { LMKD, OOMK, EOOM };
enum class SwapPath : std::uint8_t { FAST_ZRAM, SLOW_SWAM };

enum class Err : std::uint8_t {
  None = 0,
  Precondition,
  OutOfMemory,
  WrongKind,
  NotOwner,
  ZramFull,
  StorageFull,
  NandFull,
  AlreadyResident,
  NothingToClean,
  AlreadyKilled,
  BadGranularity,
  ConfigInvalid,
  SystemPanic,
};

template <typename T>
struct Result {
  Err err = Err::None;
  T value{};
  std::string msg;

  bool ok() const { return err == Err::None; }
  static Result success(T v) { return Result{Err::None, std::move(v), {}}; }
  static Result failure(Err e, std::string m = {}) { return Result{e, T{}, std::move(m)}; }
};

struct Unit {};
using Status = Result<Unit>;
inline Status ok_status() { return Status::success(Unit{}); }

inline const char* to_string(Policy p) {
  switch (p) {
    case Policy::NAND_SWAP: return "NAND_SWAP";
    case Policy::ZRAM: return "ZRAM";
    case Policy::ZRAM_NAND: return "ZRAM_NAND";
    case Policy::SWAM: return "SWAM";
  }
  return "?";
}

inline bool parse_policy(const std::string& s, Policy& out) {
  if (s == "NAND_SWAP") { out = Policy::NAND_SWAP; return true; }
  if (s == "ZRAM") { out = Policy::ZRAM; return true; }
  if (s == "ZRAM_NAND") { out = Policy::ZRAM_NAND; return true; }
  if (s == "SWAM") { out = Policy::SWAM; return true; }
  return false;
}

inline const char* to_string(KillerKind k) {
  switch (k) {
    case KillerKind::LMKD: return "LMKD";
    case KillerKind::OOMK: return "OOMK";
    case KillerKind::EOOM: return "EOOM";
  }
  return "?";
}

inline const char* to_string(OomBand b) {
  switch (b) {
    case OomBand::NATIVE: return "NATIVE";
    case OomBand::PERSISTENT: return "PERSISTENT";
    case OomBand::FOREGROUND: return "FOREGROUND";
    case OomBand::VISIBLE: return "VISIBLE";
    case OomBand::SERVICE: return "SERVICE";
    case OomBand::CACHED: return "CACHED";
  }
  return "?";
}

inline bool parse_band(const std::string& s, OomBand& out) {
  if (s == "NATIVE") { out = OomBand::NATIVE; return true; }
  if (s == "PERSISTENT") { out = OomBand::PERSISTENT; return true; }
  if (s == "FOREGROUND") { out = OomBand::FOREGROUND; return true; }
  if (s == "VISIBLE") { out = OomBand::VISIBLE; return true; }
  if (s == "SERVICE") { out = OomBand::SERVICE; return true; }
  if (s == "CACHED") { out = OomBand::CACHED; return true; }
  return false;
}

inline const char* to_string(Location l) {
  switch (l) {
    case Location::RESIDENT: return "RESIDENT";
    case Location::ZRAM: return "ZRAM";
    case Location::SWAM_FILE: return "SWAM_FILE";
    case Location::NAND: return "NAND";
    case Location::NOT_PRESENT: return "NOT_PRESENT";
  }
  return "?";
}

}  // namespace swamsim
