#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "swamsim/cost.hpp"
#include "swamsim/types.hpp"

namespace swamsim {

/// 4 KiB unit of memory. Pages are kept in a slot arena; slots are
/// recycled but PageIds are never reused.
struct Page {
  PageId id = 0;
  TimeMs last_access = 0;
  FileId file = 0;          // valid while location == SWAM_FILE
  std::uint32_t access_count = 0;
  std::uint32_t pos_in_file = 0;
  AppId owner0 = no_app;    // first owner; extra owners in a side table
  std::uint16_t ref_count = 0;
  PageKind kind = PageKind::ANON;
  Location location = Location::RESIDENT;
  bool swapped_in_after_out = false;
  bool live = false;
};

struct App {
  std::string name;
  Role role = Role::BACKGROUND;
  OomBand idle_band = OomBand::CACHED;
  OomBand band = OomBand::CACHED;  // current band; FOREGROUND during a session
  bool time_critical = false;
  bool batch = false;
  bool root = false;
  bool hardware = false;
  bool is_init = false;

  SoProfile so_profile;
  XmlProfile xml_profile;

  AppState state = AppState::RUNNING;
  std::uint32_t kills = 0;
  std::uint32_t relaunches = 0;

  std::vector<std::uint32_t> so_slots;
  std::vector<std::uint32_t> other_slots;  // ANON + FILE pages
  std::int64_t count_by_loc[5] = {0, 0, 0, 0, 0};
  std::uint32_t initial_so_pages = 0;
  double rebuild_share_ms = 0.0;   // cached per-page PLT/GOT rebuild cost
  double relaunch_cost_ms = 0.0;   // cached cold-start estimate

  std::int64_t owned_pages() const {
    return static_cast<std::int64_t>(so_slots.size() + other_slots.size());
  }
  std::int64_t owned_bytes() const { return owned_pages() * page_bytes; }
  std::int64_t so_bytes() const {
    return static_cast<std::int64_t>(so_slots.size()) * page_bytes;
  }
};

/// A dynamically created swap file in the ordinary file system. Size is
/// its live page count; an empty file must be unlinked before the event
/// that emptied it completes.
struct SwamFile {
  FileId id = 0;
  std::vector<std::uint32_t> page_slots;
  TimeMs created_at = 0;
  TimeMs last_swap_in = 0;
  bool holds_so = true;

  std::int64_t bytes() const {
    return static_cast<std::int64_t>(page_slots.size()) * page_bytes;
  }
};

struct DeviceConfig {
  std::int64_t ram_bytes = mib(4096);
  std::int64_t zram_bytes = mib(512);
  std::int64_t storage_bytes = mib(65536);
  std::int64_t nand_partition_bytes = 0;   // fixed-partition swap policies only
  std::int64_t storage_used_other_bytes = mib(8192);
  std::int64_t compression_ratio_mill = 2500;  // ratio x1000, e.g. 2.5:1
};

struct MemoryState {
  std::int64_t ram_capacity = 0;
  std::int64_t resident_bytes = 0;
  std::int64_t zram_capacity = 0;
  std::int64_t zram_stored_logical = 0;
  std::int64_t zram_stored_physical = 0;
  std::int64_t ratio_mill = 2500;
  std::int64_t storage_capacity = 0;
  std::int64_t storage_used_other = 0;
  std::int64_t nand_partition_bytes = 0;
  std::int64_t nand_used = 0;
  std::map<FileId, SwamFile> swam_files;
  std::int64_t swam_bytes_total = 0;

  /// Compressed footprint of `logical` bytes, rounded up to whole bytes.
  std::int64_t phys_of(std::int64_t logical) const {
    return (logical * 1000 + ratio_mill - 1) / ratio_mill;
  }
  std::int64_t storage_free() const {
    return storage_capacity - storage_used_other - nand_partition_bytes -
           swam_bytes_total;
  }
  double storage_free_fraction() const {
    return static_cast<double>(storage_free()) /
           static_cast<double>(storage_capacity);
  }
};

struct SwapInSource {
  Location from = Location::RESIDENT;
  FileId file = 0;
  bool file_unlinked = false;
};

struct ReleaseSummary {
  std::int64_t owned_pages = 0;
  std::int64_t freed_pages = 0;      // pages whose last reference dropped
  std::vector<FileId> unlinked_files;
};

/// Owns pages, apps and the physical-memory accounting. Policy modules
/// mutate state only through these operations so the conservation audit
/// can cross-check counters against page-level truth.
class Model {
 public:
  explicit Model(const DeviceConfig& dev) {
    mem_.ram_capacity = dev.ram_bytes;
    mem_.zram_capacity = dev.zram_bytes;
    mem_.storage_capacity = dev.storage_bytes;
    mem_.storage_used_other = dev.storage_used_other_bytes;
    mem_.nand_partition_bytes = dev.nand_partition_bytes;
    mem_.ratio_mill = dev.compression_ratio_mill;
    auto expect = static_cast<std::size_t>(dev.ram_bytes / page_bytes);
    arena_.reserve(expect + expect / 4);
    id_to_slot_.reserve(expect + expect / 4);
  }

  AppId add_app(App app) {
    app.band = app.idle_band;
    apps_.push_back(std::move(app));
    return static_cast<AppId>(apps_.size() - 1);
  }

  App& app(AppId id) { return apps_[id]; }
  const App& app(AppId id) const { return apps_[id]; }
  std::size_t app_count() const { return apps_.size(); }
  std::vector<App>& apps() { return apps_; }
  const std::vector<App>& apps() const { return apps_; }

  MemoryState& mem() { return mem_; }
  const MemoryState& mem() const { return mem_; }

  std::int64_t numerator() const {
    return mem_.resident_bytes + mem_.zram_stored_physical;
  }
  double utilization() const {
    return static_cast<double>(numerator()) /
           static_cast<double>(mem_.ram_capacity);
  }
  std::int64_t free_bytes() const { return mem_.ram_capacity - numerator(); }

  const Page& page_at(std::uint32_t slot) const { return arena_[slot]; }
  Page& page_at(std::uint32_t slot) { return arena_[slot]; }
  std::size_t arena_size() const { return arena_.size(); }

  std::uint32_t slot_of(PageId id) const {
    auto it = id_to_slot_.find(id);
    return it == id_to_slot_.end() ? bad_slot : it->second;
  }
  static constexpr std::uint32_t bad_slot = 0xffffffffu;

  bool owns(std::uint32_t slot, AppId a) const {
    const Page& p = arena_[slot];
    if (p.owner0 == a) return true;
    if (p.ref_count <= 1) return false;
    auto it = extra_owners_.find(slot);
    if (it == extra_owners_.end()) return false;
    return std::binary_search(it->second.begin(), it->second.end(), a);
  }

  /// All owners of a page, deterministic order (owner0 first, extras sorted).
  std::vector<AppId> owners_of(std::uint32_t slot) const {
    const Page& p = arena_[slot];
    std::vector<AppId> out;
    if (!p.live) return out;
    out.push_back(p.owner0);
    auto it = extra_owners_.find(slot);
    if (it != extra_owners_.end())
      out.insert(out.end(), it->second.begin(), it->second.end());
    return out;
  }

  // -- allocation -----------------------------------------------------------

  Result<std::vector<PageId>> allocate(AppId a, std::int64_t n_pages,
                                       PageKind kind, TimeMs now) {
    using R = Result<std::vector<PageId>>;
    if (a >= apps_.size() || apps_[a].state != AppState::RUNNING)
      return R::failure(Err::Precondition, "app not running");
    if (n_pages < 1) return R::failure(Err::Precondition, "n_pages < 1");
    if (mem_.resident_bytes + n_pages * page_bytes + mem_.zram_stored_physical >
        mem_.ram_capacity)
      return R::failure(Err::OutOfMemory, "resident allocation exceeds RAM");

    std::vector<PageId> ids;
    ids.reserve(static_cast<std::size_t>(n_pages));
    App& owner = apps_[a];
    for (std::int64_t i = 0; i < n_pages; ++i) {
      std::uint32_t slot = acquire_slot();
      Page& p = arena_[slot];
      p.id = next_page_id_++;
      p.last_access = now;
      p.file = 0;
      p.access_count = 0;
      p.pos_in_file = 0;
      p.owner0 = a;
      p.ref_count = 1;
      p.kind = kind;
      p.location = Location::RESIDENT;
      p.swapped_in_after_out = false;
      p.live = true;
      id_to_slot_.emplace(p.id, slot);
      if (kind == PageKind::SO)
        owner.so_slots.push_back(slot);
      else
        owner.other_slots.push_back(slot);
      owner.count_by_loc[loc_idx(Location::RESIDENT)]++;
      count_by_loc_[loc_idx(Location::RESIDENT)]++;
      if (kind == PageKind::SO) resident_so_count_++;
      mem_.resident_bytes += page_bytes;
      ids.push_back(p.id);
    }
    return R::success(std::move(ids));
  }

  Status share_so_page(PageId id, AppId a) {
    std::uint32_t slot = slot_of(id);
    if (slot == bad_slot) return Status::failure(Err::Precondition, "unknown page");
    Page& p = arena_[slot];
    if (p.kind != PageKind::SO) return Status::failure(Err::WrongKind, "not an SO page");
    if (a >= apps_.size() || apps_[a].state != AppState::RUNNING)
      return Status::failure(Err::Precondition, "app not running");
    if (owns(slot, a)) return Status::failure(Err::Precondition, "already an owner");
    auto& extras = extra_owners_[slot];
    extras.insert(std::lower_bound(extras.begin(), extras.end(), a), a);
    p.ref_count++;
    if (p.ref_count == 2 && p.location == Location::RESIDENT) resident_shared_so_++;
    App& owner = apps_[a];
    owner.so_slots.push_back(slot);
    owner.count_by_loc[loc_idx(p.location)]++;
    return ok_status();
  }

  void touch(std::uint32_t slot, TimeMs now) {
    Page& p = arena_[slot];
    p.last_access = now;
    p.access_count++;
  }

  // -- location moves -------------------------------------------------------

  /// Compressed bytes the page would add to ZRAM right now, or -1 if it
  /// does not fit.
  std::int64_t zram_marginal_if_fits(std::int64_t want_bytes = page_bytes) const {
    std::int64_t marginal = mem_.phys_of(mem_.zram_stored_logical + want_bytes) -
                            mem_.zram_stored_physical;
    if (mem_.zram_stored_physical + marginal > mem_.zram_capacity) return -1;
    return marginal;
  }
  bool zram_has_room() const { return zram_marginal_if_fits() >= 0; }

  Result<std::int64_t> move_resident_to_zram(std::uint32_t slot) {
    using R = Result<std::int64_t>;
    Page& p = arena_[slot];
    if (p.location != Location::RESIDENT)
      return R::failure(Err::Precondition, "page not resident");
    std::int64_t marginal = zram_marginal_if_fits();
    if (marginal < 0) return R::failure(Err::ZramFull);
    relocate(slot, Location::ZRAM);
    mem_.resident_bytes -= page_bytes;
    mem_.zram_stored_logical += page_bytes;
    mem_.zram_stored_physical += marginal;
    return R::success(marginal);
  }

  Result<FileId> move_resident_to_swam(std::uint32_t slot, TimeMs now,
                                       std::int64_t pages_per_file) {
    using R = Result<FileId>;
    Page& p = arena_[slot];
    if (p.location != Location::RESIDENT)
      return R::failure(Err::Precondition, "page not resident");
    if (mem_.storage_free() < page_bytes) return R::failure(Err::StorageFull);

    const bool so = p.kind == PageKind::SO;
    FileId& open = so ? open_so_file_ : open_anon_file_;
    SwamFile* f = nullptr;
    auto it = open != 0 ? mem_.swam_files.find(open) : mem_.swam_files.end();
    if (it != mem_.swam_files.end() &&
        static_cast<std::int64_t>(it->second.page_slots.size()) < pages_per_file) {
      f = &it->second;
    } else {
      FileId fid = next_file_id_++;
      SwamFile nf;
      nf.id = fid;
      nf.created_at = now;
      nf.last_swap_in = now;
      nf.holds_so = so;
      f = &mem_.swam_files.emplace(fid, std::move(nf)).first->second;
      open = fid;
    }
    p.file = f->id;
    p.pos_in_file = static_cast<std::uint32_t>(f->page_slots.size());
    f->page_slots.push_back(slot);
    relocate(slot, Location::SWAM_FILE);
    mem_.resident_bytes -= page_bytes;
    mem_.swam_bytes_total += page_bytes;
    return R::success(f->id);
  }

  Status move_resident_to_nand(std::uint32_t slot) {
    Page& p = arena_[slot];
    if (p.location != Location::RESIDENT)
      return Status::failure(Err::Precondition, "page not resident");
    if (mem_.nand_used + page_bytes > mem_.nand_partition_bytes)
      return Status::failure(Err::NandFull);
    relocate(slot, Location::NAND);
    mem_.resident_bytes -= page_bytes;
    mem_.nand_used += page_bytes;
    return ok_status();
  }

  /// Swap-in (or reload, for NOT_PRESENT pages). The caller is
  /// responsible for having made resident room first.
  Result<SwapInSource> move_to_resident(std::uint32_t slot, TimeMs now) {
    using R = Result<SwapInSource>;
    Page& p = arena_[slot];
    if (p.location == Location::RESIDENT) return R::failure(Err::AlreadyResident);

    SwapInSource src;
    src.from = p.location;
    switch (p.location) {
      case Location::ZRAM: {
        std::int64_t logical_after = mem_.zram_stored_logical - page_bytes;
        std::int64_t phys_after = mem_.phys_of(logical_after);
        if (mem_.resident_bytes + page_bytes + phys_after > mem_.ram_capacity)
          return R::failure(Err::OutOfMemory, "no resident room for swap-in");
        mem_.zram_stored_logical = logical_after;
        mem_.zram_stored_physical = phys_after;
        break;
      }
      case Location::SWAM_FILE: {
        if (mem_.resident_bytes + page_bytes + mem_.zram_stored_physical >
            mem_.ram_capacity)
          return R::failure(Err::OutOfMemory, "no resident room for swap-in");
        auto it = mem_.swam_files.find(p.file);
        SwamFile& f = it->second;
        f.last_swap_in = now;
        remove_from_file(f, slot);
        mem_.swam_bytes_total -= page_bytes;
        src.file = f.id;
        if (f.page_slots.empty()) {
          unlink_file_entry(f.id);
          src.file_unlinked = true;
        }
        break;
      }
      case Location::NAND: {
        if (mem_.resident_bytes + page_bytes + mem_.zram_stored_physical >
            mem_.ram_capacity)
          return R::failure(Err::OutOfMemory, "no resident room for swap-in");
        mem_.nand_used -= page_bytes;
        break;
      }
      case Location::NOT_PRESENT: {
        if (mem_.resident_bytes + page_bytes + mem_.zram_stored_physical >
            mem_.ram_capacity)
          return R::failure(Err::OutOfMemory, "no resident room for reload");
        break;
      }
      case Location::RESIDENT:
        break;
    }
    relocate(slot, Location::RESIDENT);
    mem_.resident_bytes += page_bytes;
    p.file = 0;
    p.swapped_in_after_out = true;
    return R::success(src);
  }

  /// SO Eraser primitive: drop a compressed SO page without I/O.
  Status drop_zram_so(std::uint32_t slot) {
    Page& p = arena_[slot];
    if (p.location != Location::ZRAM || p.kind != PageKind::SO)
      return Status::failure(Err::Precondition, "not an SO page in ZRAM");
    mem_.zram_stored_logical -= page_bytes;
    mem_.zram_stored_physical = mem_.phys_of(mem_.zram_stored_logical);
    relocate(slot, Location::NOT_PRESENT);
    return ok_status();
  }

  /// ISOP Eraser primitive: unlink a whole swam file; its pages become
  /// NOT_PRESENT and reload on next access.
  std::vector<std::uint32_t> delete_swam_file(FileId fid) {
    std::vector<std::uint32_t> dropped;
    auto it = mem_.swam_files.find(fid);
    if (it == mem_.swam_files.end()) return dropped;
    SwamFile& f = it->second;
    dropped = f.page_slots;
    for (std::uint32_t slot : dropped) {
      Page& p = arena_[slot];
      mem_.swam_bytes_total -= page_bytes;
      p.file = 0;
      relocate(slot, Location::NOT_PRESENT);
    }
    unlink_file_entry(fid);
    return dropped;
  }

  // -- kill / relaunch ------------------------------------------------------

  /// Free every page reference held by the app; exclusive pages die,
  /// shared SO pages just lose one owner. Marks the app KILLED.
  ReleaseSummary release_app(AppId a) {
    App& victim = apps_[a];
    ReleaseSummary out;
    out.owned_pages = victim.owned_pages();
    auto drop = [&](std::uint32_t slot) {
      Page& p = arena_[slot];
      if (p.ref_count > 1) {
        remove_owner(slot, a);
        victim.count_by_loc[loc_idx(p.location)]--;
      } else {
        free_page(slot, a, out);
        out.freed_pages++;
      }
    };
    for (std::uint32_t slot : victim.so_slots) drop(slot);
    for (std::uint32_t slot : victim.other_slots) drop(slot);
    victim.so_slots.clear();
    victim.other_slots.clear();
    victim.state = AppState::KILLED;
    victim.kills++;
    victim.band = victim.idle_band;
    return out;
  }

  void mark_relaunched(AppId a) {
    App& app = apps_[a];
    app.state = AppState::RUNNING;
    app.relaunches++;
  }

  // -- audits ---------------------------------------------------------------

  /// Cheap cross-layer consistency check, suitable after every event.
  int audit_fast() const {
    int bad = 0;
    for (const App& a : apps_) {
      std::int64_t sum = 0;
      for (std::int64_t c : a.count_by_loc) {
        if (c < 0) bad++;
        sum += c;
      }
      if (sum != a.owned_pages()) bad++;
      if (a.state == AppState::KILLED && sum != 0) bad++;
    }
    if (count_by_loc_[loc_idx(Location::RESIDENT)] * page_bytes != mem_.resident_bytes) bad++;
    if (count_by_loc_[loc_idx(Location::ZRAM)] * page_bytes != mem_.zram_stored_logical) bad++;
    if (count_by_loc_[loc_idx(Location::SWAM_FILE)] * page_bytes != mem_.swam_bytes_total) bad++;
    if (count_by_loc_[loc_idx(Location::NAND)] * page_bytes != mem_.nand_used) bad++;
    if (mem_.zram_stored_physical != mem_.phys_of(mem_.zram_stored_logical)) bad++;
    if (mem_.resident_bytes + mem_.zram_stored_physical > mem_.ram_capacity) bad++;
    if (mem_.swam_bytes_total + mem_.storage_used_other + mem_.nand_partition_bytes >
        mem_.storage_capacity)
      bad++;
    if (mem_.nand_used > mem_.nand_partition_bytes) bad++;
    return bad;
  }

  /// Full page-table recount, independent of the incremental counters.
  int audit_full() const {
    int bad = 0;
    std::int64_t counts[5] = {0, 0, 0, 0, 0};
    std::vector<std::int64_t> per_app(apps_.size() * 5, 0);
    std::int64_t live_pages = 0;
    for (std::uint32_t slot = 0; slot < arena_.size(); ++slot) {
      const Page& p = arena_[slot];
      if (!p.live) continue;
      live_pages++;
      counts[loc_idx(p.location)]++;
      auto owners = owners_of(slot);
      if (owners.size() != p.ref_count) bad++;
      if (p.ref_count < 1) bad++;
      for (AppId a : owners) {
        if (a >= apps_.size() || apps_[a].state != AppState::RUNNING) bad++;
        else per_app[a * 5 + loc_idx(p.location)]++;
      }
      if (p.location == Location::SWAM_FILE) {
        auto it = mem_.swam_files.find(p.file);
        if (it == mem_.swam_files.end() ||
            p.pos_in_file >= it->second.page_slots.size() ||
            it->second.page_slots[p.pos_in_file] != slot)
          bad++;
      }
    }
    for (int i = 0; i < 5; ++i)
      if (counts[i] != count_by_loc_[i]) bad++;
    for (std::size_t a = 0; a < apps_.size(); ++a)
      for (int i = 0; i < 5; ++i)
        if (per_app[a * 5 + i] != apps_[a].count_by_loc[i]) bad++;
    std::int64_t file_bytes = 0;
    for (const auto& [fid, f] : mem_.swam_files) {
      file_bytes += f.bytes();
      if (f.page_slots.empty()) bad++;  // empty files must have been unlinked
    }
    if (file_bytes != mem_.swam_bytes_total) bad++;
    std::int64_t res_so = 0, res_shared_so = 0;
    for (std::uint32_t slot = 0; slot < arena_.size(); ++slot) {
      const Page& p = arena_[slot];
      if (p.live && p.kind == PageKind::SO && p.location == Location::RESIDENT) {
        res_so++;
        if (p.ref_count > 1) res_shared_so++;
      }
    }
    if (res_so != resident_so_count_) bad++;
    if (res_shared_so != resident_shared_so_) bad++;
    bad += audit_fast();
    return bad;
  }

  std::int64_t live_page_count() const {
    std::int64_t n = 0;
    for (std::int64_t c : count_by_loc_) n += c;
    return n;
  }
  std::int64_t pages_at(Location l) const { return count_by_loc_[loc_idx(l)]; }
  std::int64_t resident_so_pages() const { return resident_so_count_; }
  std::int64_t resident_shared_so_pages() const { return resident_shared_so_; }

 private:
  static int loc_idx(Location l) { return static_cast<int>(l); }

  std::uint32_t acquire_slot() {
    if (!free_slots_.empty()) {
      std::uint32_t s = free_slots_.back();
      free_slots_.pop_back();
      return s;
    }
    arena_.emplace_back();
    return static_cast<std::uint32_t>(arena_.size() - 1);
  }

  /// Update per-owner and global location counters when a page moves.
  void relocate(std::uint32_t slot, Location to) {
    Page& p = arena_[slot];
    Location from = p.location;
    if (from == to) return;
    count_by_loc_[loc_idx(from)]--;
    count_by_loc_[loc_idx(to)]++;
    if (p.kind == PageKind::SO) {
      if (from == Location::RESIDENT) resident_so_count_--;
      if (to == Location::RESIDENT) resident_so_count_++;
      if (p.ref_count > 1) {
        if (from == Location::RESIDENT) resident_shared_so_--;
        if (to == Location::RESIDENT) resident_shared_so_++;
      }
    }
    apps_[p.owner0].count_by_loc[loc_idx(from)]--;
    apps_[p.owner0].count_by_loc[loc_idx(to)]++;
    if (p.ref_count > 1) {
      auto it = extra_owners_.find(slot);
      if (it != extra_owners_.end()) {
        for (AppId a : it->second) {
          apps_[a].count_by_loc[loc_idx(from)]--;
          apps_[a].count_by_loc[loc_idx(to)]++;
        }
      }
    }
    p.location = to;
  }

  void remove_from_file(SwamFile& f, std::uint32_t slot) {
    Page& p = arena_[slot];
    std::uint32_t pos = p.pos_in_file;
    std::uint32_t last = f.page_slots.back();
    f.page_slots[pos] = last;
    arena_[last].pos_in_file = pos;
    f.page_slots.pop_back();
    p.pos_in_file = 0;
  }

  void unlink_file_entry(FileId fid) {
    if (open_so_file_ == fid) open_so_file_ = 0;
    if (open_anon_file_ == fid) open_anon_file_ = 0;
    mem_.swam_files.erase(fid);
  }

  void remove_owner(std::uint32_t slot, AppId a) {
    Page& p = arena_[slot];
    auto it = extra_owners_.find(slot);
    if (p.owner0 == a) {
      p.owner0 = it->second.front();
      it->second.erase(it->second.begin());
    } else {
      auto pos = std::lower_bound(it->second.begin(), it->second.end(), a);
      it->second.erase(pos);
    }
    if (it->second.empty()) extra_owners_.erase(it);
    p.ref_count--;
    if (p.ref_count == 1 && p.kind == PageKind::SO && p.location == Location::RESIDENT)
      resident_shared_so_--;
  }

  /// Last reference dropped: remove the page from its location bucket
  /// and recycle the slot.
  void free_page(std::uint32_t slot, AppId owner, ReleaseSummary& out) {
    Page& p = arena_[slot];
    switch (p.location) {
      case Location::RESIDENT:
        mem_.resident_bytes -= page_bytes;
        break;
      case Location::ZRAM:
        mem_.zram_stored_logical -= page_bytes;
        mem_.zram_stored_physical = mem_.phys_of(mem_.zram_stored_logical);
        break;
      case Location::SWAM_FILE: {
        auto it = mem_.swam_files.find(p.file);
        SwamFile& f = it->second;
        remove_from_file(f, slot);
        mem_.swam_bytes_total -= page_bytes;
        if (f.page_slots.empty()) {
          out.unlinked_files.push_back(f.id);
          unlink_file_entry(f.id);
        }
        break;
      }
      case Location::NAND:
        mem_.nand_used -= page_bytes;
        break;
      case Location::NOT_PRESENT:
        break;
    }
    count_by_loc_[loc_idx(p.location)]--;
    apps_[owner].count_by_loc[loc_idx(p.location)]--;
    if (p.kind == PageKind::SO && p.location == Location::RESIDENT) resident_so_count_--;
    id_to_slot_.erase(p.id);
    p.live = false;
    p.ref_count = 0;
    p.owner0 = no_app;
    free_slots_.push_back(slot);
  }

  std::vector<Page> arena_;
  std::vector<std::uint32_t> free_slots_;
  std::unordered_map<PageId, std::uint32_t> id_to_slot_;
  std::map<std::uint32_t, std::vector<AppId>> extra_owners_;
  std::vector<App> apps_;
  MemoryState mem_;
  PageId next_page_id_ = 1;
  FileId next_file_id_ = 1;
  FileId open_so_file_ = 0;
  FileId open_anon_file_ = 0;
  std::int64_t count_by_loc_[5] = {0, 0, 0, 0, 0};
  std::int64_t resident_so_count_ = 0;
  std::int64_t resident_shared_so_ = 0;
};

}  // namespace swamsim
