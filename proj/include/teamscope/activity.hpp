#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace teamscope {

// The 25 canonical research activities, grouped by their reference cluster.
enum class Activity : std::uint8_t {
  // Lead
  Conceive,
  Design,
  Lead,
  Supervise,
  Coordinate,
  Interpret,
  Write,
  // Direct support
  Help,
  Assist,
  Prepare,
  Develop,
  Collect,
  Generate,
  Purify,
  Carry,
  Do,
  Perform,
  Conduct,
  Analyze,
  // Indirect support
  Participate,
  Provide,
  Contribute,
  Comment,
  Discuss,
  Edit,
};

inline constexpr std::size_t kActivityCount = 25;

enum class Cluster : std::uint8_t { Lead, DirectSupport, IndirectSupport };

std::string_view activity_name(Activity a);
std::optional<Activity> activity_from_name(std::string_view name);
std::string_view cluster_name(Cluster c);
std::optional<Cluster> cluster_from_name(std::string_view name);

// Fixed three-way grouping of the canonical activities.
Cluster reference_cluster(Activity a);

inline constexpr Activity activity_at(std::size_t i) { return static_cast<Activity>(i); }
inline constexpr std::size_t index_of(Activity a) { return static_cast<std::size_t>(a); }

// Bitset over the 25 activities.
class ActivitySet {
 public:
  constexpr ActivitySet() = default;
  constexpr explicit ActivitySet(std::uint32_t bits) : bits_(bits & kMask) {}
  ActivitySet(std::initializer_list<Activity> items) {
    for (Activity a : items) insert(a);
  }

  void insert(Activity a) { bits_ |= bit(a); }
  bool contains(Activity a) const { return (bits_ & bit(a)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  std::uint32_t bits() const { return bits_; }
  ActivitySet operator|(ActivitySet o) const { return ActivitySet(bits_ | o.bits_); }
  ActivitySet& operator|=(ActivitySet o) {
    bits_ |= o.bits_;
    return *this;
  }
  bool operator==(const ActivitySet&) const = default;

  // Members in canonical order.
  std::vector<Activity> items() const;

 private:
  static constexpr std::uint32_t kMask = (1u << kActivityCount) - 1;
  static std::uint32_t bit(Activity a) { return 1u << index_of(a); }
  std::uint32_t bits_ = 0;
};

// Surface-form table for the canonical activities plus the collective-subject
// phrases ("all authors", ...). Loaded from a tab-separated file:
//
//   <activity> TAB <comma-separated surface forms> TAB <cluster>
//   @collective TAB <comma-separated phrases>
//
// Blank lines and lines starting with '#' are ignored.
class ActivityLexicon {
 public:
  static ActivityLexicon builtin();
  static ActivityLexicon parse(std::istream& in, const std::string& source);
  static ActivityLexicon load(const std::filesystem::path& path);

  // Lowercases, strips punctuation, then tries the form table and regular
  // inflection stripping (-s, -es, -ed, -ied, -ing, doubled consonants).
  std::optional<Activity> canonicalize(std::string_view surface) const;

  Cluster cluster(Activity a) const { return clusters_[index_of(a)]; }
  const std::vector<std::string>& forms(Activity a) const { return form_lists_[index_of(a)]; }
  // Lowercased, whitespace-normalized.
  const std::vector<std::string>& collective_phrases() const { return collective_; }

  std::string to_tsv() const;

 private:
  std::optional<Activity> lookup(const std::string& word) const;

  std::unordered_map<std::string, Activity> form_index_;
  std::array<std::vector<std::string>, kActivityCount> form_lists_;
  std::array<Cluster, kActivityCount> clusters_{};
  std::vector<std::string> collective_;
};

}  // namespace teamscope
