#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teamscope/activity.hpp"
#include "teamscope/activity_graph.hpp"

namespace teamscope {

struct ActivityProfile;

enum class Role : std::uint8_t { Lead, DirectSupport, IndirectSupport, Unknown };
enum class RoleSource : std::uint8_t { Parsed, Predicted };

std::string_view role_name(Role r);
std::optional<Role> role_from_name(std::string_view name);
std::string_view source_name(RoleSource s);
std::optional<RoleSource> source_from_name(std::string_view name);

inline bool is_support(Role r) { return r == Role::DirectSupport || r == Role::IndirectSupport; }

struct RoleAssignment {
  std::string paper_id;
  std::string author_id;
  std::size_t position = 0;
  std::size_t team_size = 0;
  bool corresponding = false;
  Role role = Role::Unknown;
  RoleSource source = RoleSource::Parsed;
  bool promoted = false;
};

// Lead if any activity maps to the lead cluster; otherwise DirectSupport if
// any maps to direct support; otherwise IndirectSupport if non-empty; else Unknown.
Role assign_role(ActivitySet activities, const RoleMap& roles);

enum class Promotion { None, Corresponding, First };

// One assignment per profile, in profile order. For papers without any Lead,
// `promotion` names the author promoted to Lead (first corresponding author
// in byline order, or the first author).
std::vector<RoleAssignment> assign_roles(std::span<const ActivityProfile> profiles, const RoleMap& roles,
                                         Promotion promotion = Promotion::None);

enum class LRatioStatus { Ok, NoLead, Incomplete };

struct LRatio {
  std::string paper_id;
  std::size_t n = 0;
  std::size_t n_lead = 0;
  double value = 0.0;  // n_lead / n
  bool tall = false;   // value < 0.5
  LRatioStatus status = LRatioStatus::Ok;
  RoleSource source = RoleSource::Parsed;

  bool defined() const { return status == LRatioStatus::Ok; }
};

// Papers with an Unknown role are Incomplete; papers with no Lead are NoLead.
// Both are excluded from downstream analyses.
LRatio compute_lratio(std::string_view paper_id, std::span<const Role> roles,
                      RoleSource source = RoleSource::Parsed);

// Groups assignments by paper (in first-appearance order).
std::vector<LRatio> compute_lratios(std::span<const RoleAssignment> assignments);

struct SizeComposition {
  std::size_t authors = 0;
  std::size_t lead = 0;
  std::size_t direct = 0;
  std::size_t indirect = 0;
  std::size_t unknown = 0;

  double lead_fraction() const { return frac(lead); }
  double direct_fraction() const { return frac(direct); }
  double indirect_fraction() const { return frac(indirect); }

 private:
  double frac(std::size_t k) const { return authors ? static_cast<double>(k) / static_cast<double>(authors) : 0.0; }
};

// Team size -> role mix over all authors on teams of that size. Unknown
// roles stay in the denominator. Sizes above `max_size` are dropped; empty
// sizes have no row.
std::map<std::size_t, SizeComposition> composition_by_size(std::span<const RoleAssignment> assignments,
                                                           std::size_t max_size);

struct LRatioDistribution {
  std::size_t count = 0;
  double mean = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  // Bins [0,0.1), [0.1,0.2), ..., [0.9,1.0]; edges are k/10.
  std::array<std::size_t, 10> histogram{};
};

std::size_t lratio_bin(double value);

// Per team size, over defined L-ratios only.
std::map<std::size_t, LRatioDistribution> lratio_distribution_by_size(std::span<const LRatio> lratios);

}  // namespace teamscope
