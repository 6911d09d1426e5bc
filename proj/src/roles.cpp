#include "teamscope/roles.hpp"

#include <algorithm>
#include <unordered_map>

#include "teamscope/statement_parser.hpp"
#include "teamscope/stats.hpp"

namespace teamscope {

std::string_view role_name(Role r) {
  switch (r) {
    case Role::Lead:
      return "lead";
    case Role::DirectSupport:
      return "direct";
    case Role::IndirectSupport:
      return "indirect";
    case Role::Unknown:
      return "unknown";
  }
  return "unknown";
}

std::optional<Role> role_from_name(std::string_view name) {
  for (Role r : {Role::Lead, Role::DirectSupport, Role::IndirectSupport, Role::Unknown}) {
    if (role_name(r) == name) return r;
  }
  return std::nullopt;
}

std::string_view source_name(RoleSource s) { return s == RoleSource::Parsed ? "parsed" : "predicted"; }

std::optional<RoleSource> source_from_name(std::string_view name) {
  if (name == "parsed") return RoleSource::Parsed;
  if (name == "predicted") return RoleSource::Predicted;
  return std::nullopt;
}

Role assign_role(ActivitySet activities, const RoleMap& roles) {
  bool direct = false;
  for (Activity a : activities.items()) {
    switch (roles[index_of(a)]) {
      case Cluster::Lead:
        return Role::Lead;
      case Cluster::DirectSupport:
        direct = true;
        break;
      case Cluster::IndirectSupport:
        break;
    }
  }
  if (direct) return Role::DirectSupport;
  return activities.empty() ? Role::Unknown : Role::IndirectSupport;
}

std::vector<RoleAssignment> assign_roles(std::span<const ActivityProfile> profiles, const RoleMap& roles,
                                         Promotion promotion) {
  std::vector<RoleAssignment> out;
  out.reserve(profiles.size());
  for (const auto& p : profiles) {
    out.push_back({p.paper_id, p.author_id, p.position, p.team_size, p.corresponding,
                   assign_role(p.activities, roles), RoleSource::Parsed, false});
  }
  if (promotion == Promotion::None) return out;

  std::unordered_map<std::string, std::vector<std::size_t>> by_paper;
  for (std::size_t i = 0; i < out.size(); ++i) by_paper[out[i].paper_id].push_back(i);
  for (auto& [_, idx] : by_paper) {
    if (std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return out[i].role == Role::Lead; })) continue;
    std::optional<std::size_t> pick;
    for (std::size_t i : idx) {
      const bool eligible = promotion == Promotion::First ? out[i].position == 0 : out[i].corresponding;
      if (eligible && (!pick || out[i].position < out[*pick].position)) pick = i;
    }
    if (pick) {
      out[*pick].role = Role::Lead;
      out[*pick].promoted = true;
    }
  }
  return out;
}

LRatio compute_lratio(std::string_view paper_id, std::span<const Role> roles, RoleSource source) {
  LRatio r;
  r.paper_id = std::string(paper_id);
  r.n = roles.size();
  r.source = source;
  r.n_lead = static_cast<std::size_t>(std::count(roles.begin(), roles.end(), Role::Lead));
  r.value = r.n ? static_cast<double>(r.n_lead) / static_cast<double>(r.n) : 0.0;
  r.tall = r.value < 0.5;
  if (r.n == 0 || std::count(roles.begin(), roles.end(), Role::Unknown) > 0) {
    r.status = LRatioStatus::Incomplete;
  } else if (r.n_lead == 0) {
    r.status = LRatioStatus::NoLead;
  }
  return r;
}

std::vector<LRatio> compute_lratios(std::span<const RoleAssignment> assignments) {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<const RoleAssignment*>> by_paper;
  for (const auto& a : assignments) {
    auto [it, fresh] = by_paper.try_emplace(a.paper_id);
    if (fresh) order.push_back(a.paper_id);
    it->second.push_back(&a);
  }
  std::vector<LRatio> out;
  out.reserve(order.size());
  for (const auto& id : order) {
    const auto& members = by_paper[id];
    std::vector<Role> roles;
    roles.reserve(members.size());
    bool predicted = false;
    for (const auto* a : members) {
      roles.push_back(a->role);
      predicted = predicted || a->source == RoleSource::Predicted;
    }
    LRatio r = compute_lratio(id, roles, predicted ? RoleSource::Predicted : RoleSource::Parsed);
    // A byline author missing from the assignments leaves the paper incomplete.
    if (!members.empty() && members.front()->team_size != members.size()) r.status = LRatioStatus::Incomplete;
    out.push_back(std::move(r));
  }
  return out;
}

std::map<std::size_t, SizeComposition> composition_by_size(std::span<const RoleAssignment> assignments,
                                                           std::size_t max_size) {
  std::map<std::size_t, SizeComposition> out;
  for (const auto& a : assignments) {
    if (a.team_size == 0 || a.team_size > max_size) continue;
    auto& c = out[a.team_size];
    ++c.authors;
    switch (a.role) {
      case Role::Lead:
        ++c.lead;
        break;
      case Role::DirectSupport:
        ++c.direct;
        break;
      case Role::IndirectSupport:
        ++c.indirect;
        break;
      case Role::Unknown:
        ++c.unknown;
        break;
    }
  }
  return out;
}

std::size_t lratio_bin(double value) {
  static const std::array<double, 11> edges = [] {
    std::array<double, 11> e{};
    for (int k = 0; k <= 10; ++k) e[static_cast<std::size_t>(k)] = k / 10.0;
    return e;
  }();
  const auto it = std::upper_bound(edges.begin(), edges.end(), value);
  const auto bin = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - edges.begin()) - 1));
  return std::min<std::size_t>(bin, 9);
}

std::map<std::size_t, LRatioDistribution> lratio_distribution_by_size(std::span<const LRatio> lratios) {
  std::map<std::size_t, std::vector<double>> values;
  for (const auto& l : lratios) {
    if (l.defined()) values[l.n].push_back(l.value);
  }
  std::map<std::size_t, LRatioDistribution> out;
  for (auto& [n, v] : values) {
    std::sort(v.begin(), v.end());
    LRatioDistribution d;
    d.count = v.size();
    d.mean = mean(v);
    d.q1 = quantile_sorted(v, 0.25);
    d.median = quantile_sorted(v, 0.5);
    d.q3 = quantile_sorted(v, 0.75);
    for (double x : v) ++d.histogram[lratio_bin(x)];
    out[n] = d;
  }
  return out;
}

}  // namespace teamscope
