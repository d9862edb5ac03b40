#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "dircomm/error.hpp"
#include "dircomm/graph.hpp"

namespace dircomm {

using Matrix2 = std::array<std::array<double, 2>, 2>;

enum class Normalization {
  PossiblePairs,        // e_rs / (N_r N_s), diagonal e_rr / (N_r (N_r - 1))
  PossiblePairsLargeN,  // e_rs / (N_r N_s) everywhere, the large-N form
  DegreeProduct,        // e_rs / (e_r^out e_s^in)
};

struct DensityMatrix {
  Matrix2 w{};
  Normalization normalization = Normalization::PossiblePairs;
  std::array<double, 2> group_sizes{};

  double operator()(Group r, Group s) const { return w[r][s]; }
};

/// Density matrix of block counts under possible-pair normalization.
template <class T>
DensityMatrix density_from_counts(const BlockCounts<T>& counts, std::array<double, 2> sizes,
                                  Normalization norm = Normalization::PossiblePairs) {
  require(norm != Normalization::DegreeProduct,
          "use density_degree_normalized for degree-product normalization");
  const bool exact = norm == Normalization::PossiblePairs;
  for (Group r : {0, 1}) {
    require(sizes[r] >= 1.0, "group sizes must be positive");
    require(!exact || sizes[r] >= 2.0,
            "density undefined: group " + std::to_string(r) + " has fewer than 2 nodes");
  }
  DensityMatrix d{{}, norm, sizes};
  for (Group r : {0, 1})
    for (Group s : {0, 1}) {
      double denom = sizes[r] * ((r == s && exact) ? sizes[s] - 1.0 : sizes[s]);
      d.w[r][s] = static_cast<double>(counts(r, s)) / denom;
    }
  return d;
}

inline DensityMatrix density(const LabeledDigraph& g) {
  return density_from_counts(g.block_counts(), {static_cast<double>(g.group_size(0)),
                                                static_cast<double>(g.group_size(1))});
}

/// w~_rs = e_rs / (e_r^out e_s^in) with e_r^out = e_rr + e_rs and e_s^in = e_ss + e_rs.
template <class T>
DensityMatrix density_degree_normalized(const BlockCounts<T>& counts) {
  std::array<double, 2> out{}, in{};
  for (Group r : {0, 1}) {
    out[r] = static_cast<double>(counts.out_of(r));
    in[r] = static_cast<double>(counts.into(r));
    require(out[r] > 0.0, "degree-normalized density undefined: e_" + std::to_string(r) + "^out = 0");
    require(in[r] > 0.0, "degree-normalized density undefined: e_" + std::to_string(r) + "^in = 0");
  }
  DensityMatrix d{{}, Normalization::DegreeProduct, {}};
  for (Group r : {0, 1})
    for (Group s : {0, 1}) d.w[r][s] = static_cast<double>(counts(r, s)) / (out[r] * in[s]);
  return d;
}

inline DensityMatrix density_degree_normalized(const LabeledDigraph& g) {
  auto d = density_degree_normalized(g.block_counts());
  d.group_sizes = {static_cast<double>(g.group_size(0)), static_cast<double>(g.group_size(1))};
  return d;
}

enum class Kind { Assortative, CorePeriphery, Disassortative, SourceBasin, Unclassified };

/// Pairwise community type. `role` is the core group for CorePeriphery and the
/// basin group for SourceBasin, empty otherwise.
struct CommunityType {
  Kind kind = Kind::Unclassified;
  std::optional<Group> role;

  std::optional<Group> core() const {
    return kind == Kind::CorePeriphery ? role : std::nullopt;
  }
  std::optional<Group> basin() const {
    return kind == Kind::SourceBasin ? role : std::nullopt;
  }
  bool operator==(const CommunityType&) const = default;
};

inline std::string_view kind_code(Kind k) {
  switch (k) {
    case Kind::Assortative: return "A";
    case Kind::CorePeriphery: return "CP";
    case Kind::Disassortative: return "D";
    case Kind::SourceBasin: return "SB";
    case Kind::Unclassified: return "U";
  }
  return "U";
}

inline Kind kind_from_code(std::string_view code) {
  for (Kind k : {Kind::Assortative, Kind::CorePeriphery, Kind::Disassortative, Kind::SourceBasin,
                 Kind::Unclassified})
    if (kind_code(k) == code) return k;
  throw Error("unknown community kind '" + std::string(code) + "'");
}

/// Short label including the role, e.g. "CP0" or "SB1".
inline std::string type_label(const CommunityType& t) {
  std::string s(kind_code(t.kind));
  if (t.role) s += static_cast<char>('0' + *t.role);
  return s;
}

/// Ranking-based classifier. Strict inequalities only: any tie that decides
/// the ranking yields Unclassified.
inline CommunityType classify(const Matrix2& w) {
  for (const auto& row : w)
    for (double v : row)
      require(std::isfinite(v), "classify: density entries must be finite");

  std::optional<CommunityType> found;
  int distinct = 0;
  auto hit = [&](CommunityType t) {
    if (!found || !(*found == t)) ++distinct;
    found = t;
  };
  for (Group r : {0, 1}) {
    const Group s = other(r);
    const double rr = w[r][r], rs = w[r][s], sr = w[s][r], ss = w[s][s];
    if (std::max(rs, sr) < std::min(rr, ss)) hit({Kind::Assortative, std::nullopt});
    if (std::min(rr, rs) > std::max(sr, ss)) hit({Kind::CorePeriphery, r});
    if (std::min(rs, sr) > std::max(rr, ss)) hit({Kind::Disassortative, std::nullopt});
    if (std::min(rr, sr) > std::max(rs, ss)) hit({Kind::SourceBasin, r});
  }
  if (distinct != 1) return {};
  return *found;
}

inline CommunityType classify(const DensityMatrix& d) { return classify(d.w); }

/// Matrix seen with group labels 0 and 1 exchanged.
inline Matrix2 relabeled(const Matrix2& w) {
  return {{{w[1][1], w[1][0]}, {w[0][1], w[0][0]}}};
}

inline CommunityType relabeled(const CommunityType& t) {
  if (!t.role) return t;
  return {t.kind, other(*t.role)};
}

}  // namespace dircomm
