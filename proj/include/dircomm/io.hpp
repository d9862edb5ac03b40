#pragma once

#include <charconv>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dircomm/dynamics.hpp"
#include "dircomm/meanfield.hpp"
#include "dircomm/metrics.hpp"
#include "dircomm/params.hpp"
#include "dircomm/phase.hpp"

namespace dircomm {

using Json = nlohmann::ordered_json;

/// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error("could not format number");
  return std::string(buf, end);
}

inline Json optional_json(const std::optional<Group>& g) {
  return g ? Json(static_cast<int>(*g)) : Json(nullptr);
}

inline Json to_json(const CommunityType& t) {
  return Json{{"kind", kind_code(t.kind)}, {"core", optional_json(t.core())},
              {"basin", optional_json(t.basin())}};
}

inline CommunityType community_type_from_json(const Json& j) {
  CommunityType t;
  t.kind = kind_from_code(j.at("kind").get<std::string>());
  const char* role_key = t.kind == Kind::CorePeriphery ? "core" : "basin";
  if (t.kind == Kind::CorePeriphery || t.kind == Kind::SourceBasin) {
    const int role = j.at(role_key).get<int>();
    require(role == 0 || role == 1, "community type role must be 0 or 1");
    t.role = static_cast<Group>(role);
  }
  return t;
}

inline Json to_json(const Matrix2& w) { return Json{{w[0][0], w[0][1]}, {w[1][0], w[1][1]}}; }

inline Matrix2 matrix_from_json(const Json& j) {
  require(j.is_array() && j.size() == 2 && j[0].is_array() && j[0].size() == 2 &&
              j[1].is_array() && j[1].size() == 2,
          "omega must be a 2x2 array");
  Matrix2 w;
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s) {
      require(j[r][s].is_number(), "omega entries must be numbers");
      w[r][s] = j[r][s].get<double>();
    }
  return w;
}

inline Json to_json(const ModelParams& p) {
  auto arr = [](const std::array<double, 2>& a) { return Json{a[0], a[1]}; };
  return Json{{"p_swap", arr(p.p_swap)},
              {"p_assort", arr(p.p_assort)},
              {"alpha", arr(p.alpha)},
              {"p_remove", arr(p.p_remove)},
              {"group_sizes", arr(p.group_sizes)}};
}

inline Json to_json(const MeanFieldSolution& s) {
  return Json{{"beta", {s.beta[0], s.beta[1]}},
              {"z", {s.z_star[0], s.z_star[1]}},
              {"omega", to_json(s.omega.w)},
              {"type", to_json(classify(s.omega))},
              {"omega_exact", to_json(s.omega_exact.w)},
              {"b", s.b},
              {"c", s.c}};
}

/// Trajectory CSV: t,w00,w01,w10,w11,z0,z1,beta0,beta1 (undefined beta left empty).
inline void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec) {
  os << "t,w00,w01,w10,w11,z0,z1,beta0,beta1\n";
  for (const auto& s : rec.samples) {
    os << format_double(s.t);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) os << ',' << format_double(s.omega.w[r][c]);
    os << ',' << format_double(s.z[0]) << ',' << format_double(s.z[1]);
    for (const auto& b : s.beta) os << ',' << (b ? format_double(*b) : std::string());
    os << '\n';
  }
}

/// Phase grid CSV: pa0,pa1,kind,core,basin (absent roles left empty).
inline void write_phase_csv(std::ostream& os, const PhaseGrid& grid) {
  os << "pa0,pa1,kind,core,basin\n";
  auto role = [](const std::optional<Group>& g) { return g ? std::to_string(*g) : std::string(); };
  for (std::size_t i = 0; i < grid.x.resolution; ++i)
    for (std::size_t j = 0; j < grid.y.resolution; ++j) {
      const auto& t = grid.at(i, j);
      os << format_double(grid.x.center(i)) << ',' << format_double(grid.y.center(j)) << ','
         << kind_code(t.kind) << ',' << role(t.core()) << ',' << role(t.basin()) << '\n';
    }
}

inline Json to_json(const PhaseFixed& f) {
  return Json{{"b", f.b}, {"c", f.c}, {"p_swap", f.p_swap}, {"p_remove", f.p_remove}};
}

inline Json to_json(const RootSearch& r) {
  Json j;
  j["root"] = r.root ? Json(*r.root) : Json(nullptr);
  j["bracket"] = r.bracket ? Json{r.bracket->first, r.bracket->second} : Json(nullptr);
  j["iterations"] = r.iterations;
  j["residual"] = r.residual;
  return j;
}

/// Four candidate roots as top-level fields, their minimum as "psstar".
inline Json to_json(const CriticalSwap& cs) {
  Json j{{"b", cs.b}, {"c", cs.c}};
  Json diag;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& cand = cs.candidates[k];
    const std::string name(boundary_name(kBoundaries[k]));
    j["ps_star_" + name] = cand.root ? Json(*cand.root) : Json(nullptr);
    diag[name] = to_json(cand);
  }
  j["psstar"] = cs.ps_star;
  j["limiting"] = boundary_name(cs.limiting);
  j["relabeled"] = cs.relabeled;
  j["diagnostics"] = diag;
  return j;
}

inline Json to_json(const std::vector<Polyline>& lines) {
  Json arr = Json::array();
  for (const auto& l : lines) {
    Json pts = Json::array();
    for (const auto& p : l.points) pts.push_back({p[0], p[1]});
    arr.push_back({{"between", l.between}, {"points", pts}});
  }
  return arr;
}

}  // namespace dircomm
