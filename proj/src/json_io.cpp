#include "brayiso/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace brayiso {

namespace {

std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

double get_number(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  const Json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw InputError(std::string("field '") + key + "' must be a number");
}

Vec3 get_vec3(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 3)
    throw InputError(std::string("field '") + key + "' must be an array of 3 numbers");
  const Json& a = j.at(key);
  for (const Json& v : a)
    if (!v.is_number()) throw InputError(std::string("field '") + key + "' must be an array of 3 numbers");
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

std::vector<double> get_doubles(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw InputError(std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const Json& v : j.at(key)) {
    if (!v.is_number()) throw InputError(std::string("field '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

int get_int(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer())
    throw InputError(std::string("field '") + key + "' must be an integer");
  return j.at(key).get<int>();
}

std::string get_string(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) throw InputError(std::string("field '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

Json ball_json(const OffsetBall& b) {
  return Json{{"center", {b.center.x, b.center.y, b.center.z}}, {"rho", b.rho}};
}

OffsetBall ball_from(const Json& j) { return {get_vec3(j, "center"), get_number(j, "rho")}; }

}  // namespace

Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    std::string what = e.what();
    const auto pos = what.find("parse error");
    if (pos != std::string::npos) what = what.substr(pos);
    throw InputError(source + ":" + location(text, byte) + ": " + what);
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

Region region_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("region must be a JSON object");
  const std::string type = get_string(j, "type");
  if (type == "centered_ball") return CenteredBall{get_number(j, "r")};
  if (type == "offset_ball") return ball_from(j);
  if (type == "radial_graph") return RadialGraph{get_int(j, "n_theta"), get_doubles(j, "rho")};
  if (type == "ball_union") {
    if (!j.contains("balls") || !j.at("balls").is_array()) throw InputError("field 'balls' must be an array");
    BallUnion u;
    for (const Json& b : j.at("balls")) u.balls.push_back(ball_from(b));
    return u;
  }
  throw InputError("unknown region type '" + type + "'");
}

Json region_to_json(const Region& r) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CenteredBall>) {
          return Json{{"type", "centered_ball"}, {"r", v.r}};
        } else if constexpr (std::is_same_v<T, OffsetBall>) {
          Json j{{"type", "offset_ball"}};
          j.update(ball_json(v));
          return j;
        } else if constexpr (std::is_same_v<T, RadialGraph>) {
          return Json{{"type", "radial_graph"}, {"n_theta", v.n_theta}, {"rho", v.rho}};
        } else {
          Json balls = Json::array();
          for (const OffsetBall& b : v.balls) balls.push_back(ball_json(b));
          return Json{{"type", "ball_union"}, {"balls", balls}};
        }
      },
      r);
}

PerturbationSpec perturbation_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("perturbation must be a JSON object");
  PerturbationSpec p;
  if (j.contains("mass")) p.mass = MassParam(get_number(j, "mass"));
  p.amplitude = get_number(j, "amplitude");
  const std::string kind = j.contains("kind") ? get_string(j, "kind") : "isotropic";
  if (kind == "isotropic")
    p.kind = PerturbationSpec::Tensor::isotropic;
  else if (kind == "radial")
    p.kind = PerturbationSpec::Tensor::radial;
  else
    throw InputError("unknown perturbation kind '" + kind + "'");
  if (!j.contains("modes") || !j.at("modes").is_array()) throw InputError("field 'modes' must be an array");
  for (const Json& mode : j.at("modes")) p.modes.push_back({get_int(mode, "l"), get_int(mode, "m"), get_number(mode, "coeff")});
  if (j.contains("inner_cutoff")) p.inner_cutoff = get_number(j, "inner_cutoff");
  if (j.contains("outer_cutoff") && !j.at("outer_cutoff").is_null()) p.outer_cutoff = get_number(j, "outer_cutoff");
  return p;
}

Json perturbation_to_json(const PerturbationSpec& p) {
  Json modes = Json::array();
  for (const HarmonicMode& m : p.modes) modes.push_back({{"l", m.l}, {"m", m.m}, {"coeff", m.coeff}});
  return Json{{"mass", p.mass.value()},
              {"amplitude", p.amplitude},
              {"kind", p.kind == PerturbationSpec::Tensor::isotropic ? "isotropic" : "radial"},
              {"modes", modes},
              {"inner_cutoff", p.inner_cutoff},
              {"outer_cutoff", number(p.outer_cutoff)}};
}

GraphSurface surface_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("surface must be a JSON object");
  return {get_int(j, "n_theta"), get_doubles(j, "rho")};
}

Json surface_to_json(const GraphSurface& s) { return Json{{"n_theta", s.n_theta}, {"rho", s.rho}}; }

Json report_envelope(const std::string& command, Json settings, Json result) {
  return Json{{"schema", kSchema}, {"command", command}, {"settings", std::move(settings)}, {"result", std::move(result)}};
}

Json to_json(const ProfilePoint& p, MassParam m) {
  const double willmore = p.mean_curvature * p.mean_curvature * p.area;
  return Json{{"r", p.r},
              {"phi", conformal_factor(m, p.r)},
              {"area", p.area},
              {"H", p.mean_curvature},
              {"V", p.volume},
              {"volume_radius", p.volume_radius},
              {"isoperimetric_ratio", isoperimetric_ratio(m, p.r)},
              {"hawking_mass", hawking_mass(p.area, willmore)}};
}

Json to_json(const ChartParams& c) {
  return Json{{"m", c.m.value()}, {"r", c.r}, {"c", c.c}, {"alpha", c.alpha}, {"V0", c.V0}};
}

Json to_json(const GapReport& g) {
  return Json{{"tau", g.tau}, {"lhs", g.lhs}, {"rhs", g.rhs}, {"ratio", g.ratio()}, {"holds", g.holds}};
}

Json to_json(const Measured& m) { return Json{{"value", m.value}, {"error", m.error}}; }

Json to_json(const OffCenterReport& r) {
  return Json{{"V", r.V},
              {"r", r.r},
              {"eta", r.eta},
              {"eta_error", r.eta_error},
              {"outside_area", r.outside_area},
              {"sphere_area", r.sphere_area},
              {"matched_radius_ok", r.matched_radius_ok}};
}

Json to_json(const DeficitReport& r) {
  return Json{{"V", r.V},
              {"r", r.r},
              {"tau", r.tau},
              {"eta", r.eta},
              {"eta_error", r.eta_error},
              {"eta_used", r.eta_used},
              {"area", r.area_lhs},
              {"area_error", r.area_error},
              {"bound", r.bound_rhs},
              {"margin", r.margin},
              {"error", r.error},
              {"matched_radius_ok", r.matched_radius_ok},
              {"holds", r.holds}};
}

Json to_json(const ChainReport& r) {
  Json terms = Json::object();
  for (const ChainTerm& t : r.terms) terms[t.name] = Json{{"value", t.value}, {"error", t.error}};
  Json steps = Json::array();
  for (const ChainStep& s : r.steps)
    steps.push_back(Json{{"name", s.name},
                         {"lhs", s.lhs},
                         {"rhs", s.rhs},
                         {"tolerance", s.tolerance},
                         {"equality", s.equality},
                         {"holds", s.holds}});
  return Json{{"matched_r", r.matched_r},
              {"chart_r", r.chart_r},
              {"c", r.c},
              {"alpha", r.alpha},
              {"horizon_component", r.horizon_component},
              {"s_horizon", r.s_horizon},
              {"terms", terms},
              {"steps", steps},
              {"all_hold", r.all_hold()}};
}

Json to_json(const PerturbedDeficitReport& r) {
  return Json{{"off_center", to_json(r.off_center)},
              {"tau", r.tau},
              {"eta_used", r.eta_used},
              {"area", r.area_lhs},
              {"area_error", r.area_error},
              {"sphere_area", r.sphere_area},
              {"bound", r.bound_rhs},
              {"margin", r.margin},
              {"error", r.error},
              {"theta", Json{{"Theta", r.theta.theta},
                             {"area_volume_ratio", r.theta.area_volume_ratio},
                             {"growth", r.theta.growth},
                             {"ratio_ok", r.theta.ratio_ok},
                             {"growth_ok", r.theta.growth_ok}}},
              {"preconditions_ok", r.preconditions_ok},
              {"precondition", r.precondition},
              {"holds", r.holds}};
}

Json to_json(const TheoremStepReport& r) {
  return Json{{"r", r.r},
              {"V", r.V},
              {"A", r.A},
              {"eta", r.eta},
              {"eta_used", r.eta_used},
              {"tau", r.tau},
              {"a", Json{{"V_tilde", r.V_tilde}, {"A_tilde", r.A_tilde}}},
              {"b", Json{{"volume_change", r.b_volume_change}, {"area_change", r.b_area_change}}},
              {"c", Json{{"A_m_tilde", r.A_m_tilde}, {"residual", r.residual_c}}},
              {"d", Json{{"V_m_tilde", r.V_m_tilde}, {"residual", r.residual_d}}},
              {"e", Json{{"V_m_Sr", r.V_m_Sr}, {"residual", r.residual_e}}},
              {"f", Json{{"r_tilde", r.r_tilde}, {"r_tilde_g", r.r_tilde_g}, {"residual", r.residual_f}}},
              {"g", Json{{"eta_m", r.eta_m},
                         {"off_center_ok", r.g_off_center_ok},
                         {"lhs", r.g_lhs},
                         {"rhs", r.g_rhs},
                         {"holds", r.g_holds}}},
              {"h", Json{{"A_gm_Sr", r.A_gm_Sr}, {"residual", r.residual_h}}},
              {"i", Json{{"A_g_Sr", r.A_g_Sr}, {"difference", r.i_difference}}},
              {"j", Json{{"slack", r.j_slack}}}};
}

Json to_json(const MinimizeReport& r, bool with_surface) {
  Json j{{"converged", r.converged},
         {"iterations", r.iterations},
         {"area", r.area},
         {"volume", r.volume},
         {"target_volume", r.target_volume},
         {"matched_r", r.matched_r},
         {"mean_H", r.mean_H},
         {"cmc_deviation", r.cmc_deviation},
         {"centering", r.centering},
         {"stationarity", r.stationarity},
         {"profile_area", r.profile_area ? Json(*r.profile_area) : Json(nullptr)},
         {"area_history", r.area_history}};
  if (with_surface) j["surface"] = surface_to_json(r.surface);
  return j;
}

Json to_json(const BoundCheck& b) {
  return Json{{"integral", b.integral},
              {"integral_error", b.integral_error},
              {"bound", number(b.bound)},
              {"Theta", b.theta},
              {"holds", b.holds}};
}

Json to_json(const RadialIntegral& r) {
  return Json{{"closed_form", r.closed_form},
              {"quadrature", r.quadrature},
              {"quadrature_error", r.quadrature_error},
              {"relative_difference", r.relative_difference()}};
}

Json to_json(const VolumeDiffCheck& v) {
  return Json{{"lhs", v.lhs},   {"lhs_error", v.lhs_error}, {"volume", v.volume}, {"r0", v.r0},
              {"c_prime", v.c_prime}, {"rhs", v.rhs},     {"holds", v.holds}};
}

}  // namespace brayiso
