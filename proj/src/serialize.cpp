#include "quadreg/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "quadreg/errors.hpp"

namespace quadreg {

std::string format_double(double v, int digits) {
  char buf[64];
  if (digits > 0) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
  }
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Json to_json(const RatVec& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

Json to_json(const RatMat& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(to_json(m.row(i)));
  return rows;
}

Json support_rows(const SupportMatrix& s) {
  Json a = Json::array();
  for (auto& r : s.rows()) a.push_back(r);
  return a;
}

Json face_to_json(const BirkhoffFace& face, bool centered) {
  Json j;
  j["N"] = face.n;
  j["support_bits"] = support_rows(face.support);
  j["perm_count"] = face.perms.size();
  j["centered"] = centered;
  return j;
}

Json path_to_json(const RegPath& path) {
  Json segs = Json::array();
  for (const auto& s : path.segments) {
    Json j;
    j["eta_lo"] = to_string(s.eta_lo);
    j["eta_hi"] = s.eta_hi ? to_string(*s.eta_hi) : std::string("inf");
    j["x0"] = to_json(s.x0);
    j["d"] = to_json(s.d);
    Json support = Json::array();
    for (std::size_t i = 0; i < s.x0.size(); ++i) {
      if ((s.support >> i) & 1u) support.push_back(i);
    }
    j["support"] = support;
    j["vertex_count"] = s.face.size();
    segs.push_back(std::move(j));
  }
  Json out;
  out["segments"] = segs;
  out["delta_min_sq"] = to_string(path.delta_min_sq);
  out["delta_max_sq"] = to_string(path.delta_max_sq);
  out["delta_min"] = path.delta_min;
  out["delta_max"] = path.delta_max;
  out["eta_stationary"] = to_string(path.eta_stationary);
  out["fallback_used"] = path.fallback_used;
  return out;
}

Json erdos_to_json(const std::vector<ErdosRecord>& records) {
  Json a = Json::array();
  for (const auto& r : records) {
    Json j;
    j["matrix"] = to_json(r.matrix);
    j["face_support"] = support_rows(r.face_support);
    j["maxtr"] = to_string(r.maxtr_value);
    j["norm_sq"] = to_string(r.norm_sq);
    a.push_back(std::move(j));
  }
  return a;
}

Json scan_to_json(const SupportScanReport& report) {
  Json j;
  j["monotone"] = report.monotone;
  if (report.violation) {
    const auto& v = *report.violation;
    j["violation"] = {{"eta_prev", v.eta_prev}, {"eta_next", v.eta_next}, {"entry", {v.i + 1, v.j + 1}}};
  } else {
    j["violation"] = nullptr;
  }
  return j;
}

std::string path_grid_csv(const RegPath& path, const std::vector<Rational>& etas) {
  std::ostringstream os;
  const std::size_t dim = path.segments.empty() ? 0 : path.segments.front().x0.size();
  os << "eta,delta";
  for (std::size_t i = 0; i < dim; ++i) os << ",coord_" << i;
  os << '\n';
  for (const auto& eta : etas) {
    const RatVec x = path.at(eta);
    os << format_double(eta.get_d(), 12) << ',' << format_double(std::sqrt(norm_sq(x).get_d()), 12);
    for (const auto& q : x) os << ',' << format_double(q.get_d(), 12);
    os << '\n';
  }
  return os.str();
}

std::string weight_curve_csv(const std::vector<WeightPoint>& points) {
  std::ostringstream os;
  os << "inv_two_eta,weight\n";
  for (const auto& p : points) os << format_double(p.reg, 12) << ',' << format_double(p.weight, 12) << '\n';
  return os.str();
}

namespace {

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

Rational entry(const Json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return parse_rational(v.dump());
  if (v.is_number_float()) return parse_rational(format_double(v.get<double>()));
  throw ParseError("cost entries must be strings or numbers");
}

RatVec row_of(const Json& a) {
  if (!a.is_array()) throw ParseError("expected a JSON array");
  RatVec out;
  for (const auto& v : a) out.push_back(entry(v));
  return out;
}

}  // namespace

RatVec parse_vector_json(std::string_view text) {
  const Json j = parse_json(text);
  if (j.is_array() && !j.empty() && j.front().is_array()) {
    RatVec flat;
    for (const auto& r : j) {
      auto row = row_of(r);
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return flat;
  }
  auto v = row_of(j);
  if (v.empty()) throw ParseError("empty cost");
  return v;
}

RatMat parse_matrix_json(std::string_view text) {
  const Json j = parse_json(text);
  if (!j.is_array() || j.empty()) throw ParseError("cost matrix must be a nonempty array");
  if (j.front().is_array()) {
    const std::size_t n = j.size();
    RatVec flat;
    for (const auto& r : j) {
      auto row = row_of(r);
      if (row.size() != n) throw ParseError("cost matrix must be square");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return RatMat::from_flat(flat, n, n);
  }
  auto flat = row_of(j);
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(flat.size()))));
  if (n * n != flat.size()) throw ParseError("flat cost length is not a perfect square");
  return RatMat::from_flat(flat, n, n);
}

}  // namespace quadreg
