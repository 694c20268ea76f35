#pragma once

// JSON and CSV encodings of matrices, MUB sets and reports. Output is
// deterministic: keys in insertion order, doubles at 17 significant digits.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "mubkit/composite.hpp"
#include "mubkit/cyclo.hpp"
#include "mubkit/errors.hpp"
#include "mubkit/mub.hpp"
#include "mubkit/report.hpp"
#include "mubkit/weyl.hpp"

namespace mubkit::io {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {
inline bool is_flat(const Json& j) {
  for (const auto& el : j)
    if (el.is_structured()) return false;
  return true;
}

inline void write(std::ostream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::number_float: os << format_double(j.get<double>()); return;
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << inner << Json(k).dump() << ": ";
        write(os, v, indent + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty() || is_flat(j)) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write(os, j[i], indent + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << inner;
        write(os, j[i], indent + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    default: os << j.dump(); return;
  }
}
}  // namespace detail

/// Pretty JSON with fixed 17-digit floats and a trailing newline.
inline std::string dump(const Json& j) {
  std::ostringstream os;
  detail::write(os, j, 0);
  os << "\n";
  return os.str();
}

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

/// {num: k, mod: 2d, scale_sqrt_dim: s} meaning tau^k / d^{s/2}; zero is null.
inline Json amplitude_to_json(const ExactEntry& e, int scale_sqrt_dim) {
  if (!e) return nullptr;
  return Json{{"num", e->value()}, {"mod", e->modulus()}, {"scale_sqrt_dim", scale_sqrt_dim}};
}

inline Json matrix_to_json(const OperatorMatrix& m) {
  Json j;
  j["dim"] = m.dim();
  Json entries = Json::array();
  for (int r = 0; r < m.dim(); ++r)
    for (int c = 0; c < m.dim(); ++c) entries.push_back(complex_to_json(m(r, c)));
  j["entries"] = std::move(entries);
  if (m.has_exact()) {
    j["mod"] = 2 * m.phase_dim();
    Json exact = Json::array();
    for (const auto& e : m.exact_grid()) exact.push_back(e ? Json(e->value()) : Json(nullptr));
    j["exact"] = std::move(exact);
  }
  return j;
}

inline Json label_to_json(const BasisLabel& l) {
  if (l.kind == BasisLabel::Kind::parameter) return l.value;
  return l.str();
}

inline BasisLabel label_from_json(const Json& j) {
  if (j.is_number_integer()) return BasisLabel::parameter(j.get<int>());
  const auto s = j.get<std::string>();
  if (s == "s") return BasisLabel::spherical();
  if (s.rfind("class:", 0) == 0) return BasisLabel::commuting_class(std::stoi(s.substr(6)));
  throw ParameterError("unknown basis label '" + s + "'");
}

inline Json weyl_label_to_json(const WeylLabel& w) { return Json{{"x", w.x}, {"z", w.z}}; }

/// With `exact`, bases that carry exact amplitudes are written in the exact
/// encoding; everything else is written as [re, im] pairs.
inline Json mubset_to_json(const MubSet& set, bool exact) {
  Json j;
  j["dim"] = set.dim;
  j["exact"] = exact && set.has_exact();
  j["complete_by_construction"] = set.complete_by_construction;
  if (!set.notes.empty()) j["notes"] = set.notes;
  Json bases = Json::array();
  for (const auto& b : set.bases) {
    Json jb;
    jb["label"] = label_to_json(b.label);
    if (!b.members.empty()) {
      Json members = Json::array();
      for (const auto& w : b.members) members.push_back(weyl_label_to_json(w));
      jb["members"] = std::move(members);
    }
    const bool write_exact = exact && b.has_exact();
    Json vectors = Json::array();
    for (const auto& v : b.vectors) {
      Json amps = Json::array();
      for (Eigen::Index s = 0; s < v.numeric.size(); ++s)
        amps.push_back(write_exact ? amplitude_to_json(v.exact->phases[static_cast<std::size_t>(s)],
                                                       v.exact->scale_sqrt_dim)
                                   : complex_to_json(v.numeric(s)));
      vectors.push_back(std::move(amps));
    }
    jb["vectors"] = std::move(vectors);
    bases.push_back(std::move(jb));
  }
  j["bases"] = std::move(bases);
  return j;
}

inline MubSet mubset_from_json(const Json& j) {
  MubSet set;
  set.dim = j.at("dim").get<int>();
  if (set.dim < 1) throw DimensionError("MubSet JSON: bad dimension");
  if (j.contains("complete_by_construction")) set.complete_by_construction = j["complete_by_construction"].get<bool>();
  for (const auto& jb : j.at("bases")) {
    MubBasis b;
    b.dim = set.dim;
    b.label = label_from_json(jb.at("label"));
    if (jb.contains("members"))
      for (const auto& m : jb["members"]) {
        WeylLabel w;
        w.x = m.at("x").get<std::vector<int>>();
        w.z = m.at("z").get<std::vector<int>>();
        w.e = static_cast<int>(w.x.size());
        // p is not stored; recover it from the dimension
        w.p = 1;
        for (int p = 2; p <= set.dim; ++p) {
          long d = 1;
          for (int i = 0; i < w.e; ++i) d *= p;
          if (d == set.dim) {
            w.p = p;
            break;
          }
        }
        b.members.push_back(std::move(w));
      }
    int index = 0;
    for (const auto& jv : jb.at("vectors")) {
      if (jv.size() != static_cast<std::size_t>(set.dim)) throw DimensionError("MubSet JSON: vector of wrong length");
      const bool exact = std::any_of(jv.begin(), jv.end(), [](const Json& a) { return a.is_null() || a.is_object(); });
      if (exact) {
        ExactAmplitudes amp;
        amp.scale_sqrt_dim = -1;
        for (const auto& a : jv) {
          if (a.is_null()) {
            amp.phases.emplace_back();
            continue;
          }
          const int mod = a.at("mod").get<int>();
          if (mod != 2 * set.dim) throw DimensionError("MubSet JSON: amplitude modulus does not match dimension");
          const int scale = a.at("scale_sqrt_dim").get<int>();
          if (amp.scale_sqrt_dim >= 0 && scale != amp.scale_sqrt_dim)
            throw ParameterError("MubSet JSON: mixed amplitude scales within one vector");
          amp.scale_sqrt_dim = scale;
          amp.phases.emplace_back(PhaseExponent(a.at("num").get<long>(), set.dim));
        }
        if (amp.scale_sqrt_dim < 0) amp.scale_sqrt_dim = 0;
        b.vectors.push_back(make_exact_vector(set.dim, index++, std::move(amp)));
      } else {
        MubVector v;
        v.dim = set.dim;
        v.index = index++;
        v.numeric.resize(set.dim);
        for (int s = 0; s < set.dim; ++s) v.numeric(s) = {jv[s].at(0).get<double>(), jv[s].at(1).get<double>()};
        b.vectors.push_back(std::move(v));
      }
    }
    set.bases.push_back(std::move(b));
  }
  return set;
}

inline Json report_to_json(const VerificationReport& r) {
  Json j;
  j["check"] = r.check;
  j["pass"] = r.passed;
  j["tolerance"] = r.tolerance;
  j["max_residual"] = r.max_residual;
  if (r.exact_passed) j["exact_pass"] = *r.exact_passed;
  Json res = Json::object();
  for (const auto& [k, v] : r.residuals) res[k] = v;
  j["residuals"] = std::move(res);
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

inline Json set_verification_to_json(const MubSet& set, const SetVerification& v) {
  Json j = report_to_json(v.summary);
  j["dim"] = set.dim;
  j["bases"] = static_cast<int>(set.bases.size());
  Json pairs = Json::array();
  for (const auto& p : v.pairs) {
    Json jp;
    jp["first"] = label_to_json(set.bases[p.first].label);
    jp["second"] = label_to_json(set.bases[p.second].label);
    jp["pass"] = p.passed;
    if (p.exact_passed) jp["exact_pass"] = *p.exact_passed;
    jp["max_deviation"] = p.max_deviation;
    pairs.push_back(std::move(jp));
  }
  j["pairs"] = std::move(pairs);
  return j;
}

/// One row per vector: basis label, index, then interleaved re/im columns.
inline std::string mubset_to_csv(const MubSet& set) {
  std::ostringstream os;
  os << "basis,index";
  for (int s = 0; s < set.dim; ++s) os << ",re" << s << ",im" << s;
  os << "\n";
  for (const auto& b : set.bases)
    for (const auto& v : b.vectors) {
      os << b.label.str() << "," << v.index;
      for (Eigen::Index s = 0; s < v.numeric.size(); ++s)
        os << "," << format_double(v.numeric(s).real()) << "," << format_double(v.numeric(s).imag());
      os << "\n";
    }
  return os.str();
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParameterError("malformed JSON in '" + path + "': " + e.what());
  }
}

}  // namespace mubkit::io
