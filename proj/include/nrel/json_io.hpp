#pragma once

/**
 * @file json_io.hpp
 * @brief Deterministic JSON (de)serialization for the CLI: rationals as
 *        "num/den" strings, Hecke elements and coset functions as sorted
 *        arrays of fixed-key objects, certificates with re-verifiable parts.
 */

#include <string>

#include "../../vendor/json.hpp"
#include "normrel.hpp"

namespace nrel {

using Json = nlohmann::ordered_json;

inline std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << numerator(r) << "/" << denominator(r);
  return os.str();
}

/// Parse "num/den" or "num"; throws std::invalid_argument on malformed input.
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational");
  std::size_t slash = s.find('/');
  auto parse_int = [](const std::string& t) {
    if (t.empty() || (!std::isdigit((unsigned char)t[0]) && t[0] != '-'))
      throw std::invalid_argument("malformed integer: " + t);
    for (std::size_t i = 1; i < t.size(); ++i)
      if (!std::isdigit((unsigned char)t[i]))
        throw std::invalid_argument("malformed integer: " + t);
    return Int(t);
  };
  if (slash == std::string::npos) return Rat(parse_int(s));
  Int num = parse_int(s.substr(0, slash));
  Int den = parse_int(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator: " + s);
  return Rat(num, den);
}

inline Json to_json(const QSqrtP& c) {
  return Json{{"rat", rat_str(c.rat)}, {"irr", rat_str(c.irr)}};
}

inline Json to_json(const HeckeElement& h) {
  Json arr = Json::array();
  for (const auto& [m, c] : h.terms) {
    Json t{{"e1", m[0]}, {"t1", m[1]}, {"e2", m[2]}, {"t2", m[3]}};
    t["rat"] = rat_str(c.rat);
    t["irr"] = rat_str(c.irr);
    arr.push_back(t);
  }
  return arr;
}

inline Json to_json(const PGCosetFunction& f) {
  Json arr = Json::array();
  for (const auto& [x, c] : f.support) {
    Json t{{"r0", x.r0}, {"r1", x.r1}, {"m", x.m}, {"n", x.n}};
    t["rat"] = rat_str(c.rat);
    t["irr"] = rat_str(c.irr);
    arr.push_back(t);
  }
  return arr;
}

inline Json to_json(const LocalizedHecke& P) {
  return Json{{"numer", to_json(P.numer)}, {"denomPower", P.denomPower}};
}

inline Json to_json(const Mat2& m) {
  return Json::array({Json::array({rat_str(m.a), rat_str(m.b)}),
                      Json::array({rat_str(m.c), rat_str(m.d)})});
}

inline Json to_json(const SchwartzFunction& phi) {
  Json cells = Json::array();
  for (const auto& [key, v] : phi.cells)
    cells.push_back(Json{{"a", rat_str(key.first)},
                         {"c", rat_str(key.second)},
                         {"value", rat_str(v)}});
  return Json{{"p", phi.p}, {"depth", phi.depth}, {"cells", cells}};
}

inline Json to_json(const LatticeElement& e) {
  return Json{{"coeff", rat_str(e.coeff)},
              {"phi", to_json(e.phi)},
              {"g", Json::array({to_json(e.g.slot1), to_json(e.g.slot2)})},
              {"level", e.level == Level::Full ? "Full" : "DetP"}};
}

inline Json certificate_json(const IdealCertificate& cert,
                             const std::vector<LatticeElement>& delta,
                             SVariant variant) {
  Json delta_json = Json::array();
  for (const auto& e : delta) delta_json.push_back(to_json(e));
  Json out{{"schema", "v1"},
           {"p", cert.p},
           {"level", "DetP"},
           {"variant", variant == SVariant::S0 ? "S0" : "S"},
           {"delta", delta_json},
           {"target", to_json(cert.target)},
           {"A", to_json(cert.A)},
           {"B", to_json(cert.B)},
           {"denomPower", cert.denomPower},
           {"verified", cert.verified}};
  if (!cert.note.empty()) out["note"] = cert.note;
  return out;
}

/// Inverse of certificate_json's certificate part, for round-trip checks.
inline QSqrtP qsqrtp_from_json(const Json& j, long p) {
  return QSqrtP(parse_rat(j.at("rat").get<std::string>()),
                parse_rat(j.at("irr").get<std::string>()), p);
}

inline HeckeElement hecke_from_json(const Json& j, long p) {
  HeckeElement h;
  for (const auto& t : j) {
    Monomial m{t.at("e1").get<long>(), t.at("t1").get<long>(),
               t.at("e2").get<long>(), t.at("t2").get<long>()};
    h.terms[m] = qsqrtp_from_json(t, p);
  }
  return h;
}

inline IdealCertificate certificate_from_json(const Json& j) {
  IdealCertificate cert;
  cert.p = j.at("p").get<long>();
  cert.target.numer = hecke_from_json(j.at("target").at("numer"), cert.p);
  cert.target.denomPower = j.at("target").at("denomPower").get<long>();
  cert.A = hecke_from_json(j.at("A"), cert.p);
  cert.B = hecke_from_json(j.at("B"), cert.p);
  cert.denomPower = j.at("denomPower").get<long>();
  cert.verified = j.at("verified").get<bool>();
  return cert;
}

}  // namespace nrel
