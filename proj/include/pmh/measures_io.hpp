#pragma once

// Text forms of mixing measures:
//   JSON  {"type": "beta", "alpha": "5/2", "beta": "7/2"}
//         {"type": "point", "location": "0.4"}
//         {"type": "discrete", "atoms": [{"location": "0.2", "weight": "0.5"}, ...]}
//   CLI   beta:a,b | point:m | discrete:x1,w1;x2,w2;... | jeffreys | uniform
// Numbers are strings so exact values survive; a rational without a
// terminating decimal expansion is written as "p/q".

#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pmh/errors.hpp"
#include "pmh/measures.hpp"
#include "pmh/rational.hpp"

namespace pmh {

inline std::string scalar_to_text(const Rational& r) { return to_exact_string(r); }

inline std::string scalar_to_text(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

template <Scalar T>
T scalar_from_text(std::string_view text) {
  if constexpr (is_exact_v<T>) {
    return parse_rational(text);
  } else {
    const std::string owned(text);
    if (owned.find('/') != std::string::npos) return to_double(parse_rational(owned));
    char* end = nullptr;
    const double value = std::strtod(owned.c_str(), &end);
    if (owned.empty() || end != owned.c_str() + owned.size()) {
      throw ParseError("not a number: '" + owned + "'");
    }
    return value;
  }
}

template <Scalar T>
nlohmann::json to_json(const MixingMeasure<T>& measure) {
  return measure.visit(Overloaded{
      [](const PointMass<T>& p) {
        return nlohmann::json{{"type", "point"}, {"location", scalar_to_text(p.location)}};
      },
      [](const BetaMeasure<T>& b) {
        return nlohmann::json{
            {"type", "beta"}, {"alpha", scalar_to_text(b.alpha)}, {"beta", scalar_to_text(b.beta)}};
      },
      [](const DiscreteMeasure<T>& d) {
        nlohmann::json atoms = nlohmann::json::array();
        for (const auto& a : d.atoms) {
          atoms.push_back({{"location", scalar_to_text(a.location)},
                           {"weight", scalar_to_text(a.weight)}});
        }
        return nlohmann::json{{"type", "discrete"}, {"atoms", atoms}};
      },
  });
}

template <Scalar T>
MixingMeasure<T> measure_from_json(const nlohmann::json& j) {
  auto field = [&](const nlohmann::json& obj, const char* key) -> T {
    if (!obj.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    const auto& v = obj.at(key);
    if (v.is_string()) return scalar_from_text<T>(v.get<std::string>());
    if (v.is_number()) return scalar_from_text<T>(v.dump());
    throw ParseError(std::string("field '") + key + "' must be a decimal string");
  };
  if (!j.is_object() || !j.contains("type")) throw ParseError("measure JSON needs a 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "point") return MixingMeasure<T>::point(field(j, "location"));
  if (type == "beta") return MixingMeasure<T>::beta(field(j, "alpha"), field(j, "beta"));
  if (type == "discrete") {
    if (!j.contains("atoms") || !j.at("atoms").is_array()) {
      throw ParseError("discrete measure needs an 'atoms' array");
    }
    std::vector<Atom<T>> atoms;
    for (const auto& a : j.at("atoms")) atoms.push_back({field(a, "location"), field(a, "weight")});
    return MixingMeasure<T>::discrete(std::move(atoms));
  }
  throw ParseError("unknown measure type '" + type + "'");
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace detail

template <Scalar T>
MixingMeasure<T> parse_measure_spec(std::string_view spec) {
  if (spec == "jeffreys") return MixingMeasure<T>::jeffreys();
  if (spec == "uniform") return MixingMeasure<T>::uniform();
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError("prior must look like beta:a,b | point:m | discrete:x,w;... (got '" +
                     std::string(spec) + "')");
  }
  const std::string_view type = spec.substr(0, colon);
  const std::string_view body = spec.substr(colon + 1);
  if (type == "point") return MixingMeasure<T>::point(scalar_from_text<T>(body));
  if (type == "beta") {
    const auto parts = detail::split(body, ',');
    if (parts.size() != 2) throw ParseError("beta prior needs two parameters: beta:a,b");
    return MixingMeasure<T>::beta(scalar_from_text<T>(parts[0]), scalar_from_text<T>(parts[1]));
  }
  if (type == "discrete") {
    std::vector<Atom<T>> atoms;
    for (const auto atom : detail::split(body, ';')) {
      if (atom.empty()) continue;
      const auto parts = detail::split(atom, ',');
      if (parts.size() != 2) throw ParseError("discrete atoms are written location,weight");
      atoms.push_back({scalar_from_text<T>(parts[0]), scalar_from_text<T>(parts[1])});
    }
    return MixingMeasure<T>::discrete(std::move(atoms));
  }
  throw ParseError("unknown prior type '" + std::string(type) + "'");
}

// Inverse of parse_measure_spec.
template <Scalar T>
std::string describe(const MixingMeasure<T>& measure) {
  return measure.visit(Overloaded{
      [](const PointMass<T>& p) { return "point:" + scalar_to_text(p.location); },
      [](const BetaMeasure<T>& b) {
        return "beta:" + scalar_to_text(b.alpha) + "," + scalar_to_text(b.beta);
      },
      [](const DiscreteMeasure<T>& d) {
        std::string out = "discrete:";
        for (std::size_t i = 0; i < d.atoms.size(); ++i) {
          if (i != 0) out += ';';
          out += scalar_to_text(d.atoms[i].location) + "," + scalar_to_text(d.atoms[i].weight);
        }
        return out;
      },
  });
}

}  // namespace pmh
