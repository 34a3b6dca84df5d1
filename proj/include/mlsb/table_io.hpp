#pragma once

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mlsb/errors.hpp"
#include "mlsb/geometry.hpp"

namespace mlsb {

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

inline nlohmann::json shape_to_json(const ShapeSpec& s) {
  nlohmann::json j;
  j["center"] = {s.cx, s.cy};
  switch (s.kind) {
    case ShapeKind::circle:
      j["kind"] = "circle";
      j["radius"] = s.radius;
      break;
    case ShapeKind::ellipse:
      j["kind"] = "ellipse";
      j["semi_axes"] = {s.a, s.b};
      j["rotation"] = s.rot;
      break;
    case ShapeKind::fourier:
      j["kind"] = "fourier";
      j["base_radius"] = s.r0;
      j["cos"] = s.cos_coef;
      j["sin"] = s.sin_coef;
      break;
  }
  return j;
}

inline nlohmann::json table_to_json(const std::vector<ShapeSpec>& specs) {
  nlohmann::json j;
  j["obstacles"] = nlohmann::json::array();
  for (const auto& s : specs) j["obstacles"].push_back(shape_to_json(s));
  return j;
}

inline std::vector<ShapeSpec> table_from_json(const nlohmann::json& j) {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::table_invalid, m); };
  if (!j.is_object() || !j.contains("obstacles") || !j["obstacles"].is_array()) bad("missing \"obstacles\" array");
  std::vector<ShapeSpec> out;
  int idx = 0;
  for (const auto& o : j["obstacles"]) {
    ++idx;
    std::string where = "obstacle " + std::to_string(idx) + ": ";
    try {
      auto center = o.at("center").get<std::vector<double>>();
      if (center.size() != 2) bad(where + "center must have two coordinates");
      std::string kind = o.at("kind").get<std::string>();
      if (kind == "circle") {
        out.push_back(ShapeSpec::circle(center[0], center[1], o.at("radius").get<double>()));
      } else if (kind == "ellipse") {
        auto ax = o.at("semi_axes").get<std::vector<double>>();
        if (ax.size() != 2) bad(where + "semi_axes must have two entries");
        out.push_back(ShapeSpec::ellipse(center[0], center[1], ax[0], ax[1], o.value("rotation", 0.0)));
      } else if (kind == "fourier") {
        out.push_back(ShapeSpec::fourier(center[0], center[1], o.at("base_radius").get<double>(),
                                         o.value("cos", std::vector<double>{}), o.value("sin", std::vector<double>{})));
      } else {
        bad(where + "unknown kind \"" + kind + "\"");
      }
    } catch (const nlohmann::json::exception& e) {
      bad(where + e.what());
    }
  }
  return out;
}

struct TableFile {
  std::vector<ShapeSpec> specs;
  std::string canonical;  // canonical JSON bytes
  std::string sha256;
};

inline TableFile parse_table(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::io, std::string("malformed table JSON: ") + e.what());
  }
  TableFile tf;
  tf.specs = table_from_json(j);
  tf.canonical = table_to_json(tf.specs).dump();
  tf.sha256 = sha256_hex(tf.canonical);
  return tf;
}

inline TableFile load_table_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read table file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_table(ss.str());
}

inline std::string table_fingerprint(const std::vector<ShapeSpec>& specs) {
  return sha256_hex(table_to_json(specs).dump());
}

}  // namespace mlsb
