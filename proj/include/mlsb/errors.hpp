#pragma once

#include <stdexcept>
#include <string>

namespace mlsb {

enum class ErrorKind {
  io,
  table_invalid,
  eclipse_violation,
  precision_unavailable,
  symbol_out_of_range,
  inadmissible_word,
  inadmissible_tau,
  no_intersection,
  occlusion,
  grazing_degenerate,
  non_hyperbolic,
  no_convergence,
  itinerary_mismatch,
  fingerprint_mismatch,
  store_locked,
  insufficient_data,
  insufficient_precision,
  non_geometric,
  no_positive_root,
  branch_ambiguity,
  inconsistent_system,
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::io: return "io";
    case ErrorKind::table_invalid: return "table-invalid";
    case ErrorKind::eclipse_violation: return "eclipse-violation";
    case ErrorKind::precision_unavailable: return "precision-unavailable";
    case ErrorKind::symbol_out_of_range: return "symbol-out-of-range";
    case ErrorKind::inadmissible_word: return "inadmissible-word";
    case ErrorKind::inadmissible_tau: return "inadmissible-tau";
    case ErrorKind::no_intersection: return "no-intersection";
    case ErrorKind::occlusion: return "occlusion";
    case ErrorKind::grazing_degenerate: return "grazing-degenerate";
    case ErrorKind::non_hyperbolic: return "non-hyperbolic";
    case ErrorKind::no_convergence: return "no-convergence";
    case ErrorKind::itinerary_mismatch: return "itinerary-mismatch";
    case ErrorKind::fingerprint_mismatch: return "fingerprint-mismatch";
    case ErrorKind::store_locked: return "store-locked";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::insufficient_precision: return "insufficient-precision";
    case ErrorKind::non_geometric: return "non-geometric";
    case ErrorKind::no_positive_root: return "no-positive-root";
    case ErrorKind::branch_ambiguity: return "branch-ambiguity";
    case ErrorKind::inconsistent_system: return "inconsistent-system";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when a ray toward a declared target meets another obstacle first.
class OcclusionError : public Error {
 public:
  OcclusionError(int occluder, const std::string& what)
      : Error(ErrorKind::occlusion, what), occluder_(occluder) {}
  int occluder() const { return occluder_; }

 private:
  int occluder_;
};

class EclipseError : public Error {
 public:
  EclipseError(int i, int j, int k, double depth, const std::string& what)
      : Error(ErrorKind::eclipse_violation, what), i_(i), j_(j), k_(k), depth_(depth) {}
  int i() const { return i_; }
  int j() const { return j_; }
  int k() const { return k_; }
  double depth() const { return depth_; }

 private:
  int i_, j_, k_;
  double depth_;
};

}  // namespace mlsb
