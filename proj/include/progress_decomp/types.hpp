#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace progress {

/// One benchmark observation as it appears in the source CSV.
struct ModelRecord {
  std::string name;
  double year = 0.0;      // calendar year, may be fractional
  double compute = 0.0;   // training compute, FLOP
  double data = 0.0;      // training-set size, images
  double accuracy = 0.0;  // top-1 test accuracy in (0, 1)
};

/// Reference point used to normalize records. Defaults put AlexNet at the
/// origin of (dyear, log_c, log_d).
struct NormConstants {
  double reference_year = 2012.0;
  double reference_compute = 4.7e17;
  double reference_data = 1.28e6;
};

/// A record mapped into the model's coordinate system.
struct NormalizedRecord {
  double dyear = 0.0;    // year - reference_year
  double log_c = 0.0;    // ln(compute / reference_compute)
  double log_d = 0.0;    // ln(data / reference_data)
  double logit_p = 0.0;  // logit of observed accuracy
};

/// Ordered collection of normalized records plus provenance. Record order is
/// preserved from the source file; downstream seeding depends on it.
struct Dataset {
  std::vector<std::string> names;
  std::vector<NormalizedRecord> records;
  std::string source_hash;  // SHA-256 (hex) of the canonical serialized form
  NormConstants refs;

  std::size_t size() const { return records.size(); }

  /// Index of the first record with the given name, or npos.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t find(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return i;
    }
    return npos;
  }
};

/// The seven model parameters. Array order is fixed and shared by the
/// optimizer, serialization, and the gradient.
struct Params {
  double alpha1 = 0.0;
  double alpha_year = 0.0;
  double alpha_compute = 0.0;
  double beta1 = 0.0;
  double beta_year = 0.0;
  double beta_data = 0.0;
  double log_delta = 0.0;

  static constexpr std::size_t count = 7;

  std::array<double, count> to_array() const {
    return {alpha1, alpha_year, alpha_compute, beta1, beta_year, beta_data,
            log_delta};
  }

  static Params from_array(const std::array<double, count>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
  }

  static const std::array<const char*, count>& names() {
    static const std::array<const char*, count> n = {
        "alpha1",    "alpha_year", "alpha_compute", "beta1",
        "beta_year", "beta_data",  "log_delta"};
    return n;
  }
};

using ParamArray = std::array<double, Params::count>;

}  // namespace progress
