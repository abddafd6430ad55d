#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace netpop {

/// Tabulated CDF of the Tracy-Widom law for beta = 1 (GOE), interpolated with
/// a monotone (Fritsch-Carlson) cubic.
///
/// Text format: '#' lines are headers (a "# provenance: ..." line names the
/// generator), then one "s F" pair per line with s strictly ascending and F
/// strictly increasing inside (0, 1). Numbers are parsed and printed with
/// shortest round-trip decimal text, so parse(to_text()) is exact.
class Tw1Table {
 public:
  struct Quantile {
    double value;
    bool clamped;  ///< p fell outside the tabulated range of F
  };

  static constexpr double kCdfFloor = 1e-12;

  Tw1Table(std::vector<double> s, std::vector<double> f, std::string provenance);

  static Tw1Table parse(std::string_view text, const std::string& source = "<memory>");
  static Tw1Table load(const std::filesystem::path& path);

  /// Table shipped with the library (generated offline from the Painleve II
  /// representation; see tools/tw1_tablegen.cpp).
  static const Tw1Table& builtin();

  std::string to_text() const;

  /// F1(s), clamped to [kCdfFloor, 1 - kCdfFloor]; off the grid it is the
  /// nearer clamp value.
  double cdf(double s) const;

  /// Inverse CDF; p must lie in (0, 1). Requests beyond the tabulated F
  /// range return the nearest grid endpoint.
  double quantile(double p) const { return quantile_checked(p).value; }
  Quantile quantile_checked(double p) const;

  /// Upper-alpha point tau_alpha, i.e. quantile(1 - alpha).
  double upper_quantile(double alpha) const { return quantile(1.0 - alpha); }
  Quantile upper_quantile_checked(double alpha) const { return quantile_checked(1.0 - alpha); }

  const std::vector<double>& abscissae() const { return s_; }
  const std::vector<double>& values() const { return f_; }
  const std::string& provenance() const { return provenance_; }

 private:
  double interpolate(std::size_t k, double s) const;

  std::vector<double> s_;
  std::vector<double> f_;
  std::vector<double> slope_;
  std::string provenance_;
};

}  // namespace netpop
