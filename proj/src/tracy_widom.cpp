#include "netpop/tracy_widom.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "netpop/error.hpp"

namespace netpop {

namespace detail {
extern const char* const kBuiltinTw1Table;
}

namespace {

std::string_view trim(std::string_view v) {
  const auto b = v.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = v.find_last_not_of(" \t\r");
  return v.substr(b, e - b + 1);
}

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

Tw1Table::Tw1Table(std::vector<double> s, std::vector<double> f, std::string provenance)
    : s_(std::move(s)), f_(std::move(f)), provenance_(std::move(provenance)) {
  const std::size_t n = s_.size();
  if (n < 2 || f_.size() != n) throw InvalidTable("TW1 table needs at least two (s, F) rows");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(s_[i]) || !(f_[i] > 0.0 && f_[i] < 1.0))
      throw InvalidTable("TW1 table row " + std::to_string(i + 1) + ": F outside (0, 1)");
    if (i > 0 && !(s_[i] > s_[i - 1]))
      throw InvalidTable("TW1 table row " + std::to_string(i + 1) + ": s not ascending");
    if (i > 0 && !(f_[i] > f_[i - 1]))
      throw InvalidTable("TW1 table row " + std::to_string(i + 1) + ": F not increasing");
  }

  // Fritsch-Carlson slopes: harmonic mean of adjacent secants, one-sided
  // three-point formula at the ends, limited so the cubic stays monotone.
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = s_[i + 1] - s_[i];
    delta[i] = (f_[i + 1] - f_[i]) / h[i];
  }
  slope_.assign(n, 0.0);
  if (n == 2) {
    slope_[0] = slope_[1] = delta[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double w1 = 2 * h[i] + h[i - 1];
    const double w2 = h[i] + 2 * h[i - 1];
    slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double d = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d < 0) d = 0;
    if (d > 3 * d0) d = 3 * d0;
    return d;
  };
  slope_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  slope_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

Tw1Table Tw1Table::parse(std::string_view text, const std::string& source) {
  std::vector<double> s, f;
  std::string provenance;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view key = "provenance:";
      auto body = trim(line.substr(1));
      if (body.substr(0, key.size()) == key) provenance = std::string(trim(body.substr(key.size())));
      continue;
    }
    auto fail = [&](const std::string& why) {
      return InvalidTable(source + ":" + std::to_string(line_no) + ": " + why);
    };
    const auto sep = line.find_first_of(" \t");
    if (sep == std::string_view::npos) throw fail("expected two columns");
    const auto a = line.substr(0, sep);
    const auto b = trim(line.substr(sep));
    double x = 0, y = 0;
    auto ra = std::from_chars(a.data(), a.data() + a.size(), x);
    auto rb = std::from_chars(b.data(), b.data() + b.size(), y);
    if (ra.ec != std::errc{} || ra.ptr != a.data() + a.size()) throw fail("bad s value");
    if (rb.ec != std::errc{} || rb.ptr != b.data() + b.size()) throw fail("bad F value");
    s.push_back(x);
    f.push_back(y);
  }
  return Tw1Table(std::move(s), std::move(f), std::move(provenance));
}

Tw1Table Tw1Table::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open TW1 table " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

const Tw1Table& Tw1Table::builtin() {
  static const Tw1Table table = parse(detail::kBuiltinTw1Table, "<builtin>");
  return table;
}

std::string Tw1Table::to_text() const {
  std::string out = "# TW1 cumulative distribution function, columns: s F\n";
  if (!provenance_.empty()) out += "# provenance: " + provenance_ + "\n";
  for (std::size_t i = 0; i < s_.size(); ++i) out += shortest(s_[i]) + " " + shortest(f_[i]) + "\n";
  return out;
}

double Tw1Table::interpolate(std::size_t k, double s) const {
  const double h = s_[k + 1] - s_[k];
  const double t = (s - s_[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * f_[k] + h10 * h * slope_[k] + h01 * f_[k + 1] + h11 * h * slope_[k + 1];
}

double Tw1Table::cdf(double s) const {
  if (std::isnan(s)) throw DomainError("tw1 cdf: s is NaN");
  if (s < s_.front()) return kCdfFloor;
  if (s > s_.back()) return 1.0 - kCdfFloor;
  double v;
  if (s == s_.back()) {
    v = f_.back();
  } else {
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    v = interpolate(static_cast<std::size_t>(it - s_.begin()) - 1, s);
  }
  return std::clamp(v, kCdfFloor, 1.0 - kCdfFloor);
}

Tw1Table::Quantile Tw1Table::quantile_checked(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("tw1 quantile: p must lie in (0, 1)");
  if (p <= f_.front()) return {s_.front(), p < f_.front()};
  if (p >= f_.back()) return {s_.back(), p > f_.back()};
  const auto it = std::upper_bound(f_.begin(), f_.end(), p);
  const std::size_t k = static_cast<std::size_t>(it - f_.begin()) - 1;
  // The cubic is monotone on [s_k, s_k+1]; bisect to machine resolution.
  double lo = s_[k], hi = s_[k + 1];
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (interpolate(k, mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return {0.5 * (lo + hi), false};
}

}  // namespace netpop
