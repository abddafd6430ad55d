// Regenerates data/tw1_table.txt from the Painleve II oracle.
//
//   tw1_tablegen [--lo -10] [--hi 8] [--spacing 0.01] [--out data/tw1_table.txt]

#include <cmath>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "netpop/tracy_widom.hpp"
#include "painleve_tw1.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate the tabulated TW1 distribution function"};
  double lo = -10.0, hi = 8.0, spacing = 0.01;
  std::string out = "tw1_table.txt";
  app.add_option("--lo", lo, "smallest abscissa");
  app.add_option("--hi", hi, "largest abscissa");
  app.add_option("--spacing", spacing, "grid spacing");
  app.add_option("--out", out, "output file");
  CLI11_PARSE(app, argc, argv);

  const long steps = std::lround((hi - lo) / spacing);
  const long first = std::lround(lo / spacing);
  std::vector<long double> points;
  std::vector<double> s;
  for (long k = 0; k <= steps; ++k) {
    // k/100-style grid values, rounded once so the text form is short.
    const double x = static_cast<double>(first + k) / (1.0 / spacing);
    s.push_back(x);
    points.push_back(x);
  }

  netpop::oracle::PainleveTw1 oracle;
  const auto f = oracle.cdf(points);
  std::vector<double> fd(f.begin(), f.end());

  netpop::Tw1Table table(s, fd,
                         "painleve-ii hastings-mcleod, rk4 long double, start 10, step 1e-4");
  std::ofstream os(out, std::ios::binary);
  os << table.to_text();
  if (!os) {
    std::cerr << "cannot write " << out << "\n";
    return 2;
  }
  std::cerr << "wrote " << s.size() << " rows to " << out << "\n";
  return 0;
}
