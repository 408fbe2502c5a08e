#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "joycekit/errors.hpp"
#include "joycekit/spectral.hpp"
#include "joycekit/twistor.hpp"

namespace joycekit {

// One complex number written without spaces: "1.5", "-2e-3", "3i", "1+2i",
// "0.5-i", "i", "-i".  Throws ParseError on anything else.
std::complex<double> parse_complex(const std::string& token);

// Comma separated complex numbers.
std::vector<std::complex<double>> parse_complex_list(const std::string& text);

// Rows separated by ';', entries by ','.  All rows must have equal length.
Eigen::MatrixXcd parse_complex_matrix(const std::string& text);

struct GridSpec {
  int points = 5;
  double lo = -1.0;
  double hi = 1.0;
};

// "N" or "N:lo:hi".  N >= 1 and lo < hi.
GridSpec parse_grid(const std::string& text);

// One cycle per line: the sheet label (+1 or -1) followed by at least three
// vertices as complex tokens.  '#' starts a comment; blank lines are skipped.
// ParseError carries the 1-based line and column of the offending token.
std::vector<Cycle> read_cycles(std::istream& in);

// One wall per line: the charge components joined by commas, whitespace, then
// the integer weight, e.g. "1,0 1".  Same comment and error rules as cycles.
struct WallLine {
  std::vector<int> charge;
  long long omega = 1;
};
std::vector<WallLine> read_walls(std::istream& in);

// Shortest decimal string that parses back to exactly the same double.
std::string format_real(double x);

// format_real on both parts in the same "a+bi" shape parse_complex reads.
std::string format_complex(std::complex<double> v);

// Header eps_re,eps_im,theta1_re,theta1_im,... then one row per sample.
void write_trajectory_csv(std::ostream& out, const TwistorTrajectory& traj);

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Self-contained SVG document with axes, one polyline per series, and a
// legend.  Output depends only on the inputs.
std::string svg_line_plot(const std::vector<PlotSeries>& series,
                          const std::string& x_label,
                          const std::string& y_label);

// Unit-circle diagram with one labelled spoke per angle (radians).
std::string svg_ray_diagram(const std::vector<double>& angles);

}  // namespace joycekit
