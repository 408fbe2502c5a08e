#include "joycekit/textio.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <sstream>

namespace joycekit {

namespace {

using cxd = std::complex<double>;

double parse_real_token(const std::string& s, int line, int col) {
  if (s.empty()) throw ParseError("empty number", line, col);
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + s.size()) {
    throw ParseError("not a number: '" + s + "'", line, col);
  }
  return v;
}

cxd parse_complex_at(const std::string& token, int line, int col) {
  if (token.empty()) throw ParseError("empty complex number", line, col);
  std::string s = token;
  if (s.back() != 'i') {
    return cxd(parse_real_token(s, line, col), 0.0);
  }
  s.pop_back();
  // Split at the last top-level sign, skipping exponent signs and index 0.
  size_t split = std::string::npos;
  for (size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const auto coeff = [&](std::string part, int at) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    return parse_real_token(part, line, at);
  };
  if (split == std::string::npos) {
    return cxd(0.0, coeff(s, col));
  }
  const double re = parse_real_token(s.substr(0, split), line, col);
  const double im = coeff(s.substr(split), col + int(split));
  return cxd(re, im);
}

std::vector<std::string> split_on(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string strip_comment(const std::string& line) {
  const size_t h = line.find('#');
  return h == std::string::npos ? line : line.substr(0, h);
}

struct Token {
  std::string text;
  int col = 0;  // 1-based start column
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    if (k >= line.size()) break;
    const size_t start = k;
    while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    out.push_back({line.substr(start, k - start), int(start) + 1});
  }
  return out;
}

long long parse_int_token(const std::string& s, int line, int col) {
  if (s.empty()) throw ParseError("empty integer", line, col);
  const char* begin = s.c_str();
  char* end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  if (end != begin + s.size()) {
    throw ParseError("not an integer: '" + s + "'", line, col);
  }
  return v;
}

}  // namespace

cxd parse_complex(const std::string& token) {
  return parse_complex_at(token, 1, 1);
}

std::vector<cxd> parse_complex_list(const std::string& text) {
  std::vector<cxd> out;
  int col = 1;
  for (const std::string& part : split_on(text, ',')) {
    out.push_back(parse_complex_at(part, 1, col));
    col += int(part.size()) + 1;
  }
  return out;
}

Eigen::MatrixXcd parse_complex_matrix(const std::string& text) {
  std::vector<std::vector<cxd>> rows;
  for (const std::string& row : split_on(text, ';')) {
    rows.push_back(parse_complex_list(row));
    if (rows.back().size() != rows.front().size()) {
      throw ParseError("matrix rows have unequal lengths", 1, 1);
    }
  }
  Eigen::MatrixXcd m(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) m(long(i), long(j)) = rows[i][j];
  }
  return m;
}

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  const std::vector<std::string> parts = split_on(text, ':');
  if (parts.size() != 1 && parts.size() != 3) {
    throw ParseError("grid must be N or N:lo:hi", 1, 1);
  }
  const long long n = parse_int_token(parts[0], 1, 1);
  if (n < 1 || n > 1000000) throw ParseError("grid size out of range", 1, 1);
  g.points = int(n);
  if (parts.size() == 3) {
    g.lo = parse_real_token(parts[1], 1, 1);
    g.hi = parse_real_token(parts[2], 1, 1);
    if (!(g.lo < g.hi)) throw ParseError("grid needs lo < hi", 1, 1);
  }
  return g;
}

std::vector<Cycle> read_cycles(std::istream& in) {
  std::vector<Cycle> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::vector<Token> toks = tokenize(strip_comment(line));
    if (toks.empty()) continue;
    Cycle c;
    const long long sheet = parse_int_token(toks[0].text, lineno, toks[0].col);
    if (sheet != 1 && sheet != -1) {
      throw ParseError("sheet label must be 1 or -1", lineno, toks[0].col);
    }
    c.sheet = int(sheet);
    for (size_t k = 1; k < toks.size(); ++k) {
      c.vertices.push_back(parse_complex_at(toks[k].text, lineno, toks[k].col));
    }
    if (c.vertices.size() < 3) {
      throw ParseError("cycle needs at least three vertices", lineno,
                       toks[0].col);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<WallLine> read_walls(std::istream& in) {
  std::vector<WallLine> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::vector<Token> toks = tokenize(strip_comment(line));
    if (toks.empty()) continue;
    if (toks.size() != 2) {
      throw ParseError("wall line is: charge components, then weight", lineno,
                       toks.empty() ? 1 : toks[0].col);
    }
    WallLine w;
    int col = toks[0].col;
    for (const std::string& part : split_on(toks[0].text, ',')) {
      const long long v = parse_int_token(part, lineno, col);
      if (v < -1000000 || v > 1000000) {
        throw ParseError("charge component out of range", lineno, col);
      }
      w.charge.push_back(int(v));
      col += int(part.size()) + 1;
    }
    w.omega = parse_int_token(toks[1].text, lineno, toks[1].col);
    out.push_back(std::move(w));
  }
  return out;
}

std::string format_real(double x) {
  if (x == 0.0) return std::signbit(x) ? "-0" : "0";
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_complex(cxd v) {
  if (v.imag() == 0.0) return format_real(v.real());
  std::string s;
  if (v.real() != 0.0) {
    s = format_real(v.real());
    if (!(v.imag() < 0.0)) s += "+";
  }
  s += format_real(v.imag());
  s += "i";
  return s;
}

void write_trajectory_csv(std::ostream& out, const TwistorTrajectory& traj) {
  const int n = int(traj.z.size());
  out << "eps_re,eps_im";
  for (int k = 1; k <= n; ++k) {
    out << ",theta" << k << "_re,theta" << k << "_im";
  }
  out << "\n";
  for (const TwistorSample& s : traj.samples) {
    out << format_real(s.eps.real()) << "," << format_real(s.eps.imag());
    for (int k = 0; k < n; ++k) {
      out << "," << format_real(s.theta(k).real()) << ","
          << format_real(s.theta(k).imag());
    }
    out << "\n";
  }
}

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  // Avoid the two spellings of zero.
  if (std::string(buf) == "-0.00") return "0.00";
  return buf;
}

const char* kPalette[6] = {"#1f77b4", "#d62728", "#2ca02c",
                           "#9467bd", "#ff7f0e", "#17becf"};

}  // namespace

std::string svg_line_plot(const std::vector<PlotSeries>& series,
                          const std::string& x_label,
                          const std::string& y_label) {
  const double width = 640.0, height = 420.0;
  const double ml = 56.0, mr = 16.0, mt = 20.0, mb = 44.0;
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool first = true;
  for (const PlotSeries& s : series) {
    for (auto [x, y] : s.points) {
      if (first) {
        xmin = xmax = x;
        ymin = ymax = y;
        first = false;
      }
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax - xmin < 1e-300) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-300) ymax = ymin + 1.0;
  const auto px = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr);
  };
  const auto py = [&](double y) {
    return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
  };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << fixed2(ml) << "\" y1=\"" << fixed2(height - mb)
      << "\" x2=\"" << fixed2(width - mr) << "\" y2=\"" << fixed2(height - mb)
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << fixed2(ml) << "\" y1=\"" << fixed2(mt) << "\" x2=\""
      << fixed2(ml) << "\" y2=\"" << fixed2(height - mb)
      << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << fixed2((ml + width - mr) / 2.0) << "\" y=\""
      << fixed2(height - 10.0)
      << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  svg << "<text x=\"14\" y=\"" << fixed2((mt + height - mb) / 2.0)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << fixed2((mt + height - mb) / 2.0) << ")\">" << y_label << "</text>\n";
  // Range annotations at the axis ends.
  svg << "<text x=\"" << fixed2(ml) << "\" y=\"" << fixed2(height - mb + 16.0)
      << "\" font-size=\"11\">" << format_real(xmin) << "</text>\n";
  svg << "<text x=\"" << fixed2(width - mr) << "\" y=\""
      << fixed2(height - mb + 16.0)
      << "\" font-size=\"11\" text-anchor=\"end\">" << format_real(xmax)
      << "</text>\n";
  svg << "<text x=\"" << fixed2(ml - 4.0) << "\" y=\""
      << fixed2(height - mb) << "\" font-size=\"11\" text-anchor=\"end\">"
      << format_real(ymin) << "</text>\n";
  svg << "<text x=\"" << fixed2(ml - 4.0) << "\" y=\"" << fixed2(mt + 10.0)
      << "\" font-size=\"11\" text-anchor=\"end\">" << format_real(ymax)
      << "</text>\n";
  for (size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % 6];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series[si].points) {
      svg << fixed2(px(x)) << "," << fixed2(py(y)) << " ";
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << fixed2(width - mr - 8.0) << "\" y=\""
        << fixed2(mt + 16.0 * double(si + 1)) << "\" font-size=\"12\" fill=\""
        << color << "\" text-anchor=\"end\">" << series[si].label
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string svg_ray_diagram(const std::vector<double>& angles) {
  const double size = 420.0, cx0 = size / 2.0, cy0 = size / 2.0, r = 170.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
      << "\" height=\"" << size << "\" viewBox=\"0 0 " << size << " " << size
      << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<circle cx=\"" << fixed2(cx0) << "\" cy=\"" << fixed2(cy0)
      << "\" r=\"" << fixed2(r)
      << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
  for (size_t k = 0; k < angles.size(); ++k) {
    const double a = angles[k];
    const double x = cx0 + r * std::cos(a);
    // SVG y grows downward; flip so positive angles point up.
    const double y = cy0 - r * std::sin(a);
    const char* color = kPalette[k % 6];
    svg << "<line x1=\"" << fixed2(cx0) << "\" y1=\"" << fixed2(cy0)
        << "\" x2=\"" << fixed2(x) << "\" y2=\"" << fixed2(y) << "\" stroke=\""
        << color << "\" stroke-width=\"2\"/>\n";
    const double lx = cx0 + (r + 18.0) * std::cos(a);
    const double ly = cy0 - (r + 18.0) * std::sin(a);
    svg << "<text x=\"" << fixed2(lx) << "\" y=\"" << fixed2(ly)
        << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"" << color
        << "\">" << format_real(a) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace joycekit
