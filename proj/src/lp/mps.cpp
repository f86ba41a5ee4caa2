#include <cmath>
#include <cstdio>
#include <string>

#include "resilience/lp.hpp"

namespace resilience::lp {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Fixed MPS fields start at columns 2, 5, 15, 25, 40, 50.
std::string line(const std::string& f1, const std::string& f2, const std::string& f3 = {},
                 const std::string& f4 = {}, const std::string& f5 = {}, const std::string& f6 = {}) {
  std::string out = " ";
  auto pad_to = [&out](std::size_t col) {
    if (out.size() < col) out.resize(col, ' ');
  };
  out += f1;
  pad_to(4);
  out += f2;
  if (!f3.empty()) {
    pad_to(14);
    out += f3;
    pad_to(24);
    out += f4;
  }
  if (!f5.empty()) {
    pad_to(39);
    out += f5;
    pad_to(49);
    out += f6;
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out + "\n";
}

}  // namespace

std::string to_mps(const LinearProgram& lp, const std::string& name) {
  lp.validate();
  const int n = lp.num_variables();
  const int m = lp.num_rows();
  auto col = [](int j) { return "X" + std::to_string(j); };
  auto row = [](int i) { return "R" + std::to_string(i); };

  std::string out = "NAME          " + name + "\n";
  if (lp.sense == Sense::maximize) out += "OBJSENSE\n    MAX\n";
  out += "ROWS\n";
  out += line("N", "COST");
  for (int i = 0; i < m; ++i) {
    const char* kind = lp.rows[i].relation == Relation::less_equal      ? "L"
                       : lp.rows[i].relation == Relation::greater_equal ? "G"
                                                                        : "E";
    out += line(kind, row(i));
  }
  out += "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < n; ++j) {
    if (lp.integer[j] != in_int) {
      out += line("", "MARKER" + std::to_string(marker++), "'MARKER'", "",
                  in_int ? "'INTEND'" : "'INTORG'");
      in_int = lp.integer[j];
    }
    out += line("", col(j), "COST", num(lp.objective[j]));
    for (int i = 0; i < m; ++i) {
      const auto& c = lp.rows[i].coefficients;
      if (static_cast<std::size_t>(j) < c.size() && c[j] != 0.0) {
        out += line("", col(j), row(i), num(c[j]));
      }
    }
  }
  if (in_int) out += line("", "MARKER" + std::to_string(marker++), "'MARKER'", "", "'INTEND'");
  out += "RHS\n";
  for (int i = 0; i < m; ++i) {
    if (lp.rows[i].rhs != 0.0) out += line("", "RHS", row(i), num(lp.rows[i].rhs));
  }
  out += "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    const double lo = lp.lower[j];
    const double up = lp.upper[j];
    if (lo == up) {
      out += line("FX", "BND", col(j), num(lo));
      continue;
    }
    if (std::isinf(lo) && std::isinf(up)) {
      out += line("FR", "BND", col(j));
      continue;
    }
    if (std::isinf(lo)) {
      out += line("MI", "BND", col(j));
    } else if (lo != 0.0) {
      out += line("LO", "BND", col(j), num(lo));
    }
    if (std::isfinite(up)) out += line("UP", "BND", col(j), num(up));
  }
  out += "ENDATA\n";
  return out;
}

}  // namespace resilience::lp
