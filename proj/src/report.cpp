#include "joycekit/report.hpp"

#include <fstream>

#include "joycekit/errors.hpp"

namespace joycekit {

nlohmann::ordered_json conventions_block() {
  nlohmann::ordered_json c;
  c["eta"] = "inverse-of-omega (eta*omega = id)";
  c["basis_order"] = "z-block then theta-block";
  c["stokes_monodromy"] = "branch_then_reversed_inverses";
  c["pentagon_bracketing"] =
      "S1*S2 = S2*S12*S1, right factor applied first; wall weight = "
      "-refinement sign";
  return c;
}

nlohmann::ordered_json report_skeleton(const std::string& subcommand) {
  nlohmann::ordered_json r;
  r["subcommand"] = subcommand;
  r["conventions"] = conventions_block();
  return r;
}

std::string render_report(const nlohmann::ordered_json& report) {
  return report.dump(2) + "\n";
}

void write_report(const std::string& path, const nlohmann::ordered_json& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open report file: " + path);
  out << render_report(report);
}

}  // namespace joycekit
