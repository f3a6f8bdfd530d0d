// Regenerates the canned scenario files in fixtures/. The committed files
// are covered by tests; rerun this after changing the builders.

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "seqmeas/builtin.hpp"
#include "seqmeas/mzi.hpp"
#include "seqmeas/scenario_io.hpp"

using nlohmann::json;
using seqmeas::Cplx;

namespace {

json complex_pair(Cplx v) { return json::array({v.real(), v.imag()}); }

json matrix_2x2(Cplx a00, Cplx a01, Cplx a10, Cplx a11) {
  return json::array({json::array({complex_pair(a00), complex_pair(a01)}),
                      json::array({complex_pair(a10), complex_pair(a11)})});
}

void write(const std::string& dir, const std::string& name, const json& doc) {
  const std::string path = dir + "/" + name;
  std::ofstream out(path);
  out << doc.dump(2) << '\n';
  std::cout << "wrote " << path << '\n';
}

// Effects that sum to 1.2 I: individually fine, jointly incomplete.
json bad_povm_completeness() {
  json doc;
  doc["dim"] = 2;
  doc["preparation"]["ket"] = json::array({complex_pair(1.0), complex_pair(0.0)});
  doc["bindings"]["e1"]["effect"] = matrix_2x2(0.6, 0.0, 0.0, 0.6);
  doc["bindings"]["e2"]["effect"] = matrix_2x2(0.6, 0.0, 0.0, 0.6);
  doc["povm"] = json::array({"e1", "e2"});
  return doc;
}

// Which-path operators built from the raw (non-orthogonalized) coherent
// overlap: E_a + E_b exceeds the identity, so the complement effect is not
// PSD.
json bad_povm_psd() {
  const double alpha = 1.5, phi = 0.7;
  const double g = std::exp(-0.5 * alpha * alpha);
  const Cplx i{0.0, 1.0};
  const Cplx ephi = std::exp(i * phi);

  const Cplx ka00 = -0.5 * (1.0 + g * ephi);
  const Cplx ka10 = -0.5 * i * (1.0 - g * ephi);
  const Cplx kb00 = -0.5 * (g + ephi);
  const Cplx kb10 = 0.5 * i * (ephi - g);

  const Cplx ea = std::norm(ka00) + std::norm(ka10);
  const Cplx eb = std::norm(kb00) + std::norm(kb10);

  json doc;
  doc["dim"] = 2;
  doc["preparation"]["ket"] = json::array({complex_pair(1.0), complex_pair(0.0)});
  doc["bindings"]["a"]["kraus"] =
      json::array({matrix_2x2(ka00, 0.0, ka10, 0.0)});
  doc["bindings"]["b"]["kraus"] =
      json::array({matrix_2x2(kb00, 0.0, kb10, 0.0)});
  doc["bindings"]["miss"]["effect"] = matrix_2x2(1.0 - ea - eb, 0.0, 0.0, 1.0);
  doc["povm"] = json::array({"a", "b", "miss"});
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "fixtures";

  seqmeas::io::save_scenario(seqmeas::builtin::young_slit(),
                             dir + "/young_slit.json");
  std::cout << "wrote " << dir << "/young_slit.json\n";

  seqmeas::io::save_scenario(seqmeas::builtin::mzi_fixed(0.0),
                             dir + "/mzi_fixed.json");
  std::cout << "wrote " << dir << "/mzi_fixed.json\n";

  seqmeas::io::save_scenario(seqmeas::builtin::mzi_movable(1.5, 0.7),
                             dir + "/mzi_movable.json");
  std::cout << "wrote " << dir << "/mzi_movable.json\n";

  seqmeas::io::save_scenario(seqmeas::builtin::causal_witness(),
                             dir + "/causal_witness.json");
  std::cout << "wrote " << dir << "/causal_witness.json\n";

  write(dir, "bad_povm_completeness.json", bad_povm_completeness());
  write(dir, "bad_povm_psd.json", bad_povm_psd());
  return 0;
}
