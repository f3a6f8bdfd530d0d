#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seqmeas/scenario.hpp"

namespace seqmeas {
namespace io {

// Scenario files are JSON; complex numbers are [re, im] pairs, kets are
// arrays of pairs, matrices are arrays of rows. Bindings map labels to one
// of {"kraus": [matrix...]}, {"effect": matrix} or {"detector_model": ...}.
// Optional top-level fields: "or_policy", "order_policy", "povm"
// (completeness groups), "expression".

// Strict load: every invariant enforced; failures raise errors anchored to
// the offending JSON path.
Scenario load_scenario(const std::string& path);
Scenario scenario_from_json(const nlohmann::json& doc);

nlohmann::json scenario_to_json(const Scenario& sc);
void save_scenario(const Scenario& sc, const std::string& path);

// Lenient load + diagnosis for the `validate` command: structural parsing
// only, then every check reported instead of thrown.
struct ValidationItem {
  std::string path;     // JSON path of the checked object
  std::string message;  // diagnostic, empty when ok
  bool ok = true;
};

struct FileValidation {
  std::vector<ValidationItem> items;
  bool valid() const;
  std::string summary() const;  // one line per item
};

FileValidation validate_file(const std::string& path,
                             const Tolerance& tol = Tolerance::standard());

// Parses "1.5", "-2i", "0.3+0.2i", "1-1i" (no whitespace, no commas).
Cplx parse_complex(const std::string& text);
std::string format_complex(Cplx value);

}  // namespace io
}  // namespace seqmeas
