#include "seqmeas/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "seqmeas/expr.hpp"

namespace seqmeas {
namespace io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw InvariantError("scenario file: " + path + ": " + message);
}

Cplx read_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(path, "expected a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Vec read_ket_raw(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected an array of [re, im] pairs");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) =
        read_complex(j[i], path + "/" + std::to_string(i));
  }
  return v;
}

Mat read_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected an array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  Mat m;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.empty()) {
      fail(path + "/" + std::to_string(r), "expected a row of [re, im] pairs");
    }
    if (r == 0) {
      cols = row.size();
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (row.size() != cols) {
      fail(path + "/" + std::to_string(r), "ragged matrix rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          read_complex(row[c], path + "/" + std::to_string(r) + "/" +
                                   std::to_string(c));
    }
  }
  return m;
}

json write_complex(Cplx v) { return json::array({v.real(), v.imag()}); }

json write_ket(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(write_complex(v(i)));
  return out;
}

json write_matrix(const Mat& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(write_complex(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

DetectorModel read_detector_model(const json& j, const std::string& path,
                                  const Tolerance& tol) {
  DetectorModel model;
  if (!j.contains("system_dim") || !j["system_dim"].is_number_integer()) {
    fail(path, "detector_model needs an integer system_dim");
  }
  model.system_dim = j["system_dim"].get<Eigen::Index>();
  if (!j.contains("pointer_states") || !j["pointer_states"].is_object()) {
    fail(path, "detector_model needs a pointer_states object");
  }
  for (const auto& [label, ket] : j["pointer_states"].items()) {
    model.pointer_states.emplace(
        label, Ket(read_ket_raw(ket, path + "/pointer_states/" + label), tol));
  }
  if (!j.contains("post_interaction_states") ||
      !j["post_interaction_states"].is_array()) {
    fail(path, "detector_model needs a post_interaction_states array");
  }
  std::size_t i = 0;
  for (const json& ket : j["post_interaction_states"]) {
    model.post_interaction_states.emplace_back(
        read_ket_raw(ket, path + "/post_interaction_states/" + std::to_string(i)),
        tol);
    ++i;
  }
  if (j.contains("eigenbasis")) {
    model.eigenbasis = read_matrix(j["eigenbasis"], path + "/eigenbasis");
  }
  if (j.contains("transition_amplitudes")) {
    model.transition_amplitudes =
        read_matrix(j["transition_amplitudes"], path + "/transition_amplitudes");
  }
  model.validate(tol);
  return model;
}

json write_detector_model(const DetectorModel& model) {
  json out;
  out["system_dim"] = model.system_dim;
  json pointers;
  for (const auto& [label, ket] : model.pointer_states) {
    pointers[label] = write_ket(ket.amplitudes());
  }
  out["pointer_states"] = std::move(pointers);
  json posts = json::array();
  for (const Ket& ket : model.post_interaction_states) {
    posts.push_back(write_ket(ket.amplitudes()));
  }
  out["post_interaction_states"] = std::move(posts);
  if (model.eigenbasis) out["eigenbasis"] = write_matrix(*model.eigenbasis);
  if (model.transition_amplitudes) {
    out["transition_amplitudes"] = write_matrix(*model.transition_amplitudes);
  }
  return out;
}

OrPolicy read_or_policy(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("variant") || !j["variant"].is_string()) {
    fail(path, "or_policy needs a string 'variant'");
  }
  const std::string variant = j["variant"].get<std::string>();
  if (variant == "coherent_sum") return OrPolicy::coherent_sum();
  if (variant == "complement") {
    if (!j.contains("unitary")) fail(path, "complement policy needs 'unitary'");
    return OrPolicy::complement(read_matrix(j["unitary"], path + "/unitary"));
  }
  if (variant == "explicit") {
    if (!j.contains("kraus")) fail(path, "explicit policy needs 'kraus'");
    return OrPolicy::explicit_op(read_matrix(j["kraus"], path + "/kraus"));
  }
  fail(path, "unknown or_policy variant '" + variant + "'");
}

json write_or_policy(const OrPolicy& p) {
  json out;
  if (std::holds_alternative<OrPolicy::CoherentSum>(p.variant)) {
    out["variant"] = "coherent_sum";
  } else if (const auto* c = std::get_if<OrPolicy::Complement>(&p.variant)) {
    out["variant"] = "complement";
    out["unitary"] = write_matrix(c->unitary);
  } else {
    out["variant"] = "explicit";
    out["kraus"] = write_matrix(std::get<OrPolicy::Explicit>(p.variant).kraus);
  }
  return out;
}

OrderPolicy read_order_policy(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("variant") || !j["variant"].is_string()) {
    fail(path, "order_policy needs a string 'variant'");
  }
  const std::string variant = j["variant"].get<std::string>();
  if (variant == "definite") {
    if (!j.contains("order") || !j["order"].is_array()) {
      fail(path, "definite policy needs an 'order' array of labels");
    }
    std::vector<std::string> order;
    for (const json& l : j["order"]) order.push_back(l.get<std::string>());
    return OrderPolicy::definite(std::move(order));
  }
  if (variant == "mixture") {
    if (!j.contains("lambda") || !j["lambda"].is_number()) {
      fail(path, "mixture policy needs a numeric 'lambda'");
    }
    return OrderPolicy::mixture(j["lambda"].get<double>());
  }
  if (variant == "indefinite") {
    if (!j.contains("weights") || !j["weights"].is_array() ||
        j["weights"].size() != 2) {
      fail(path, "indefinite policy needs a 'weights' array of two complex");
    }
    return OrderPolicy::indefinite(
        read_complex(j["weights"][0], path + "/weights/0"),
        read_complex(j["weights"][1], path + "/weights/1"));
  }
  fail(path, "unknown order_policy variant '" + variant + "'");
}

json write_order_policy(const OrderPolicy& p) {
  json out;
  if (const auto* d = std::get_if<OrderPolicy::Definite>(&p.variant)) {
    out["variant"] = "definite";
    out["order"] = d->order;
  } else if (const auto* m = std::get_if<OrderPolicy::Mixture>(&p.variant)) {
    out["variant"] = "mixture";
    out["lambda"] = m->lambda;
  } else {
    const auto& c = std::get<OrderPolicy::IndefiniteCoherent>(p.variant);
    out["variant"] = "indefinite";
    out["weights"] = json::array({write_complex(c.w1), write_complex(c.w2)});
  }
  return out;
}

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvariantError("scenario file '" + path + "': " + e.what());
  }
  return doc;
}

std::vector<std::vector<std::string>> read_povm_groups(const json& doc) {
  std::vector<std::vector<std::string>> groups;
  if (!doc.contains("povm")) return groups;
  const json& povm = doc["povm"];
  if (!povm.is_array()) fail("/povm", "expected an array");
  if (!povm.empty() && povm[0].is_string()) {
    // single flat group
    std::vector<std::string> group;
    for (const json& l : povm) group.push_back(l.get<std::string>());
    groups.push_back(std::move(group));
    return groups;
  }
  for (const json& g : povm) {
    std::vector<std::string> group;
    for (const json& l : g) group.push_back(l.get<std::string>());
    groups.push_back(std::move(group));
  }
  return groups;
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
  const Tolerance& tol = Tolerance::standard();
  Scenario sc;
  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) {
    fail("/dim", "scenario needs an integer dimension");
  }
  sc.dim = doc["dim"].get<Eigen::Index>();
  if (sc.dim <= 0) fail("/dim", "dimension must be positive");

  if (doc.contains("preparation")) {
    const json& prep = doc["preparation"];
    if (prep.contains("ket")) {
      sc.preparation = DensityMatrix::pure(
          Ket(read_ket_raw(prep["ket"], "/preparation/ket"), tol));
    } else if (prep.contains("density")) {
      sc.preparation =
          DensityMatrix(read_matrix(prep["density"], "/preparation/density"), tol);
    } else {
      fail("/preparation", "expected 'ket' or 'density'");
    }
  }

  if (doc.contains("bindings")) {
    if (!doc["bindings"].is_object()) fail("/bindings", "expected an object");
    for (const auto& [label, spec] : doc["bindings"].items()) {
      const std::string path = "/bindings/" + label;
      Binding binding;
      int forms = 0;
      if (spec.contains("kraus")) {
        ++forms;
        if (!spec["kraus"].is_array() || spec["kraus"].empty()) {
          fail(path + "/kraus", "expected a non-empty array of matrices");
        }
        Branch branch;
        std::size_t k = 0;
        for (const json& mat : spec["kraus"]) {
          try {
            branch.emplace_back(
                read_matrix(mat, path + "/kraus/" + std::to_string(k)),
                label + "_" + std::to_string(k), tol);
          } catch (const InvariantError& e) {
            fail(path + "/kraus/" + std::to_string(k), e.what());
          }
          ++k;
        }
        binding.kraus = std::move(branch);
      }
      if (spec.contains("effect")) {
        ++forms;
        try {
          binding.effect = Effect(read_matrix(spec["effect"], path + "/effect"), tol);
        } catch (const InvariantError& e) {
          fail(path + "/effect", e.what());
        }
      }
      if (spec.contains("detector_model")) {
        ++forms;
        binding.detector =
            read_detector_model(spec["detector_model"], path + "/detector_model", tol);
      }
      if (forms != 1) {
        fail(path, "expected exactly one of 'kraus', 'effect', 'detector_model'");
      }
      sc.bindings.emplace(label, std::move(binding));
    }
  }

  if (doc.contains("or_policy")) {
    sc.or_policy = read_or_policy(doc["or_policy"], "/or_policy");
  }
  if (doc.contains("order_policy")) {
    sc.order_policy = read_order_policy(doc["order_policy"], "/order_policy");
  }
  sc.povm_groups = read_povm_groups(doc);
  if (doc.contains("expression")) {
    if (!doc["expression"].is_string()) fail("/expression", "expected a string");
    sc.expression = doc["expression"].get<std::string>();
    parse(*sc.expression);  // reject malformed queries at load time
  }

  sc.check_dimensions();
  for (const auto& group : sc.povm_groups) {
    std::vector<Mat> effects;
    for (const std::string& label : group) {
      effects.push_back(sc.effect_of(label).mat());
    }
    const PovmReport report = validate_povm(effects, tol);
    if (!report.valid()) {
      fail("/povm", "declared group is not a valid POVM (completeness "
                    "deviation " +
                        std::to_string(report.completeness_deviation) + ")");
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  return scenario_from_json(parse_file(path));
}

json scenario_to_json(const Scenario& sc) {
  json doc;
  doc["dim"] = sc.dim;
  if (sc.preparation) {
    doc["preparation"]["density"] = write_matrix(sc.preparation->mat());
  }
  json bindings = json::object();
  for (const auto& [label, binding] : sc.bindings) {
    json spec;
    if (binding.kraus) {
      json mats = json::array();
      for (const KrausOperator& k : *binding.kraus) mats.push_back(write_matrix(k.mat()));
      spec["kraus"] = std::move(mats);
    } else if (binding.effect) {
      spec["effect"] = write_matrix(binding.effect->mat());
    } else if (binding.detector) {
      spec["detector_model"] = write_detector_model(*binding.detector);
    }
    bindings[label] = std::move(spec);
  }
  doc["bindings"] = std::move(bindings);
  if (sc.or_policy) doc["or_policy"] = write_or_policy(*sc.or_policy);
  if (sc.order_policy) doc["order_policy"] = write_order_policy(*sc.order_policy);
  if (!sc.povm_groups.empty()) {
    json groups = json::array();
    for (const auto& g : sc.povm_groups) groups.push_back(g);
    doc["povm"] = std::move(groups);
  }
  if (sc.expression) doc["expression"] = *sc.expression;
  return doc;
}

void save_scenario(const Scenario& sc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write scenario file '" + path + "'");
  out << scenario_to_json(sc).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Lenient validation

bool FileValidation::valid() const {
  for (const ValidationItem& item : items) {
    if (!item.ok) return false;
  }
  return true;
}

std::string FileValidation::summary() const {
  std::ostringstream out;
  for (const ValidationItem& item : items) {
    out << (item.ok ? "ok   " : "FAIL ") << item.path;
    if (!item.message.empty()) out << ": " << item.message;
    out << '\n';
  }
  return out.str();
}

namespace {

void check(FileValidation& v, const std::string& path, bool ok,
           const std::string& message) {
  v.items.push_back({path, ok ? "" : message, ok});
}

std::string eig_range(const EffectReport& r) {
  std::ostringstream out;
  out.precision(6);
  out << "eigenvalues in [" << r.min_eigenvalue << ", " << r.max_eigenvalue << "]";
  return out.str();
}

}  // namespace

FileValidation validate_file(const std::string& path, const Tolerance& tol) {
  FileValidation v;
  json doc;
  try {
    doc = parse_file(path);
  } catch (const Error& e) {
    check(v, "/", false, e.what());
    return v;
  }

  Eigen::Index dim = 0;
  if (doc.contains("dim") && doc["dim"].is_number_integer()) {
    dim = doc["dim"].get<Eigen::Index>();
    check(v, "/dim", dim > 0, "dimension must be positive");
  } else {
    check(v, "/dim", false, "missing integer dimension");
    return v;
  }

  // Effects resolvable per label, for POVM group checks.
  std::map<std::string, Mat> label_effects;

  try {
    if (doc.contains("preparation")) {
      const json& prep = doc["preparation"];
      Mat rho;
      if (prep.contains("ket")) {
        const Vec k = read_ket_raw(prep["ket"], "/preparation/ket");
        check(v, "/preparation/ket", std::abs(k.norm() - 1.0) <= tol.eps_prob,
              "ket norm " + std::to_string(k.norm()) + " is not 1");
        rho = k * k.adjoint();
      } else if (prep.contains("density")) {
        rho = read_matrix(prep["density"], "/preparation/density");
      }
      if (rho.size() > 0) {
        check(v, "/preparation", linalg::hermiticity_deviation(rho) <= tol.eps_herm,
              "density matrix is not Hermitian");
        check(v, "/preparation", linalg::is_psd(rho, tol),
              "density matrix is not positive semidefinite");
        check(v, "/preparation", std::abs(rho.trace().real() - 1.0) <= tol.eps_prob,
              "density matrix trace is not 1");
        check(v, "/preparation", rho.rows() == dim, "dimension mismatch");
      }
    }

    if (doc.contains("bindings") && doc["bindings"].is_object()) {
      for (const auto& [label, spec] : doc["bindings"].items()) {
        const std::string bpath = "/bindings/" + label;
        if (spec.contains("kraus")) {
          const json& mats = spec["kraus"];
          Mat gram = Mat::Zero(dim, dim);
          bool shapes_ok = true;
          std::size_t k = 0;
          for (const json& mj : mats) {
            const Mat m = read_matrix(mj, bpath + "/kraus/" + std::to_string(k));
            if (m.rows() != dim || m.cols() != dim) {
              check(v, bpath + "/kraus/" + std::to_string(k), false,
                    "operator is not dim x dim");
              shapes_ok = false;
            } else {
              gram += m.adjoint() * m;
            }
            ++k;
          }
          if (shapes_ok) {
            const EffectReport r = inspect_effect(gram, tol);
            check(v, bpath + "/kraus", r.psd && r.within_unit,
                  "K^dag K out of [0, 1]: " + eig_range(r));
            label_effects.emplace(label, gram);
          }
        } else if (spec.contains("effect")) {
          const Mat e = read_matrix(spec["effect"], bpath + "/effect");
          if (e.rows() != dim || e.cols() != dim) {
            check(v, bpath + "/effect", false, "effect is not dim x dim");
            continue;
          }
          const EffectReport r = inspect_effect(e, tol);
          check(v, bpath + "/effect", r.psd,
                "effect is not positive semidefinite: " + eig_range(r));
          check(v, bpath + "/effect", r.within_unit,
                "effect exceeds the identity: " + eig_range(r));
          label_effects.emplace(label, e);
        } else if (spec.contains("detector_model")) {
          try {
            const DetectorModel model =
                read_detector_model(spec["detector_model"],
                                    bpath + "/detector_model", tol);
            check(v, bpath + "/detector_model", model.system_dim == dim,
                  "system dimension mismatch");
            const Mat km = kraus_from_detector_model(model, label).mat();
            label_effects.emplace(label, km.adjoint() * km);
            // The destructive alpha_ij form carries no completion statement;
            // check the whole outcome set stays within the identity.
            Mat total = Mat::Zero(dim, dim);
            for (const auto& [outcome, ptr] : model.pointer_states) {
              const Mat ko = kraus_from_detector_model(model, outcome).mat();
              total += ko.adjoint() * ko;
            }
            const EffectReport r = inspect_effect(total, tol);
            check(v, bpath + "/detector_model", r.within_unit,
                  "outcome operators sum past the identity: " + eig_range(r));
          } catch (const Error& e) {
            check(v, bpath + "/detector_model", false, e.what());
          }
        } else {
          check(v, bpath, false,
                "expected one of 'kraus', 'effect', 'detector_model'");
        }
      }
    }

    for (const auto& group : read_povm_groups(doc)) {
      std::vector<Mat> effects;
      std::string members;
      bool resolved = true;
      for (const std::string& label : group) {
        members += (members.empty() ? "" : ",") + label;
        const auto it = label_effects.find(label);
        if (it == label_effects.end()) {
          check(v, "/povm", false, "label '" + label + "' has no usable effect");
          resolved = false;
          break;
        }
        effects.push_back(it->second);
      }
      if (!resolved) continue;
      const PovmReport report = validate_povm(effects, tol);
      std::ostringstream msg;
      msg.precision(6);
      msg << "group {" << members << "}: completeness deviation "
          << report.completeness_deviation;
      check(v, "/povm", report.complete, msg.str() + " (effects do not sum to I)");
      for (std::size_t i = 0; i < report.effects.size(); ++i) {
        const EffectReport& r = report.effects[i];
        check(v, "/povm", r.psd,
              "effect '" + group[i] + "' is not PSD: " + eig_range(r));
        check(v, "/povm", r.within_unit,
              "effect '" + group[i] + "' exceeds the identity: " + eig_range(r));
      }
    }

    if (doc.contains("expression") && doc["expression"].is_string()) {
      try {
        parse(doc["expression"].get<std::string>());
        check(v, "/expression", true, "");
      } catch (const ParseError& e) {
        check(v, "/expression", false, e.what());
      }
    }
  } catch (const Error& e) {
    check(v, "/", false, e.what());
  }
  return v;
}

Cplx parse_complex(const std::string& text) {
  if (text.empty()) throw Error("empty complex literal");
  // Forms: a, bi, a+bi, a-bi (optionally 'j' instead of 'i').
  std::string s = text;
  double re = 0.0, im = 0.0;
  const char tail = s.back();
  if (tail == 'i' || tail == 'j') {
    s.pop_back();
    // find the split between the real part and the imaginary coefficient
    std::size_t split = std::string::npos;
    for (std::size_t p = s.size(); p-- > 1;) {
      if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
        split = p;
        break;
      }
    }
    try {
      if (split == std::string::npos) {
        im = (s.empty() || s == "+") ? 1.0 : (s == "-" ? -1.0 : std::stod(s));
      } else {
        re = std::stod(s.substr(0, split));
        const std::string imag = s.substr(split);
        im = (imag == "+") ? 1.0 : (imag == "-" ? -1.0 : std::stod(imag));
      }
    } catch (const std::exception&) {
      throw Error("cannot parse complex literal '" + text + "'");
    }
  } else {
    try {
      re = std::stod(s);
    } catch (const std::exception&) {
      throw Error("cannot parse complex literal '" + text + "'");
    }
  }
  return {re, im};
}

std::string format_complex(Cplx value) {
  std::ostringstream out;
  out.precision(12);
  out << value.real();
  if (value.imag() != 0.0) {
    out << (value.imag() >= 0 ? "+" : "") << value.imag() << "i";
  }
  return out.str();
}

}  // namespace io
}  // namespace seqmeas
