#pragma once

#include <atomic>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "tdq/battery.hpp"
#include "tdq/engine.hpp"
#include "tdq/errors.hpp"
#include "tdq/leonard.hpp"
#include "tdq/parse.hpp"
#include "tdq/ratfunc.hpp"
#include "tdq/rational.hpp"

namespace tdq {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFixtureFormat = "tdq-fixture/1";
inline constexpr const char* kReportFormat = "tdq-report/1";

/// Malformed fixture or report input.
class FormatError : public Error {
 public:
  using Error::Error;
};

struct FieldSpec {
  enum class Kind { rational, ratfunc };
  Kind kind = Kind::rational;
  std::vector<std::string> variables;  // ratfunc only, subset of q, a, b

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

template <ExactField F>
struct Fixture {
  FieldSpec field;
  QRacahParams<F> params;
  std::string basis = "abstract";  // u | udd | w | abstract
  std::optional<std::size_t> n;
  std::map<std::string, Matrix<F>> matrices;
  std::map<std::string, Decomposition<F>> subspaces;

  std::size_t dimension() const { return n ? *n : static_cast<std::size_t>(params.d + 1); }
  const Matrix<F>* find(const std::string& name) const {
    auto it = matrices.find(name);
    return it == matrices.end() ? nullptr : &it->second;
  }
  friend bool operator==(const Fixture&, const Fixture&) = default;
};

inline std::string transition_key(Basis from, Basis to) {
  return "T_" + std::string(basis_name(from)) + "_to_" + std::string(basis_name(to));
}

// ---------------------------------------------------------------------------
// Scalars

inline FieldSpec parse_field_spec(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw FormatError("\"field\" must be an object with a string \"kind\"");
  }
  FieldSpec f;
  const std::string kind = j["kind"];
  if (kind == "rational") {
    f.kind = FieldSpec::Kind::rational;
  } else if (kind == "ratfunc") {
    f.kind = FieldSpec::Kind::ratfunc;
    if (!j.contains("variables") || !j["variables"].is_array()) {
      throw FormatError("ratfunc field needs a \"variables\" array");
    }
    for (const auto& v : j["variables"]) {
      if (!v.is_string()) throw FormatError("variable names must be strings");
      const std::string name = v;
      if (name != "q" && name != "a" && name != "b") throw FormatError("unsupported variable '" + name + "'");
      f.variables.push_back(name);
    }
  } else {
    throw FormatError("unknown field kind '" + kind + "'");
  }
  return f;
}

inline Json field_spec_json(const FieldSpec& f) {
  Json j;
  if (f.kind == FieldSpec::Kind::rational) {
    j["kind"] = "rational";
  } else {
    j["kind"] = "ratfunc";
    j["variables"] = f.variables;
  }
  return j;
}

namespace io_detail {

inline void check_declared_variables(const std::string& text, const FieldSpec& field) {
  if (field.kind != FieldSpec::Kind::ratfunc) return;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!std::isalpha(static_cast<unsigned char>(text[i]))) continue;
    std::size_t j = i;
    while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
    const std::string name = text.substr(i, j - i);
    bool declared = false;
    for (const auto& v : field.variables) declared = declared || v == name;
    if (!declared) throw FormatError("identifier '" + name + "' is not a declared variable");
    i = j - 1;
  }
}

template <ExactField F>
F scalar_from_json(const Json& j, const FieldSpec& field, const std::string& where) {
  std::string text;
  if (j.is_string()) {
    text = j.get<std::string>();
  } else if (j.is_number_integer()) {
    text = std::to_string(j.get<long long>());
  } else {
    throw FormatError(where + ": scalar must be a string literal");
  }
  check_declared_variables(text, field);
  try {
    return parse_scalar<F>(text);
  } catch (const ParseError& e) {
    throw FormatError(where + ": " + e.what() + " in \"" + text + "\"");
  }
}

template <ExactField F>
Matrix<F> matrix_from_json(const Json& j, const FieldSpec& field, const std::string& name) {
  if (!j.is_array() || j.empty()) throw FormatError("matrix " + name + " must be a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw FormatError("matrix " + name + " has an empty first row");
  const std::size_t cols = j[0].size();
  Matrix<F> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw FormatError("matrix " + name + " is ragged");
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = scalar_from_json<F>(j[r][c], field, name + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

template <ExactField F>
Json matrix_json(const Matrix<F>& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// Fixtures

template <ExactField F>
Json fixture_json(const Fixture<F>& fx) {
  Json j;
  j["format"] = kFixtureFormat;
  j["field"] = field_spec_json(fx.field);
  Json p;
  p["d"] = fx.params.d;
  p["q"] = fx.params.q.to_string();
  p["a"] = fx.params.a.to_string();
  if (fx.params.b) p["b"] = fx.params.b->to_string();
  j["params"] = p;
  j["basis"] = fx.basis;
  if (fx.n) j["n"] = *fx.n;
  Json ms = Json::object();
  for (const auto& [name, m] : fx.matrices) ms[name] = io_detail::matrix_json(m);
  j["matrices"] = ms;
  if (!fx.subspaces.empty()) {
    Json ss = Json::object();
    for (const auto& [name, spaces] : fx.subspaces) {
      Json list = Json::array();
      for (const auto& s : spaces) {
        Json rows = Json::array();
        for (const auto& v : s.vectors()) {
          Json row = Json::array();
          for (const auto& x : v) row.push_back(x.to_string());
          rows.push_back(std::move(row));
        }
        list.push_back(std::move(rows));
      }
      ss[name] = list;
    }
    j["subspaces"] = ss;
  }
  return j;
}

/// Field kind declared by a fixture document, so callers can pick F.
inline FieldSpec fixture_field(const Json& j) {
  if (!j.is_object()) throw FormatError("fixture must be a JSON object");
  if (!j.contains("format") || j["format"] != kFixtureFormat) {
    throw FormatError(std::string("fixture \"format\" must be \"") + kFixtureFormat + "\"");
  }
  if (!j.contains("field")) throw FormatError("fixture has no \"field\"");
  return parse_field_spec(j["field"]);
}

template <ExactField F>
Fixture<F> fixture_from_json(const Json& j) {
  Fixture<F> fx;
  fx.field = fixture_field(j);
  if (!j.contains("params") || !j["params"].is_object()) throw FormatError("fixture has no \"params\" object");
  const Json& p = j["params"];
  if (!p.contains("d") || !p["d"].is_number_integer()) throw FormatError("params.d must be an integer");
  fx.params.d = p["d"].get<int>();
  if (fx.params.d < 1) throw FormatError("params.d must be at least 1");
  if (!p.contains("q") || !p.contains("a")) throw FormatError("params need q and a");
  fx.params.q = io_detail::scalar_from_json<F>(p["q"], fx.field, "params.q");
  fx.params.a = io_detail::scalar_from_json<F>(p["a"], fx.field, "params.a");
  if (p.contains("b") && !p["b"].is_null()) fx.params.b = io_detail::scalar_from_json<F>(p["b"], fx.field, "params.b");

  fx.basis = j.value("basis", std::string("abstract"));
  if (fx.basis != "abstract" && !parse_basis(fx.basis)) throw FormatError("unknown basis '" + fx.basis + "'");
  if (j.contains("n")) {
    if (!j["n"].is_number_unsigned()) throw FormatError("n must be a positive integer");
    fx.n = j["n"].get<std::size_t>();
  }
  if (!j.contains("matrices") || !j["matrices"].is_object()) throw FormatError("fixture has no \"matrices\" object");
  for (const auto& [name, m] : j["matrices"].items()) {
    fx.matrices.emplace(name, io_detail::matrix_from_json<F>(m, fx.field, name));
  }
  const std::size_t n = fx.n ? *fx.n : (fx.matrices.contains("A") ? fx.matrices.at("A").rows() : fx.dimension());
  if (fx.basis != "abstract" && n != static_cast<std::size_t>(fx.params.d + 1)) {
    throw FormatError("a " + fx.basis + " fixture must have size d + 1");
  }
  for (const auto& [name, m] : fx.matrices) {
    if (m.rows() != n || m.cols() != n) {
      throw FormatError("matrix " + name + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                        ", expected " + std::to_string(n) + "x" + std::to_string(n));
    }
  }
  if (j.contains("subspaces")) {
    if (!j["subspaces"].is_object()) throw FormatError("\"subspaces\" must be an object");
    for (const auto& [name, list] : j["subspaces"].items()) {
      if (!list.is_array()) throw FormatError("subspace list " + name + " must be an array");
      Decomposition<F> spaces;
      for (const auto& rows : list) {
        if (!rows.is_array()) throw FormatError("subspace basis in " + name + " must be an array of rows");
        std::vector<std::vector<F>> vs;
        for (const auto& row : rows) {
          if (!row.is_array() || row.size() != n) throw FormatError("subspace vector in " + name + " has wrong length");
          std::vector<F> v;
          for (const auto& x : row) v.push_back(io_detail::scalar_from_json<F>(x, fx.field, name));
          vs.push_back(std::move(v));
        }
        spaces.push_back(Subspace<F>::span(n, vs));
      }
      fx.subspaces.emplace(name, std::move(spaces));
    }
  }
  return fx;
}

template <ExactField F>
FieldSpec default_field_spec();

template <>
inline FieldSpec default_field_spec<Rational>() {
  return {};
}

template <>
inline FieldSpec default_field_spec<RationalFunction>() {
  return {FieldSpec::Kind::ratfunc, {"q", "a", "b"}};
}

/// Fixture holding every matrix of a Leonard suite plus all transitions.
template <ExactField F>
Fixture<F> fixture_from_leonard(const LeonardSuite<F>& s, FieldSpec field) {
  Fixture<F> fx;
  fx.field = std::move(field);
  fx.params = s.params;
  fx.basis = std::string(basis_name(s.basis));
  for (const auto& [kind, m] : s.matrices) fx.matrices.emplace(std::string(kind_name(kind)), m);
  fx.matrices.emplace("A_udd", s.a_udd);
  for (const auto& [key, m] : s.transitions) fx.matrices.emplace(transition_key(key.first, key.second), m);
  return fx;
}

/// Fixture holding a derived suite: all matrices and the decompositions.
template <ExactField F>
Fixture<F> fixture_from_suite(const OperatorSuite<F>& s, FieldSpec field) {
  Fixture<F> fx;
  fx.field = std::move(field);
  fx.params = s.params;
  fx.basis = "abstract";
  fx.n = s.n;
  fx.matrices = {{"A", s.A},   {"K", s.K},     {"B", s.B},         {"psi", s.psi},
                 {"M", s.M},   {"Minv", s.Minv}, {"Delta", s.Delta}, {"Deltainv", s.Deltainv}};
  if (s.Astar) fx.matrices.emplace("Astar", *s.Astar);
  fx.subspaces = {{"U", s.U}, {"Udd", s.Udd}, {"W", s.W}, {"E", s.E}};
  if (s.Estar) fx.subspaces.emplace("Estar", *s.Estar);
  return fx;
}

/// Inverse of fixture_from_suite; no derivation takes place.
template <ExactField F>
OperatorSuite<F> suite_from_fixture(const Fixture<F>& fx) {
  OperatorSuite<F> s;
  auto need = [&](const char* name) -> const Matrix<F>& {
    const auto* m = fx.find(name);
    if (!m) throw FormatError(std::string("suite fixture lacks matrix ") + name);
    return *m;
  };
  auto need_spaces = [&](const char* name) -> const Decomposition<F>& {
    auto it = fx.subspaces.find(name);
    if (it == fx.subspaces.end()) throw FormatError(std::string("suite fixture lacks subspaces ") + name);
    return it->second;
  };
  s.n = fx.dimension();
  s.params = fx.params;
  s.A = need("A");
  if (const auto* m = fx.find("Astar")) s.Astar = *m;
  s.K = need("K");
  s.B = need("B");
  s.psi = need("psi");
  s.M = need("M");
  s.Minv = need("Minv");
  s.Delta = need("Delta");
  s.Deltainv = need("Deltainv");
  s.U = need_spaces("U");
  s.Udd = need_spaces("Udd");
  s.W = need_spaces("W");
  s.E = need_spaces("E");
  if (auto it = fx.subspaces.find("Estar"); it != fx.subspaces.end()) s.Estar = it->second;
  for (const auto& e : s.E) s.rho.push_back(e.dim());
  return s;
}

/// Engine input taken from a fixture: A with K and/or A*, and the claims
/// (B, psi, M, Minv, Delta, Deltainv) when present.
template <ExactField F>
std::pair<EngineInput<F>, Claims<F>> engine_input(const Fixture<F>& fx) {
  const auto* a = fx.find("A");
  if (!a) throw FormatError("fixture lacks matrix A");
  EngineInput<F> in{*a, std::nullopt, std::nullopt, fx.params};
  if (const auto* k = fx.find("K")) in.K = *k;
  if (const auto* as = fx.find("Astar")) in.Astar = *as;
  if (!in.K && !in.Astar) throw FormatError("fixture needs K or Astar next to A");
  Claims<F> claims;
  for (const char* name : {"B", "psi", "M", "Minv", "Delta", "Deltainv"}) {
    if (const auto* m = fx.find(name)) claims.emplace(name, *m);
  }
  return {std::move(in), std::move(claims)};
}

inline constexpr const char* kLeonardCheckId = "leonard-closed-forms";
inline constexpr const char* kDeriveEntryId = "derive-suite";
inline constexpr const char* kAxiomsEntryId = "tdpair-axioms";

/// The pair axioms as a report entry; an inconclusive outcome counts as a
/// failure to certify.
template <ExactField F>
ReportEntry axioms_entry(const Matrix<F>& a, const Matrix<F>& astar, const QRacahParams<F>& p) {
  ReportEntry e{kAxiomsEntryId, "A, A* diagonalizable, mutually tridiagonal on standard orderings, irreducible",
                ItemStatus::pass, std::nullopt};
  try {
    const auto r = validate_axioms(a, astar, p);
    if (r.status != AxiomStatus::pass) {
      Witness w{std::string("axioms ") + std::string(axiom_status_name(r.status)), {}};
      for (std::size_t i = 0; i < r.messages.size(); ++i) w.data["message_" + std::to_string(i)] = r.messages[i];
      w.data["algebra_dim"] = std::to_string(r.algebra_dim);
      e.status = ItemStatus::fail;
      e.witness = std::move(w);
    }
  } catch (const std::exception& ex) {
    e.status = ItemStatus::fail;
    e.witness = Witness{std::string("evaluation failed: ") + ex.what(), {}};
  }
  return e;
}

/// For a fixture tagged u, udd or w: every stored operator and transition
/// matrix against its closed form at the fixture's parameters.
template <ExactField F>
ReportEntry leonard_fixture_check(const Fixture<F>& fx) {
  ReportEntry e{kLeonardCheckId, "stored matrices equal the closed forms of the tagged basis", ItemStatus::pass,
                std::nullopt};
  try {
    const Basis basis = *parse_basis(fx.basis);
    for (const auto& [name, m] : fx.matrices) {
      std::optional<Matrix<F>> expected;
      if (auto kind = parse_kind(name)) {
        expected = operator_matrix_formula(*kind, basis, fx.params);
      } else if (name == "A_udd") {
        expected = operator_matrix_formula(OperatorKind::A, Basis::udd, fx.params);
      } else if (name == "Astar") {
        continue;
      } else {
        for (Basis from : kAllBases) {
          for (Basis to : kAllBases) {
            if (name == transition_key(from, to)) expected = transition_matrix_formula(from, to, fx.params);
          }
        }
      }
      if (!expected) {
        e.status = ItemStatus::fail;
        e.witness = Witness{"unrecognized matrix name " + name, {}};
        return e;
      }
      if (!(*expected == m)) {
        e.status = ItemStatus::fail;
        e.witness = Witness{name + " differs from its closed form",
                            {{"stored", m.to_string()}, {"closed_form", expected->to_string()}}};
        return e;
      }
    }
  } catch (const std::exception& ex) {
    e.status = ItemStatus::fail;
    e.witness = Witness{std::string("evaluation failed: ") + ex.what(), {}};
  }
  return e;
}

// ---------------------------------------------------------------------------
// Reports

struct ReportInstance {
  std::string source;
  std::string field;
  std::string basis;
  Json params;
  std::size_t n = 0;
};

/// 0 when nothing failed, 1 otherwise.
inline int report_exit_code(const VerificationReport& r) { return r.all_passed() ? 0 : 1; }

inline Json report_json(const ReportInstance& inst, const VerificationReport& r) {
  Json j;
  j["format"] = kReportFormat;
  j["instance"] = {{"source", inst.source}, {"field", inst.field}, {"basis", inst.basis}, {"params", inst.params},
                   {"n", inst.n}};
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json je;
    je["id"] = e.id;
    je["anchor"] = e.anchor;
    je["status"] = std::string(item_status_name(e.status));
    if (e.witness) {
      Json data = Json::object();
      for (const auto& [k, v] : e.witness->data) data[k] = v;
      je["witness"] = {{"message", e.witness->message}, {"data", data}};
    } else {
      je["witness"] = nullptr;
    }
    entries.push_back(std::move(je));
  }
  j["entries"] = entries;
  j["summary"] = {{"total", r.entries.size()},
                  {"pass", r.count(ItemStatus::pass)},
                  {"fail", r.count(ItemStatus::fail)},
                  {"skipped-needs-Astar", r.count(ItemStatus::skipped_needs_astar)}};
  j["exit_code"] = report_exit_code(r);
  return j;
}

inline std::string report_text(const ReportInstance& inst, const VerificationReport& r) {
  std::size_t width = 2;
  for (const auto& e : r.entries) width = std::max(width, e.id.size());
  std::ostringstream out;
  out << "# " << inst.source << " (" << inst.field << ", basis " << inst.basis << ", n = " << inst.n << ")\n";
  for (const auto& e : r.entries) {
    out << e.id << std::string(width + 2 - e.id.size(), ' ') << item_status_name(e.status);
    if (e.witness) out << "  " << e.witness->message;
    out << '\n';
  }
  out << "pass " << r.count(ItemStatus::pass) << ", fail " << r.count(ItemStatus::fail) << ", skipped "
      << r.count(ItemStatus::skipped_needs_astar) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Files

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

/// Writes via a temporary file in the same directory and renames it into
/// place, so readers never observe a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  static std::atomic<unsigned> counter{0};
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const auto tmp = dir / (path.filename().string() + ".tmp" + std::to_string(::getpid()) + "." + std::to_string(counter++));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out << content;
    if (!out) throw FormatError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw FormatError("cannot rename into " + path.string() + ": " + ec.message());
  }
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace tdq
