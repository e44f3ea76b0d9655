#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tdq/io.hpp"

namespace fs = std::filesystem;
using namespace tdq;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitMath = 1;
constexpr int kExitUsage = 2;

// Thrown for bad flags or input; maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<std::string> split_list(const std::string& text, const char* strict_flag = nullptr) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) {
      out.push_back(item);
    } else if (strict_flag) {
      throw UsageError(std::string(strict_flag) + " has an empty entry");
    }
  }
  if (strict_flag && !text.empty() && text.back() == ',') throw UsageError(std::string(strict_flag) + " has an empty entry");
  return out;
}

FieldSpec field_from_flag(const std::string& name) {
  if (name == "rational") return default_field_spec<Rational>();
  if (name == "ratfunc") return default_field_spec<RationalFunction>();
  throw UsageError("--field must be rational or ratfunc");
}

template <ExactField F>
F scalar_flag(const std::string& text, const char* flag) {
  try {
    return parse_scalar<F>(text);
  } catch (const ParseError& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_file_atomic(out_path, content);
  }
}

// ---------------------------------------------------------------------------
// generate

struct GenerateOptions {
  int d = 1;
  std::string q, a, b, basis = "u", field = "rational", out;
};

template <ExactField F>
int run_generate(const GenerateOptions& o) {
  const F q = scalar_flag<F>(o.q, "--q");
  const F a = scalar_flag<F>(o.a, "--a");
  std::optional<F> b;
  if (!o.b.empty()) b = scalar_flag<F>(o.b, "--b");
  const auto basis = parse_basis(o.basis);
  if (!basis) throw UsageError("--basis must be u, udd or w");
  const auto v = validate_params<F>(o.d, q, a, b);
  if (!v.ok()) {
    std::cerr << "invalid parameters:\n";
    for (const auto& msg : v.violations) std::cerr << "  " << msg << '\n';
    return kExitUsage;
  }
  const auto suite = leonard_suite(*v.params, *basis);
  emit(dump(fixture_json(fixture_from_leonard(suite, field_from_flag(o.field)))), o.out);
  return kExitPass;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  std::vector<std::string> fixtures;
  std::string battery = "all";
  std::string report;
  std::string report_dir;
  bool quiet = false;
  bool parallel_items = false;
  unsigned jobs = 0;
};

struct VerifyOutcome {
  int exit_code = kExitPass;
  std::string text;    // table or error message
  std::string json;    // report document, empty on input error
  std::string source;
};

std::optional<std::set<std::string>> battery_filter(const std::string& flag) {
  std::string spec = flag;
  if (const char* env = std::getenv("TDQ_BATTERY_FILTER"); env && *env) spec = env;
  if (spec == "all") return std::nullopt;
  std::set<std::string> ids;
  for (const auto& id : split_list(spec)) {
    if (!is_battery_id(id) && id != kLeonardCheckId && id != kAxiomsEntryId) throw UsageError("unknown battery item '" + id + "'");
    ids.insert(id);
  }
  if (ids.empty()) throw UsageError("empty battery selection");
  return ids;
}

template <ExactField F>
VerifyOutcome verify_fixture(const Json& doc, const std::string& source, const BatteryOptions& battery) {
  const Fixture<F> fx = fixture_from_json<F>(doc);
  auto [input, claims] = engine_input(fx);
  ReportInstance inst;
  inst.source = source;
  inst.field = fx.field.kind == FieldSpec::Kind::rational ? "rational" : "ratfunc";
  inst.basis = fx.basis;
  inst.params = doc["params"];
  inst.n = input.A.rows();

  VerificationReport report;
  try {
    const auto suite = derive_suite(input, claims, DeriveMode::lenient);
    report = verify_battery(suite, battery);
  } catch (const Error& e) {
    report.entries.push_back({kDeriveEntryId, "operators reconstructed from their defining relations",
                              ItemStatus::fail, Witness{e.what(), {}}});
  }
  if (input.Astar && input.params.b && (!battery.only || battery.only->contains(kAxiomsEntryId))) {
    report.entries.push_back(axioms_entry(input.A, *input.Astar, input.params));
  }
  if (fx.basis != "abstract" && (!battery.only || battery.only->contains(kLeonardCheckId))) {
    report.entries.push_back(leonard_fixture_check(fx));
  }
  return {report_exit_code(report), report_text(inst, report), dump(report_json(inst, report)), source};
}

VerifyOutcome verify_path(const std::string& path, const BatteryOptions& battery) {
  try {
    const Json doc = read_json_file(path);
    const FieldSpec field = fixture_field(doc);
    if (field.kind == FieldSpec::Kind::rational) return verify_fixture<Rational>(doc, path, battery);
    return verify_fixture<RationalFunction>(doc, path, battery);
  } catch (const FormatError& e) {
    return {kExitUsage, path + ": " + e.what() + "\n", "", path};
  } catch (const DimensionMismatch& e) {
    return {kExitUsage, path + ": " + e.what() + "\n", "", path};
  }
}

int run_verify(const VerifyOptions& o) {
  if (!o.report.empty() && o.fixtures.size() > 1) throw UsageError("--report takes a single fixture; use --report-dir");
  BatteryOptions battery;
  battery.only = battery_filter(o.battery);
  battery.parallel = o.parallel_items;

  const unsigned jobs = std::max(1u, o.jobs ? o.jobs : std::thread::hardware_concurrency());
  std::vector<VerifyOutcome> outcomes(o.fixtures.size());
  for (std::size_t start = 0; start < o.fixtures.size(); start += jobs) {
    std::vector<std::future<VerifyOutcome>> running;
    const std::size_t stop = std::min(o.fixtures.size(), start + jobs);
    for (std::size_t i = start; i < stop; ++i) {
      running.push_back(std::async(std::launch::async, verify_path, o.fixtures[i], std::cref(battery)));
    }
    for (std::size_t i = start; i < stop; ++i) outcomes[i] = running[i - start].get();
  }

  if (!o.report_dir.empty()) fs::create_directories(o.report_dir);
  int worst = kExitPass;
  for (const auto& r : outcomes) {
    worst = std::max(worst, r.exit_code);
    if (r.json.empty()) {
      std::cerr << r.text;
      continue;
    }
    if (!o.quiet) std::cout << r.text;
    if (!o.report.empty()) write_file_atomic(o.report, r.json);
    if (!o.report_dir.empty()) {
      const std::string stem = fs::path(r.source).stem().string();
      write_file_atomic(fs::path(o.report_dir) / (stem + ".report.json"), r.json);
      write_file_atomic(fs::path(o.report_dir) / (stem + ".report.txt"), r.text);
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// engine

struct EngineOptions {
  std::string input, out;
  bool lenient = false;
};

template <ExactField F>
int run_engine(const Json& doc, const EngineOptions& o) {
  const Fixture<F> fx = fixture_from_json<F>(doc);
  auto [input, claims] = engine_input(fx);
  if (input.Astar) {
    if (!input.params.b) throw FormatError("A* given without params.b");
    const auto ax = validate_axioms(input.A, *input.Astar, input.params);
    if (ax.status != AxiomStatus::pass) {
      std::cerr << "axioms " << axiom_status_name(ax.status) << ":\n";
      for (const auto& m : ax.messages) std::cerr << "  " << m << '\n';
      return kExitMath;
    }
  }
  try {
    const auto suite = derive_suite(input, {}, o.lenient ? DeriveMode::lenient : DeriveMode::strict);
    emit(dump(fixture_json(fixture_from_suite(suite, fx.field))), o.out);
  } catch (const EngineError& e) {
    std::cerr << "engine: " << e.what() << '\n';
    return kExitMath;
  }
  return kExitPass;
}

int run_engine_path(const EngineOptions& o) {
  const Json doc = read_json_file(o.input);
  if (fixture_field(doc).kind == FieldSpec::Kind::rational) return run_engine<Rational>(doc, o);
  return run_engine<RationalFunction>(doc, o);
}

// ---------------------------------------------------------------------------
// detect

struct DetectOptions {
  std::string theta, field = "rational", out;
};

template <ExactField F>
int run_detect(const DetectOptions& o) {
  std::vector<F> theta;
  for (const auto& t : split_list(o.theta, "--theta")) theta.push_back(scalar_flag<F>(t, "--theta"));
  if (theta.size() < 2) throw UsageError("--theta needs at least two eigenvalues");
  const auto det = detect_qracah(theta);
  Json j;
  j["theta"] = Json::array();
  for (const auto& t : theta) j["theta"].push_back(t.to_string());
  j["solutions"] = Json::array();
  for (const auto& [q, a] : det.solutions) j["solutions"].push_back({{"q", q.to_string()}, {"a", a.to_string()}});
  if (det.representative) {
    const auto& [q, a] = det.solutions[*det.representative];
    j["representative"] = {{"q", q.to_string()}, {"a", a.to_string()}};
    j["note"] = "(q, a) and (q^-1, a^-1) always give the same eigenvalues";
  } else {
    j["reason"] = det.reason;
  }
  emit(dump(j), o.out);
  if (!det.found()) {
    std::cerr << "not of q-Racah type: " << det.reason << '\n';
    return kExitMath;
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact construction and verification of q-Racah tridiagonal systems"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "write the closed-form Leonard suite as a fixture");
  generate->add_option("--d", gen.d, "diameter")->required();
  generate->add_option("--q", gen.q, "scalar literal for q")->required();
  generate->add_option("--a", gen.a, "scalar literal for a")->required();
  generate->add_option("--b", gen.b, "scalar literal for b");
  generate->add_option("--basis", gen.basis, "u, udd or w")->capture_default_str();
  generate->add_option("--field", gen.field, "rational or ratfunc")->capture_default_str();
  generate->add_option("--out", gen.out, "output path (standard output when absent)");

  VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "derive the suite of each fixture and run the identity battery");
  verify->add_option("fixtures", ver.fixtures, "fixture files")->required();
  verify->add_option("--battery", ver.battery, "all, or comma-separated item ids (TDQ_BATTERY_FILTER overrides)")
      ->capture_default_str();
  verify->add_option("--report", ver.report, "JSON report path (single fixture)");
  verify->add_option("--report-dir", ver.report_dir, "directory for per-fixture JSON and text reports");
  verify->add_option("--jobs", ver.jobs, "fixtures processed concurrently (default: hardware threads)");
  verify->add_flag("--parallel-items", ver.parallel_items, "evaluate battery items concurrently");
  verify->add_flag("--quiet", ver.quiet, "do not print the text table");

  EngineOptions eng;
  auto* engine = app.add_subcommand("engine", "derive every operator and decomposition from (A, K) or (A, A*)");
  engine->add_option("input", eng.input, "fixture with A and K and/or Astar")->required();
  engine->add_option("--out", eng.out, "output path (standard output when absent)");
  engine->add_flag("--lenient", eng.lenient, "do not stop on cross-route disagreements");

  DetectOptions det;
  auto* detect = app.add_subcommand("detect", "find all (q, a) producing a given eigenvalue sequence");
  detect->add_option("--theta", det.theta, "comma-separated eigenvalues")->required();
  detect->add_option("--field", det.field, "rational or ratfunc")->capture_default_str();
  detect->add_option("--out", det.out, "output path (standard output when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*generate) {
      field_from_flag(gen.field);
      return gen.field == "ratfunc" ? run_generate<RationalFunction>(gen) : run_generate<Rational>(gen);
    }
    if (*verify) return run_verify(ver);
    if (*engine) return run_engine_path(eng);
    if (*detect) {
      field_from_flag(det.field);
      return det.field == "ratfunc" ? run_detect<RationalFunction>(det) : run_detect<Rational>(det);
    }
  } catch (const EngineError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMath;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
