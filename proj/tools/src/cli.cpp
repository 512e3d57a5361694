#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <regex>
#include <stdexcept>

#include <CLI11.hpp>

#include "metrika/compare.hpp"
#include "metrika/condition.hpp"
#include "metrika/error.hpp"
#include "metrika/eval.hpp"
#include "metrika/io.hpp"
#include "metrika/polish.hpp"
#include "metrika/random.hpp"
#include "metrika/structure.hpp"
#include "metrika/synth.hpp"
#include "metrika/urysohn.hpp"

namespace metrika::cli {

namespace {

using io::Json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// argument helpers

Rational rational_arg(const std::string& flag, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const Error&) {
    throw UsageError(flag + ": not a rational number: '" + text + "'");
  }
}

std::optional<Rational> optional_rational_arg(const std::string& flag, const std::string& text) {
  if (text.empty()) return std::nullopt;
  return rational_arg(flag, text);
}

std::uint64_t parse_seed(const std::string& text, const std::string& source) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || text.empty())
    throw UsageError(source + ": not an unsigned 64-bit integer: '" + text + "'");
  return v;
}

std::uint64_t resolve_seed(const std::string& flag_text) {
  if (!flag_text.empty()) return parse_seed(flag_text, "--seed");
  if (const char* env = std::getenv("METRIKA_SEED")) return parse_seed(env, "METRIKA_SEED");
  throw UsageError("--seed is required (or set METRIKA_SEED)");
}

// ---------------------------------------------------------------------------
// inputs and outputs

struct Inputs {
  Json entries = Json::object();

  std::string read(const std::string& key, const std::string& path) {
    std::string bytes = io::read_text_file(path);
    entries[key] = {{"path", path}, {"hash", io::content_hash(bytes)}};
    return bytes;
  }

  Json read_json(const std::string& key, const std::string& path) {
    const std::string bytes = read(key, path);
    try {
      return Json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::FormatError, "'" + path + "' is not valid JSON: " + e.what());
    }
  }

  PresentedStructure structure(const std::string& key, const std::string& path) {
    return io::structure_from_json(read_json(key, path));
  }
};

Json header(const std::string& kind, const Inputs& inputs) {
  Json j;
  j["schema"] = "metrika/" + kind + "/v1";
  j["inputs"] = inputs.entries;
  return j;
}

void append(Json& into, const Json& fields, const std::vector<std::string>& skip = {}) {
  for (const auto& [k, v] : fields.items())
    if (std::find(skip.begin(), skip.end(), k) == skip.end()) into[k] = v;
}

std::string render(const Json& j) { return j.dump(2) + "\n"; }

Json interval_json(const ValueInterval& v) { return {{"lo", io::fraction(v.lo)}, {"hi", io::fraction(v.hi)}}; }

Json grid_json(const std::optional<Rational>& g) { return g ? Json(io::fraction(*g)) : Json(nullptr); }

// Writes the structure to `out_path`, or to stdout when no path was given.
// Returns the hash of the written bytes.
std::string emit_structure(const PresentedStructure& m, const std::string& out_path, std::ostream& out) {
  const std::string text = render(io::to_json(m));
  if (out_path.empty())
    out << text;
  else
    io::write_text_file(out_path, text);
  return io::content_hash(text);
}

PresentedStructure single_point(const Signature& sig) {
  return PresentedStructure::tabulate(sig, 1, [&](std::size_t r, std::span<const std::size_t>) {
    return sig.relation(r).name == "d" ? Rational::zero() : Rational::one();
  });
}

// ---------------------------------------------------------------------------
// verbs

struct EvalArgs {
  std::string structure, formula;
  std::vector<std::string> assign;
  bool prefix = false;
};

int do_eval(const EvalArgs& a, std::ostream& out) {
  Inputs in;
  const PresentedStructure m = in.structure("structure", a.structure);
  const Formula f = parse_formula(a.formula, m.signature());
  Assignment asg;
  for (const auto& s : a.assign) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--assign expects var=point, got '" + s + "'");
    asg.insert_or_assign(s.substr(0, eq), parse_seed(s.substr(eq + 1), "--assign " + s.substr(0, eq)));
  }
  if (a.prefix) {
    const ValueInterval v = evaluate_prefix_bounds(f, m, asg);
    out << "[" << io::fraction(v.lo) << ", " << io::fraction(v.hi) << "]\n";
  } else {
    out << io::fraction(evaluate(f, m, asg)) << "\n";
  }
  return kOk;
}

struct CheckArgs {
  std::string structure, condition;
  bool prefix = false;
};

int do_check(const CheckArgs& a, std::ostream& out) {
  Inputs in;
  const PresentedStructure m = in.structure("structure", a.structure);
  const Condition c = parse_condition(a.condition, m.signature());
  const CheckResult r = check_condition(c, m, a.prefix ? CheckMode::Prefix : CheckMode::Finite);
  Json j = header("check", in);
  j["condition"] = to_string(c);
  j["mode"] = a.prefix ? "prefix" : "finite";
  j["status"] = to_string(r.status);
  j["interval"] = interval_json(r.interval);
  out << render(j);
  return r.holds() ? kOk : kNotHolds;
}

struct ValidateArgs {
  std::string structure;
};

int do_validate(const ValidateArgs& a, std::ostream& out) {
  Inputs in;
  const PresentedStructure m = in.structure("structure", a.structure);
  const ValidationReport r = validate(m);
  Json j = header("validate", in);
  j["points"] = m.size();
  j["ok"] = r.ok;
  j["is_metric"] = r.is_metric;
  Json vs = Json::array();
  for (const auto& v : r.violations)
    vs.push_back({{"axiom", v.axiom},
                  {"witness", v.witness},
                  {"lhs", io::fraction(v.lhs)},
                  {"rhs", io::fraction(v.rhs)},
                  {"description", describe(v)}});
  j["violations"] = vs;
  out << render(j);
  return kOk;
}

struct SynthArgs {
  std::string theory, from, grid, seed, out;
  std::optional<std::size_t> budget;
};

int do_synth(const SynthArgs& a, std::ostream& out) {
  Inputs in;
  io::TheoryFile theory;
  if (std::filesystem::is_regular_file(a.theory)) {
    theory = io::theory_from_json(in.read_json("theory", a.theory));
  } else {
    switch (theory_kind_from_string(a.theory)) {
      case TheoryKind::EmptyMetric: theory.spec = TheorySpec::empty_metric(); break;
      case TheoryKind::Graph: theory.spec = TheorySpec::graph(); break;
      case TheoryKind::Custom: theory.spec = TheorySpec::custom({}); break;
    }
  }
  const std::optional<std::size_t> budget = a.budget ? a.budget : theory.budget;
  if (!budget) throw UsageError("--budget is required when the theory does not set one");
  const Rational grid = optional_rational_arg("--grid", a.grid).value_or(theory.grid.value_or(Rational(1, 8)));
  const std::uint64_t seed = resolve_seed(a.seed);
  const PresentedStructure start = a.from.empty() ? single_point(theory.spec.signature) : in.structure("from", a.from);

  const SynthResult r = ec_close_run(start, theory.spec, *budget, grid, seed);
  const std::string hash = emit_structure(r.structure, a.out, out);
  if (a.out.empty()) return kOk;

  Json j = header("synth", in);
  j["theory"] = to_string(theory.spec.kind);
  j["seed"] = seed;
  j["budget"] = *budget;
  j["grid"] = io::fraction(grid);
  j["eps"] = io::fraction(theory.spec.eps);
  j["points"] = r.structure.size();
  j["tasks"] = r.stats.tasks;
  j["realized_existing"] = r.stats.realized_existing;
  j["realized_new"] = r.stats.realized_new;
  j["unrealizable"] = r.stats.unrealizable;
  j["saturated"] = r.saturated;
  j["output"] = {{"path", a.out}, {"hash", hash}};
  out << render(j);
  return kOk;
}

struct SampleArgs {
  std::size_t n = 0;
  std::string sampler = "sequential-uniform", grid, seed, out;
};

int do_sample(const SampleArgs& a, std::ostream& out) {
  MeasureSpec spec;
  spec.kind = sampler_kind_from_string(a.sampler);
  spec.grid = optional_rational_arg("--grid", a.grid);
  spec.seed = resolve_seed(a.seed);
  Rng rng = trial_rng(spec.seed, 0, 0);
  const PresentedStructure m = sample_space(a.n, spec, rng);
  const std::string hash = emit_structure(m, a.out, out);
  if (a.out.empty()) return kOk;

  Json j = header("sample", Inputs{});
  j["sampler"] = to_string(spec.kind);
  j["grid"] = grid_json(spec.grid);
  j["seed"] = spec.seed;
  j["points"] = a.n;
  j["output"] = {{"path", a.out}, {"hash", hash}};
  out << render(j);
  return kOk;
}

struct AuditArgs {
  std::string sampler = "rejection-uniform", grid, seed, formula, eps;
  std::size_t n = 0, trials = 0;
  double alpha = 0.01;
  unsigned jobs = 1;
};

int do_audit(const AuditArgs& a, std::ostream& out) {
  MeasureSpec spec;
  spec.kind = sampler_kind_from_string(a.sampler);
  spec.grid = optional_rational_arg("--grid", a.grid);
  const Rational eps = rational_arg("--eps", a.eps);
  spec.seed = resolve_seed(a.seed);
  const Formula phi = parse_formula(a.formula, Signature());
  const InvarianceReport r = invariance_audit(spec, a.n, a.trials, phi, eps, a.alpha, a.jobs);
  Json j = header("audit", Inputs{});
  j["sampler"] = to_string(spec.kind);
  j["grid"] = grid_json(spec.grid);
  j["seed"] = spec.seed;
  j["formula"] = to_string(phi);
  j["eps"] = io::fraction(eps);
  append(j, io::to_json(r));
  out << render(j);
  return kOk;
}

struct GenericityArgs {
  std::string campaign, seed, csv;
  unsigned jobs = 1;
};

std::string curve_csv(const Json& curve, std::string into = "n,frequency\n") {
  for (const auto& p : curve)
    into += std::to_string(p.at("n").get<std::size_t>()) + "," +
            io::decimal(io::rational_from_json(p.at("frequency"))) + "\n";
  return into;
}

int do_genericity(const GenericityArgs& a, std::ostream& out) {
  Inputs in;
  const Json cj = in.read_json("campaign", a.campaign);
  io::CampaignFile c = io::campaign_from_json(cj, std::filesystem::path(a.campaign).parent_path());
  c.spec.seed = resolve_seed(a.seed);
  const std::vector<CurvePoint> curve = genericity_frequency(c.spec, c.theta, c.eps, c.n_values, c.trials, a.jobs);
  Json j = header("genericity", in);
  j["sampler"] = to_string(c.spec.kind);
  j["grid"] = grid_json(c.spec.grid);
  j["seed"] = c.spec.seed;
  j["eps"] = io::fraction(c.eps);
  j["trials"] = c.trials;
  j["theta"] = io::to_json(c.theta);
  j["curve"] = io::to_json(curve);
  j["nondecreasing_within_3sigma"] = nondecreasing_within(curve);
  if (!a.csv.empty()) io::write_text_file(a.csv, curve_csv(j["curve"]));
  out << render(j);
  return kOk;
}

struct CompareArgs {
  std::string a, b, eps;
  std::size_t depth = 0;
  std::size_t budget = 1'000'000;
};

int do_compare(const CompareArgs& a, std::ostream& out) {
  Inputs in;
  const PresentedStructure m = in.structure("a", a.a);
  const PresentedStructure n = in.structure("b", a.b);
  const Rational eps = rational_arg("--eps", a.eps);
  const BackAndForthResult r = back_and_forth(m, n, eps, a.depth, a.budget);
  Json j = header("compare", in);
  j["eps"] = io::fraction(eps);
  j["depth"] = a.depth;
  j["budget"] = a.budget;
  append(j, io::to_json(r));
  out << render(j);
  return r.status == BackAndForthResult::Status::BudgetExhausted ? kDomain : kOk;
}

struct EncodeArgs {
  std::string structure;
  std::optional<std::size_t> length;
};

int do_encode(const EncodeArgs& a, std::ostream& out) {
  Inputs in;
  const PresentedStructure m = in.structure("structure", a.structure);
  const Code c = a.length ? encode(m, *a.length) : encode(m);
  Json j = header("code", in);
  append(j, io::to_json(c), {"schema"});
  out << render(j);
  return kOk;
}

struct ReportArgs {
  std::string structure, configs, eps, format = "json";
  std::vector<std::string> artifacts;
  unsigned jobs = 1;
};

int do_extension_report(const ReportArgs& a, std::ostream& out) {
  if (a.configs.empty() || a.eps.empty()) throw UsageError("report --structure needs --configs and --eps");
  if (!a.artifacts.empty()) throw UsageError("report takes either --structure or artifact files, not both");
  Inputs in;
  const PresentedStructure m = in.structure("structure", a.structure);
  const auto configs = io::configurations_from_json(in.read_json("configs", a.configs));
  const Rational eps = rational_arg("--eps", a.eps);
  const ExtensionReport r = extension_property_report(m, eps, configs, a.jobs);
  Json j = header("extension-report", in);
  j["eps"] = io::fraction(eps);
  j["configs"] = configs.size();
  j["all_satisfied"] = r.all_satisfied();
  append(j, io::to_json(r));
  out << render(j);
  return kOk;
}

int do_merge(const ReportArgs& a, std::ostream& out) {
  static const std::regex schema_re("metrika/([a-z-]+)/v([0-9]+)");
  Inputs in;
  Json merged = Json::array();
  std::optional<std::string> version;
  std::vector<std::string> kinds;
  for (std::size_t i = 0; i < a.artifacts.size(); ++i) {
    const std::string& path = a.artifacts[i];
    const Json j = in.read_json(std::to_string(i), path);
    std::smatch mt;
    const std::string schema = j.is_object() && j.contains("schema") && j["schema"].is_string() ? j["schema"].get<std::string>() : "";
    if (!std::regex_match(schema, mt, schema_re))
      throw Error(ErrorCode::SchemaMismatch, "'" + path + "' is not a metrika artifact");
    if (version && *version != mt[2].str())
      throw Error(ErrorCode::SchemaMismatch, "'" + path + "' has version v" + mt[2].str() + ", expected v" + *version);
    version = mt[2].str();
    kinds.push_back(mt[1].str());
    merged.push_back({{"path", path}, {"hash", in.entries[std::to_string(i)]["hash"]}, {"schema", schema}, {"content", j}});
  }
  if (a.format == "csv") {
    std::string csv = "n,frequency\n";
    for (std::size_t i = 0; i < merged.size(); ++i) {
      if (kinds[i] != "genericity")
        throw Error(ErrorCode::SchemaMismatch, "CSV output needs genericity artifacts, got " + kinds[i]);
      csv = curve_csv(merged[i]["content"].at("curve"), csv);
    }
    out << csv;
    return kOk;
  }
  Json j;
  j["schema"] = "metrika/report/v1";
  j["artifacts"] = merged;
  out << render(j);
  return kOk;
}

int do_report(const ReportArgs& a, std::ostream& out) {
  if (!a.structure.empty()) return do_extension_report(a, out);
  if (!a.configs.empty() || !a.eps.empty()) throw UsageError("--configs and --eps need --structure");
  return do_merge(a, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact continuous-logic evaluation, Urysohn approximants and random metric spaces", "metrika"};
  app.require_subcommand(1);
  app.fallthrough(false);

  std::function<int()> action;
  auto verb = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };
  auto seed_opt = [](CLI::App* s, std::string& into) {
    s->add_option("--seed", into, "RNG seed (falls back to METRIKA_SEED)");
  };
  auto jobs_opt = [](CLI::App* s, unsigned& into) {
    s->add_option("--jobs", into, "Worker cap")->check(CLI::PositiveNumber);
  };

  EvalArgs ev;
  {
    auto* s = verb("eval", "Evaluate a formula on a structure");
    s->add_option("--structure", ev.structure, "Structure file")->required();
    s->add_option("--formula", ev.formula, "Formula text")->required();
    s->add_option("--assign", ev.assign, "Free variable binding var=point (repeatable)");
    s->add_flag("--prefix", ev.prefix, "Print the interval valid for every extension");
    s->callback([&] { action = [&] { return do_eval(ev, out); }; });
  }
  CheckArgs ck;
  {
    auto* s = verb("check", "Check a condition; exit 0 only when it holds");
    s->add_option("--structure", ck.structure, "Structure file")->required();
    s->add_option("--condition", ck.condition, "Condition text")->required();
    s->add_flag("--prefix", ck.prefix, "Treat the structure as a prefix");
    s->callback([&] { action = [&] { return do_check(ck, out); }; });
  }
  ValidateArgs va;
  {
    auto* s = verb("validate", "Check metric axioms and continuity moduli");
    s->add_option("--structure", va.structure, "Structure file")->required();
    s->callback([&] { action = [&] { return do_validate(va, out); }; });
  }
  SynthArgs sy;
  {
    auto* s = verb("synth", "Build an existentially closed approximant");
    s->add_option("--theory", sy.theory, "empty-metric, graph, custom or a theory file")->required();
    s->add_option("--budget", sy.budget, "Task budget");
    s->add_option("--grid", sy.grid, "Grid step 1/q");
    s->add_option("--from", sy.from, "Seed structure (default: one point)");
    s->add_option("--out", sy.out, "Output structure file");
    seed_opt(s, sy.seed);
    s->callback([&] { action = [&] { return do_synth(sy, out); }; });
  }
  SampleArgs sa;
  {
    auto* s = verb("sample", "Sample a random finite metric space");
    s->add_option("--n", sa.n, "Number of points")->required();
    s->add_option("--sampler", sa.sampler, "sequential-uniform or rejection-uniform");
    s->add_option("--grid", sa.grid, "Grid step 1/q");
    s->add_option("--out", sa.out, "Output structure file");
    seed_opt(s, sa.seed);
    s->callback([&] { action = [&] { return do_sample(sa, out); }; });
  }
  AuditArgs au;
  {
    auto* s = verb("audit", "Relabeling invariance audit of a sampler");
    s->add_option("--n", au.n, "Number of points")->required();
    s->add_option("--trials", au.trials, "Number of sampled spaces")->required();
    s->add_option("--formula", au.formula, "Quantifier-free formula")->required();
    s->add_option("--eps", au.eps, "Threshold")->required();
    s->add_option("--sampler", au.sampler, "sequential-uniform or rejection-uniform");
    s->add_option("--grid", au.grid, "Grid step 1/q");
    s->add_option("--alpha", au.alpha, "Significance level for the chi-square flag");
    seed_opt(s, au.seed);
    jobs_opt(s, au.jobs);
    s->callback([&] { action = [&] { return do_audit(au, out); }; });
  }
  GenericityArgs ge;
  {
    auto* s = verb("genericity", "Frequency of the extension property as n grows");
    s->add_option("--campaign", ge.campaign, "Campaign file")->required();
    s->add_option("--csv", ge.csv, "Also write (n, frequency) CSV here");
    seed_opt(s, ge.seed);
    jobs_opt(s, ge.jobs);
    s->callback([&] { action = [&] { return do_genericity(ge, out); }; });
  }
  CompareArgs co;
  {
    auto* s = verb("compare", "Approximate back-and-forth between two structures");
    s->add_option("--a", co.a, "First structure")->required();
    s->add_option("--b", co.b, "Second structure")->required();
    s->add_option("--eps", co.eps, "Allowed distortion")->required();
    s->add_option("--depth", co.depth, "Number of pairs")->required()->check(CLI::PositiveNumber);
    s->add_option("--budget", co.budget, "Node budget");
    s->callback([&] { action = [&] { return do_compare(co, out); }; });
  }
  EncodeArgs en;
  {
    auto* s = verb("encode", "Code of a structure in the product space");
    s->add_option("--structure", en.structure, "Structure file")->required();
    s->add_option("--length", en.length, "Number of coordinates (default: all)");
    s->callback([&] { action = [&] { return do_encode(en, out); }; });
  }
  ReportArgs re;
  {
    auto* s = verb("report", "Extension property report, or merge artifacts");
    s->add_option("--structure", re.structure, "Structure to check");
    s->add_option("--configs", re.configs, "Configuration file");
    s->add_option("--eps", re.eps, "Realization tolerance");
    s->add_option("--format", re.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    s->add_option("artifacts", re.artifacts, "Artifact files to merge");
    jobs_opt(s, re.jobs);
    s->callback([&] { action = [&] { return do_report(re, out); }; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::FormatError:
      case ErrorCode::SchemaMismatch:
      case ErrorCode::InvalidStructure: return kFileFormat;
      default: return kDomain;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  }
}

}  // namespace metrika::cli
