#include "cli.hpp"

#include "qgt/bicrossed.hpp"
#include "qgt/errors.hpp"
#include "qgt/haar.hpp"
#include "qgt/matched_pair.hpp"
#include "qgt/padic.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

namespace qgt::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Recursive-descent evaluator for p-adic expressions: integers, literals
// "[p=.. v=.. digits=..]", + - * /, unary minus and parentheses.
class PadicExpression {
 public:
  PadicExpression(std::string text, std::optional<std::uint64_t> prime, PrecisionContext ctx)
      : text_(std::move(text)), prime_(prime), ctx_(ctx) {
    if (!prime_) prime_ = literal_prime();
  }

  PadicNumber evaluate() {
    if (!prime_) throw UsageError("padic: give --prime or a literal with p=...");
    PadicNumber v = expr();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + text_.substr(pos_) + "' in expression");
    return v;
  }

 private:
  std::optional<std::uint64_t> literal_prime() const {
    const auto at = text_.find("p=");
    if (at == std::string::npos) return std::nullopt;
    std::size_t end = at + 2;
    while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    if (end == at + 2) return std::nullopt;
    return std::stoull(text_.substr(at + 2, end - at - 2));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  PadicNumber expr() {
    PadicNumber v = term();
    for (;;) {
      if (accept('+')) {
        v = v + term();
      } else if (accept('-')) {
        v = v - term();
      } else {
        return v;
      }
    }
  }

  PadicNumber term() {
    PadicNumber v = unary();
    for (;;) {
      if (accept('*')) {
        v = v * unary();
      } else if (accept('/')) {
        v = v / unary();
      } else {
        return v;
      }
    }
  }

  PadicNumber unary() {
    if (accept('-')) return -unary();
    return primary();
  }

  PadicNumber primary() {
    skip_space();
    if (accept('(')) {
      PadicNumber v = expr();
      if (!accept(')')) throw ParseError("missing ')' in expression");
      return v;
    }
    if (accept('[')) {
      const auto close = text_.find(']', pos_);
      if (close == std::string::npos) throw ParseError("missing ']' in expression");
      PadicNumber v = PadicNumber::parse(text_.substr(pos_, close - pos_));
      pos_ = close + 1;
      return v;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("expected a number at '" + text_.substr(start) + "'");
    return PadicNumber::from_rational(parse_rational(text_.substr(start, pos_ - start)), *prime_, ctx_);
  }

  std::string text_;
  std::size_t pos_ = 0;
  std::optional<std::uint64_t> prime_;
  PrecisionContext ctx_;
};

nlohmann::json padic_json(const PadicNumber& x) {
  nlohmann::json j{{"prime", x.prime()}, {"text", x.to_text()}, {"norm", to_string(x.norm())}};
  if (x.is_zero()) {
    j["valuation"] = "inf";
  } else {
    j["valuation"] = x.valuation();
    j["precision"] = x.precision();
  }
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

std::uint64_t prime_from_positionals(const std::vector<std::string>& extra, std::optional<std::uint64_t> prime) {
  for (const auto& e : extra) {
    if (e.rfind("p=", 0) != 0) throw UsageError("unexpected argument '" + e + "'");
    if (prime) throw UsageError("prime given twice");
    try {
      prime = std::stoull(e.substr(2));
    } catch (const std::exception&) {
      throw UsageError("bad prime in '" + e + "'");
    }
  }
  if (!prime) throw UsageError("a prime is required (--prime P or p=P)");
  if (!is_prime(*prime)) throw PreconditionViolation(std::to_string(*prime) + " is not prime");
  return *prime;
}

std::string csv_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// One row per prime: the top three levels, 1 - top value and the mass
// below the top value.
std::string report_csv(const ITPFISpec& spec, std::size_t count) {
  std::ostringstream os;
  os << "prime,top1,mult1,top2,mult2,top3,mult3,one_minus_top,off_top_mass\n";
  NumericLevels levels;
  for (std::uint64_t p : spec.subset.first(count)) {
    numeric_levels(spec.rule, p, spec.truncation.levels, levels);
    os << p;
    for (std::size_t i = 0; i < 3; ++i) {
      if (i < levels.size()) {
        os << "," << csv_double(levels[i].first) << "," << csv_double(levels[i].second);
      } else {
        os << ",,";
      }
    }
    double top_mass = levels.empty() ? 0 : levels[0].first * levels[0].second;
    os << "," << csv_double(levels.empty() ? 1 : 1 - levels[0].first) << "," << csv_double(1 - top_mass) << "\n";
  }
  return os.str();
}

nlohmann::json report_json(const ITPFISpec& spec, std::size_t count) {
  nlohmann::json rows = nlohmann::json::array();
  NumericLevels levels;
  for (std::uint64_t p : spec.subset.first(count)) {
    numeric_levels(spec.rule, p, spec.truncation.levels, levels);
    nlohmann::json top = nlohmann::json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(3, levels.size()); ++i) {
      top.push_back({{"value", levels[i].first}, {"multiplicity", levels[i].second}});
    }
    const double top_mass = levels.empty() ? 0 : levels[0].first * levels[0].second;
    rows.push_back({{"prime", p},
                    {"top", top},
                    {"one_minus_top", levels.empty() ? 1.0 : 1 - levels[0].first},
                    {"off_top_mass", 1 - top_mass}});
  }
  return {{"rule", spec.rule.str()}, {"subset", spec.subset.str()}, {"rows", rows}};
}

void emit(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << "\n"; }

}  // namespace

RunConfig default_config() {
  RunConfig c;
  c.precision = PrecisionContext::from_environment().digits;
  return c;
}

RunConfig load_config(const nlohmann::json& j, RunConfig base) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "precision") {
        const long v = value.get<long>();
        if (v <= 0) throw ParseError("config: precision must be positive");
        base.precision = static_cast<unsigned>(v);
      } else if (key == "seed") {
        base.seed = value.get<std::uint64_t>();
      } else if (key == "format") {
        base.format = value.get<std::string>();
        if (base.format != "json" && base.format != "csv") throw ParseError("config: format must be json or csv");
      } else if (key == "truncation") {
        base.truncation.primes = value.value("primes", base.truncation.primes);
        base.truncation.levels = value.value("levels", base.truncation.levels);
        if (base.truncation.primes < 4 || base.truncation.levels < 2) {
          throw ParseError("config: truncation needs at least 4 primes and 2 levels");
        }
      } else if (key == "classifier") {
        for (const auto& [k, v] : value.items()) {
          if (k == "C") {
            base.classifier.C = v.is_string() ? parse_rational(v.get<std::string>()) : parse_rational(v.dump());
          } else if (k == "delta_min") {
            base.classifier.delta_min = v.get<double>();
          } else if (k == "epsilon") {
            base.classifier.epsilon = v.get<double>();
          } else if (k == "ratio_levels") {
            base.classifier.ratio_levels = v.get<std::size_t>();
          } else if (k == "t_grid") {
            base.classifier.t_grid = v.get<std::vector<double>>();
          } else {
            throw ParseError("config: unknown classifier key '" + k + "'");
          }
        }
        const auto& c = base.classifier;
        if (!(c.C > 0) || !(c.epsilon > 0 && c.epsilon < 1) || !(c.delta_min > 0) || c.ratio_levels < 2) {
          throw ParseError("config: classifier needs C > 0, 0 < epsilon < 1, delta_min > 0, ratio_levels >= 2");
        }
      } else {
        throw ParseError("config: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return base;
}

ListRule parse_rule(const std::string& text) {
  if (!text.empty() && text.front() == '{') return rule_from_json(parse_json_text(text, "rule"));
  if (text == "corner-units") return ListRule::units_corner();
  if (text == "corner-dual") return ListRule::dual_corner();
  if (text == "corner-selfdual") return ListRule::selfdual_corner();
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') throw ParseError("unknown rule '" + text + "'");
  const std::string name = text.substr(0, open);
  const std::string arg = text.substr(open + 1, text.size() - open - 2);
  if (name == "boca") return ListRule::boca(parse_rational(arg));
  if (name == "powers") return ListRule::powers(parse_rational(arg));
  if (name == "uniform") return rule_from_json({{"kind", "uniform"}, {"k", arg}});
  throw ParseError("unknown rule '" + text + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact p-adic, Haar-measure and ITPFI type computations for ax+b bicrossed products", "qgt"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<unsigned> precision;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--precision", precision, "p-adic digits (default: QGT_PRECISION or 32)")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed for sampling commands");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));

  // padic
  auto* padic = app.add_subcommand("padic", "Evaluate a p-adic expression");
  std::string padic_expr;
  std::optional<std::uint64_t> padic_prime;
  padic->add_option("expr", padic_expr, "expression over integers and [p=.. v=.. digits=..] literals")->required();
  padic->add_option("--prime", padic_prime, "prime for integer operands");

  // measure
  auto* measure_cmd = app.add_subcommand("measure", "Haar measure of a compact open set");
  std::string set_text;
  std::string kind_text;
  std::uint64_t measure_prime = 0;
  measure_cmd->add_option("set", set_text, "set expression, e.g. 'translate(units, -1)'")->required();
  measure_cmd->add_option("kind", kind_text, "ADD | MULT | MU | NU")->required();
  measure_cmd->add_option("--prime", measure_prime, "prime")->required();

  // action verify
  auto* action = app.add_subcommand("action", "Matched-pair action checks");
  action->require_subcommand(1);
  auto* verify = action->add_subcommand("verify", "Check the matched-pair identities on random samples");
  std::uint64_t verify_prime = 0;
  std::size_t verify_samples_count = 1000;
  verify->add_option("--prime", verify_prime, "prime")->required();
  verify->add_option("--samples", verify_samples_count, "number of samples");

  // eigenlist gen
  auto* eigen = app.add_subcommand("eigenlist", "Eigenvalue lists");
  eigen->require_subcommand(1);
  auto* gen = eigen->add_subcommand("gen", "Generate the list of a rule at one prime");
  std::string gen_rule;
  std::optional<std::uint64_t> gen_prime;
  std::vector<std::string> gen_extra;
  std::size_t gen_levels = 8;
  bool gen_json = false;
  bool gen_csv = false;
  gen->add_option("--rule", gen_rule, "corner-units | corner-dual | corner-selfdual | boca(b) | powers(l) | uniform(k) | JSON")
      ->required();
  gen->add_option("--prime", gen_prime, "prime");
  gen->add_option("--levels", gen_levels, "number of levels to print")->check(CLI::PositiveNumber);
  gen->add_flag("--json", gen_json, "JSON output");
  gen->add_flag("--csv", gen_csv, "CSV output (default)");
  gen->add_option("params", gen_extra, "p=<prime>");

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "Classify an ITPFI spec");
  std::string spec_path;
  std::vector<double> t_values;
  classify_cmd->add_option("--spec", spec_path, "spec JSON file")->required()->check(CLI::ExistingFile);
  classify_cmd->add_option("--t", t_values, "T-invariant probe points (repeatable)");

  // pair
  auto* pair = app.add_subcommand("pair", "Classify the quantum group and its dual over a prime subset");
  std::string pair_subset;
  pair->add_option("--subset", pair_subset, "all_primes | growth(2) | arith_prog(1,4) | paired(1/2,100000) | explicit(...)")
      ->required();

  // search
  auto* search = app.add_subcommand("search", "Search a prime subset towards a III_lambda type");
  double search_target = 0;
  std::size_t search_budget = 8;
  search->add_option("--lambda", search_target, "target lambda in [0, 1]")->required();
  search->add_option("--budget", search_budget, "number of candidate subsets");

  // report
  auto* report = app.add_subcommand("report", "Per-prime table of a rule over a subset");
  std::string report_subset = "all_primes";
  std::string report_rule = "corner-units";
  std::size_t report_primes = 20;
  bool report_csv_flag = false;
  report->add_option("--subset", report_subset, "prime subset");
  report->add_option("--rule", report_rule, "list rule");
  report->add_option("--primes", report_primes, "number of rows")->check(CLI::PositiveNumber);
  report->add_flag("--csv", report_csv_flag, "CSV output");

  // null-complement
  auto* null_cmd = app.add_subcommand("null-complement", "Haar-null complement of the matched pair");
  std::string null_subset = "all_primes";
  null_cmd->add_option("--subset", null_subset, "prime subset");

  std::vector<const char*> argv{"qgt"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    RunConfig config = default_config();
    if (!config_path.empty()) config = load_config(parse_json_text(read_file(config_path), "config"), config);
    if (precision) config.precision = *precision;
    if (seed) config.seed = *seed;
    if (format) config.format = *format;
    const PrecisionContext ctx{config.precision};
    const bool tabular = gen->parsed() || report->parsed();
    if (config.format == "csv" && !tabular) throw UsageError("this command has no CSV output; use --format json");

    if (padic->parsed()) {
      PadicExpression e(padic_expr, padic_prime, ctx);
      emit(out, padic_json(e.evaluate()));
    } else if (measure_cmd->parsed()) {
      const MeasureKind kind = parse_measure_kind(kind_text);
      const CompactOpenSet set = CompactOpenSet::parse(set_text, measure_prime);
      emit(out, {{"set", set.expr().str()},
                 {"prime", measure_prime},
                 {"kind", to_string(kind)},
                 {"measure", to_string(measure(set, kind))}});
    } else if (verify->parsed()) {
      if (!is_prime(verify_prime)) throw PreconditionViolation(std::to_string(verify_prime) + " is not prime");
      const SampleReport r = verify_samples(verify_prime, verify_samples_count, config.seed, ctx);
      emit(out, {{"prime", r.prime},
                 {"samples", r.samples},
                 {"singular", r.singular},
                 {"precision", ctx.digits},
                 {"seed", config.seed},
                 {"failures", r.failures},
                 {"passed", r.passed()}});
      if (!r.passed()) {
        err << "error: IdentityViolation: matched-pair identities failed on some samples\n";
        return 1;
      }
    } else if (gen->parsed()) {
      const std::uint64_t p = prime_from_positionals(gen_extra, gen_prime);
      const ListRule rule = parse_rule(gen_rule);
      const EigenvalueList list = exact_list(rule, p, config.truncation.levels);
      const bool json = gen_json || (!gen_csv && config.format == "json");
      if (json) {
        nlohmann::json j = to_json(list, gen_levels);
        j["rule"] = rule.str();
        j["prime"] = p;
        emit(out, j);
      } else {
        out << to_csv(list, gen_levels);
      }
    } else if (classify_cmd->parsed()) {
      ITPFISpec spec = spec_from_json(parse_json_text(read_file(spec_path), "spec"));
      nlohmann::json j = to_json(classify(spec, config.classifier));
      std::vector<double> ts = t_values.empty() ? config.classifier.t_grid : t_values;
      if (!ts.empty()) {
        nlohmann::json probes = nlohmann::json::array();
        for (double t : ts) {
          nlohmann::json v = to_json(t_test(spec, t));
          v["t"] = t;
          v["probe"] = true;
          probes.push_back(v);
        }
        j["t_probe"] = probes;
      }
      emit(out, j);
    } else if (pair->parsed()) {
      emit(out, to_json(classify_pair(PrimeSubset::parse(pair_subset), config.classifier, config.truncation)));
    } else if (search->parsed()) {
      emit(out, to_json(search_lambda(search_target, config.classifier, search_budget, config.truncation)));
    } else if (report->parsed()) {
      ITPFISpec spec;
      spec.subset = PrimeSubset::parse(report_subset);
      spec.rule = parse_rule(report_rule);
      spec.truncation = config.truncation;
      if (report_csv_flag || config.format == "csv") {
        out << report_csv(spec, report_primes);
      } else {
        emit(out, report_json(spec, report_primes));
      }
    } else if (null_cmd->parsed()) {
      emit(out, to_json(null_complement_check(PrimeSubset::parse(null_subset))));
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    emit(out, {{"error", e.name()}, {"message", e.what()}});
    err << "error: " << e.name() << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qgt::cli
