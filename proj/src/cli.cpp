#include "qot/cli.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qot/costs.hpp"
#include "qot/couplings.hpp"
#include "qot/errors.hpp"
#include "qot/estimator.hpp"
#include "qot/io.hpp"
#include "qot/oracle.hpp"
#include "qot/product_costs.hpp"
#include "qot/qp.hpp"
#include "qot/rng.hpp"
#include "qot/solver.hpp"
#include "qot/verify.hpp"

namespace qot {

using Json = nlohmann::ordered_json;

namespace {

struct Key {
  std::string name;
  std::string def;
  std::string help;
  bool flag = false;
};

const std::map<std::string, std::vector<Key>>& command_keys() {
  static const std::map<std::string, std::vector<Key>> table{
      {"couple",
       {{"coupling", "dia", "com | ant | ind | x:LAMBDA | v | vinv | dia"},
        {"mu", "U(0,1)", "first marginal"},
        {"nu", "U(0,1)", "second marginal"},
        {"n", "1000", "number of samples"},
        {"seed", "0", "RNG seed"},
        {"plan", "false", "write the discretised plan instead of samples", true},
        {"ndisc", "10", "discretisation size for --plan"},
        {"out", "", "output file (default stdout)"}}},
      {"estimate",
       {{"cost", "ineq", "cost spec, e.g. qrect:q=1.5"},
        {"coupling", "dia", "coupling spec"},
        {"mu", "U(0,1)", "first marginal"},
        {"nu", "U(0,1)", "second marginal"},
        {"n", "100000", "Monte Carlo sample size"},
        {"seed", "0", "RNG seed"},
        {"method", "auto", "auto | exact | pairs | ustat"},
        {"ndisc", "50", "discretisation size for --method exact"},
        {"format", "json", "json | csv"},
        {"out", "", "output file (default stdout)"}}},
      {"table2",
       {{"samples", "1e6", "Monte Carlo samples per cell (>= 1e4)"},
        {"seed", "0", "RNG seed"},
        {"format", "csv", "csv | json"},
        {"out", "", "output file (default stdout)"}}},
      {"solve",
       {{"method", "fw", "fw | swap | grid | exact-perm | xquad"},
        {"mu", "Bern(0.5)", "first marginal"},
        {"nu", "Bern(0.5)", "second marginal"},
        {"cost", "rect", "cost spec"},
        {"ndisc", "10", "discretisation size for continuous marginals"},
        {"seed", "0", "RNG seed (swap restarts)"},
        {"restarts", "20", "pair-exchange restarts"},
        {"max-iter", "10000", "iteration cap"},
        {"gap-tol", "1e-8", "Frank-Wolfe gap tolerance"},
        {"grid-step", "0.005", "grid oracle step"},
        {"init", "ind", "Frank-Wolfe starting coupling"},
        {"maximize", "false", "maximise instead (swap, exact-perm, xquad)", true},
        {"out", "", "SolveReport JSON file (default stdout)"},
        {"plan-out", "", "plan CSV file (default OUT.plan.csv when --out is set)"}}},
      {"verify",
       {{"suite", "all", "diamond | submodular | gw | vtransport | kernel | qrect | separability | gamma | all"},
        {"seed", "0", "RNG seed"},
        {"out", "", "output file (default stdout)"}}},
  };
  return table;
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flags > config file > defaults.
class Settings {
 public:
  Settings(const std::vector<Key>& keys, const std::map<std::string, std::string>& cli,
           const std::map<std::string, std::string>& file) {
    for (const auto& k : keys) values_[k.name] = k.def;
    for (const auto& [k, v] : file) {
      if (!values_.count(k)) throw UsageError("unknown config key '" + k + "'");
      values_[k] = v;
    }
    for (const auto& [k, v] : cli) values_[k] = v;
  }

  const std::string& str(const std::string& k) const { return values_.at(k); }
  double num(const std::string& k) const {
    const auto& s = str(k);
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError("--" + k + ": bad number '" + s + "'");
    }
  }
  std::size_t count(const std::string& k) const {
    try {
      return parse_count(str(k));
    } catch (const Error&) {
      throw UsageError("--" + k + ": bad count '" + str(k) + "'");
    }
  }
  std::uint64_t seed() const {
    const auto& s = str("seed");
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError("--seed: bad seed '" + s + "'");
    }
  }
  bool flag(const std::string& k) const {
    const auto& s = str(k);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no" || s.empty()) return false;
    throw UsageError("--" + k + ": expected true or false");
  }
  HeaderLines header(const std::string& command) const {
    HeaderLines h{{"tool", "qot"}, {"version", kVersion}, {"command", command}};
    for (const auto& [k, v] : values_) h.emplace_back(k, v);
    return h;
  }
  Json meta(const std::string& command) const {
    Json cfg = Json::object();
    for (const auto& [k, v] : values_) cfg[k] = v;
    return Json{{"tool", "qot"}, {"version", kVersion}, {"command", command}, {"config", cfg}};
  }

 private:
  std::map<std::string, std::string> values_;
};

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty())
    out << content;
  else
    atomic_write(path, content);
}

Json cost_params(const CostFn& c) {
  Json p = Json::object();
  for (const auto& [k, v] : c.params) p[k] = v;
  return p;
}

int cmd_couple(const Settings& s, std::ostream& out) {
  const Copula cop = parse_copula(s.str("coupling"));
  const Marginal mu = parse_marginal(s.str("mu"));
  const Marginal nu = parse_marginal(s.str("nu"));
  std::ostringstream buf;
  if (s.flag("plan")) {
    const std::size_t nd = s.count("ndisc");
    if (nd == 0) throw UsageError("--ndisc must be positive");
    write_plan_csv(buf, to_plan(cop, as_discrete(mu, nd), as_discrete(nu, nd)), s.header("couple"));
  } else {
    write_samples_csv(buf, sample_coupling(CouplingSpec{cop, mu, nu}, s.count("n"), s.seed()), s.header("couple"));
  }
  emit(s.str("out"), buf.str(), out);
  return kExitOk;
}

int cmd_estimate(const Settings& s, std::ostream& out) {
  const Copula cop = parse_copula(s.str("coupling"));
  const Marginal mu = parse_marginal(s.str("mu"));
  const Marginal nu = parse_marginal(s.str("nu"));
  const std::string method = s.str("method");
  const std::string format = s.str("format");
  if (format != "json" && format != "csv") throw UsageError("--format must be json or csv");

  CostEstimate est;
  std::optional<CostFn> cost;
  if (method == "exact") {
    const std::size_t nd = s.count("ndisc");
    const Marginal mu_d = as_discrete(mu, nd), nu_d = as_discrete(nu, nd);
    cost = parse_cost(s.str("cost"), &mu_d, &nu_d);
    est.value = qcost_exact(to_plan(cop, mu_d, nu_d), *cost);
    est.samples = mu_d.size() * nu_d.size();
    est.seed = s.seed();
  } else {
    std::optional<EstimateMethod> m;
    if (method == "pairs") m = EstimateMethod::McPairs;
    else if (method == "ustat") m = EstimateMethod::McUstat;
    else if (method != "auto") throw UsageError("--method must be auto, exact, pairs or ustat");
    cost = parse_cost(s.str("cost"));
    est = qcost_mc(CouplingSpec{cop, mu, nu}, *cost, s.count("n"), s.seed(), m);
  }

  std::ostringstream buf;
  if (format == "json") {
    Json j{{"cost_id", cost->id},
           {"params", cost_params(*cost)},
           {"coupling", cop.name()},
           {"mu", mu.describe()},
           {"nu", nu.describe()},
           {"method", to_string(est.method)},
           {"n", est.samples},
           {"seed", est.seed},
           {"value", est.value},
           {"stderr", est.std_error},
           {"meta", s.meta("estimate")}};
    buf << j.dump(2) << '\n';
  } else {
    write_header(buf, s.header("estimate"));
    buf << "cost,coupling,mu,nu,method,n,seed,value,stderr\n";
    buf << cost->describe() << ',' << cop.name() << ",\"" << mu.describe() << "\",\"" << nu.describe() << "\","
        << to_string(est.method) << ',' << est.samples << ',' << est.seed << ',' << format_double(est.value) << ','
        << format_double(est.std_error) << '\n';
  }
  emit(s.str("out"), buf.str(), out);
  return kExitOk;
}

int cmd_table2(const Settings& s, std::ostream& out) {
  const std::size_t samples = s.count("samples");
  if (samples < 10000) throw UsageError("--samples must be at least 1e4");
  const std::string format = s.str("format");
  if (format != "json" && format != "csv") throw UsageError("--format must be json or csv");
  const auto U = Marginal::uniform(0.0, 1.0), N = Marginal::normal(0.0, 1.0), E = Marginal::exponential(1.0);
  const std::vector<std::pair<Marginal, Marginal>> rows{{U, N}, {U, U}, {N, N}, {E, E}, {U, E}, {N, E}};
  const std::vector<Copula> cols{Copula::comonotone(), Copula::antimonotone(), Copula::independent(), Copula::x(0.5),
                                 Copula::diamond()};
  const CostFn c = catalog("ineq");

  Json cells = Json::array();
  std::ostringstream buf;
  if (format == "csv") {
    write_header(buf, s.header("table2"));
    buf << "mu,nu,coupling,value,stderr,samples,seed\n";
  }
  std::uint64_t cell = 0;
  for (const auto& [mu, nu] : rows)
    for (const auto& cop : cols) {
      const auto est = qcost_mc(CouplingSpec{cop, mu, nu}, c, samples, derive_seed(s.seed(), cell++));
      if (format == "csv") {
        buf << '"' << mu.describe() << "\",\"" << nu.describe() << "\"," << cop.name() << ','
            << format_double(est.value) << ',' << format_double(est.std_error) << ',' << est.samples << ','
            << est.seed << '\n';
      } else {
        cells.push_back(Json{{"mu", mu.describe()},
                             {"nu", nu.describe()},
                             {"coupling", cop.name()},
                             {"value", est.value},
                             {"stderr", est.std_error},
                             {"samples", est.samples},
                             {"seed", est.seed}});
      }
    }
  if (format == "json") buf << Json{{"cost", c.describe()}, {"cells", cells}, {"meta", s.meta("table2")}}.dump(2) << '\n';
  emit(s.str("out"), buf.str(), out);
  return kExitOk;
}

std::vector<double> points(const Marginal& m) { return {m.points().begin(), m.points().end()}; }

bool uniform_weights(const Marginal& m) {
  for (double w : m.weights())
    if (std::abs(w - 1.0 / static_cast<double>(m.size())) > 1e-15) return false;
  return true;
}

int cmd_solve(const Settings& s, std::ostream& out) {
  const std::string method = s.str("method");
  const Marginal mu = parse_marginal(s.str("mu"));
  const Marginal nu = parse_marginal(s.str("nu"));
  const std::size_t nd = s.count("ndisc");
  if (nd == 0) throw UsageError("--ndisc must be positive");
  const Marginal mu_d = as_discrete(mu, nd), nu_d = as_discrete(nu, nd);
  const CostFn c = parse_cost(s.str("cost"), &mu_d, &nu_d);
  const bool maximize = s.flag("maximize");

  Json extra = Json::object();
  std::optional<SolveReport> rep;
  if (method == "fw") {
    if (maximize) throw UsageError("fw does not maximise");
    FwOptions opt;
    opt.gap_tol = s.num("gap-tol");
    opt.max_iter = s.count("max-iter");
    rep = solve_frank_wolfe(build_qp(mu_d, nu_d, c), to_plan(parse_copula(s.str("init")), mu_d, nu_d), opt);
  } else if (method == "swap" || method == "exact-perm") {
    if (mu_d.size() != nu_d.size() || !uniform_weights(mu_d) || !uniform_weights(nu_d))
      throw UsageError(method + " needs equal-size uniform supports");
    if (method == "swap")
      rep = solve_pair_exchange_multi(points(mu_d), points(nu_d), c, s.count("restarts"), s.seed(), s.count("max-iter"),
                                      maximize);
    else
      rep = solve_exhaustive(points(mu_d), points(nu_d), c, maximize);
  } else if (method == "grid") {
    if (maximize) throw UsageError("grid does not maximise");
    auto g = grid_search(mu_d, nu_d, c, s.num("grid-step"));
    extra["grid_tolerance"] = g.tolerance();
    extra["feasible_points"] = g.feasible_count;
    rep = std::move(g.best);
  } else if (method == "xquad") {
    if (!c.f_coeffs || !c.g_coeffs) throw UsageError("xquad needs a quadprod cost");
    const auto sol = solve_quadratic_product(mu, nu, *c.f_coeffs, *c.g_coeffs, maximize);
    SolveReport r{to_plan(sol.spec.copula, mu_d, nu_d)};
    r.objective = sol.objective;
    r.method = "xquad";
    r.termination = Termination::Exact;
    r.optimality = "global";
    rep = std::move(r);
    extra["lambda"] = sol.lambda;
    extra["s_star"] = sol.s_star;
    extra["s_com"] = sol.s_com;
    extra["s_ant"] = sol.s_ant;
  } else {
    throw UsageError("--method must be fw, swap, grid, exact-perm or xquad");
  }

  const std::string out_path = s.str("out");
  std::string plan_path = s.str("plan-out");
  if (plan_path.empty() && !out_path.empty()) plan_path = out_path + ".plan.csv";

  Json j{{"method", rep->method},
         {"objective", rep->objective},
         {"iterations", rep->iterations},
         {"termination", to_string(rep->termination)},
         {"certificate", nullptr},
         {"optimality", rep->optimality},
         {"gap", rep->gap},
         {"plan_path", plan_path.empty() ? Json(nullptr) : Json(plan_path)}};
  if (rep->certificate)
    j["certificate"] = Json{{"psd", rep->certificate->psd}, {"min_eigenvalue", rep->certificate->min_eigenvalue}};
  if (!rep->perm.empty()) j["perm"] = rep->perm;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  j["meta"] = s.meta("solve");

  std::ostringstream plan_buf;
  if (!plan_path.empty()) write_plan_csv(plan_buf, rep->plan, s.header("solve"));
  if (!plan_path.empty()) atomic_write(plan_path, plan_buf.str());
  emit(out_path, j.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_verify(const Settings& s, std::ostream& out) {
  const std::string suite = s.str("suite");
  if (suite != "all" && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw UsageError("unknown suite '" + suite + "'");
  const auto reports = run_suite(suite, s.seed());
  std::ostringstream buf;
  buf << Json{{"meta", s.meta("verify")}}.dump() << '\n';
  bool failed = false;
  for (const auto& r : reports) {
    Json details = Json::object();
    for (const auto& [k, v] : r.details) details[k] = v;
    buf << Json{{"check_id", r.check_id},
                {"status", to_string(r.status)},
                {"pass", r.status == CheckStatus::Pass},
                {"hypothesis_violated", r.status == CheckStatus::HypothesisViolated},
                {"details", details},
                {"instance", r.instance},
                {"note", r.note},
                {"seed", r.seed}}
               .dump()
        << '\n';
    failed = failed || r.status == CheckStatus::Fail;
  }
  emit(s.str("out"), buf.str(), out);
  return failed ? kExitCheckFailed : kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse:
    case ErrorCode::UnknownCost:
    case ErrorCode::BadParams:
    case ErrorCode::InvalidMarginal:
    case ErrorCode::Io: return kExitUsage;
    default: return kExitNumeric;
  }
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string t) {
    const auto a = t.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = t.find_last_not_of(" \t\r");
    return t.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::Parse, path + ":" + std::to_string(lineno) + ":1: expected key = value");
    std::string key = trim(t.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (key.empty()) fail(ErrorCode::Parse, path + ":" + std::to_string(lineno) + ":1: empty key");
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quadratic-form optimal transport on the real line"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, std::string> config_paths;
  std::map<std::string, CLI::App*> subs;
  static const std::map<std::string, std::string> blurbs{
      {"couple", "sample a coupling or write its discretised plan"},
      {"estimate", "estimate the quadratic-form cost of a coupling"},
      {"table2", "Monte Carlo grid of inequality-cost values over standard marginals"},
      {"solve", "solve a discretised instance"},
      {"verify", "run a verification suite (JSON lines)"}};
  for (const auto& [cmd, keys] : command_keys()) {
    auto* sub = app.add_subcommand(cmd, blurbs.at(cmd));
    subs[cmd] = sub;
    for (const auto& k : keys) {
      const std::string help = k.help + (k.def.empty() ? "" : " [" + k.def + "]");
      if (k.flag)
        sub->add_flag("--" + k.name, flags[cmd][k.name], help);
      else
        sub->add_option("--" + k.name, raw[cmd][k.name], help);
    }
    sub->add_option("--config", config_paths[cmd], "flat key = value file (flags take precedence)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (const auto& [cmd, sub] : subs) {
      if (!sub->parsed()) continue;
      std::map<std::string, std::string> cli;
      for (const auto& k : command_keys().at(cmd)) {
        if (sub->count("--" + k.name) == 0) continue;
        cli[k.name] = k.flag ? (flags[cmd][k.name] ? "true" : "false") : raw[cmd][k.name];
      }
      std::map<std::string, std::string> file;
      if (!config_paths[cmd].empty()) file = read_config_file(config_paths[cmd]);
      const Settings s(command_keys().at(cmd), cli, file);
      if (cmd == "couple") return cmd_couple(s, out);
      if (cmd == "estimate") return cmd_estimate(s, out);
      if (cmd == "table2") return cmd_table2(s, out);
      if (cmd == "solve") return cmd_solve(s, out);
      if (cmd == "verify") return cmd_verify(s, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace qot
