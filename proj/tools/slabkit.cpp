// Command line front end. Every subcommand prints JSON (or plain text where
// asked) to stdout. Exit codes: 0 success, 1 verification failure or runtime
// error, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "slabkit/analysis.hpp"
#include "slabkit/error.hpp"
#include "slabkit/golden.hpp"
#include "slabkit/verify.hpp"

using namespace slabkit;
namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string ball = "cube";
  std::size_t dim = 0;
  std::string vertices;  // vertex file, alternative to ball + dim
  std::string object = "slab";
  unsigned moment = 0;
  std::uint64_t seed = 1;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

void add_ball_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--ball", cfg.ball, "built-in ball: cube or cross")->check(CLI::IsMember({"cube", "cross"}));
  cmd->add_option("--dim", cfg.dim, "dimension of the built-in ball")->check(CLI::Range(1, 8));
  cmd->add_option("--vertices", cfg.vertices, "JSON file {\"dim\": d, \"vertices\": [[...], ...]}");
  cmd->add_option("--threads", cfg.threads, "worker threads (default: logical cores)")->check(CLI::PositiveNumber);
}

void add_object_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--object", cfg.object, "slab or slice")->check(CLI::IsMember({"slab", "slice"}));
  cmd->add_option("--moment", cfg.moment, "moment order M (0 = volume)");
}

NormBall load_ball(const RunConfig& cfg) {
  if (!cfg.vertices.empty()) {
    if (cfg.dim != 0) throw UsageError("give either --vertices or --dim, not both");
    std::ifstream in(cfg.vertices);
    if (!in) throw UsageError("cannot open " + cfg.vertices);
    try {
      return polytope_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(cfg.vertices + ": " + e.what());
    }
  }
  if (cfg.dim == 0) throw UsageError("--dim is required unless --vertices is given");
  return cfg.ball == "cube" ? make_cube(cfg.dim) : make_cross_polytope(cfg.dim);
}

RatVec parse_vector(const std::string& text) {
  RatVec v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(parse_rat(item));
    } catch (const Error&) {
      throw UsageError("not a rational: '" + item + "'");
    }
  }
  if (v.empty()) throw UsageError("empty vector");
  return v;
}

void print(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_chambers(const RunConfig& cfg, const std::string& reps, bool table) {
  NormBall ball = load_ball(cfg);
  std::vector<Chamber> chambers;
  if (table) {
    if (ball.name != "cube" || !reps.empty()) throw UsageError("--table is for cubes and excludes --reps");
    chambers = chambers_for_representatives(ball, table_representatives(ball.dim));
  } else if (!reps.empty()) {
    std::vector<RatVec> vs;
    std::stringstream ss(reps);
    std::string one;
    while (std::getline(ss, one, ';')) vs.push_back(parse_vector(one));
    for (const auto& v : vs)
      if (v.size() != ball.dim) throw UsageError("representative has the wrong dimension");
    chambers = chambers_for_representatives(ball, vs);
  } else {
    RegionSearch s;
    s.fundamental_only = ball.name != "custom";
    chambers = enumerate_chambers(ball, s);
  }
  print(chambers_to_json(chambers));
  return 0;
}

PiecewiseFormula run_formula(const RunConfig& cfg, const NormBall& ball) {
  EngineOptions opt;
  opt.threads = cfg.threads;
  return piecewise(ball, parse_object_kind(cfg.object), cfg.moment, opt);
}

int cmd_formula(const RunConfig& cfg, bool latex) {
  NormBall ball = load_ball(cfg);
  print(to_json(run_formula(cfg, ball), latex));
  return 0;
}

int cmd_eval(const RunConfig& cfg, const std::string& a_text, const std::string& t_text) {
  NormBall ball = load_ball(cfg);
  RatVec a = parse_vector(a_text);
  if (a.size() != ball.dim) throw UsageError("--a has the wrong dimension");
  Rat t;
  try {
    t = parse_rat(t_text);
  } catch (const Error&) {
    throw UsageError("not a rational: '" + t_text + "'");
  }
  ObjectKind kind = parse_object_kind(cfg.object);
  EvalResult r = evaluate(ball, kind, cfg.moment, a, t);
  nlohmann::json j{{"value", to_string(r.value)}, {"chamber", r.chamber}, {"boundary", r.boundary}};
  if (kind == ObjectKind::Slice && !r.unit_direction)
    j["note"] = "a is not a unit vector; the value is the slice moment divided by |a|";
  print(j);
  return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& mode, std::size_t points, std::size_t samples) {
  NormBall ball = load_ball(cfg);
  ObjectKind kind = parse_object_kind(cfg.object);
  CompareBudget budget;
  budget.points = points;
  budget.mc_points = points;
  budget.samples = samples;
  budget.seed = cfg.seed;
  budget.threads = cfg.threads;
  auto pw = run_formula(cfg, ball);
  auto rep = compare(ball, kind, cfg.moment, pw, mode == "mc" ? CompareMode::MonteCarlo : CompareMode::Exact, budget);
  print(rep.to_json());
  return rep.pass ? 0 : 1;
}

int cmd_critical(const RunConfig& cfg, const std::string& format) {
  NormBall ball = load_ball(cfg);
  auto pw = run_formula(cfg, ball);
  std::vector<CriticalSystem> systems;
  for (const auto& p : pw.pieces) systems.push_back(critical_system(p.formula, ball.dim, p.chamber.descriptor()));
  if (format == "text") {
    // one block per chamber, one polynomial per line
    for (const auto& s : systems) {
      std::cout << "# " << s.chamber << "\n";
      auto j = to_json(s);
      for (const auto& line : j["system"]) std::cout << line.get<std::string>() << "\n";
      std::cout << "\n";
    }
    return 0;
  }
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : systems) j.push_back(to_json(s));
  print(j);
  return 0;
}

int cmd_golden(const RunConfig& cfg, const std::string& data, const std::vector<std::string>& only) {
  fs::path dir = fs::path(data);
  if (fs::is_directory(dir / "golden")) dir /= "golden";
  if (!fs::is_directory(dir)) throw UsageError("no golden directory at " + data);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (!only.empty()) {
    std::erase_if(files, [&](const fs::path& p) {
      return std::find(only.begin(), only.end(), p.stem().string()) == only.end();
    });
    if (files.size() != only.size()) throw UsageError("unknown golden file in --only");
  }

  bool pass = !files.empty();
  nlohmann::json out{{"files", nlohmann::json::array()}};
  for (const auto& path : files) {
    GoldenFile g = load_golden(path);
    NormBall ball = make_cube(g.dim);
    EngineOptions opt;
    opt.threads = cfg.threads;
    std::map<unsigned, PiecewiseFormula> pws;
    for (unsigned M : g.moments()) pws.emplace(M, piecewise(ball, g.object, M, opt));

    nlohmann::json fj{{"file", path.filename().string()}, {"checks", nlohmann::json::array()},
                      {"errata", nlohmann::json::array()}};
    for (const auto& [M, pw] : pws) {
      auto c = check_golden(g, M, pw, 200, cfg.seed);
      auto cj = c.to_json();
      cj["file"] = path.filename().string();
      fj["checks"].push_back(cj);
      pass = pass && c.pass;
    }
    // a corrected formula is accepted only while the oracle keeps refuting the printed one
    for (const auto& f : g.formulas) {
      if (!f.erratum) continue;
      auto c = certify_printed(g, f, pws.at(0), pws.at(f.M), 10, cfg.seed);
      fj["errata"].push_back({{"name", f.name},
                              {"tested", c.tested},
                              {"oracle_agrees_with_engine", c.engine_agrees},
                              {"oracle_agrees_with_printed", c.printed_agrees},
                              {"refuted", c.refutes_printed()}});
      pass = pass && c.refutes_printed();
    }
    out["files"].push_back(fj);
  }
  out["pass"] = pass;
  print(out);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact piecewise rational formulas for slices and slabs of polyhedral norm balls"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* chambers = app.add_subcommand("chambers", "list regions and t-intervals");
  add_ball_options(chambers, cfg);
  std::string reps;
  chambers->add_option("--reps", reps, "explicit representatives, e.g. \"4,2,1;4,3,2\"");
  bool table = false;
  chambers->add_flag("--table", table, "use the published cube table representatives (d = 2, 3, 4)");

  auto* formula = app.add_subcommand("formula", "piecewise formula for every chamber");
  add_ball_options(formula, cfg);
  add_object_options(formula, cfg);
  bool latex = false;
  formula->add_flag("--latex", latex, "add LaTeX renderings");

  auto* eval = app.add_subcommand("eval", "evaluate the moment at one (a, t)");
  add_ball_options(eval, cfg);
  add_object_options(eval, cfg);
  std::string a_text, t_text;
  eval->add_option("--a", a_text, "direction, comma separated rationals")->required();
  eval->add_option("--t", t_text, "offset t (hyperplane <a,x> = t/2)")->required();

  auto* verify = app.add_subcommand("verify", "compare the formulas against an oracle");
  add_ball_options(verify, cfg);
  add_object_options(verify, cfg);
  std::string mode = "exact";
  std::size_t points = 100, samples = 1000000;
  verify->add_option("--mode", mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  verify->add_option("--points", points, "points per chamber")->check(CLI::PositiveNumber);
  verify->add_option("--samples", samples, "Monte Carlo samples per point")->check(CLI::PositiveNumber);
  verify->add_option("--seed", cfg.seed, "random seed (SLABKIT_SEED overrides)");

  auto* critical = app.add_subcommand("critical", "spherical-gradient generator systems");
  add_ball_options(critical, cfg);
  add_object_options(critical, cfg);
  std::string format = "json";
  critical->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

  auto* golden = app.add_subcommand("golden", "regenerate the bundled golden formulas and compare");
  std::string data = SLABKIT_DATA_DIR;
  std::vector<std::string> only;
  golden->add_option("--data", data, "data directory (containing golden/)");
  golden->add_option("--only", only, "restrict to these files, e.g. cube2_slab");
  golden->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  golden->add_option("--seed", cfg.seed, "seed for the sphere points (SLABKIT_SEED overrides)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (const char* env = std::getenv("SLABKIT_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "SLABKIT_SEED is not an unsigned integer\n";
      return 2;
    }
  }

  try {
    if (*chambers) return cmd_chambers(cfg, reps, table);
    if (*formula) return cmd_formula(cfg, latex);
    if (*eval) return cmd_eval(cfg, a_text, t_text);
    if (*verify) return cmd_verify(cfg, mode, points, samples);
    if (*critical) return cmd_critical(cfg, format);
    if (*golden) return cmd_golden(cfg, data, only);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::Parse ? 2 : 1;
  }
  return 2;
}
