// genlab command line: cover, dim, play, tournament, fixture, verify.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "genlab/fixtures.hpp"

using namespace genlab;

namespace {

constexpr const char* kVersion = "0.1.0";

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string eps = "1", eps_prime = "1", r;
  std::size_t horizon = 100;
  std::uint64_t seed = 0;
  std::size_t budget = 2000;
  std::string out;
};

struct Input {
  std::string path, text;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Input load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return {path, os.str()};
}

class Report {
 public:
  explicit Report(const std::string& command) { add("genlab version=" + std::string(kVersion) + " command=" + command); }
  void add(const std::string& line) { lines_.push_back(line); }
  void input(const std::string& role, const Input& in) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(in.text)));
    add("input role=" + role + " path=" + in.path + " fnv1a=" + buf);
  }
  std::string text() const {
    std::string s;
    for (const auto& l : lines_) s += l + "\n";
    return s;
  }

 private:
  std::vector<std::string> lines_;
};

void emit(const Report& rep, const std::string& out) {
  std::cout << rep.text();
  if (out.empty()) return;
  std::ofstream f(out, std::ios::binary);
  if (!f) throw InputError("cannot write " + out);
  f << rep.text();
}

void add_config_flags(CLI::App* cmd, Flags& f, bool game) {
  cmd->add_option("--eps", f.eps, "eps as num/den");
  cmd->add_option("--eps-prime", f.eps_prime, "eps' as num/den");
  if (game) {
    cmd->add_option("--r", f.r, "UUS radius (default: fixture r, or 1)");
    cmd->add_option("--horizon", f.horizon, "rounds per game");
    cmd->add_option("--seed", f.seed, "base seed");
  }
  cmd->add_option("--budget", f.budget, "enumeration budget")->envname("GENLAB_BUDGET");
  cmd->add_option("--out", f.out, "output path");
}

std::string config_line(const GameConfig& c) {
  return "config eps=" + format_rat(c.eps) + " eps_prime=" + format_rat(c.eps_prime) + " r=" +
         format_rat(c.r) + " horizon=" + std::to_string(c.horizon) + " seed=" + std::to_string(c.seed) +
         " budget=" + std::to_string(c.budget) + " uus_override=" + (c.uus_override ? "true" : "false");
}

// Optional "metric <m>" line, then one point per line; '#' starts a comment.
std::pair<std::optional<Metric>, std::vector<Point>> parse_points_file(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::optional<Metric> metric;
  std::vector<Point> pts;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string body = line.substr(b, e - b + 1);
    try {
      if (body.rfind("metric", 0) == 0) {
        metric = parse_metric(body);
      } else {
        pts.push_back(parse_point(body));
      }
    } catch (const std::exception& ex) {
      throw ParseError("line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return {metric, pts};
}

Metric default_metric(const std::vector<Point>& pts) {
  if (pts.empty()) return Metric::abs();
  switch (pts.front().kind()) {
    case Point::Kind::kAtom: return Metric::discrete();
    case Point::Kind::kReal: return Metric::abs();
    case Point::Kind::kVec: return Metric::l2();
  }
  return Metric::abs();
}

std::string verdict_kind(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::kEventuallyCorrect: return "eventually_correct";
    case Verdict::Kind::kFailsWithinHorizon: return "fails_within_horizon";
    case Verdict::Kind::kInconclusive: return "inconclusive";
  }
  return "";
}

// ---- cover ----

int cmd_cover(const std::string& path, const std::vector<std::string>& radii, const std::string& mode,
              const Flags& f) {
  Input in = load(path);
  auto [metric, pts] = parse_points_file(in.text);
  Metric m = metric.value_or(default_metric(pts));
  Report rep("cover");
  rep.input("points", in);
  rep.add("config metric=" + format_metric(m) + " mode=" + mode + " points=" + std::to_string(pts.size()));
  bool vec = m.point_kind() == Point::Kind::kVec;
  for (const auto& rs : radii) {
    Rat radius = parse_rat(rs);
    std::size_t v = 0;
    if (mode == "exact") {
      v = cover_count(m, pts, radius);
    } else if (mode == "greedy") {
      v = covering_number_greedy(m, pts, radius, pts);
    } else {
      v = packing_greedy(m, pts, radius);
    }
    std::string centres = mode == "packing" ? "none" : (mode == "exact" && !vec ? "external" : "internal");
    rep.add("row radius=" + format_rat(radius) + " value=" + std::to_string(v) + " centres=" + centres);
  }
  rep.add("summary rows=" + std::to_string(radii.size()));
  emit(rep, f.out);
  return 0;
}

// ---- dim ----

int cmd_dim(const std::string& class_path, const std::string& fixture, const std::string& mode,
            const std::string& ground_path, std::size_t max_len, const Flags& f) {
  Report rep("dim");
  Rat eps = parse_rat(f.eps), eps_prime = parse_rat(f.eps_prime);
  std::shared_ptr<const HypothesisClass> cls;
  std::optional<ExplicitClass> explicit_cls;
  if (!class_path.empty()) {
    Input in = load(class_path);
    rep.input("class", in);
    explicit_cls = parse_class(in.text, class_path);
  } else {
    cls = make_fixture(fixture).cls;
    rep.add("input role=fixture name=" + fixture);
  }
  const HypothesisClass& c = explicit_cls ? static_cast<const HypothesisClass&>(*explicit_cls) : *cls;
  rep.add("config eps=" + format_rat(eps) + " eps_prime=" + format_rat(eps_prime) + " mode=" + mode +
          " metric=" + format_metric(c.metric()));
  DimResult d;
  if (mode == "formula") {
    if (!explicit_cls) throw InputError("formula requires explicit class");
    d = closure_dimension_finite(*explicit_cls, eps, eps_prime);
  } else {
    if (ground_path.empty()) throw InputError("brute mode requires --ground");
    Input g = load(ground_path);
    rep.input("ground", g);
    auto [gm, ground] = parse_points_file(g.text);
    (void)gm;
    rep.add("config ground=" + std::to_string(ground.size()) + " max_len=" + std::to_string(max_len));
    d = closure_dimension_bruteforce(c, eps, eps_prime, ground, max_len);
  }
  rep.add("result " + format_dim(d));
  if (!d.witness.empty()) rep.add("witness " + format_points(d.witness));
  if (mode == "brute") {
    std::string ach;
    for (auto v : d.achieved) ach += (ach.empty() ? "" : ",") + std::to_string(v);
    rep.add("achieved values=" + (ach.empty() ? std::string("none") : ach) +
            " undecided=" + std::to_string(d.undecided));
  }
  emit(rep, f.out);
  return 0;
}

// ---- play / tournament ----

struct GameSetup {
  std::optional<Fixture> fixture;
  std::shared_ptr<const ExplicitClass> cls;
  std::optional<Input> class_input;
};

GameConfig make_config(const Flags& f, const GameSetup& s, bool uus_override) {
  GameConfig c = s.fixture ? s.fixture->config(parse_rat(f.eps), parse_rat(f.eps_prime), f.horizon, f.budget)
                           : GameConfig{};
  if (!s.fixture) {
    c.eps = parse_rat(f.eps);
    c.eps_prime = parse_rat(f.eps_prime);
    c.horizon = f.horizon;
    c.budget = f.budget;
  }
  if (!f.r.empty()) c.r = parse_rat(f.r);
  c.seed = f.seed;
  c.uus_override = c.uus_override || uus_override;
  return c;
}

struct PlayedGame {
  Transcript tr;
  std::vector<std::pair<std::string, Verdict>> verdicts;
};

// Explicit classes: generators uniform (d* = C + 1), limit (c = C), abstain;
// adversary "enumeration" walks the target member's support.
PlayedGame play_explicit(const ExplicitClass& cls, std::shared_ptr<const ExplicitClass> shared,
                         const std::string& generator, const std::string& adversary,
                         const std::string& target, const GameConfig& c) {
  if (adversary != "enumeration") throw InputError("explicit classes support adversary 'enumeration'");
  const Hypothesis& h = target.empty() ? cls.members().at(0) : cls.member(target);
  std::unique_ptr<Generator> gen;
  std::size_t d_star = 0;
  if (generator == "abstain") {
    gen = std::make_unique<AbstainGenerator>();
  } else if (generator == "uniform" || generator == "limit") {
    DimResult d = closure_dimension_finite(cls, c.eps, c.eps_prime);
    if (d.kind != DimResult::Kind::kFinite) throw InputError("class dimension is not finite: " + format_dim(d));
    d_star = d.d + 1;
    if (generator == "uniform") {
      gen = std::make_unique<UniformGenerator>(shared, c.eps, c.eps_prime, d_star, c.budget);
    } else {
      gen = std::make_unique<LimitGenerator>(std::vector<std::shared_ptr<const HypothesisClass>>{shared}, c.eps,
                                             c.eps_prime, d.d, c.budget);
    }
  } else {
    throw InputError("unknown generator '" + generator + "' (uniform, limit, abstain)");
  }
  EnumerationAdversary adv(h.support, c.seed, 1, {}, c.budget);
  PlayedGame g{run_game(c, cls, adv, *gen, CommitPolicy::fixed(h)), {}};
  g.verdicts.emplace_back("limit", judge_limit(g.tr));
  if (generator == "uniform") g.verdicts.emplace_back("uniform", judge_uniform(g.tr, d_star));
  return g;
}

PlayedGame play_one(const GameSetup& s, const std::string& generator, const std::string& adversary,
                    const std::string& target, const GameConfig& c) {
  if (s.cls) return play_explicit(*s.cls, s.cls, generator, adversary, target, c);
  PlayedGame g{play_fixture(*s.fixture, generator, adversary, c, c.seed), {}};
  g.verdicts.emplace_back("limit", judge_limit(g.tr));
  return g;
}

GameSetup load_setup(const std::string& fixture, const std::string& class_path, Report& rep) {
  GameSetup s;
  if (!class_path.empty()) {
    s.class_input = load(class_path);
    rep.input("class", *s.class_input);
    s.cls = std::make_shared<const ExplicitClass>(parse_class(s.class_input->text, class_path));
  } else {
    s.fixture = make_fixture(fixture);
    rep.add("input role=fixture name=" + fixture);
  }
  return s;
}

int cmd_play(const std::string& fixture, const std::string& class_path, const std::string& generator,
             const std::string& adversary, const std::string& target, const std::string& expect,
             bool uus_override, const Flags& f) {
  Report rep("play");
  GameSetup s = load_setup(fixture, class_path, rep);
  GameConfig c = make_config(f, s, uus_override);
  rep.add(config_line(c));
  PlayedGame g = play_one(s, generator, adversary, target, c);
  std::size_t errors = 0;
  for (const auto& rd : g.tr.rounds) errors += rd.is_error() ? 1 : 0;
  rep.add("game class=" + g.tr.class_name + " generator=" + generator + " adversary=" + adversary +
          " committed=" + g.tr.committed + " rounds=" + std::to_string(g.tr.rounds.size()) +
          " errors=" + std::to_string(errors) + " clean_suffix=" + std::to_string(clean_suffix(g.tr)));
  for (const auto& [judge, v] : g.verdicts) rep.add("verdict judge=" + judge + " " + format_verdict(v));
  if (!f.out.empty()) {
    std::ofstream out(f.out, std::ios::binary);
    if (!out) throw InputError("cannot write " + f.out);
    out << write_transcript(g.tr, g.verdicts);
    rep.add("transcript path=" + f.out);
  }
  int code = 0;
  if (!expect.empty()) {
    std::string got = verdict_kind(g.verdicts.front().second);
    code = got == expect ? 0 : 1;
    rep.add("expect verdict=" + expect + " got=" + got + " match=" + (code == 0 ? "true" : "false"));
  }
  std::cout << rep.text();
  return code;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_tournament(const std::string& fixture, const std::string& class_path, const std::string& generators,
                   const std::string& adversaries, std::size_t seeds, bool uus_override, const Flags& f) {
  Report rep("tournament");
  GameSetup s = load_setup(fixture, class_path, rep);
  GameConfig base = make_config(f, s, uus_override);
  rep.add(config_line(base) + " seeds=" + std::to_string(seeds));
  std::vector<std::string> gens = split_list(generators), advs = split_list(adversaries);
  if (gens.empty()) {
    if (s.fixture) {
      for (const auto& [n, g] : s.fixture->generators) gens.push_back(n);
    } else {
      gens = {"abstain", "limit", "uniform"};
    }
  }
  if (advs.empty()) {
    if (s.fixture) {
      for (const auto& [n, a] : s.fixture->adversaries) advs.push_back(n);
    } else {
      advs = {"enumeration"};
    }
  }
  // Game key: (generator, adversary, seed); rows are emitted in key order.
  struct Key {
    std::string gen, adv;
    std::uint64_t seed;
    bool operator<(const Key& o) const { return std::tie(gen, adv, seed) < std::tie(o.gen, o.adv, o.seed); }
  };
  std::map<Key, std::string> rows;
  std::map<std::string, std::size_t> counts;
  for (const auto& g : gens)
    for (const auto& a : advs)
      for (std::size_t i = 0; i < seeds; ++i) {
        GameConfig c = base;
        c.seed = base.seed + i;
        PlayedGame pg = play_one(s, g, a, "", c);
        const Verdict& v = pg.verdicts.front().second;
        ++counts[verdict_kind(v)];
        rows[{g, a, c.seed}] = "row generator=" + g + " adversary=" + a + " seed=" + std::to_string(c.seed) +
                               " committed=" + pg.tr.committed + " clean_suffix=" +
                               std::to_string(clean_suffix(pg.tr)) + " verdict=" + format_verdict(v);
      }
  for (const auto& [k, line] : rows) rep.add(line);
  std::string sum = "summary games=" + std::to_string(rows.size());
  for (const char* k : {"eventually_correct", "fails_within_horizon", "inconclusive"})
    sum += std::string(" ") + k + "=" + std::to_string(counts[k]);
  rep.add(sum);
  emit(rep, f.out);
  return 0;
}

// ---- fixture / verify ----

int cmd_fixture_list() {
  Report rep("fixture list");
  for (const auto& n : fixture_names()) rep.add("fixture name=" + n);
  std::cout << rep.text();
  return 0;
}

int cmd_fixture_show(const std::string& name) {
  Fixture fx = make_fixture(name);
  Report rep("fixture show");
  std::istringstream in(describe_fixture(fx));
  std::string line;
  while (std::getline(in, line)) rep.add(line);
  std::cout << rep.text();
  return 0;
}

int cmd_verify(const std::string& name, std::size_t seeds, const Flags& f) {
  Fixture fx = make_fixture(name);
  Report rep("verify");
  rep.add("input role=fixture name=" + name);
  rep.add("config seeds=" + std::to_string(seeds) + " budget=" + std::to_string(f.budget));
  VerifyOptions opts;
  opts.seeds = seeds;
  opts.budget = f.budget;
  auto outcomes = verify_fixture(fx, opts);
  std::size_t passed = 0;
  for (const auto& o : outcomes) {
    passed += o.pass ? 1 : 0;
    rep.add("regime label=" + o.label + " pass=" + (o.pass ? "true" : "false") + " " + o.detail);
  }
  rep.add("summary rows=" + std::to_string(outcomes.size()) + " passed=" + std::to_string(passed));
  emit(rep, f.out);
  return passed == outcomes.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"genlab: generation games on metric spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Flags flags;

  auto* cover = app.add_subcommand("cover", "covering / packing numbers of a point file");
  std::string points_path, cover_mode = "exact";
  std::vector<std::string> radii;
  cover->add_option("points", points_path, "points file")->required();
  cover->add_option("--radius", radii, "radius as num/den (repeatable)")->required();
  cover->add_option("--mode", cover_mode)->check(CLI::IsMember({"exact", "greedy", "packing"}));
  add_config_flags(cover, flags, false);

  auto* dim = app.add_subcommand("dim", "(eps, eps')-closure dimension");
  std::string dim_class, dim_fixture, dim_mode = "formula", ground_path;
  std::size_t max_len = 3;
  auto* dc = dim->add_option("--class", dim_class, "class file");
  auto* df = dim->add_option("--fixture", dim_fixture, "fixture name");
  dc->excludes(df);
  dim->add_option("--mode", dim_mode)->check(CLI::IsMember({"formula", "brute"}));
  dim->add_option("--ground", ground_path, "ground points file (brute)");
  dim->add_option("--max-len", max_len, "longest sequence searched (brute)");
  add_config_flags(dim, flags, false);

  std::string game_fixture, game_class, generator, adversary, target, expect, gen_list, adv_list;
  bool uus_override = false;
  std::size_t seeds = 3;
  auto* play = app.add_subcommand("play", "one game");
  auto* pf = play->add_option("--fixture", game_fixture, "fixture name");
  auto* pc = play->add_option("--class", game_class, "class file");
  pf->excludes(pc);
  play->add_option("--generator", generator)->required();
  play->add_option("--adversary", adversary)->required();
  play->add_option("--target", target, "target member id (class games)");
  play->add_option("--expect", expect, "expected limit verdict")
      ->check(CLI::IsMember({"eventually_correct", "fails_within_horizon", "inconclusive"}));
  play->add_flag("--uus-override", uus_override, "skip the r-UUS gate");
  add_config_flags(play, flags, true);

  auto* tour = app.add_subcommand("tournament", "every generator against every adversary");
  auto* tf = tour->add_option("--fixture", game_fixture, "fixture name");
  auto* tc = tour->add_option("--class", game_class, "class file");
  tf->excludes(tc);
  tour->add_option("--generators", gen_list, "comma list (default: all)");
  tour->add_option("--adversaries", adv_list, "comma list (default: all)");
  tour->add_option("--seeds", seeds, "seeds per pairing");
  tour->add_flag("--uus-override", uus_override, "skip the r-UUS gate");
  add_config_flags(tour, flags, true);

  auto* fixture = app.add_subcommand("fixture", "bundled fixtures");
  fixture->require_subcommand(1);
  auto* flist = fixture->add_subcommand("list", "fixture names");
  auto* fshow = fixture->add_subcommand("show", "parameters, players and regime rows");
  std::string show_name;
  fshow->add_option("name", show_name)->required();

  auto* verify = app.add_subcommand("verify", "run a fixture's regime table");
  std::string verify_name;
  std::size_t verify_seeds = 20;
  verify->add_option("name", verify_name)->required();
  verify->add_option("--seeds", verify_seeds, "seeds per sweep");
  add_config_flags(verify, flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cover) return cmd_cover(points_path, radii, cover_mode, flags);
    if (*dim) {
      if (dim_class.empty() && dim_fixture.empty()) throw InputError("dim needs --class or --fixture");
      return cmd_dim(dim_class, dim_fixture, dim_mode, ground_path, max_len, flags);
    }
    if (*play || *tour) {
      if (game_class.empty() && game_fixture.empty()) throw InputError("needs --class or --fixture");
      if (*play) return cmd_play(game_fixture, game_class, generator, adversary, target, expect, uus_override, flags);
      return cmd_tournament(game_fixture, game_class, gen_list, adv_list, seeds, uus_override, flags);
    }
    if (*flist) return cmd_fixture_list();
    if (*fshow) return cmd_fixture_show(show_name);
    if (*verify) return cmd_verify(verify_name, verify_seeds, flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
