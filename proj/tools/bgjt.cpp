// bgjt: setup search, relation collection, factor base logs and descent,
// with JSON artifacts cached in --out-dir.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "bgjt/serialize.hpp"

namespace fs = std::filesystem;
using namespace bgjt;

namespace {

struct Flags {
  std::uint64_t p = 5;
  unsigned n = 1;
  unsigned k = 0;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string out_dir = "bgjt-out";
  std::uint64_t budget = 0;
  bool force = false;
  bool cosets_only = false;
  bool no_rescue = false;
  bool allow_linear = false;
  bool allow_gcd = false;
  bool allow_kummer = false;
  std::string target;
  std::string what;
  unsigned targets = 5;
};

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::StaleCache, "cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::StaleCache, path.string() + " is not valid JSON: " + e.what());
  }
}

void write_json(const fs::path& path, const Json& j) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << j.dump(2) << "\n";
  }
  fs::rename(tmp, path);
}

class Pipeline {
 public:
  explicit Pipeline(const Flags& f) : flags_(f), dir_(f.out_dir) {}

  const FieldTower& tower(bool need_k = true) {
    if (!tower_) {
      if (need_k && flags_.k == 0) throw Error(ErrorKind::InvalidArgument, "--k is required");
      const unsigned k = flags_.k == 0 ? 1 : flags_.k;
      tower_ = structural_ ? FieldTower::build_structural(flags_.p, flags_.n, k, flags_.seed)
                           : FieldTower::build(flags_.p, flags_.n, k, flags_.seed);
    }
    return *tower_;
  }

  // Tiny-scale structure checks accept k >= q.
  void set_structural() { structural_ = true; }

  SetupConstraints constraints() const {
    SetupConstraints c;
    c.require_no_linear_cofactor = !flags_.allow_linear;
    c.require_gcd_one = !flags_.allow_gcd;
    c.require_nonkummer = !flags_.allow_kummer;
    return c;
  }

  const SetupInstance& setup() {
    if (setup_) return *setup_;
    const FieldTower& F = tower();
    const fs::path path = dir_ / "setup.json";
    if (fs::exists(path) && !flags_.force) {
      const Json j = read_json(path);
      SetupInstance s = setup_from_json(F, j);
      if (s.constraints != constraints()) {
        throw Error(ErrorKind::StaleCache,
                    "setup.json was searched under other constraints; use --force or another --out-dir");
      }
      setup_ = std::move(s);
      setup_hash_ = j.at("setup_hash").get<std::string>();
      return *setup_;
    }
    const std::uint64_t budget = flags_.budget ? flags_.budget : default_budget(F);
    setup_ = search_setup(F, constraints(), budget, flags_.jobs);
    const Json j = setup_json(F, *setup_);
    setup_hash_ = j.at("setup_hash").get<std::string>();
    write_json(path, j);
    return *setup_;
  }

  const std::string& setup_hash() {
    setup();
    return setup_hash_;
  }

  const CosetSet& cosets() {
    if (cosets_) return *cosets_;
    const FieldTower& F = tower(false);
    const fs::path path = dir_ / "cosets.json";
    if (fs::exists(path) && !flags_.force) {
      cosets_ = cosets_from_json(F, read_json(path));
      return *cosets_;
    }
    cosets_ = enumerate_cosets(F, flags_.jobs);
    write_json(path, cosets_json(F, *cosets_));
    return *cosets_;
  }

  const RelationSet& relations() {
    if (relations_) return *relations_;
    const FieldTower& F = tower();
    const fs::path path = dir_ / "relations.json";
    const std::string& sh = setup_hash();
    if (fs::exists(path) && !flags_.force) {
      const Json j = read_json(path);
      if (j.at("setup_hash").get<std::string>() != sh) {
        throw Error(ErrorKind::StaleCache, "relations.json belongs to setup " +
                                               j.at("setup_hash").get<std::string>() + ", not " + sh);
      }
      relations_ = relations_from_json(F, j);
      relations_hash_ = j.at("relations_hash").get<std::string>();
      return *relations_;
    }
    RelgenOptions opt;
    opt.jobs = flags_.jobs;
    opt.frobenius_topup = !flags_.cosets_only;
    relations_ = collect_relations(F, setup(), cosets(), opt);
    const Json j = relations_json(F, *relations_, sh);
    relations_hash_ = j.at("relations_hash").get<std::string>();
    write_json(path, j);
    return *relations_;
  }

  const DlogTable& table() {
    if (table_) return *table_;
    const FieldTower& F = tower();
    const fs::path path = dir_ / "dlogs.json";
    const std::string& sh = setup_hash();
    if (fs::exists(path) && !flags_.force) {
      const Json j = read_json(path);
      if (j.at("setup_hash").get<std::string>() != sh) {
        throw Error(ErrorKind::StaleCache, "dlogs.json belongs to setup " +
                                               j.at("setup_hash").get<std::string>() + ", not " + sh);
      }
      DlogTable t = dlogs_from_json(F, j);
      if (!verify_table(F, setup(), t, flags_.jobs)) {
        throw Error(ErrorKind::StaleCache, "dlogs.json entries fail the exponentiation check");
      }
      table_ = std::move(t);
      return *table_;
    }
    DlogTable t = solve_factor_base(F, setup(), relations());
    t.setup_hash = sh;
    write_json(path, dlogs_json(F, t, true));
    table_ = std::move(t);
    return *table_;
  }

  DescentOptions descent_options() const {
    DescentOptions o;
    o.jobs = flags_.jobs;
    o.rescue = !flags_.no_rescue;
    return o;
  }

  void merge_report(const std::string& key, const Json& value) {
    const fs::path path = dir_ / "report.json";
    Json report = fs::exists(path) ? read_json(path) : Json::object();
    report[key] = value;
    write_json(path, report);
  }

  const fs::path& dir() const { return dir_; }

 private:
  const Flags& flags_;
  fs::path dir_;
  std::optional<FieldTower> tower_;
  bool structural_ = false;
  std::optional<SetupInstance> setup_;
  std::string setup_hash_;
  std::optional<CosetSet> cosets_;
  std::optional<RelationSet> relations_;
  std::string relations_hash_;
  std::optional<DlogTable> table_;
};

Poly monic_target(const FieldTower& F, const std::string& text) {
  if (text.empty()) throw Error(ErrorKind::InvalidArgument, "--target is required");
  return parse_poly(F, text);
}

int run(const std::string& command, const Flags& flags) {
  Pipeline pipe(flags);
  if (command == "setup") {
    const FieldTower& F = pipe.tower();
    const SetupInstance& s = pipe.setup();
    Json out = setup_json(F, s);
    out["report"] = setup_report_json(F, classify_setup(F, s));
    std::cout << out.dump(2) << "\n";
  } else if (command == "cosets") {
    const CosetSet& c = pipe.cosets();
    std::cout << Json{{"q", c.q}, {"count", c.reps.size()}}.dump() << "\n";
  } else if (command == "relations") {
    const RelationSet& rs = pipe.relations();
    std::cout << Json{{"setup_hash", pipe.setup_hash()},
                      {"rows", rs.rows.size()},
                      {"coset_rows", rs.coset_rows},
                      {"frobenius_rows", rs.frobenius_rows},
                      {"needed", rs.width}}
                     .dump()
              << "\n";
  } else if (command == "linlog") {
    const FieldTower& F = pipe.tower();
    const DlogTable& t = pipe.table();
    std::cout << Json{{"setup_hash", t.setup_hash},
                      {"base_alpha", elt_json(F, F.element(t.base_slot))},
                      {"log_lambda", t.log_lambda},
                      {"corrections", t.corrections.size()},
                      {"verified", true}}
                     .dump()
              << "\n";
  } else if (command == "descent") {
    const FieldTower& F = pipe.tower();
    const Poly W = PolyRing(F).monic(monic_target(F, flags.target));
    const DescentStep step = try_descend_step(F, pipe.setup(), pipe.cosets(), W, flags.jobs);
    Json out = descent_step_json(F, step);
    out["setup_hash"] = pipe.setup_hash();
    out["trap_status"] = to_string(trap_check(F, W, pipe.setup()));
    write_json(pipe.dir() / "descent-trace.json", out);
    std::cout << out.dump(2) << "\n";
  } else if (command == "dlog") {
    const FieldTower& F = pipe.tower();
    const Poly T = monic_target(F, flags.target);
    const DlogTable& table = pipe.table();
    Descender d(F, pipe.setup(), table, pipe.cosets(), pipe.descent_options());
    const DlogResult r = d.full_dlog(T);
    Json trace = trace_json(F, r);
    trace["setup_hash"] = pipe.setup_hash();
    trace["target"] = PolyRing(F).to_string(T);
    trace["base_alpha"] = elt_json(F, F.element(table.base_slot));
    write_json(pipe.dir() / "descent-trace.json", trace);
    pipe.merge_report("dlog", Json{{"target", trace["target"]},
                                   {"log", r.log},
                                   {"verified", r.verified},
                                   {"setup_hash", pipe.setup_hash()}});
    std::cout << "log: " << r.log << "\n";
    std::cout << "verified: " << (r.verified ? "true" : "false") << "\n";
  } else if (command == "verify") {
    Json out;
    if (flags.what == "theorem4") {
      const FieldTower& F = pipe.tower(false);
      out = theorem4_json(verify_theorem4(F, pipe.cosets()));
    } else if (flags.what == "heuristic1") {
      out = smith_json(check_heuristic1(pipe.tower(), pipe.relations()));
      out["setup_hash"] = pipe.setup_hash();
    } else if (flags.what == "psi2") {
      pipe.set_structural();
      out = psi2_json(verify_psi2_surjective(pipe.tower(), pipe.setup()));
      out["setup_hash"] = pipe.setup_hash();
    } else if (flags.what == "quotient") {
      pipe.set_structural();
      out = quotient_json(quotient_structure_check(pipe.tower(), pipe.setup()));
      out["setup_hash"] = pipe.setup_hash();
    } else if (flags.what == "trap") {
      const FieldTower& F = pipe.tower(false);
      out = linear_trap_json(F, demonstrate_linear_trap(F, pipe.cosets(), flags.jobs));
      if (flags.k != 0) {
        Json sweeps = Json::array();
        for (const auto& W : classify_setup(F, pipe.setup()).trap_divisors) {
          if (W.degree() >= 2) {
            sweeps.push_back(trap_sweep_json(F, trap_sweep(F, pipe.setup(), pipe.cosets(), W, flags.jobs)));
          }
        }
        out["trap_sweeps"] = sweeps;
      }
    } else {
      throw Error(ErrorKind::InvalidArgument, "verify needs heuristic1|theorem4|psi2|quotient|trap");
    }
    pipe.merge_report(flags.what, out);
    std::cout << out.dump(2) << "\n";
  } else if (command == "bench") {
    using clock = std::chrono::steady_clock;
    Json out;
    auto timed = [&](const char* name, auto&& fn) {
      const auto t0 = clock::now();
      fn();
      out[name] = std::chrono::duration<double>(clock::now() - t0).count();
    };
    const FieldTower& F = pipe.tower();
    timed("setup_s", [&] { pipe.setup(); });
    timed("cosets_s", [&] { pipe.cosets(); });
    timed("relations_s", [&] { pipe.relations(); });
    timed("linlog_s", [&] { pipe.table(); });
    Descender d(F, pipe.setup(), pipe.table(), pipe.cosets(), pipe.descent_options());
    std::mt19937_64 rng(flags.seed);
    timed("dlog_s", [&] {
      for (unsigned t = 0; t < flags.targets; ++t) {
        std::vector<Fq2Elt> c(F.k());
        for (auto& x : c) x = F.element(static_cast<unsigned>(rng() % F.field_size()));
        Poly T(c);
        if (T.is_zero()) T = Poly::constant(FieldTower::one());
        d.full_dlog(T);
      }
    });
    out["targets"] = flags.targets;
    out["q"] = F.q();
    out["k"] = F.k();
    std::cout << out.dump(2) << "\n";
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown command " + command);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BGJT-style discrete logarithms in F_{q^{2k}}"};
  app.require_subcommand(1);
  // Subcommands inherit this, so global flags may follow the command name.
  app.fallthrough();
  Flags flags;
  app.add_option("--p", flags.p, "characteristic");
  app.add_option("--n", flags.n, "q = p^n");
  app.add_option("--k", flags.k, "extension degree over F_{q^2}");
  app.add_option("--seed", flags.seed, "seed for every random choice");
  app.add_option("--jobs", flags.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", flags.out_dir, "artifact directory");
  app.add_option("--budget", flags.budget, "setup candidates to try (0 = all)");
  app.add_flag("--force", flags.force, "recompute instead of reusing artifacts");
  app.add_flag("--cosets-only", flags.cosets_only, "no Frobenius rows when cosets fall short");
  app.add_flag("--no-rescue", flags.no_rescue, "fail with DescentStuck instead of power rewriting");
  app.add_flag("--allow-linear", flags.allow_linear, "allow linear cofactors");
  app.add_flag("--allow-gcd", flags.allow_gcd, "allow cofactor degrees sharing a factor with k");
  app.add_flag("--allow-kummer", flags.allow_kummer, "allow Kummer setups");
  app.set_help_all_flag("--help-all");

  std::string command;
  for (const char* name : {"setup", "cosets", "relations", "linlog", "bench"}) {
    app.add_subcommand(name)->callback([&command, name] { command = name; });
  }
  auto* descent = app.add_subcommand("descent", "one QPA step on an irreducible W");
  descent->add_option("--target", flags.target)->required();
  descent->callback([&] { command = "descent"; });
  auto* dlog = app.add_subcommand("dlog", "whole chain for one target");
  dlog->add_option("--target", flags.target)->required();
  dlog->callback([&] { command = "dlog"; });
  auto* verify = app.add_subcommand("verify");
  verify->add_option("what", flags.what, "heuristic1|theorem4|psi2|quotient|trap")
      ->required()
      ->check(CLI::IsMember({"heuristic1", "theorem4", "psi2", "quotient", "trap"}));
  verify->callback([&] { command = "verify"; });
  app.get_subcommand("bench")->add_option("--targets", flags.targets);
  CLI11_PARSE(app, argc, argv);
  try {
    return run(command, flags);
  } catch (const Error& e) {
    std::cout << Json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}}.dump()
              << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cout << Json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return 3;
  }
}
