#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "bgjt/oracle.hpp"
#include "bgjt/serialize.hpp"
#include "doctest.h"

using namespace bgjt;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(BGJT_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("bgjt_cli_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("dlog prints a verified log equal to the BSGS answer") {
  const fs::path dir = fresh_dir("dlog");
  const Run r = run("dlog --p 5 --n 1 --k 3 --target \"x^2+2x+1\" --seed 1 --out-dir " + dir.string());
  CHECK(r.status == 0);
  CHECK(r.out.find("verified: true") != std::string::npos);
  const auto pos = r.out.find("log: ");
  REQUIRE(pos != std::string::npos);
  const std::uint64_t log = std::stoull(r.out.substr(pos + 5));

  // Independent answer: least full-order x + alpha as base, BSGS for the target.
  const FieldTower F = FieldTower::build(5, 1, 3, 1);
  const SetupInstance s = search_setup(F, SetupConstraints{}, default_budget(F));
  const ExtField ext(F, s.f);
  Poly base;
  for (unsigned i = 0; i < F.field_size(); ++i) {
    const Poly c = Poly::linear(F.element(i));
    if (multiplicative_order(ext, c, ext.group_factors()) == ext.group_order()) {
      base = c;
      break;
    }
  }
  const Poly target = parse_poly(F, "x^2+2x+1");
  CHECK(log == bsgs_dlog(ext, base, ext.reduce(target)));

  for (const char* f : {"setup.json", "cosets.json", "relations.json", "dlogs.json", "report.json",
                        "descent-trace.json"}) {
    CHECK(fs::exists(dir / f));
  }
  const Json setup = Json::parse(slurp(dir / "setup.json"));
  CHECK(poly_from_json(F, setup.at("f")) == s.f);
}

TEST_CASE("verify theorem4 passes at q = 3") {
  const fs::path dir = fresh_dir("thm4");
  const Run r = run("verify theorem4 --p 3 --n 1 --out-dir " + dir.string());
  CHECK(r.status == 0);
  const Json j = Json::parse(r.out);
  CHECK(j.at("constructive_ok").get<bool>());
  CHECK(j.at("hnf_ok").get<bool>());
}

TEST_CASE("setup is byte-identical across runs") {
  const fs::path a = fresh_dir("setup_a"), b = fresh_dir("setup_b");
  CHECK(run("setup --p 3 --n 2 --k 5 --out-dir " + a.string()).status == 0);
  CHECK(run("setup --p 3 --n 2 --k 5 --out-dir " + b.string()).status == 0);
  const std::string sa = slurp(a / "setup.json");
  CHECK(!sa.empty());
  CHECK(sa == slurp(b / "setup.json"));
}

TEST_CASE("stale caches and bad input give error JSON") {
  const fs::path dir = fresh_dir("stale");
  CHECK(run("setup --p 7 --n 1 --k 3 --out-dir " + dir.string()).status == 0);
  Run r = run("setup --p 7 --n 1 --k 3 --allow-gcd --out-dir " + dir.string());
  CHECK(r.status == 2);
  CHECK(Json::parse(r.out).at("error") == "StaleCache");
  CHECK(run("setup --p 7 --n 1 --k 3 --allow-gcd --force --out-dir " + dir.string()).status == 0);

  r = run("setup --p 4 --n 1 --k 3 --out-dir " + dir.string());
  CHECK(r.status == 2);
  CHECK(Json::parse(r.out).at("error") == "NotPrime");
  r = run("setup --p 3 --n 1 --k 5 --out-dir " + dir.string());
  CHECK(Json::parse(r.out).at("error") == "RegimeViolation");
  r = run("dlog --p 5 --n 1 --k 3 --target \"x^+\" --out-dir " + dir.string());
  CHECK(r.status == 2);
}
