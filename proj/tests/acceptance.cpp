// Acceptance run: one PASS/FAIL line per criterion, details above each line.
// Artifacts (stuck nodes, nonconforming shapes, determinism dumps) go to
// ./acceptance-artifacts/ under the working directory.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "bgjt/serialize.hpp"

namespace fs = std::filesystem;
using namespace bgjt;

namespace {

// Pinned tolerances.
constexpr double kInstanceSeconds = 600.0;     // criterion 1
constexpr unsigned kTargets = 20;              // criterion 1
constexpr std::uint64_t kPipelineSeed = 1;     // criteria 1, 4, 9
constexpr std::size_t kSetupsPerQ = 3;         // criterion 5
constexpr unsigned kCleanPerSetup = 20;        // criterion 5
constexpr double kQpaSuccess = 0.95;           // criterion 5
constexpr double kCubicTolerance = 0.10;       // criterion 7

const fs::path kArtifacts = "acceptance-artifacts";

struct Outcome {
  int number;
  std::string name;
  bool pass;
};
std::vector<Outcome> outcomes;

void record(int number, const std::string& name, bool pass) {
  outcomes.push_back({number, name, pass});
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << number << ": " << name << std::endl;
}

void write(const fs::path& name, const Json& j) {
  fs::create_directories(kArtifacts);
  std::ofstream(kArtifacts / name) << j.dump(2) << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Instance {
  unsigned p, n, k;
};
const std::vector<Instance> kEndToEnd = {{2, 2, 3}, {5, 1, 3}, {7, 1, 3}, {2, 3, 3}, {3, 2, 5}};

Poly random_element(const FieldTower& F, std::mt19937_64& rng) {
  for (;;) {
    std::vector<Fq2Elt> c(F.k());
    for (auto& x : c) x = F.element(static_cast<unsigned>(rng() % F.field_size()));
    Poly P(std::move(c));
    if (!P.is_zero()) return P;
  }
}

// ---------------------------------------------------------------- 1 and 4

void end_to_end() {
  bool all_agree = true, all_fast = true, all_conform = true;
  Json archive = Json::array();
  for (const Instance& in : kEndToEnd) {
    const auto t0 = std::chrono::steady_clock::now();
    const FieldTower F = FieldTower::build(in.p, in.n, in.k, kPipelineSeed);
    const SetupInstance setup = search_setup(F, SetupConstraints{}, default_budget(F));
    const bool nonkummer = !is_kummer(F, setup) && satisfies(F, setup, SetupConstraints{});
    const CosetSet cosets = enumerate_cosets(F);
    RelgenOptions ro;
    ro.frobenius_topup = true;
    const RelationSet rs = collect_relations(F, setup, cosets, ro);
    const SmithShapeReport shape = check_heuristic1(F, rs);
    if (!shape.conforms) {
      all_conform = false;
      Json j = smith_json(shape);
      j["q"] = F.q();
      j["k"] = F.k();
      j["setup"] = setup_json(F, setup);
      archive.push_back(j);
    }
    std::cout << "  q=" << F.q() << " k=" << F.k() << " rows " << rs.coset_rows << "+"
              << rs.frobenius_rows << " shape " << (shape.conforms ? "conforms" : "NONCONFORMING")
              << " s=" << int_vec_json(shape.s_values).dump() << "\n";
    std::size_t agree = 0, qpa = 0, rescued = 0, stuck = 0;
    double oracle_s = 0;
    try {
      const DlogTable table = solve_factor_base(F, setup, rs);
      Descender d(F, setup, table, cosets);
      std::mt19937_64 rng(0x5eed0000 + F.q());
      const Poly base = Poly::linear(F.element(table.base_slot));
      std::vector<Poly> targets;
      for (unsigned t = 0; t < kTargets; ++t) targets.push_back(random_element(F, rng));
      std::vector<std::uint64_t> ours;
      for (const Poly& T : targets) {
        const DlogResult r = d.full_dlog(T);
        ours.push_back(r.log);
        qpa += r.qpa_nodes;
        rescued += r.rescued_nodes;
        stuck += r.stuck_nodes;
      }
      const double pipeline_s = seconds_since(t0);
      const auto t1 = std::chrono::steady_clock::now();
      const BsgsTable oracle(d.ext(), base);
      for (std::size_t t = 0; t < targets.size(); ++t)
        if (oracle.log(targets[t]) == ours[t]) ++agree;
      oracle_s = seconds_since(t1);
      const bool fast = pipeline_s < kInstanceSeconds;
      all_fast = all_fast && fast;
      std::cout << "  q=" << F.q() << " k=" << F.k() << " agree " << agree << "/" << kTargets
                << " pipeline " << pipeline_s << "s (bsgs " << oracle_s << "s) qpa " << qpa
                << " stuck " << stuck << " rescued " << rescued
                << (nonkummer ? "" : " SETUP NOT CONSTRAINED") << "\n";
    } catch (const Error& e) {
      std::cout << "  q=" << F.q() << " k=" << F.k() << " error " << e.what() << "\n";
    }
    all_agree = all_agree && agree == kTargets && nonkummer;
  }
  if (!archive.empty()) write("heuristic1_nonconforming.json", archive);
  record(1, "full_dlog == bsgs on 20 targets for each (q,k), each instance < 600 s",
         all_agree && all_fast);
  record(4, "Smith shape conforms for every criterion-1 setup", all_conform);
}

// ---------------------------------------------------------------- 2 and 3

void cosets_and_certificates() {
  const std::vector<std::pair<unsigned, unsigned>> qs = {{2, 1}, {3, 1}, {2, 2}, {5, 1},
                                                         {7, 1}, {2, 3}, {3, 2}};
  bool counts = true, certs = true;
  for (auto [p, n] : qs) {
    const FieldTower F = FieldTower::build(p, n, 1, 0);
    const long long q = F.q();
    const CosetSet cs = enumerate_cosets(F);
    const bool ok = static_cast<long long>(cs.reps.size()) == q * q * q + q;
    counts = counts && ok;
    std::cout << "  q=" << q << " cosets " << cs.reps.size() << " expected " << q * q * q + q << "\n";
    if (q == 9) continue;
    bool c_ok = false;
    try {
      const Theorem4Certificate c = verify_theorem4(F, cs);
      const std::size_t w = static_cast<std::size_t>(q * q + 1);
      std::vector<long long> v3(w, 1), v4(w, 1), v7(w, 0);
      v3[w - 1] = q;
      v4[0] = v4[w - 1] = q + 1;
      v7[0] = 1;
      v7[w - 1] = q * q + q - 1;
      c_ok = c.constructive_ok && c.hnf_ok && c.v3 == v3 && c.v4 == v4 && c.v7 == v7;
    } catch (const Error& e) {
      std::cout << "  q=" << q << " certificate error " << e.what() << "\n";
    }
    std::cout << "  q=" << q << " certificates " << (c_ok ? "ok" : "FAILED") << "\n";
    certs = certs && c_ok;
  }
  record(2, "coset count q^3+q for q in {2,3,4,5,7,8,9}", counts);
  record(3, "both certificates and v3, v4, v7 closed forms for q in {2,3,4,5,7,8}", certs);
}

// ---------------------------------------------------------------- 5

void trap_theorem() {
  bool e1_zero = true, enough_setups = true;
  std::size_t nodes = 0, succeeded = 0;
  Json stuck_log = Json::array();
  for (auto [p, n] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {5, 1}, {7, 1}}) {
    const FieldTower F = FieldTower::build(p, n, 3, 0);
    const CosetSet cs = enumerate_cosets(F);
    PolyRing R(F);
    // Direct scan, h1 = 1 first: a predicate search cannot prune degree
    // classes, and at q = 5, 7 only h1 = 1 leaves a quadratic cofactor.
    std::vector<SetupInstance> setups;
    const unsigned Q = F.field_size();
    std::vector<Poly> h1s = {Poly::constant(FieldTower::one())};
    for (unsigned a = 0; a < Q; ++a) h1s.push_back(Poly::linear(F.element(a)));
    for (const Poly& h1 : h1s) {
      for (unsigned i = 0; i < Q * Q * Q && setups.size() < kSetupsPerQ; ++i) {
        const Poly h0({F.element(i % Q), F.element(i / Q % Q), F.element(i / (Q * Q))});
        try {
          SetupInstance s = make_setup(F, h0, h1);
          if (satisfies(F, s, SetupConstraints{}) && !classify_setup(F, s).trap_divisors.empty())
            setups.push_back(std::move(s));
        } catch (const Error&) {
        }
      }
    }
    enough_setups = enough_setups && setups.size() >= kSetupsPerQ;
    std::mt19937_64 rng(0x7a9 + F.q());
    for (const SetupInstance& s : setups) {
      std::set<int> degrees;
      std::size_t swept = 0, smooth = 0, bad = 0;
      for (const Poly& W : classify_setup(F, s).trap_divisors) {
        const TrapSweep sw = trap_sweep(F, s, cs, W);
        degrees.insert(W.degree());
        ++swept;
        smooth += sw.smooth;
        bad += sw.smooth_e1;
      }
      e1_zero = e1_zero && bad == 0 && swept > 0;
      std::size_t ok_here = 0, here = 0;
      for (int deg : degrees) {
        for (unsigned t = 0; t < kCleanPerSetup;) {
          std::vector<Fq2Elt> c(deg + 1);
          for (auto& x : c) x = F.element(static_cast<unsigned>(rng() % F.field_size()));
          c.back() = FieldTower::one();
          const Poly W(std::move(c));
          if (!is_irreducible(F, W) || trap_check(F, W, s) != TrapStatus::Clean) continue;
          ++t;
          ++here;
          const DescentStep st = try_descend_step(F, s, cs, W);
          if (st.expression) {
            ++ok_here;
          } else {
            Json j;
            j["q"] = F.q();
            j["setup_hash"] = setup_json(F, s)["setup_hash"];
            j["step"] = descent_step_json(F, st);
            stuck_log.push_back(j);
          }
        }
      }
      nodes += here;
      succeeded += ok_here;
      std::cout << "  q=" << F.q() << " setup h0=" << R.to_string(s.h0)
                << " h1=" << R.to_string(s.h1) << " trap divisors " << swept << " smooth " << smooth
                << " e1!=0 " << bad << " | clean qpa " << ok_here << "/" << here << "\n";
    }
  }
  write("stuck_nodes.json", stuck_log);
  const double rate = nodes ? static_cast<double>(succeeded) / nodes : 0.0;
  std::cout << "  e1 = 0 in every smooth relation: " << (e1_zero ? "yes" : "no")
            << "; QPA success on clean W " << succeeded << "/" << nodes << " = " << rate
            << " (needs >= " << kQpaSuccess << "); stuck nodes logged to "
            << (kArtifacts / "stuck_nodes.json").string() << "\n";
  record(5, "trap divisors never on the left, and QPA succeeds on >= 95% of clean nodes",
         enough_setups && e1_zero && rate >= kQpaSuccess);
}

// ---------------------------------------------------------------- 6

void tiny_structure() {
  struct Case {
    unsigned p, k;
    bool allow_gcd;
  };
  bool ok = true;
  for (const Case c : {Case{2, 2, false}, Case{2, 3, false}, Case{3, 3, false}, Case{3, 4, false},
                       Case{3, 2, true}}) {
    const FieldTower F = FieldTower::build_structural(c.p, 1, c.k, 0);
    SetupConstraints sc;
    sc.require_gcd_one = !c.allow_gcd;
    const SetupInstance s = search_setup(F, sc, default_budget(F));
    const Psi2Report psi = verify_psi2_surjective(F, s);
    const QuotientReport qr = quotient_structure_check(F, s);
    const bool here = psi.surjective && qr.matches && qr.gcd_condition == !c.allow_gcd;
    ok = ok && here;
    std::cout << "  q=" << F.q() << " k=" << c.k << " psi2 " << psi.image_size << "/"
              << psi.unit_count << " quotient " << int_vec_json(qr.observed).dump() << " expected "
              << int_vec_json(qr.expected).dump() << " gcd_condition " << qr.gcd_condition << "\n";
  }
  record(6, "psi2 surjective and quotient invariants exact at q in {2,3}, incl. gcd violation", ok);
}

// ---------------------------------------------------------------- 7

void cubic_smoothness() {
  bool ok = true;
  for (auto [p, n] : std::vector<std::pair<unsigned, unsigned>>{{3, 1}, {2, 2}, {5, 1}}) {
    const FieldTower F = FieldTower::build(p, n, 1, 0);
    const unsigned Q = F.field_size();
    PolyRing R(F);
    // Oracle: distinct products (x+a)(x+b)(x+c), a <= b <= c.
    std::set<Poly> split;
    for (unsigned a = 0; a < Q; ++a)
      for (unsigned b = a; b < Q; ++b)
        for (unsigned c = b; c < Q; ++c)
          split.insert(R.mul(R.mul(Poly::linear(F.element(a)), Poly::linear(F.element(b))),
                             Poly::linear(F.element(c))));
    std::uint64_t count = 0;
    for (unsigned c0 = 0; c0 < Q; ++c0)
      for (unsigned c1 = 0; c1 < Q; ++c1)
        for (unsigned c2 = 0; c2 < Q; ++c2) {
          const Poly P({F.element(c0), F.element(c1), F.element(c2), FieldTower::one()});
          if (is_smooth(F, P, 1)) ++count;
        }
    const double lead = std::pow(static_cast<double>(F.q()), 6) / 6.0;
    const double dev = (static_cast<double>(count) - lead) / lead;
    const bool exact = count == split.size();
    const bool near = std::abs(dev) <= kCubicTolerance;
    ok = ok && exact && near;
    std::cout << "  q=" << F.q() << " 1-smooth cubics " << count << " oracle " << split.size()
              << (exact ? " (exact)" : " (MISMATCH)") << " q^6/6 = " << lead
              << " deviation " << dev << "\n";
  }
  record(7, "1-smooth cubic count exact and within 10% of q^6/6 for q in {3,4,5}", ok);
}

// ---------------------------------------------------------------- 8

void linear_trap() {
  const FieldTower F = FieldTower::build(7, 1, 3, 0);
  const LinearTrapReport r = demonstrate_linear_trap(F, enumerate_cosets(F));
  std::cout << "  q=7 trap slots " << r.trap_slots.size() << " relations " << r.relations
            << " nonzero net " << r.nonzero_net << " rhs>lhs " << r.rhs_exceeds << " lhs>rhs "
            << r.lhs_exceeds << " kummer x order " << r.kummer_x_order << "\n";
  record(8, "linear trap at q=7: no relation with nonzero net trap exponent",
         r.relations > 0 && r.nonzero_net == 0);
}

// ---------------------------------------------------------------- 9

std::vector<std::string> run_stages(const Instance& in, unsigned jobs) {
  std::vector<std::string> dumps;
  const FieldTower F = FieldTower::build(in.p, in.n, in.k, kPipelineSeed);
  dumps.push_back(tower_json(F).dump());
  const SetupInstance setup = search_setup(F, SetupConstraints{}, default_budget(F), jobs);
  const Json sj = setup_json(F, setup);
  dumps.push_back(sj.dump());
  dumps.push_back(setup_report_json(F, classify_setup(F, setup)).dump());
  const CosetSet cs = enumerate_cosets(F, jobs);
  dumps.push_back(cosets_json(F, cs).dump());
  RelgenOptions ro;
  ro.jobs = jobs;
  ro.frobenius_topup = true;
  const RelationSet rs = collect_relations(F, setup, cs, ro);
  const std::string hash = sj["setup_hash"];
  dumps.push_back(relations_json(F, rs, hash).dump());
  dumps.push_back(smith_json(check_heuristic1(F, rs)).dump());
  const DlogTable table = solve_factor_base(F, setup, rs);
  dumps.push_back(dlogs_json(F, table, verify_table(F, setup, table, jobs)).dump());
  DescentOptions dopt;
  dopt.jobs = jobs;
  Descender d(F, setup, table, cs, dopt);
  std::mt19937_64 rng(99);
  for (int t = 0; t < 5; ++t) dumps.push_back(trace_json(F, d.full_dlog(random_element(F, rng))).dump());
  for (const Poly& W : classify_setup(F, setup).trap_divisors)
    dumps.push_back(trap_sweep_json(F, trap_sweep(F, setup, cs, W, jobs)).dump());
  return dumps;
}

void determinism() {
  bool ok = true;
  for (const Instance& in : {Instance{2, 2, 3}, Instance{7, 1, 3}}) {
    const auto a = run_stages(in, 1);
    const auto b = run_stages(in, 1);
    std::size_t same = 0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) same += a[i] == b[i];
    const bool here = a.size() == b.size() && same == a.size();
    ok = ok && here;
    Json hashes = Json::array();
    for (const auto& s : a) hashes.push_back(content_hash(Json(s)));
    write("determinism_q" + std::to_string(in.p) + "_" + std::to_string(in.n) + ".json", hashes);
    std::cout << "  p=" << in.p << " n=" << in.n << " stages identical " << same << "/" << a.size()
              << "\n";
  }
  record(9, "every stage bit-identical across two runs", ok);
}

// An escaped error fails every criterion the block had not reported yet.
void guarded(std::vector<int> numbers, const std::string& name, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    std::cout << "  unexpected error: " << e.what() << "\n";
    for (int n : numbers) {
      bool done = false;
      for (const auto& o : outcomes) done = done || o.number == n;
      if (!done) record(n, name, false);
    }
  }
}

}  // namespace

int main() {
  guarded({1, 4}, "end-to-end", end_to_end);
  guarded({2, 3}, "cosets and certificates", cosets_and_certificates);
  guarded({5}, "trap theorem", trap_theorem);
  guarded({6}, "tiny-scale structure", tiny_structure);
  guarded({7}, "cubic smoothness", cubic_smoothness);
  guarded({8}, "linear trap", linear_trap);
  guarded({9}, "determinism", determinism);
  std::size_t failed = 0;
  for (const auto& o : outcomes) failed += !o.pass;
  std::cout << outcomes.size() - failed << "/" << outcomes.size() << " criteria passed\n";
  return failed ? 1 : 0;
}
