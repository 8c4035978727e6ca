#include "bgjt/serialize.hpp"

#include <cctype>
#include <cstdio>

#include "bgjt/error.hpp"

namespace bgjt {

Json elt_json(const FieldTower& F, Fq2Elt a) { return Json::array({F.coord_u(a), F.coord_v(a)}); }

Fq2Elt elt_from_json(const FieldTower& F, const Json& j) {
  const unsigned u = j.at(0).get<unsigned>(), v = j.at(1).get<unsigned>();
  if (u >= F.q() || v >= F.q()) throw Error(ErrorKind::InvalidArgument, "coordinate out of range");
  return F.make(u, v);
}

Json poly_json(const FieldTower& F, const Poly& a) {
  Json out = Json::array();
  for (const auto& c : a.coeffs()) out.push_back(elt_json(F, c));
  return out;
}

Poly poly_from_json(const FieldTower& F, const Json& j) {
  std::vector<Fq2Elt> c;
  for (const auto& e : j) c.push_back(elt_from_json(F, e));
  return Poly(std::move(c));
}

namespace {

[[noreturn]] void bad_poly(std::string_view text, const std::string& why) {
  throw Error(ErrorKind::InvalidArgument, "cannot parse polynomial '" + std::string(text) + "': " + why);
}

struct Parser {
  const FieldTower& F;
  std::string s;  // whitespace stripped
  std::string_view original;
  std::size_t pos = 0;

  bool peek(char c) const { return pos < s.size() && s[pos] == c; }
  bool eat(char c) {
    if (!peek(c)) return false;
    ++pos;
    return true;
  }
  unsigned number() {
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) bad_poly(original, "number expected");
    unsigned long v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + static_cast<unsigned>(s[pos++] - '0');
      if (v > 1'000'000) bad_poly(original, "number too large");
    }
    return static_cast<unsigned>(v);
  }
  Fq2Elt fq(unsigned v) {
    if (v >= F.q()) bad_poly(original, std::to_string(v) + " is not an F_q index below " + std::to_string(F.q()));
    return F.make(v, 0);
  }
  // INT | INT*g | g | INT g
  Fq2Elt atom() {
    if (eat('g')) return F.gamma();
    const Fq2Elt u = fq(number());
    if (peek('*') && pos + 1 < s.size() && s[pos + 1] == 'g') {
      pos += 2;
      return F.mul(u, F.gamma());
    }
    if (eat('g')) return F.mul(u, F.gamma());
    return u;
  }
  // atom (('+'|'-') atom)*
  Fq2Elt inner() {
    Fq2Elt acc = FieldTower::zero();
    bool neg = eat('-');
    for (;;) {
      const Fq2Elt a = atom();
      acc = F.add(acc, neg ? F.neg(a) : a);
      if (eat('+')) {
        neg = false;
      } else if (eat('-')) {
        neg = true;
      } else {
        return acc;
      }
    }
  }
  Poly term() {
    Fq2Elt coef = FieldTower::one();
    bool have_coef = false;
    if (eat('(')) {
      coef = inner();
      if (!eat(')')) bad_poly(original, "')' expected");
      have_coef = true;
    } else if (!peek('x')) {
      coef = atom();
      have_coef = true;
    }
    if (have_coef) eat('*');
    unsigned degree = 0;
    if (eat('x')) {
      degree = 1;
      if (eat('^')) degree = number();
    } else if (!have_coef) {
      bad_poly(original, "term expected");
    }
    std::vector<Fq2Elt> c(degree + 1, FieldTower::zero());
    c[degree] = coef;
    return Poly(std::move(c));
  }
  Poly parse() {
    PolyRing R(F);
    Poly acc;
    bool neg = eat('-');
    for (;;) {
      const Poly t = term();
      acc = neg ? R.sub(acc, t) : R.add(acc, t);
      if (pos == s.size()) return acc;
      if (eat('+')) {
        neg = false;
      } else if (eat('-')) {
        neg = true;
      } else {
        bad_poly(original, std::string("unexpected '") + s[pos] + "'");
      }
    }
  }
};

}  // namespace

Poly parse_poly(const FieldTower& F, std::string_view text) {
  Parser p{F, {}, text};
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) p.s.push_back(c);
  }
  if (p.s.empty()) bad_poly(text, "empty");
  return p.parse();
}

std::string content_hash(const Json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json tower_json(const FieldTower& F) {
  Json fq = Json::array();
  for (auto c : F.fq_modulus()) fq.push_back(c);
  return Json{{"p", F.p()},
              {"n", F.n()},
              {"k", F.k()},
              {"q", F.q()},
              {"fq_modulus", fq},
              {"qm2_modulus", F.qm2_modulus()},
              {"lambda", elt_json(F, F.lambda())}};
}

namespace {

Json constraints_json(const SetupConstraints& c) {
  return Json{{"no_linear_cofactor", c.require_no_linear_cofactor},
              {"gcd_one", c.require_gcd_one},
              {"nonkummer", c.require_nonkummer}};
}

}  // namespace

Json setup_json(const FieldTower& F, const SetupInstance& s) {
  Json cof = Json::array();
  for (const auto& c : s.cofactors) {
    cof.push_back(Json{{"poly", poly_json(F, c.poly)}, {"mult", c.mult}, {"deg", c.degree}});
  }
  Json j{{"tower", tower_json(F)},
         {"seed", F.seed()},
         {"h0", poly_json(F, s.h0)},
         {"h1", poly_json(F, s.h1)},
         {"f", poly_json(F, s.f)},
         {"unit", elt_json(F, s.unit)},
         {"cofactors", cof},
         {"constraints", constraints_json(s.constraints)},
         {"tried", s.tried}};
  j["setup_hash"] = content_hash(j);
  return j;
}

SetupInstance setup_from_json(const FieldTower& F, const Json& j) {
  Json body = j;
  body.erase("setup_hash");
  if (content_hash(body) != j.at("setup_hash").get<std::string>()) {
    throw Error(ErrorKind::StaleCache, "setup.json content does not match its hash");
  }
  if (body.at("tower") != tower_json(F) || body.at("seed").get<std::uint64_t>() != F.seed()) {
    throw Error(ErrorKind::StaleCache, "setup.json was made for a different tower or seed");
  }
  SetupInstance s = make_setup(F, poly_from_json(F, j.at("h0")), poly_from_json(F, j.at("h1")));
  const auto& c = j.at("constraints");
  s.constraints.require_no_linear_cofactor = c.at("no_linear_cofactor").get<bool>();
  s.constraints.require_gcd_one = c.at("gcd_one").get<bool>();
  s.constraints.require_nonkummer = c.at("nonkummer").get<bool>();
  s.tried = j.at("tried").get<std::uint64_t>();
  if (setup_json(F, s) != j) throw Error(ErrorKind::StaleCache, "setup.json does not rebuild");
  return s;
}

Json cosets_json(const FieldTower& F, const CosetSet& cosets) {
  Json reps = Json::array();
  for (const auto& r : cosets.reps) {
    reps.push_back(Json{{"a", elt_json(F, r.a)},
                        {"b", elt_json(F, r.b)},
                        {"c", elt_json(F, r.c)},
                        {"d", elt_json(F, r.d)},
                        {"support", r.support}});
  }
  Json j{{"q", cosets.q}, {"count", cosets.reps.size()}, {"cosets", reps}};
  j["cosets_hash"] = content_hash(j);
  return j;
}

CosetSet cosets_from_json(const FieldTower& F, const Json& j) {
  Json body = j;
  body.erase("cosets_hash");
  if (content_hash(body) != j.at("cosets_hash").get<std::string>()) {
    throw Error(ErrorKind::StaleCache, "cosets.json content does not match its hash");
  }
  if (j.at("q").get<unsigned>() != F.q()) {
    throw Error(ErrorKind::StaleCache, "cosets.json was made for a different q");
  }
  CosetSet out;
  out.q = F.q();
  for (const auto& r : j.at("cosets")) {
    CosetRep rep{elt_from_json(F, r.at("a")), elt_from_json(F, r.at("b")),
                 elt_from_json(F, r.at("c")), elt_from_json(F, r.at("d")),
                 r.at("support").get<std::vector<PointId>>()};
    if (coset_support(F, rep.a, rep.b, rep.c, rep.d) != rep.support) {
      throw Error(ErrorKind::StaleCache, "cosets.json support does not match its matrix");
    }
    out.by_support.emplace(rep.support, out.reps.size());
    out.reps.push_back(std::move(rep));
  }
  return out;
}

namespace {

Json sparse(const std::vector<int>& v) {
  Json out = Json::array();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) out.push_back(Json::array({i, v[i]}));
  }
  return out;
}

std::vector<int> dense(const Json& j, std::size_t n) {
  std::vector<int> out(n, 0);
  for (const auto& p : j) {
    const auto i = p.at(0).get<std::size_t>();
    if (i >= n) throw Error(ErrorKind::InvalidArgument, "sparse index out of range");
    out[i] = p.at(1).get<int>();
  }
  return out;
}

}  // namespace

Json relations_json(const FieldTower& F, const RelationSet& rs, const std::string& setup_hash) {
  Json rows = Json::array();
  for (const auto& r : rs.rows) {
    rows.push_back(Json{{"source", r.source == RowSource::Coset ? "coset" : "frobenius"},
                        {(r.source == RowSource::Coset ? "coset" : "slot"), r.index},
                        {"e0", r.e0},
                        {"e", sparse(r.e)},
                        {"lhs", sparse(r.lhs)},
                        {"rhs", sparse(r.rhs)}});
  }
  Json j{{"setup_hash", setup_hash},
         {"q", F.q()},
         {"width", rs.width},
         {"group_order", rs.group_order},
         {"coset_rows", rs.coset_rows},
         {"frobenius_rows", rs.frobenius_rows},
         {"augmented", rs.augmented},
         {"augmentation_rows", rs.augmentation_rows()},
         {"rows", rows}};
  j["relations_hash"] = content_hash(j);
  return j;
}

RelationSet relations_from_json(const FieldTower& F, const Json& j) {
  Json body = j;
  body.erase("relations_hash");
  if (content_hash(body) != j.at("relations_hash").get<std::string>()) {
    throw Error(ErrorKind::StaleCache, "relations.json content does not match its hash");
  }
  RelationSet rs;
  rs.width = j.at("width").get<std::size_t>();
  rs.group_order = j.at("group_order").get<std::uint64_t>();
  rs.coset_rows = j.at("coset_rows").get<std::size_t>();
  rs.frobenius_rows = j.at("frobenius_rows").get<std::size_t>();
  rs.augmented = j.at("augmented").get<bool>();
  const std::size_t Q = F.field_size();
  for (const auto& r : j.at("rows")) {
    RelationRow row;
    const bool coset = r.at("source").get<std::string>() == "coset";
    row.source = coset ? RowSource::Coset : RowSource::Frobenius;
    row.index = r.at(coset ? "coset" : "slot").get<std::size_t>();
    row.e0 = r.at("e0").get<long long>();
    row.e = dense(r.at("e"), Q);
    row.lhs = dense(r.at("lhs"), Q);
    row.rhs = dense(r.at("rhs"), Q);
    rs.rows.push_back(std::move(row));
  }
  return rs;
}

Json dlogs_json(const FieldTower& F, const DlogTable& t, bool verified) {
  Json entries = Json::array();
  for (unsigned i = 0; i < t.logs.size(); ++i) {
    entries.push_back(Json{{"alpha", elt_json(F, F.element(i))}, {"log", t.logs[i]}});
  }
  Json corr = Json::array();
  for (const auto& c : t.corrections) {
    corr.push_back(Json{{"round", c.round},
                        {"invariant", c.invariant.get_str()},
                        {"multiplier", c.multiplier.get_str()},
                        {"value", elt_json(F, c.value)},
                        {"row", int_vec_json(c.row)}});
  }
  Json j{{"setup_hash", t.setup_hash},
         {"base_alpha", elt_json(F, F.element(t.base_slot))},
         {"base_slot", t.base_slot},
         {"group_order", t.group_order},
         {"log_lambda", t.log_lambda},
         {"entries", entries},
         {"corrections", corr},
         {"rounds", t.rounds},
         {"verified", verified}};
  j["dlogs_hash"] = content_hash(j);
  return j;
}

DlogTable dlogs_from_json(const FieldTower& F, const Json& j) {
  Json body = j;
  body.erase("dlogs_hash");
  if (content_hash(body) != j.at("dlogs_hash").get<std::string>()) {
    throw Error(ErrorKind::StaleCache, "dlogs.json content does not match its hash");
  }
  DlogTable t;
  t.setup_hash = j.at("setup_hash").get<std::string>();
  t.base_slot = j.at("base_slot").get<unsigned>();
  t.group_order = j.at("group_order").get<std::uint64_t>();
  t.log_lambda = j.at("log_lambda").get<std::uint64_t>();
  t.rounds = j.at("rounds").get<std::size_t>();
  t.logs.assign(F.field_size(), 0);
  for (const auto& e : j.at("entries")) {
    t.logs.at(elt_from_json(F, e.at("alpha")).index) = e.at("log").get<std::uint64_t>();
  }
  for (const auto& c : j.at("corrections")) {
    CorrectionRow row;
    row.round = c.at("round").get<std::size_t>();
    row.invariant = Int(c.at("invariant").get<std::string>());
    row.multiplier = Int(c.at("multiplier").get<std::string>());
    row.value = elt_from_json(F, c.at("value"));
    for (const auto& x : c.at("row")) row.row.emplace_back(x.get<std::string>());
    t.corrections.push_back(std::move(row));
  }
  return t;
}

Json int_vec_json(const IntVec& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

Json smith_json(const SmithShapeReport& r) {
  return Json{{"diagonal_nonunit", [&] {
                 IntVec nu;
                 for (const auto& d : r.diagonal) {
                   if (d != 1) nu.push_back(d);
                 }
                 return int_vec_json(nu);
               }()},
              {"size", r.diagonal.size()},
              {"unit_count", r.unit_count},
              {"s_values", int_vec_json(r.s_values)},
              {"final", r.final_invariant.get_str()},
              {"t", r.s_values.size()},
              {"conforms", r.conforms}};
}

Json theorem4_json(const Theorem4Certificate& c) {
  return Json{{"v1", c.v1},
              {"v2", c.v2},
              {"v3", c.v3},
              {"v4", c.v4},
              {"v5", c.v5},
              {"v6", c.v6},
              {"v7", c.v7},
              {"first_last_rows", c.first_last_rows},
              {"constructive_ok", c.constructive_ok},
              {"hnf_ok", c.hnf_ok},
              {"constructive_coefficients", c.constructive_coefficients},
              {"hnf_coefficients", int_vec_json(c.hnf_coefficients)}};
}

Json psi2_json(const Psi2Report& r) {
  return Json{{"ring_size", r.ring_size},         {"unit_count", r.unit_count},
              {"unit_formula", r.unit_formula},   {"image_size", r.image_size},
              {"contains_fq2", r.contains_fq2},   {"surjective", r.surjective}};
}

Json quotient_json(const QuotientReport& r) {
  return Json{{"image_size", r.image_size},
              {"schreier_relations", r.schreier_relations},
              {"observed", int_vec_json(r.observed)},
              {"expected", int_vec_json(r.expected)},
              {"cofactor_degrees", r.cofactor_degrees},
              {"gcd_condition", r.gcd_condition},
              {"matches", r.matches}};
}

Json linear_trap_json(const FieldTower& F, const LinearTrapReport& r) {
  Json slots = Json::array();
  for (unsigned z : r.trap_slots) slots.push_back(elt_json(F, F.element(z)));
  Json j{{"setup", setup_json(F, r.setup)},
         {"trap_alphas", slots},
         {"cosets", r.cosets},
         {"relations", r.relations},
         {"nonzero_net", r.nonzero_net},
         {"rhs_exceeds", r.rhs_exceeds},
         {"lhs_exceeds", r.lhs_exceeds},
         {"trap_column_zero", r.trap_column_zero}};
  if (r.kummer) {
    j["kummer"] = Json{{"h0", poly_json(F, r.kummer->h0)},
                       {"f", poly_json(F, r.kummer->f)},
                       {"x_order", r.kummer_x_order},
                       {"order_divides_small", r.kummer_order_small}};
  }
  return j;
}

Json trap_sweep_json(const FieldTower& F, const TrapSweep& s) {
  return Json{{"W", PolyRing(F).to_string(s.W)},
              {"irreducible", s.irreducible},
              {"smooth", s.smooth},
              {"smooth_e1", s.smooth_e1},
              {"coprime", s.coprime},
              {"coprime_e1", s.coprime_e1}};
}

Json setup_report_json(const FieldTower& F, const SetupReport& r) {
  PolyRing R(F);
  Json traps = Json::array(), divisors = Json::array(), cof = Json::array();
  for (const auto& p : r.linear_traps) traps.push_back(R.to_string(p));
  for (const auto& p : r.trap_divisors) divisors.push_back(R.to_string(p));
  for (const auto& c : r.cofactors) {
    cof.push_back(Json{{"deg", c.degree}, {"mult", c.mult}, {"gcd_with_k", c.gcd_with_k}});
  }
  return Json{{"linear_traps", traps},
              {"cofactors", cof},
              {"kummer", r.kummer},
              {"trap_divisors", divisors},
              {"trap_density", r.trap_divisors.size()}};
}

Json descent_step_json(const FieldTower& F, const DescentStep& s) {
  PolyRing R(F);
  Json acc = Json::array();
  for (const auto& a : s.accepted) {
    Json rhs = Json::array();
    for (const auto& [g, m] : a.rhs.factors) rhs.push_back(Json::array({R.to_string(g), m}));
    acc.push_back(Json{{"coset", a.coset}, {"v", sparse(a.lhs.v)}, {"rhs", rhs}});
  }
  Json j{{"W", R.to_string(s.W)},
         {"bound", s.bound},
         {"smooth", s.smooth},
         {"trap_rejected", s.trap_rejected},
         {"accepted_count", s.accepted.size()},
         {"accepted", acc},
         {"reached", s.expression.has_value()}};
  if (s.expression) {
    Json f = Json::array();
    for (const auto& [g, x] : s.expression->factors) f.push_back(Json::array({R.to_string(g), x}));
    j["expression"] = Json{{"lambda_exp", s.expression->lambda_exp},
                           {"h1_exp", s.expression->h1_exp},
                           {"factors", f}};
  }
  return j;
}

Json trace_json(const FieldTower& F, const DlogResult& r) {
  PolyRing R(F);
  std::function<Json(std::size_t)> node = [&](std::size_t i) {
    const TraceNode& t = r.trace[i];
    Json children = Json::array();
    for (std::size_t c : t.children) children.push_back(node(c));
    Json j{{"W", R.to_string(t.W)},
           {"status", to_string(t.status)},
           {"method", t.method},
           {"accepted_count", t.accepted},
           {"log", t.log},
           {"children", children}};
    if (t.exponent) j["exponent"] = t.exponent;
    return j;
  };
  Json stuck = Json::array();
  for (const auto& p : r.stuck) stuck.push_back(R.to_string(p));
  return Json{{"log", r.log},
              {"verified", r.verified},
              {"qpa_nodes", r.qpa_nodes},
              {"stuck_nodes", r.stuck_nodes},
              {"rescued_nodes", r.rescued_nodes},
              {"trap_nodes", r.trap_nodes},
              {"stuck", stuck},
              {"tree", node(0)}};
}

}  // namespace bgjt
