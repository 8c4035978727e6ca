#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bgjt/factor.hpp"
#include "bgjt/linlog.hpp"

namespace bgjt {

enum class TrapStatus {
  Clean,
  TrapDivisor,   // W | ring_poly
  SharesFactor,  // 1 < gcd(W, ring_poly) != W
  IsModulus,     // W == f
};

std::string to_string(TrapStatus s);

// W monic with 1 <= deg W < k, or W == f. Throws DegreeOutOfRange.
TrapStatus trap_check(const FieldTower& F, const Poly& W, const SetupInstance& setup);

struct Randomized {
  Poly V;
  std::uint64_t exponent = 0;  // V = W^exponent mod f, exponent coprime to q^{2k} - 1
};

// Least exponent i >= 2 coprime to the group order with W^i mod f coprime to
// ring_poly. Throws InvalidArgument for clean input, RandomizationExhausted
// once i passes the bound.
Randomized randomize_trap(const FieldTower& F, const Poly& W, const SetupInstance& setup,
                          std::uint64_t bound = 100000);

// Exponents of W + alpha_i (slot i) in h1^w (cW+d) prod_{t in F_q} ((a - tc)W + (b - td)),
// with the leading unit of that product. Depends only on the coset.
struct DescentVector {
  std::vector<int> v;
  Fq2Elt unit{};
};
DescentVector descent_vector(const FieldTower& F, const CosetRep& rep);

// N_{m,W}: the right-hand side after clearing h1^w.
Poly descent_numerator(const FieldTower& F, const CosetRep& rep, const Poly& W,
                       const SetupInstance& setup);

struct DescentRelation {
  std::size_t coset = 0;
  DescentVector lhs;
  Factorization rhs;
};

// W = lambda^lambda_exp * h1^h1_exp * prod g^e mod f, exponents mod q^{2k} - 1.
struct DescentExpression {
  std::uint64_t lambda_exp = 0;
  std::uint64_t h1_exp = 0;
  std::vector<std::pair<Poly, std::uint64_t>> factors;
};

struct DescentStep {
  Poly W;
  unsigned bound = 0;  // ceil(w / 2)
  std::size_t smooth = 0;         // cosets with N_{m,W} bound-smooth
  std::size_t trap_rejected = 0;  // of those, not coprime to ring_poly
  std::vector<DescentRelation> accepted;
  std::optional<DescentExpression> expression;
};

// One QPA step without throwing: the expression is empty when (1, 0, ..., 0)
// is outside L(W) + (q^{2k} - 1) Z^{q^2}. A present expression has been
// checked by evaluation mod f.
DescentStep try_descend_step(const FieldTower& F, const SetupInstance& setup,
                             const CosetSet& cosets, const Poly& W, unsigned jobs = 1);

// As above; requires a clean W of degree >= 2 and throws DescentStuck.
DescentExpression descend_step(const FieldTower& F, const SetupInstance& setup,
                               const CosetSet& cosets, const Poly& W, unsigned jobs = 1);

struct TrapSweep {
  Poly W;
  bool irreducible = false;
  std::size_t smooth = 0;            // cosets with N_{m,W} smooth
  std::size_t smooth_e1 = 0;         // of those, W itself on the left
  std::size_t coprime = 0;           // smooth and coprime to ring_poly
  std::size_t coprime_e1 = 0;
};

// Every coset against a W dividing ring_poly, with no trap filtering.
TrapSweep trap_sweep(const FieldTower& F, const SetupInstance& setup, const CosetSet& cosets,
                     const Poly& W, unsigned jobs = 1);

struct DescentOptions {
  unsigned jobs = 1;
  std::uint64_t randomize_bound = 100000;
  // When QPA is stuck, rewrite W through W^i mod f with every factor of
  // degree < deg W and coprime to ring_poly.
  bool rescue = true;
};

struct TraceNode {
  Poly W;
  std::string method;  // table, qpa, rescue, trap, memo
  TrapStatus status = TrapStatus::Clean;
  std::size_t accepted = 0;
  std::uint64_t exponent = 0;  // for rescue and trap nodes
  std::uint64_t log = 0;
  std::vector<std::size_t> children;
};

struct DlogResult {
  std::uint64_t log = 0;
  bool verified = false;
  std::vector<TraceNode> trace;  // trace[0] is the target
  std::size_t qpa_nodes = 0;
  std::size_t stuck_nodes = 0;
  std::size_t rescued_nodes = 0;
  std::size_t trap_nodes = 0;
  std::vector<Poly> stuck;
};

// Logs of arbitrary elements, memoized per irreducible polynomial across calls.
class Descender {
 public:
  Descender(const FieldTower& F, const SetupInstance& setup, const DlogTable& table,
            const CosetSet& cosets, DescentOptions options = {});

  // Throws InvalidArgument for targets divisible by f, DescentStuck when QPA
  // fails with rescue disabled, VerificationFailed if base^log != target.
  DlogResult full_dlog(const Poly& target);

  const ExtField& ext() const { return ext_; }

 private:
  std::uint64_t log_of_poly(const Poly& P, DlogResult& out, std::size_t node);
  std::uint64_t log_irreducible(const Poly& P, DlogResult& out, std::size_t parent);
  std::uint64_t log_expression(const DescentExpression& e, DlogResult& out, std::size_t node);

  const FieldTower& F_;
  const SetupInstance& setup_;
  const DlogTable& table_;
  const CosetSet& cosets_;
  DescentOptions options_;
  ExtField ext_;
  std::map<Poly, std::uint64_t> memo_;
};

// One-shot convenience over Descender.
DlogResult full_dlog(const FieldTower& F, const SetupInstance& setup, const DlogTable& table,
                     const CosetSet& cosets, const Poly& target, const DescentOptions& options = {});

}  // namespace bgjt
