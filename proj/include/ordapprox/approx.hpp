#pragma once

// Order-N rational approximations r/s = alpha + gamma_1/s + ... + gamma_N/s^N
// + o((|r|+|s|)^-N): coefficient fitting, residual-decay verification, the
// Psi-driven existence construction, rational lines and growth profiles.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ordapprox/ostrowski.hpp"

namespace ordapprox {

struct Pair {
  BigInt r;
  BigInt s;
  friend bool operator==(const Pair&, const Pair&) = default;
};

using Coefficient = std::variant<BigRat, QuadIrr, RatInterval>;

struct ApproxSet {
  RealTarget alpha;
  std::vector<Pair> pairs;  // s strictly increasing
  std::size_t N = 0;
  std::vector<Coefficient> gamma;  // gamma_1..gamma_N
};

/// Exact value when alpha is exact, otherwise an enclosure.
Coefficient to_coefficient(const Affine& v, const RealTarget& alpha);

struct DecayOptions {
  std::size_t window = 5;
  std::optional<BigRat> tolerance;  // default: 10^-3 * scaled residual of the first row
  unsigned precision_bits = 700;    // interval fallback
};

struct ResidualRow {
  Pair pair;
  RatInterval residual;  // r/s - sum gamma_j s^-j - alpha
  RatInterval scaled;    // |residual| * (|r|+|s|)^N
};

struct DecayReport {
  std::vector<ResidualRow> rows;
  std::size_t N = 0;
  std::size_t window = 0;
  BigRat tolerance;
  bool pass = false;
  std::vector<std::string> diagnostics;
};

/// PASS iff over the trailing window the scaled residuals never increase,
/// the last is strictly below the first (or everything is exactly zero) and
/// the last is below the tolerance.
DecayReport decay_report(const RealTarget& alpha, std::span<const Pair> pairs,
                         std::span<const Coefficient> gamma, const DecayOptions& opt = {});

DecayReport verify_order(const ApproxSet& set, const DecayOptions& opt = {});

struct FitResult {
  std::vector<Affine> gamma_affine;  // each gamma_j as x_j + y_j*alpha
  std::vector<Coefficient> gamma;
  DecayReport report;  // evaluated on the pairs not used by the fit
};

/// Solves sum_j gamma_j s^{1-j} = r - s*alpha on the N largest-s pairs.
FitResult fit_coefficients(std::vector<Pair> pairs, const RealTarget& alpha, std::size_t N,
                           const DecayOptions& opt = {});

// ---------------------------------------------------------------------------

struct PsiSpec {
  enum class Family { ExpDecay, Power, Table };
  Family family = Family::Power;
  BigRat c{1};            // ExpDecay: Psi(s) = e^{-c s}
  unsigned long k = 2;    // Power: Psi(s) = s^{-k}
  std::vector<std::pair<BigInt, BigRat>> table;  // Table: (s, Psi(s)), s increasing

  static PsiSpec exp_decay(const BigRat& c);
  static PsiSpec power(unsigned long k);
  static PsiSpec from_table(std::vector<std::pair<BigInt, BigRat>> rows);
  std::string describe() const;
};

/// Thrown as BlowUp when a value would need more than `digit_budget` digits.
struct PsiBounds {
  BigRat lower;
  BigRat upper;
};
PsiBounds psi_bounds(const PsiSpec& psi, const BigInt& s, std::size_t digit_budget);

/// Enclosure of e^y, y >= 0, with about `bits` relative bits.
RatInterval exp_enclosure(const BigRat& y, unsigned bits);

struct PsiCertificate {
  std::size_t k = 0;
  std::string method;  // "direct" or "chain"
  BigRat dist_upper;   // upper bound on ||s_k alpha - gamma||
  std::optional<BigRat> psi_lower;
  bool ok = false;
};

struct PsiConstruction {
  std::vector<std::size_t> n;  // n_1..n_K
  std::vector<BigInt> q;       // q_{n_k}
  std::vector<BigInt> s;       // s_k = q_{n_1} + ... + q_{n_k}
  Affine gamma_partial;        // sum of D_{n_k}
  BigRat tail;                 // |gamma - gamma_partial| <= tail
  std::vector<PsiCertificate> certificate;
  bool blow_up = false;
  std::string blow_up_reason;

  bool certified() const;
};

PsiConstruction construct_psi(const RealTarget& alpha, const PsiSpec& psi, std::size_t K,
                              std::size_t digit_budget = 100000);

/// Pairs (round(alpha*s), s). PrecisionExhausted on rounding ties.
ApproxSet nearest_numerators(const RealTarget& alpha, const std::vector<BigInt>& s_list);

/// The Psi construction's pairs as an order-N set: gamma_1 = j - gamma with j
/// the nearest integer to gamma, gamma_j = 0 beyond.
ApproxSet psi_approx_set(const RealTarget& alpha, const PsiConstruction& c, std::size_t N);

// ---------------------------------------------------------------------------

struct Line {
  BigInt a;
  BigInt b;
  BigInt d;
  std::size_t exceptions = 0;
  friend bool operator==(const Line& x, const Line& y) { return x.a == y.a && x.b == y.b && x.d == y.d; }
};

/// The `count` smallest s >= 1 with b | a*s + d, r = (a*s + d)/b.
ApproxSet line_set(const BigInt& a, const BigInt& b, const BigInt& d, std::size_t count);

/// b*r = a*s + d through the two trailing pairs, accepted when it holds on a
/// trailing run of at least 3 pairs that is a majority and leaves at most
/// `max_exceptions` pairs in front.
std::optional<Line> detect_line(std::span<const Pair> pairs, std::size_t max_exceptions = 2);

enum class Growth { Linear, Polynomial, Exponential, SuperExponential };
std::string growth_name(Growth g);

struct GrowthProfile {
  Growth growth = Growth::Linear;
  std::vector<double> log_ratios;  // ln(s_{k+1}/s_k)
  std::vector<BigInt> differences;
};

GrowthProfile growth_profile(std::span<const BigInt> s);

/// Natural log of a positive big integer (double precision).
double log_of(const BigInt& x);

/// CSV with columns s,r,residual,scaled_residual (interval midpoints).
std::string residual_csv(const DecayReport& report);

}  // namespace ordapprox
