#include <algorithm>
#include <cmath>

#include "ordapprox/approx.hpp"

namespace ordapprox {

PsiSpec PsiSpec::exp_decay(const BigRat& c) {
  require(sgn(c) > 0, ErrorKind::PreconditionFailed, "exp decay rate must be positive");
  PsiSpec p;
  p.family = Family::ExpDecay;
  p.c = c;
  return p;
}

PsiSpec PsiSpec::power(unsigned long k) {
  require(k >= 1, ErrorKind::PreconditionFailed, "power must be >= 1");
  PsiSpec p;
  p.family = Family::Power;
  p.k = k;
  return p;
}

PsiSpec PsiSpec::from_table(std::vector<std::pair<BigInt, BigRat>> rows) {
  require(!rows.empty(), ErrorKind::PreconditionFailed, "empty Psi table");
  std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(sgn(rows[i].second) > 0, ErrorKind::PreconditionFailed, "Psi must be positive");
    if (i > 0) {
      require(rows[i].first > rows[i - 1].first, ErrorKind::PreconditionFailed, "duplicate s in Psi table");
      require(rows[i].second <= rows[i - 1].second, ErrorKind::PreconditionFailed, "Psi table must be non-increasing");
    }
  }
  PsiSpec p;
  p.family = Family::Table;
  p.table = std::move(rows);
  return p;
}

std::string PsiSpec::describe() const {
  switch (family) {
    case Family::ExpDecay: return "exp:" + to_string(c);
    case Family::Power: return "power:" + std::to_string(k);
    case Family::Table: return "table:" + std::to_string(table.size());
  }
  return "";
}

// ---------------------------------------------------------------------------

namespace {

unsigned bit_length(const BigInt& x) { return static_cast<unsigned>(mpz_sizeinbase(x.get_mpz_t(), 2)); }

// sum_{k>=0} x^k/k! for x in [0, 1], outward rounded.
RatInterval exp_taylor(const BigRat& x, unsigned bits) {
  const BigRat eps = pow2(-static_cast<long>(bits) - 8);
  RatInterval sum(BigRat(1));
  RatInterval term(BigRat(1));
  for (unsigned long k = 1;; ++k) {
    term = (term * x * make_rat(1, k)).rounded_outward(bits + 16);
    sum = (sum + term).rounded_outward(bits + 16);
    if (term.hi() < eps) {
      // Remaining terms are bounded by 2 * term * x / (k + 1) <= 2 * term.
      return RatInterval(sum.lo(), sum.hi() + 2 * term.hi());
    }
  }
}

double decimal_digits_of_exp(const BigRat& y) {
  // log10(e^y) = y / ln 10
  return to_double(y) / std::log(10.0);
}

void check_exp_budget(const BigRat& y, std::size_t digit_budget) {
  const BigInt m = floor_of(y);
  if (bit_length(m) > 48 || decimal_digits_of_exp(y) > static_cast<double>(digit_budget)) {
    fail(ErrorKind::BlowUp, "e^" + (bit_length(m) > 64 ? std::string("(") + std::to_string(mpz_sizeinbase(m.get_mpz_t(), 10)) + "-digit exponent)"
                                                        : to_string(y)) +
                                " exceeds the digit budget of " + std::to_string(digit_budget));
  }
}

}  // namespace

RatInterval exp_enclosure(const BigRat& y, unsigned bits) {
  require(sgn(y) >= 0, ErrorKind::PreconditionFailed, "exp_enclosure needs y >= 0");
  const BigInt m = floor_of(y);
  require(mpz_fits_ulong_p(m.get_mpz_t()) != 0, ErrorKind::BlowUp, "exponent too large");
  unsigned long e = m.get_ui();
  const unsigned work = bits + 2 * bit_length(m) + 32;
  RatInterval base = exp_taylor(BigRat(1), work);
  RatInterval result = exp_taylor(y - m, work);
  while (e > 0) {
    if (e & 1UL) result = (result * base).rounded_outward(work);
    e >>= 1;
    if (e > 0) base = (base * base).rounded_outward(work);
  }
  return result.rounded_outward(bits + 8);
}

PsiBounds psi_bounds(const PsiSpec& psi, const BigInt& s, std::size_t digit_budget) {
  require(sgn(s) > 0, ErrorKind::PreconditionFailed, "Psi is evaluated on positive integers");
  switch (psi.family) {
    case PsiSpec::Family::Power: {
      const std::size_t digits = mpz_sizeinbase(s.get_mpz_t(), 10);
      if (digits * psi.k > digit_budget) {
        fail(ErrorKind::BlowUp, "s^" + std::to_string(psi.k) + " exceeds the digit budget");
      }
      BigInt p;
      mpz_pow_ui(p.get_mpz_t(), s.get_mpz_t(), psi.k);
      const BigRat v = make_rat(1, p);
      return {v, v};
    }
    case PsiSpec::Family::ExpDecay: {
      const BigRat y = psi.c * s;
      check_exp_budget(y, digit_budget);
      const RatInterval e = exp_enclosure(y, 128);
      return {1 / e.hi(), 1 / e.lo()};
    }
    case PsiSpec::Family::Table: {
      const auto& t = psi.table;
      const auto ge = std::lower_bound(t.begin(), t.end(), s, [](const auto& row, const BigInt& v) { return row.first < v; });
      const auto gt = std::upper_bound(t.begin(), t.end(), s, [](const BigInt& v, const auto& row) { return v < row.first; });
      if (ge == t.end() || gt == t.begin()) {
        fail(ErrorKind::OutOfRegime, "Psi table does not bracket s = " + to_string(s));
      }
      return {ge->second, std::prev(gt)->second};
    }
  }
  fail(ErrorKind::PreconditionFailed, "unknown Psi family");
}

namespace {

// Upper bound on Psi(x) that never blows up.
BigRat psi_upper_any(const PsiSpec& psi, const BigInt& x, std::size_t digit_budget) {
  try {
    return psi_bounds(psi, x, digit_budget).upper;
  } catch (const DomainError& e) {
    if (e.kind() != ErrorKind::BlowUp) throw;
  }
  if (psi.family == PsiSpec::Family::Power) {
    // s^-k <= s^-1 and the budget only limits the exact power.
    return make_rat(1, x);
  }
  // e^y > y^2 for y > 0.
  const BigRat y = psi.c * x;
  return 1 / (y * y);
}

// Decides q >= 3/Psi(x) exactly (refining e^{cx} as needed).
class Threshold {
 public:
  Threshold(const PsiSpec& psi, const BigInt& x, std::size_t digit_budget) : psi_(psi), x_(x) {
    switch (psi.family) {
      case PsiSpec::Family::Power: {
        const std::size_t digits = mpz_sizeinbase(x.get_mpz_t(), 10) * psi.k;
        if (digits > digit_budget) fail(ErrorKind::BlowUp, "3*x^k exceeds the digit budget");
        BigInt p;
        mpz_pow_ui(p.get_mpz_t(), x.get_mpz_t(), psi.k);
        lo_ = hi_ = 3 * p;
        break;
      }
      case PsiSpec::Family::ExpDecay:
        y_ = psi.c * x;
        check_exp_budget(y_, digit_budget);
        refine(128);
        break;
      case PsiSpec::Family::Table:
        lo_ = hi_ = ceil_of(3 / psi_bounds(psi, x, digit_budget).lower);
        break;
    }
  }

  bool reached(const BigInt& q) {
    for (;;) {
      if (q >= hi_) return true;
      if (q < lo_) return false;
      require(bits_ < (1U << 16), ErrorKind::PrecisionExhausted, "cannot separate q_n from 3/Psi");
      refine(bits_ * 2);
    }
  }

  const BigInt& lower() const { return lo_; }

 private:
  void refine(unsigned bits) {
    bits_ = bits;
    const RatInterval e = exp_enclosure(y_, bits);
    lo_ = ceil_of(3 * e.lo());
    hi_ = ceil_of(3 * e.hi());
  }

  const PsiSpec& psi_;
  BigInt x_;
  BigRat y_;
  unsigned bits_ = 0;
  BigInt lo_;
  BigInt hi_;
};

}  // namespace

bool PsiConstruction::certified() const {
  if (blow_up || certificate.empty()) return false;
  return std::all_of(certificate.begin(), certificate.end(), [](const PsiCertificate& c) { return c.ok; });
}

PsiConstruction construct_psi(const RealTarget& alpha, const PsiSpec& psi, std::size_t K,
                              std::size_t digit_budget) {
  require(K >= 1, ErrorKind::PreconditionFailed, "K must be >= 1");
  require(is_irrational(alpha), ErrorKind::RationalTarget, "the construction needs an irrational alpha");
  const CFExpansion cf = std::holds_alternative<Certified>(alpha) ? cf_expand_available(alpha, 1000000)
                                                                  : cf_expand(alpha, 1);
  require(cf.a[0] == 0, ErrorKind::PreconditionFailed, "alpha must lie in (0, 1)");

  ConvergentStream st(cf);
  auto step = [&] {
    if (!st.can_advance()) {
      fail(ErrorKind::InsufficientDepth, "alpha's digits run out at n = " + std::to_string(st.current().n));
    }
    st.advance();
  };
  while (st.current().n < 4) step();

  PsiConstruction out;
  std::vector<Affine> d;
  std::vector<BigInt> q_next;  // q_{n_k + 1}
  BigInt s = 0;
  for (std::size_t k = 1;; ++k) {
    const Convergent& c = st.current();
    out.n.push_back(c.n);
    out.q.push_back(c.q);
    s += c.q;
    out.s.push_back(s);
    d.push_back(d_affine(c));
    out.gamma_partial += d.back();

    step();
    q_next.push_back(st.current().q);
    if (k == K) break;

    const std::size_t n_min = out.n.back() + 2;
    std::optional<Threshold> th;
    try {
      th.emplace(psi, q_next.back(), digit_budget);
    } catch (const DomainError& e) {
      if (e.kind() != ErrorKind::BlowUp) throw;
      out.blow_up = true;
      out.blow_up_reason = "n_" + std::to_string(k + 1) + ": " + e.message();
      break;
    }
    const std::size_t lower_digits = mpz_sizeinbase(th->lower().get_mpz_t(), 10);
    while (st.current().n < n_min ||
           mpz_sizeinbase(st.current().q.get_mpz_t(), 10) + 1 < lower_digits ||
           !th->reached(st.current().q)) {
      step();
    }
  }

  out.tail = psi_upper_any(psi, q_next.back(), digit_budget);

  const std::size_t K_done = out.n.size();
  for (std::size_t k = 0; k < K_done; ++k) {
    PsiCertificate cert;
    cert.k = k + 1;
    Affine rest;
    for (std::size_t m = k + 1; m < K_done; ++m) rest += d[m];
    const BigRat rest_mag = (sgn(rest.c0) == 0 && sgn(rest.c1) == 0)
                                ? BigRat(0)
                                : enclose_relative(rest, alpha, 64).magnitude();
    // For a blown-up run the tail beyond the last emitted index is not the
    // construction's tail; bound it crudely by 2/q_{n_K + 1}.
    const BigRat tail = out.blow_up ? make_rat(2, q_next.back()) : out.tail;
    cert.dist_upper = rest_mag + tail;
    try {
      cert.psi_lower = psi_bounds(psi, out.s[k], digit_budget).lower;
      cert.method = "direct";
      cert.ok = cert.dist_upper <= *cert.psi_lower;
    } catch (const DomainError& e) {
      if (e.kind() != ErrorKind::BlowUp && e.kind() != ErrorKind::OutOfRegime) throw;
    }
    if (!cert.ok) {
      // ||s_k alpha - gamma|| <= 3/q_{n_{k+1}} <= Psi(q_{n_k+1}) <= Psi(s_k).
      cert.method = "chain";
      const bool below = out.s[k] <= q_next[k];
      if (k + 1 < K_done) {
        cert.ok = below && cert.dist_upper <= make_rat(3, out.q[k + 1]);
      } else {
        cert.ok = below && !out.blow_up;
      }
    }
    out.certificate.push_back(std::move(cert));
  }
  return out;
}

}  // namespace ordapprox
