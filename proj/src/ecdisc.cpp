#include "sqdense/ecdisc.hpp"

#include "sqdense/localcount.hpp"

namespace sqd {

namespace {

void require_coprime_to_6(std::uint32_t q) {
  if (q % 2 == 0 || q % 3 == 0) {
    throw DomainError("the discriminant model needs gcd(q, 6) = 1, got q = " + std::to_string(q));
  }
}

Int double_zero_count(const Int& N) { return 2 * N * N - N; }

Real to_real(const Int& n) { return n.fits_ulong_p() ? Real(n.get_ui()) : Real(n.get_str()); }

EcConstant ec_constant(std::uint32_t q, unsigned cutoff, Rational prefactor) {
  require_coprime_to_6(q);
  prefactor.canonicalize();
  EcConstant out;
  out.prefactor = prefactor;
  EulerProduct& e = out.product;
  e.cutoff = cutoff;
  e.degree_cutoff = true;
  e.norm_exponent = 4;
  e.value = 1;
  auto add_factor = [&](std::string label, const Int& N, const Int& multiplicity) {
    const Int c = double_zero_count(N);
    EulerFactor f{std::move(label), N, c, 1 - to_real(c) / pow(to_real(N), 4), multiplicity};
    e.value *= pow(f.factor, static_cast<int>(multiplicity.get_si()));
    e.factors.push_back(std::move(f));
  };
  if (cutoff >= 1) add_factor("inf", q, 1);
  Int N = 1;
  for (unsigned d = 1; d <= cutoff; ++d) {
    N *= q;
    const Int count = necklace_count(q, d);
    if (!count.fits_slong_p()) throw BudgetError("gamma_q: too many points of degree " + std::to_string(d));
    add_factor("degree " + std::to_string(d), N, count);
  }
  apply_tail_bracket(e, q);
  out.value = e.value * Real(prefactor.get_num().get_str()) / Real(prefactor.get_den().get_str());
  return out;
}

}  // namespace

APoly discriminant_poly(std::uint32_t q) {
  require_coprime_to_6(q);
  const FqtRing ring(q);
  APoly out(ring, {"A", "B"});
  out.add_term({3, 0}, ring.from_int(-64));
  out.add_term({0, 2}, ring.from_int(-432));
  return out;
}

LocalDoubleZero local_double_zero_density(std::uint32_t q, const P1Point& point) {
  require_coprime_to_6(q);
  const Int N = Int(std::to_string(point.norm));
  LocalDoubleZero out;
  out.density = Rational(double_zero_count(N), N * N * N * N);
  out.density.canonicalize();
  if (point.finite && point.finite->degree() <= 2) {
    const auto lc = count_zeros_hensel(discriminant_poly(q), *point.finite);
    if (lc.count != double_zero_count(N)) {
      throw InternalError("double-zero count at " + lc.label + " is " + lc.count.get_str() + ", expected " +
                          double_zero_count(N).get_str());
    }
    out.count = lc.count;
  }
  return out;
}

EcConstant gamma_q(std::uint32_t q, unsigned degree_cutoff) {
  const Int Q = q;
  return ec_constant(q, degree_cutoff, Rational(Q * Q * Q, (Q - 1) * (Q - 1) * (Q + 1)));
}

EcConstant rd_limit(std::uint32_t q, unsigned degree_cutoff) {
  const Int Q = q;
  return ec_constant(q, degree_cutoff, Rational(Q, Q - 1));
}

DensityEstimate empirical_disc_density(std::uint32_t q, unsigned degree_bound, const BoxSpec& sampling) {
  BoxSpec box = sampling;
  box.dims = {degree_bound, degree_bound};
  box.regime = Regime::unrestricted;
  box.signed_box = false;
  return empirical_density(Predicate::squarefree(discriminant_poly(q)), box);
}

}  // namespace sqd
