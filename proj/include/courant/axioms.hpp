#pragma once

// Exact verification of the Courant algebroid axioms and of the Leibniz
// rules, over a deterministic monomial family plus seeded random sections.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "courant/courant.hpp"

namespace courant {

/// Seeded source of random polynomial data. Uses only the raw engine output
/// so that sequences are identical across standard libraries.
class SectionSampler {
 public:
  explicit SectionSampler(std::uint64_t seed) : rng_(seed) {}

  Rational coefficient() {
    long num = static_cast<long>(rng_() % 7) - 3;
    if (num == 0) num = 1;
    unsigned long den = 1 + rng_() % 3;
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  /// Each monomial of degree ≤ max_degree appears with probability `density`/4.
  Polynomial polynomial(std::size_t num_vars, unsigned max_degree, unsigned density = 2) {
    Polynomial p(num_vars);
    for (const auto& m : monomials_up_to(num_vars, max_degree))
      if (rng_() % 4 < density) p += Polynomial::monomial(m, coefficient());
    return p;
  }

  Section section(const TrivialBundle& b, unsigned max_degree, unsigned density = 2) {
    PolyMap m(b.base_dim, b.rank);
    for (std::size_t i = 0; i < b.rank; ++i) m[i] = polynomial(b.base_dim, max_degree, density);
    return Section(b, std::move(m));
  }

  std::uint64_t next() { return rng_(); }

 private:
  std::mt19937_64 rng_;
};

/// All sections x^α e_i with |α| ≤ degree_cap.
inline std::vector<PolyMap> monomial_frame_sections(const TrivialBundle& b, unsigned degree_cap) {
  std::vector<PolyMap> out;
  for (const auto& m : monomials_up_to(b.base_dim, degree_cap))
    for (std::size_t i = 0; i < b.rank; ++i) {
      PolyMap s(b.base_dim, b.rank);
      s[i] = Polynomial::monomial(m, 1);
      out.push_back(std::move(s));
    }
  return out;
}

struct Witness {
  std::vector<PolyMap> sections;
  PolyMap defect;
};

struct AxiomResult {
  std::string axiom;  // "i", "ii" or "iii"
  bool passed = true;
  std::size_t checked = 0;
  std::optional<Witness> witness;
};

struct AxiomReport {
  std::vector<AxiomResult> axioms;
  bool all_passed() const {
    for (const auto& a : axioms)
      if (!a.passed) return false;
    return true;
  }
  const AxiomResult& get(const std::string& name) const {
    for (const auto& a : axioms)
      if (a.axiom == name) return a;
    throw InputError("no axiom named " + name);
  }
};

struct AxiomOptions {
  unsigned degree_cap = 3;
  std::size_t random_sections = 100;
  unsigned random_degree = 3;
  std::uint64_t seed = 0;
  std::vector<Section> extra;  // appended to the random family
};

namespace detail {

inline void record_failure(AxiomResult& r, std::vector<PolyMap> sections, PolyMap defect) {
  if (!r.passed) return;
  r.passed = false;
  r.witness = Witness{std::move(sections), std::move(defect)};
}

inline PolyMap scalar_map(const Polynomial& p) { return PolyMap(p.num_vars(), std::vector<Polynomial>{p}); }

/// Axioms (i) and (ii) for one triple, given the three inner brackets.
inline void check_triple(const CourantStructure& s, const PolyMap& f, const PolyMap& g, const PolyMap& h,
                         const PolyMap& fg, const PolyMap& gh, const PolyMap& fh, AxiomResult& jacobi,
                         AxiomResult& metric) {
  ++jacobi.checked;
  if (jacobi.passed) {
    PolyMap defect = bracket_raw(s, f, gh);
    defect -= bracket_raw(s, fg, h);
    defect -= bracket_raw(s, g, fh);
    if (!defect.is_zero()) record_failure(jacobi, {f, g, h}, std::move(defect));
  }
  ++metric.checked;
  if (metric.passed) {
    Polynomial lhs = derivation(anchor_field(s, f), pairing_raw(s, g, h));
    Polynomial defect = lhs - pairing_raw(s, fg, h) - pairing_raw(s, g, fh);
    if (!defect.is_zero()) record_failure(metric, {f, g, h}, scalar_map(defect));
  }
}

inline void check_pair(const CourantStructure& s, const PolyMap& f, const PolyMap& g, const PolyMap& fg,
                       const PolyMap& gf, AxiomResult& symmetric) {
  ++symmetric.checked;
  if (!symmetric.passed) return;
  PolyMap defect = fg + gf;
  defect -= d_rho_raw(s, pairing_raw(s, f, g));
  if (!defect.is_zero()) record_failure(symmetric, {f, g}, std::move(defect));
}

}  // namespace detail

/// Checks, as exact polynomial identities,
///   (i)   ⟦f,⟦g,h⟧⟧ = ⟦⟦f,g⟧,h⟧ + ⟦g,⟦f,h⟧⟧
///   (ii)  ρ(f)⟨g,h⟩ = ⟨⟦f,g⟧,h⟩ + ⟨g,⟦f,h⟧⟩
///   (iii) ⟦f,g⟧ + ⟦g,f⟧ = D_ρ⟨f,g⟩
/// on every pair/triple of monomial frame sections up to the degree cap and on
/// consecutive pairs/triples of the random family. All three are ℝ-multilinear,
/// so a pass certifies them for every section of coefficient degree ≤ cap.
inline AxiomReport check_axioms(const CourantStructure& s, const AxiomOptions& opt = {}) {
  AxiomResult jacobi{"i"}, metric{"ii"}, symmetric{"iii"};
  if (s.rank() > 0) {
    auto basis = monomial_frame_sections(s.bundle(), opt.degree_cap);
    const std::size_t m = basis.size();
    std::vector<PolyMap> table(m * m);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) table[a * m + b] = detail::bracket_raw(s, basis[a], basis[b]);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        detail::check_pair(s, basis[a], basis[b], table[a * m + b], table[b * m + a], symmetric);
    for (std::size_t a = 0; a < m && (jacobi.passed || metric.passed); ++a)
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t c = 0; c < m; ++c)
          detail::check_triple(s, basis[a], basis[b], basis[c], table[a * m + b], table[b * m + c],
                               table[a * m + c], jacobi, metric);

    SectionSampler sampler(opt.seed);
    std::vector<PolyMap> family;
    for (std::size_t r = 0; r < opt.random_sections; ++r)
      family.push_back(sampler.section(s.bundle(), opt.random_degree, 1).coeffs());
    for (const auto& e : opt.extra) {
      require_same_bundle(s.bundle(), e.bundle(), "check_axioms");
      family.push_back(e.coeffs());
    }
    const std::size_t q = family.size();
    for (std::size_t r = 0; r < q; ++r) {
      const PolyMap& f = family[r];
      const PolyMap& g = family[(r + 1) % q];
      const PolyMap& h = family[(r + 2) % q];
      PolyMap fg = detail::bracket_raw(s, f, g), gf = detail::bracket_raw(s, g, f);
      detail::check_pair(s, f, g, fg, gf, symmetric);
      detail::check_triple(s, f, g, h, fg, detail::bracket_raw(s, g, h), detail::bracket_raw(s, f, h), jacobi,
                           metric);
    }
  }
  return AxiomReport{{jacobi, metric, symmetric}};
}

// ---------------------------------------------------------------------------
// Leibniz rules

struct LeibnizResult {
  std::string rule;
  bool passed = true;
  std::size_t checked = 0;
  std::optional<Witness> witness;  // sections f, g, then λ, μ as scalar maps
};

struct LeibnizReport {
  LeibnizResult eq1{"eq1"};                  // ⟦f, λg⟧ = λ⟦f,g⟧ + ρ(f)(λ) g
  LeibnizResult eq2_corrected{"eq2"};        // ... − μρ(g)(λ) f + ⟨f,g⟩ μ D_ρ(λ)
  LeibnizResult eq2_printed{"eq2_printed"};  // ... − μρ(g)(λ) g + ⟨f,g⟩ μ D_ρ(λ)
};

/// Defects (lhs − rhs) of the three rules on one tuple.
struct LeibnizDefects {
  PolyMap eq1, eq2_corrected, eq2_printed;
};

inline LeibnizDefects leibniz_defects(const CourantStructure& s, const Section& fs, const Section& gs,
                                      const Polynomial& lambda, const Polynomial& mu) {
  require_same_bundle(s.bundle(), fs.bundle(), "leibniz");
  require_same_bundle(s.bundle(), gs.bundle(), "leibniz");
  using detail::bracket_raw;
  const PolyMap& f = fs.coeffs();
  const PolyMap& g = gs.coeffs();
  PolyMap fg = bracket_raw(s, f, g);
  Polynomial rho_f_lambda = detail::derivation(detail::anchor_field(s, f), lambda);
  Polynomial rho_f_mu = detail::derivation(detail::anchor_field(s, f), mu);
  Polynomial rho_g_lambda = detail::derivation(detail::anchor_field(s, g), lambda);

  LeibnizDefects d;
  d.eq1 = bracket_raw(s, f, lambda * g) - (lambda * fg + rho_f_lambda * g);

  PolyMap lhs2 = bracket_raw(s, lambda * f, mu * g);
  PolyMap common = (lambda * mu) * fg + (lambda * rho_f_mu) * g +
                   (detail::pairing_raw(s, f, g) * mu) * detail::d_rho_raw(s, lambda);
  d.eq2_corrected = lhs2 - (common - (mu * rho_g_lambda) * f);
  d.eq2_printed = lhs2 - (common - (mu * rho_g_lambda) * g);
  return d;
}

struct LeibnizOptions {
  std::size_t samples = 100;
  unsigned degree = 2;
  std::uint64_t seed = 0;
};

inline LeibnizReport check_leibniz(const CourantStructure& s, const LeibnizOptions& opt = {}) {
  LeibnizReport rep;
  SectionSampler sampler(opt.seed);
  auto record = [](LeibnizResult& r, const PolyMap& defect, const Section& f, const Section& g,
                   const Polynomial& lambda, const Polynomial& mu) {
    ++r.checked;
    if (r.passed && !defect.is_zero()) {
      r.passed = false;
      r.witness = Witness{{f.coeffs(), g.coeffs(), detail::scalar_map(lambda), detail::scalar_map(mu)}, defect};
    }
  };
  for (std::size_t k = 0; k < opt.samples; ++k) {
    Section f = sampler.section(s.bundle(), opt.degree);
    Section g = sampler.section(s.bundle(), opt.degree);
    Polynomial lambda = sampler.polynomial(s.base_dim(), opt.degree);
    Polynomial mu = sampler.polynomial(s.base_dim(), opt.degree);
    auto d = leibniz_defects(s, f, g, lambda, mu);
    record(rep.eq1, d.eq1, f, g, lambda, mu);
    record(rep.eq2_corrected, d.eq2_corrected, f, g, lambda, mu);
    record(rep.eq2_printed, d.eq2_printed, f, g, lambda, mu);
  }
  return rep;
}

}  // namespace courant
